#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lockleak/netlist.hpp"

namespace lockleak {

enum class LockScheme { XorRandom, MuxRandom };

const char* scheme_name(LockScheme s);
LockScheme scheme_from_name(const std::string& name);

// One inserted key bit. Nets are recorded by name so the record survives
// serialization independently of net ids.
struct KeyBit {
    std::string key_input;     // PI carrying this bit, "keyinput<i>"
    bool correct = false;      // the bit value that restores the original logic
    std::string site;          // net whose sinks were moved onto the key gate
    std::string key_gate_out;  // output net of the inserted key gate
    std::string dummy;         // MUX scheme only: the decoy data net
};

struct LockRecord {
    LockScheme scheme = LockScheme::XorRandom;
    uint64_t seed = 0;
    std::vector<KeyBit> bits;

    size_t key_size() const { return bits.size(); }
    std::vector<bool> correct_key() const;
};

struct LockResult {
    Netlist netlist;
    LockRecord record;
};

// Inserts `key_size` XOR/XNOR key gates at uniformly chosen internal
// gate-output nets (without replacement). XNOR is used when the correct bit
// is 1, XOR when it is 0, so the gate is transparent under the correct key.
LockResult lock_xor(const Netlist& nl, size_t key_size, uint64_t seed);

// Inserts `key_size` 2:1 MUX key gates. The decoy input is a net outside the
// site's fanout cone (candidates inside the cone are rejected and redrawn to
// keep the result acyclic); the correct bit selects the true net.
LockResult lock_mux(const Netlist& nl, size_t key_size, uint64_t seed);

// Resolves a locked (possibly further-edited) netlist under a hypothesis
// key: folds every key gate to BUF/NOT of the surviving input, retargets any
// remaining consumers of a key-input net onto a constant driver, and removes
// the key PIs. Works for wrong keys too; that is what makes oracle
// comparison possible.
Netlist apply_key(const Netlist& nl, const LockRecord& record,
                  const std::vector<bool>& key);

// Record file: "scheme = ..."/"seed = ..."/"keys = ..." then one "bit" line
// per key bit. `#` starts a comment.
void save_record(std::ostream& os, const LockRecord& record);
void save_record_file(const std::string& path, const LockRecord& record);
LockRecord load_record(std::istream& is, const std::string& origin);
LockRecord load_record_file(const std::string& path);

// Key file: single "key = <bits>" line, leftmost bit = keyinput0.
void save_key_file(const std::string& path, const std::vector<bool>& key,
                   const std::string& header = "");
std::vector<bool> parse_key_text(const std::string& bits);
std::vector<bool> load_key_file(const std::string& path);
std::string key_text(const std::vector<bool>& key);

}  // namespace lockleak
