#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lockleak/locking.hpp"
#include "lockleak/netlist.hpp"
#include "lockleak/trojan.hpp"

namespace lockleak {

// How one key bit is read back from the fabricated chip: apply `activation`
// (key columns stay X), let the trigger run for the plan's cycle count, and
// observe output `po_index`. The bit is the observed value xor `invert`.
struct DecodeEntry {
    uint32_t key_bit = 0;
    uint32_t trojan = 0;
    Pattern activation;
    uint32_t po_index = 0;
    bool invert = false;
};

struct AttackPlan {
    std::string mode;  // t1 | t2 | t3
    uint32_t r = 1;
    std::vector<TrojanSpec> trojans;
    std::vector<std::string> fire_nets;  // one per trojan, in the tampered netlist
    std::vector<DecodeEntry> decode;
    std::vector<uint32_t> followup_t2;  // key bits a second pass must target
};

struct ImplantResult {
    Netlist tampered;
    AttackPlan plan;
};

// Route key inputs to outputs through payload muxes behind one shared
// trigger. Targets are grouped by output count; wider attacks borrow spare
// primary inputs (outside the trigger's support) to select a group.
ImplantResult implant_t1(const Netlist& locked, const LockRecord& rec,
                         const TrojanSpec& trojan,
                         const std::vector<uint32_t>& targets);

// Leak one key bit through an existing net: search for an input pattern
// under which some net downstream of the target key gate is definite and
// flips with that key bit alone, then mux that net onto an output.
ImplantResult implant_t2(const Netlist& locked, const LockRecord& rec,
                         const TrojanSpec& trojan, uint32_t target);

// Like t2, but first force one blocking gate input to its non-controlling
// value (under trigger control) so the target's effect can reach a net.
// The blocker bit stays unresolved and is queued for a follow-up pass.
ImplantResult implant_t3(const Netlist& locked, const LockRecord& rec,
                         const TrojanSpec& trojan, uint32_t target,
                         uint32_t blocker,
                         PayloadSpec::Kind forcing = PayloadSpec::Kind::MuxToPo);

struct ExtractOutcome {
    struct Bit {
        uint32_t key_bit = 0;
        bool recovered = false;
        bool value = false;
        bool ambiguous = false;         // observation came back X
        bool invert_mismatch = false;   // plan's polarity disagreed with the netlist
    };
    std::vector<Bit> bits;
    uint32_t num_recovered = 0;
};

// Replay the plan against a chip programmed with `oracle_key` and decode the
// targeted bits. Observation polarity is re-derived from the tampered
// netlist itself; a plan whose stored polarity disagrees is flagged and the
// derived one wins.
ExtractOutcome extract_key(const Netlist& tampered, const AttackPlan& plan,
                           const LockRecord& rec,
                           const std::vector<bool>& oracle_key);

std::string extract_report(const ExtractOutcome& out, const LockRecord& rec);

void save_plan(std::ostream& os, const Netlist& tampered, const AttackPlan& plan);
void save_plan_file(const std::string& path, const Netlist& tampered,
                    const AttackPlan& plan);
AttackPlan load_plan(std::istream& is, const std::string& origin,
                     const Netlist& tampered);
AttackPlan load_plan_file(const std::string& path, const Netlist& tampered);

}  // namespace lockleak
