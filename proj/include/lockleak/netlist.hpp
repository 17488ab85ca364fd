#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lockleak/error.hpp"

namespace lockleak {

using NetId = uint32_t;
inline constexpr NetId NO_NET = std::numeric_limits<NetId>::max();

// CONST0/CONST1 are a dialect extension (zero-input tie cells); everything else
// is standard bench vocabulary plus MUX2/DFF.
enum class GateKind : uint8_t {
    And, Nand, Or, Nor, Xor, Xnor, Not, Buf, Mux2, Dff, Const0, Const1
};

const char* kind_name(GateKind k);

struct Gate {
    GateKind kind;
    std::vector<NetId> inputs; // MUX2 order: select, in0, in1
    NetId output = NO_NET;
    bool no_scan = false;      // DFF only: kept out of scan chains
};

// One consumer of a net: either input `slot` of `gate`, or primary output
// slot `slot` when gate == PO_SINK.
struct Sink {
    uint32_t gate = 0;
    uint32_t slot = 0;
    static constexpr uint32_t PO_SINK = std::numeric_limits<uint32_t>::max();
    bool is_po() const { return gate == PO_SINK; }
    bool operator==(const Sink&) const = default;
};

// A testable line in the stuck-at checkpoint sense: the stem of a net, or one
// fanout branch. A net with s >= 2 sinks owns s branch lines (branch = sink
// index); a single-sink net owns only its stem.
struct LineId {
    NetId net = NO_NET;
    int32_t branch = -1; // -1 = stem
    bool is_stem() const { return branch < 0; }
    auto operator<=>(const LineId&) const = default;
};

struct LineCensus {
    uint64_t pi_count = 0;
    uint64_t gate_count = 0;
    uint64_t fanout_branches = 0;
    uint64_t key_affected = 0;
    uint64_t eligible = 0; // pi_count + gate_count + fanout_branches - key_affected
};

class Netlist {
public:
    // -- construction -------------------------------------------------------
    NetId add_pi(const std::string& name);
    // Creates the net if it does not exist yet; used for forward references.
    NetId ensure_net(const std::string& name);
    uint32_t add_gate(GateKind kind, std::vector<NetId> inputs, NetId output);
    uint32_t add_gate(GateKind kind, std::vector<NetId> inputs,
                      const std::string& output_name);
    void add_po(NetId net);

    // Fresh net whose name starts with `stem` and collides with nothing.
    NetId fresh_net(const std::string& stem);

    // -- queries ------------------------------------------------------------
    size_t num_nets() const { return names_.size(); }
    size_t num_pis() const { return pis_.size(); }
    size_t num_pos() const { return pos_.size(); }
    size_t num_gates() const { return gates_.size(); }
    const std::vector<NetId>& pis() const { return pis_; }
    const std::vector<NetId>& pos() const { return pos_; }
    NetId pi(size_t i) const { return pis_[i]; }
    NetId po(size_t i) const { return pos_[i]; }
    const Gate& gate(uint32_t g) const { return gates_[g]; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::string& net_name(NetId n) const { return names_[n]; }
    NetId find_net(const std::string& name) const;
    bool is_pi(NetId n) const { return driver_[n] == PI_DRIVER; }
    // Driving gate index, or -1 for a PI or not-yet-driven net.
    int64_t driver_gate(NetId n) const {
        return driver_[n] == PI_DRIVER || driver_[n] == NO_DRIVER
                   ? -1
                   : int64_t(driver_[n]);
    }
    size_t pi_index(NetId n) const; // position in pis(); throws if not a PI
    bool has_dff() const;

    const std::vector<Sink>& sinks(NetId n) const;
    // Gate evaluation order with DFF outputs treated as sources.
    const std::vector<uint32_t>& topo_gates() const;

    // -- lines --------------------------------------------------------------
    const std::vector<LineId>& lines() const;
    uint32_t line_index(LineId line) const; // dense index into lines()
    std::string line_text(LineId line) const;
    LineId parse_line_text(const std::string& text) const;

    LineCensus census(const std::vector<LineId>& key_affected) const;

    // -- analyses -----------------------------------------------------------
    // Nets forward-reachable from any seed (crossing gates from input to
    // output), optionally including the seeds themselves.
    std::vector<char> forward_net_mask(std::span<const NetId> seeds,
                                       bool include_seeds) const;
    // Per-net PI support as bitsets over pi index, word-packed.
    std::vector<std::vector<uint64_t>> pi_support() const;

    // -- edits (gate indices stay stable; caches are rebuilt lazily) --------
    void rewire_gate_input(uint32_t g, uint32_t slot, NetId to);
    void replace_po(uint32_t po_slot, NetId to);
    // Repoints every sink of `from` onto `to`, except sinks whose gate index
    // is in `except_gates`. Returns the number of sinks moved.
    uint32_t retarget_sinks(NetId from, NetId to,
                            std::span<const uint32_t> except_gates = {});
    // Rewrites an existing gate in place (same output net).
    void morph_gate(uint32_t g, GateKind kind, std::vector<NetId> inputs);
    // Removes a PI net that no longer drives anything.
    void remove_unused_pi(NetId n);
    void set_no_scan(uint32_t g, bool v);

    // Structural invariants: unique names, unique drivers, arities, acyclic
    // combinational core, PO list free of duplicates. Throws on violation.
    void validate() const;

    // Gate count per kind, for reports and the cost model.
    std::vector<uint64_t> kind_histogram() const;

private:
    static constexpr uint32_t PI_DRIVER = std::numeric_limits<uint32_t>::max() - 1;
    static constexpr uint32_t NO_DRIVER = std::numeric_limits<uint32_t>::max();

    void touch() { caches_ok_ = false; }
    void build_caches() const;
    void check_arity(GateKind kind, size_t n) const;

    std::vector<std::string> names_;
    std::unordered_map<std::string, NetId> by_name_;
    std::vector<uint32_t> driver_; // per net: gate index, PI_DRIVER, NO_DRIVER
    std::vector<Gate> gates_;
    std::vector<NetId> pis_, pos_;

    mutable bool caches_ok_ = false;
    mutable std::vector<std::vector<Sink>> sinks_;
    mutable std::vector<uint32_t> topo_;
    mutable std::vector<LineId> lines_;
    mutable std::unordered_map<uint64_t, uint32_t> line_idx_;
};

// -- bench i/o --------------------------------------------------------------
// Dialect: INPUT/OUTPUT/`out = KIND(a, b, ...)`, '#' comments, BUFF == BUF,
// k-input AND/NAND/OR/NOR/XOR/XNOR, MUX2(sel, in0, in1), DFF(d), CONST0()/
// CONST1(). A `# noscan` trailer on a DFF line marks it scan-exempt.
Netlist parse_bench(std::istream& in, const std::string& origin);
Netlist parse_bench_file(const std::string& path);
void write_bench(const Netlist& nl, std::ostream& out);
void write_bench_file(const Netlist& nl, const std::string& path);

} // namespace lockleak
