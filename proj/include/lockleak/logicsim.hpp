#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lockleak/netlist.hpp"

namespace lockleak {

enum class Value : uint8_t { Zero = 0, One = 1, X = 2 };

inline char value_char(Value v) { return v == Value::Zero ? '0' : v == Value::One ? '1' : 'X'; }
Value value_from_char(char c); // throws on anything but 0/1/x/X

// One input assignment, aligned with some PI name list.
using Pattern = std::vector<Value>;

std::string pattern_text(const Pattern& p);
Pattern pattern_from_text(const std::string& s);

struct PatternSet {
    std::vector<std::string> pi_names;
    std::vector<Pattern> rows;
    std::string provenance; // free text, e.g. "generated seed=7"

    size_t width() const { return pi_names.size(); }
    size_t size() const { return rows.size(); }
};

// File format: '#' comments, a "pis: n1 n2 ..." header, then one row of
// 0/1/X per line. Throws Parse errors with file:line positions.
PatternSet load_patterns(std::istream& in, const std::string& origin);
PatternSet load_patterns_file(const std::string& path);
void save_patterns(const PatternSet& ps, std::ostream& out);
void save_patterns_file(const PatternSet& ps, const std::string& path);

// Column c of the result maps netlist PI index c onto a column of `ps`.
// The pattern set must cover exactly the netlist's PIs (any order).
std::vector<uint32_t> pattern_column_map(const Netlist& nl, const PatternSet& ps);

// Reorders a pattern row into netlist PI order using the map above.
Pattern remap_pattern(const Pattern& row, std::span<const uint32_t> colmap);

// Pessimistic gate evaluation over 0/1/X (AND(0,X)=0, OR(1,X)=1, XOR(-,X)=X,
// MUX2 with X select needs both data inputs to agree).
Value eval_gate(GateKind kind, std::span<const Value> ins);

// Full-netlist single-pattern simulation; `pi_values` is in pis() order.
// Combinational only: throws if the netlist contains DFFs.
std::vector<Value> simulate3(const Netlist& nl, std::span<const Value> pi_values);

// Packed multi-pattern values: per net, `nwords` one-plane words then
// `nwords` unknown-plane words. Bit j of word w = pattern w*64+j.
struct PackedVals {
    size_t npat = 0, nwords = 0;
    std::vector<uint64_t> ones, xs; // nets * nwords each

    std::span<uint64_t> o(NetId n) { return {ones.data() + n * nwords, nwords}; }
    std::span<uint64_t> x(NetId n) { return {xs.data() + n * nwords, nwords}; }
    std::span<const uint64_t> o(NetId n) const { return {ones.data() + n * nwords, nwords}; }
    std::span<const uint64_t> x(NetId n) const { return {xs.data() + n * nwords, nwords}; }

    Value get(NetId n, size_t j) const {
        uint64_t bit = uint64_t(1) << (j % 64);
        if (xs[n * nwords + j / 64] & bit) return Value::X;
        return (ones[n * nwords + j / 64] & bit) ? Value::One : Value::Zero;
    }
};

// Bit-parallel simulation of many patterns (rows already in PI order).
// X-free sets run the two-valued fast path; any X switches to the packed
// three-valued kernels. Results are independent of `threads`.
PackedVals simulate_batch(const Netlist& nl, std::span<const Pattern> rows,
                          unsigned threads = 1);

// Cycle-accurate simulation with DFFs. State vector is indexed by DFF gates
// in gate order; each cycle applies one pattern, evaluates, then clocks.
struct CycleResult {
    std::vector<std::vector<Value>> po_per_cycle;
    std::vector<Value> final_state;
};
CycleResult simulate_cycles(const Netlist& nl, std::span<const Pattern> per_cycle,
                            std::span<const Value> initial_state);

// DFF gate indices in gate order (the state layout of simulate_cycles).
std::vector<uint32_t> dff_gates(const Netlist& nl);

} // namespace lockleak
