#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lockleak/logicsim.hpp"
#include "lockleak/netlist.hpp"

namespace lockleak {

// Outcome of a combinational equivalence check. When `equivalent` is false,
// `witness` holds the first distinguishing input assignment (over a's PI
// order) and `witness_po` the first differing output slot.
struct EquivResult {
    bool equivalent = true;
    uint64_t patterns_checked = 0;
    bool exhaustive = false;
    Pattern witness;
    uint32_t witness_po = 0;
};

// Checks PO-for-PO equality of two combinational netlists. The PI name sets
// must match; b's columns are remapped so names, not positions, line up.
// Exhaustive sweep when the PI count is at most `exhaustive_pi_limit`,
// otherwise `random_patterns` seeded X-free patterns.
EquivResult check_equivalent(const Netlist& a, const Netlist& b,
                             uint32_t exhaustive_pi_limit = 20,
                             uint64_t random_patterns = 10000,
                             uint64_t seed = 1, unsigned threads = 1);

// Replays an explicit pattern set through both netlists and counts rows with
// any definite PO mismatch. Patterns are over a's PI order; b is remapped by
// name. X rows go through the 3-valued path; a mismatch needs both sides
// definite and different.
struct ReplayResult {
    uint64_t patterns_checked = 0;
    uint64_t mismatches = 0;
    bool has_witness = false;
    Pattern witness;       // first mismatching row
    uint32_t witness_po = 0;
};
ReplayResult replay_compare(const Netlist& a, const Netlist& b,
                            const std::vector<Pattern>& rows,
                            unsigned threads = 1);

// PI index permutation: result[i] = index of a.pi(i)'s name within b's PIs.
// Throws Op when the name sets differ.
std::vector<uint32_t> pi_permutation(const Netlist& a, const Netlist& b);

// Like pi_permutation, but b may carry extra PIs of its own (a tampered
// netlist with selector inputs). Extra columns are left unassigned by the
// caller, typically as X.
std::vector<uint32_t> pi_embedding(const Netlist& a, const Netlist& b);

}  // namespace lockleak
