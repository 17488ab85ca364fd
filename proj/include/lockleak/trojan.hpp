#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lockleak/locking.hpp"
#include "lockleak/logicsim.hpp"
#include "lockleak/netlist.hpp"

namespace lockleak {

// Conjunction trigger: fires when every node carries its literal value
// (inverted = fires at 0).
struct TriggerSpec {
    std::vector<LineId> nodes;
    std::vector<bool> inverted;
    size_t p() const { return nodes.size(); }
};

// Circuit edit delivered when a trigger fires. MuxToPo swaps a PO's driver
// for the leak source; OrForce ORs the trigger into the victim at the
// victim's sinks. A forcing payload that must drive 0 is a MuxToPo from the
// constant one with leak_invert set.
struct PayloadSpec {
    enum class Kind { MuxToPo, OrForce };
    Kind kind = Kind::MuxToPo;
    LineId victim{};
    bool leak_const = false;
    bool leak_invert = false;
    LineId leak_source{};
    uint32_t observe_po = 0;
};

struct TrojanSpec {
    TriggerSpec trigger;
    Pattern htap;  // over the locked netlist's PIs; key columns X
    uint32_t counter_depth = 1;
    std::vector<PayloadSpec> payloads;
};

// Lines reachable forward from any key-gate output, the outputs themselves
// included, fanout branches included. Sorted by line index.
std::vector<LineId> key_affected_lines(const Netlist& nl, const LockRecord& rec);

// The key-input PI lines themselves (stems and branches).
std::vector<LineId> key_input_lines(const Netlist& nl, const LockRecord& rec);

// Trigger candidates: every line that is neither key-affected nor a
// key-input line. Sorted by line index.
std::vector<LineId> eligible_lines(const Netlist& nl, const LockRecord& rec);

// Census with the key-dependent lines (key-affected plus key-input) counted
// out of the eligible total.
LineCensus line_census(const Netlist& nl, const LockRecord& rec);

// Trigger design: picks an activation pattern outside the test set (or
// validates the hint), simulates it with keys unknown, then retries random
// p-subsets of eligible lines until no test-pattern column matches the
// trigger (X on a trigger node counts as a match). r is stored as
// counter_depth.
TrojanSpec design_trojan(const Netlist& nl, const LockRecord& rec,
                         const PatternSet& patterns, uint32_t p, uint64_t seed,
                         const std::optional<Pattern>& htap_hint = std::nullopt,
                         uint32_t r = 1);

// True when no pattern column matches the trigger (pessimistic on X).
bool trigger_stealthy(const Netlist& nl, const TriggerSpec& t,
                      const PatternSet& patterns, unsigned threads = 1);

std::string u128_text(unsigned __int128 v);

// C(N, p) * 2^p; throws Op past 128 bits.
unsigned __int128 trigger_space(uint64_t n_eligible, uint32_t p);

struct TrojanCount {
    uint32_t p = 0;
    uint64_t eligible = 0;
    unsigned __int128 all_possible = 0;
    enum class Mode { Exact, Sample } mode = Mode::Exact;
    unsigned __int128 valid = 0;  // exact mode
    // sample mode: absolute-count estimate with Wilson 95% bounds
    double estimate = 0, lo = 0, hi = 0;
    uint64_t samples = 0, hits = 0;
};

// Counts trigger cells (p-subset of eligible lines + polarity assignment)
// that no pattern column hits; a column with X on k of the subset's lines
// hits 2^k cells. Exact mode walks every subset (budget-limited in cells);
// sample mode estimates from uniformly drawn cells.
TrojanCount count_trojans(const Netlist& nl, const LockRecord& rec,
                          const PatternSet& patterns, uint32_t p,
                          TrojanCount::Mode mode, uint64_t budget,
                          uint64_t samples, uint64_t seed,
                          unsigned threads = 1);

// Builds the trigger logic inside `nl`: literal inverters, the p-input AND,
// and for r >= 2 a saturating consecutive-cycle counter on no-scan DFFs.
// Returns the firing net.
NetId instantiate_trigger(Netlist& nl, const TriggerSpec& t, uint32_t r,
                          const std::string& prefix);

// Standalone counter fragment for inspection: PIs t0..t{p-1} replace the
// trigger nodes, single PO = firing net. Requires r >= 2.
Netlist build_sequential_trigger(const TriggerSpec& t, uint32_t r);

// "kind=mux|or victim=<line> leak=<line|VDD|!VDD> po=<index>" fragment,
// shared between trojan and plan files.
std::string payload_text(const Netlist& nl, const PayloadSpec& p);
PayloadSpec parse_payload_fields(const std::vector<std::string>& fields,
                                 const Netlist& nl, const std::string& origin,
                                 size_t lineno);

void save_trojan(std::ostream& os, const Netlist& nl, const TrojanSpec& spec);
void save_trojan_file(const std::string& path, const Netlist& nl,
                      const TrojanSpec& spec);
TrojanSpec load_trojan(std::istream& is, const std::string& origin,
                       const Netlist& nl);
TrojanSpec load_trojan_file(const std::string& path, const Netlist& nl);

}  // namespace lockleak
