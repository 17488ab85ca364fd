#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "lockleak/logicsim.hpp"
#include "lockleak/netlist.hpp"

namespace lockleak {

// One stuck-at fault on a line (stem or fanout branch).
struct Fault {
    LineId line;
    bool stuck1 = false;
};

std::string fault_text(const Netlist& nl, const Fault& f);

// The collapsed stuck-at universe: two faults per line, merged into
// equivalence classes across gate boundaries (AND in-0/out-0, NAND
// in-0/out-1, OR in-1/out-1, NOR in-1/out-0, inverter crossed, buffer
// straight through). Simulation runs one representative per class.
struct FaultUniverse {
    std::vector<Fault> faults;        // index = line_index * 2 + stuck1
    std::vector<uint32_t> class_of;   // fault index -> class index
    std::vector<uint32_t> class_rep;  // class index -> representative fault
    size_t num_classes() const { return class_rep.size(); }
};

FaultUniverse enumerate_faults(const Netlist& nl);

enum class FaultStatus : uint8_t { Undetected, Detected, Untestable, Unclassified };

constexpr uint32_t NO_PATTERN = std::numeric_limits<uint32_t>::max();

struct FaultSimResult {
    std::vector<FaultStatus> status;      // per class
    std::vector<uint32_t> first_pattern;  // per class; NO_PATTERN if undetected
    size_t detected = 0;
};

// Packed fault simulation over X-free-or-not rows (netlist PI order), with
// per-64-pattern-block fault dropping. drop=false simulates every class
// against every block; the Detected/first_pattern outcome is identical.
FaultSimResult fault_simulate(const Netlist& nl, const FaultUniverse& u,
                              const std::vector<Pattern>& rows,
                              bool drop = true, unsigned threads = 1);

// Scalar 3-valued simulation with one injected fault; used by the
// redundancy classifier and as the packed path's oracle in tests.
std::vector<Value> simulate3_fault(const Netlist& nl, const Pattern& pi_values,
                                   const Fault& f);

// Decides detectability of still-undetected classes. A class whose
// observable-output support spans at most `pi_limit` PIs gets an exhaustive
// cone search (Untestable when no assignment detects it); wider supports
// stay Unclassified. Mutates res.status in place.
void classify_undetected(const Netlist& nl, const FaultUniverse& u,
                         FaultSimResult& res, uint32_t pi_limit = 16);

struct CoverageCounts {
    size_t total_faults = 0;  // uncollapsed, 2 per line
    size_t collapsed = 0;     // equivalence classes
    size_t detected = 0;
    size_t untestable = 0;
    size_t unclassified = 0;
    // detected / (collapsed - untestable - unclassified); 1.0 when the
    // denominator is empty
    double coverage() const;
    // detected / collapsed, ignoring classification
    double raw_coverage() const;
};

CoverageCounts tally(const FaultUniverse& u, const FaultSimResult& res);
void write_coverage_report(std::ostream& os, const CoverageCounts& c);

struct GenResult {
    PatternSet patterns;
    CoverageCounts counts;
    size_t generated = 0;  // random patterns drawn before compaction
};

// Random-pattern generation with fault dropping, then greedy set-cover
// compaction of the drawn pool. Stops once the compacted set reaches
// `target_coverage` over classified-detectable classes, or at max_patterns
// drawn, whichever first.
GenResult generate_patterns(const Netlist& nl, double target_coverage,
                            uint64_t seed, size_t max_patterns,
                            unsigned threads = 1);

// Validates an externally supplied pattern set against the netlist and
// remaps columns to netlist PI order.
PatternSet import_patterns(const PatternSet& ps, const Netlist& nl);

}  // namespace lockleak
