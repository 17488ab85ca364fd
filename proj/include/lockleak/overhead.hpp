#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "lockleak/logicsim.hpp"
#include "lockleak/netlist.hpp"

namespace lockleak {

inline constexpr size_t kGateKindCount = 12;

// Technology-free unit costs per gate kind. Only relative trends are
// meaningful; the defaults are NAND-equivalent areas with leakage and
// per-toggle dynamic cost proportional to area.
struct GateCost {
    double area = 1.0;
    double leak = 1.0;
    double dyn = 1.0;
};

struct CostModel {
    std::array<GateCost, kGateKindCount> unit;

    const GateCost& of(GateKind k) const {
        return unit[static_cast<size_t>(k)];
    }
    static CostModel defaults();
    void validate() const;  // all costs > 0, DFF at least any single gate
};

// Text form: one `KIND area leak dyn` line per override, defaults elsewhere.
CostModel load_cost_model(std::istream& is, const std::string& origin);
CostModel load_cost_model_file(const std::string& path);

double total_area(const Netlist& nl, const CostModel& m);
double total_leakage(const Netlist& nl, const CostModel& m);

// Zero-delay switching cost: definite value changes on gate outputs between
// consecutive patterns (n patterns give n - 1 transitions), weighted by the
// unit dynamic cost. Sequential netlists start from the all-zero state.
double total_dynamic(const Netlist& nl, const CostModel& m,
                     std::span<const Pattern> rows);

double area_overhead(const Netlist& orig, const Netlist& tampered,
                     const CostModel& m);

struct PowerOverhead {
    double leakage_pct = 0.0;
    double dynamic_pct = 0.0;
    bool has_dynamic = false;
};

// Activity patterns are over the tampered netlist's inputs; the original
// netlist picks out its own columns by input name. Pass null to skip the
// dynamic estimate.
PowerOverhead power_overhead(const Netlist& orig, const Netlist& tampered,
                             const CostModel& m, const PatternSet* activity);

}  // namespace lockleak
