#include "lockleak/overhead.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lockleak/error.hpp"

namespace lockleak {

CostModel CostModel::defaults() {
    CostModel m;
    auto set = [&](GateKind k, double a) {
        m.unit[static_cast<size_t>(k)] = GateCost{a, a, a};
    };
    set(GateKind::And, 1.25);
    set(GateKind::Nand, 1.0);
    set(GateKind::Or, 1.25);
    set(GateKind::Nor, 1.0);
    set(GateKind::Xor, 2.5);
    set(GateKind::Xnor, 2.5);
    set(GateKind::Not, 0.75);
    set(GateKind::Buf, 0.75);
    set(GateKind::Mux2, 2.5);
    set(GateKind::Dff, 4.5);
    set(GateKind::Const0, 0.25);
    set(GateKind::Const1, 0.25);
    return m;
}

void CostModel::validate() const {
    double single_max = 0.0;
    for (size_t k = 0; k < kGateKindCount; ++k) {
        const GateCost& c = unit[k];
        if (c.area <= 0 || c.leak <= 0 || c.dyn <= 0)
            fail(ErrorKind::Config,
                 std::string("cost model: every unit cost for ") +
                     kind_name(static_cast<GateKind>(k)) +
                     " must be positive");
        if (static_cast<GateKind>(k) != GateKind::Dff)
            single_max = std::max(single_max, c.area);
    }
    if (of(GateKind::Dff).area < single_max)
        fail(ErrorKind::Config,
             "cost model: a flop cannot be cheaper than a single gate");
}

CostModel load_cost_model(std::istream& is, const std::string& origin) {
    CostModel m = CostModel::defaults();
    std::string raw;
    size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string kindtok;
        if (!(ls >> kindtok)) continue;
        bool found = false;
        for (size_t k = 0; k < kGateKindCount && !found; ++k) {
            if (kindtok == kind_name(static_cast<GateKind>(k))) {
                GateCost c;
                if (!(ls >> c.area >> c.leak >> c.dyn))
                    fail(ErrorKind::Parse,
                         origin + ":" + std::to_string(lineno) +
                             ": expected KIND area leak dyn");
                m.unit[k] = c;
                found = true;
            }
        }
        if (!found)
            fail(ErrorKind::Parse, origin + ":" + std::to_string(lineno) +
                                       ": unknown gate kind '" + kindtok + "'");
    }
    m.validate();
    return m;
}

CostModel load_cost_model_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot read '" + path + "'");
    return load_cost_model(is, path);
}

double total_area(const Netlist& nl, const CostModel& m) {
    double a = 0;
    for (const Gate& g : nl.gates()) a += m.of(g.kind).area;
    return a;
}

double total_leakage(const Netlist& nl, const CostModel& m) {
    double a = 0;
    for (const Gate& g : nl.gates()) a += m.of(g.kind).leak;
    return a;
}

double total_dynamic(const Netlist& nl, const CostModel& m,
                     std::span<const Pattern> rows) {
    if (rows.empty())
        fail(ErrorKind::Op, "switching estimate needs at least one pattern");
    std::vector<uint32_t> dffs = dff_gates(nl);
    std::vector<Value> state(dffs.size(), Value::Zero);
    std::vector<Value> val(nl.num_nets(), Value::X);
    std::vector<Value> prev;
    std::vector<Value> ins;
    double total = 0;
    for (const Pattern& pat : rows) {
        if (pat.size() != nl.num_pis())
            fail(ErrorKind::Op, "activity pattern width " +
                                    std::to_string(pat.size()) + " != " +
                                    std::to_string(nl.num_pis()) + " inputs");
        for (size_t i = 0; i < nl.num_pis(); ++i) val[nl.pi(i)] = pat[i];
        for (size_t d = 0; d < dffs.size(); ++d)
            val[nl.gate(dffs[d]).output] = state[d];
        for (uint32_t g : nl.topo_gates()) {
            const Gate& gt = nl.gate(g);
            if (gt.kind == GateKind::Dff) continue;
            ins.clear();
            for (NetId in : gt.inputs) ins.push_back(val[in]);
            val[gt.output] = eval_gate(gt.kind, ins);
        }
        if (!prev.empty()) {
            for (const Gate& g : nl.gates()) {
                Value a = prev[g.output], b = val[g.output];
                if (a != Value::X && b != Value::X && a != b)
                    total += m.of(g.kind).dyn;
            }
        }
        prev = val;
        for (size_t d = 0; d < dffs.size(); ++d)
            state[d] = val[nl.gate(dffs[d]).inputs[0]];
    }
    return total;
}

double area_overhead(const Netlist& orig, const Netlist& tampered,
                     const CostModel& m) {
    double a0 = total_area(orig, m);
    if (a0 <= 0)
        fail(ErrorKind::Op, "original circuit has no gates to compare against");
    return (total_area(tampered, m) - a0) / a0 * 100.0;
}

PowerOverhead power_overhead(const Netlist& orig, const Netlist& tampered,
                             const CostModel& m, const PatternSet* activity) {
    double l0 = total_leakage(orig, m);
    if (l0 <= 0)
        fail(ErrorKind::Op, "original circuit has no gates to compare against");
    PowerOverhead out;
    out.leakage_pct = (total_leakage(tampered, m) - l0) / l0 * 100.0;
    if (!activity) return out;
    if (activity->rows.empty())
        fail(ErrorKind::Op, "switching estimate needs at least one pattern");

    // tampered takes the rows as-is; the original picks its columns by name
    if (activity->pi_names.size() != tampered.num_pis())
        fail(ErrorKind::Op, "activity patterns do not cover the tampered inputs");
    for (size_t i = 0; i < activity->pi_names.size(); ++i)
        if (activity->pi_names[i] != tampered.net_name(tampered.pi(i)))
            fail(ErrorKind::Op,
                 "activity pattern columns are not in the tampered netlist's "
                 "input order; import them first");
    // the original usually has fewer inputs (no key or tamper nets), so it
    // selects a column subset rather than a permutation
    std::vector<uint32_t> colmap(orig.num_pis());
    for (size_t i = 0; i < orig.num_pis(); ++i) {
        const std::string& want = orig.net_name(orig.pi(i));
        auto it = std::find(activity->pi_names.begin(),
                            activity->pi_names.end(), want);
        if (it == activity->pi_names.end())
            fail(ErrorKind::Op,
                 "activity patterns are missing original input '" + want + "'");
        colmap[i] = uint32_t(it - activity->pi_names.begin());
    }
    std::vector<Pattern> orig_rows;
    orig_rows.reserve(activity->rows.size());
    for (const Pattern& r : activity->rows)
        orig_rows.push_back(remap_pattern(r, colmap));

    double d0 = total_dynamic(orig, m, orig_rows);
    if (d0 <= 0)
        fail(ErrorKind::Op,
             "original circuit never switches under these patterns; the "
             "dynamic overhead is undefined");
    double d1 = total_dynamic(tampered, m, activity->rows);
    out.dynamic_pct = (d1 - d0) / d0 * 100.0;
    out.has_dynamic = true;
    return out;
}

}  // namespace lockleak
