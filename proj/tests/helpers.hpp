#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "lockleak/logicsim.hpp"
#include "lockleak/netlist.hpp"
#include "lockleak/rng.hpp"

// Shared test fixtures. Everything here is deterministic given the seed so
// failures reproduce from the doctest case name alone.
namespace testhelp {

inline lockleak::Netlist nl_from_text(const std::string& text,
                                      const std::string& origin = "inline") {
    std::istringstream in(text);
    return lockleak::parse_bench(in, origin);
}

inline std::string nl_to_text(const lockleak::Netlist& nl) {
    std::ostringstream out;
    lockleak::write_bench(nl, out);
    return out.str();
}

// All 2^npis X-free rows; bit i of the row index drives PI i.
inline std::vector<lockleak::Pattern> all_patterns(uint32_t npis) {
    std::vector<lockleak::Pattern> rows;
    rows.reserve(size_t{1} << npis);
    for (uint64_t v = 0; v < (uint64_t{1} << npis); ++v) {
        lockleak::Pattern p(npis);
        for (uint32_t i = 0; i < npis; ++i)
            p[i] = (v >> i & 1) ? lockleak::Value::One : lockleak::Value::Zero;
        rows.push_back(std::move(p));
    }
    return rows;
}

// Every X-free completion of a row with X columns.
inline std::vector<lockleak::Pattern> completions(const lockleak::Pattern& p) {
    std::vector<size_t> xcols;
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] == lockleak::Value::X) xcols.push_back(i);
    std::vector<lockleak::Pattern> out;
    for (uint64_t v = 0; v < (uint64_t{1} << xcols.size()); ++v) {
        lockleak::Pattern q = p;
        for (size_t k = 0; k < xcols.size(); ++k)
            q[xcols[k]] = (v >> k & 1) ? lockleak::Value::One
                                       : lockleak::Value::Zero;
        out.push_back(std::move(q));
    }
    return out;
}

// Random combinational DAG: each new gate reads already-driven nets, so the
// result is acyclic by construction. Sink-less nets become outputs.
inline lockleak::Netlist random_netlist(uint64_t seed, uint32_t npis,
                                        uint32_t ngates) {
    using namespace lockleak;
    Rng rng(seed);
    Netlist nl;
    std::vector<NetId> pool;
    for (uint32_t i = 0; i < npis; ++i)
        pool.push_back(nl.add_pi("x" + std::to_string(i)));
    static const GateKind kinds[] = {GateKind::And,  GateKind::Nand,
                                     GateKind::Or,   GateKind::Nor,
                                     GateKind::Xor,  GateKind::Xnor,
                                     GateKind::Not,  GateKind::Buf,
                                     GateKind::Mux2};
    for (uint32_t g = 0; g < ngates; ++g) {
        GateKind k = kinds[rng.below(9)];
        size_t fanin = (k == GateKind::Not || k == GateKind::Buf) ? 1
                       : k == GateKind::Mux2                      ? 3
                       : 2 + rng.below(2);
        std::vector<NetId> ins;
        for (size_t i = 0; i < fanin; ++i)
            ins.push_back(pool[rng.below(pool.size())]);
        NetId out = nl.fresh_net("g" + std::to_string(g));
        nl.add_gate(k, ins, out);
        pool.push_back(out);
    }
    bool have_po = false;
    for (NetId n = 0; n < nl.num_nets(); ++n)
        if (nl.sinks(n).empty() && !nl.is_pi(n)) {
            nl.add_po(n);
            have_po = true;
        }
    if (!have_po) nl.add_po(pool.back());
    nl.validate();
    return nl;
}

inline std::string bench_path(const std::string& name) {
    return std::string(LOCKLEAK_BENCH_DIR) + "/" + name;
}

inline const char* c17_text() {
    return "INPUT(G1)\n"
           "INPUT(G2)\n"
           "INPUT(G3)\n"
           "INPUT(G6)\n"
           "INPUT(G7)\n"
           "OUTPUT(G22)\n"
           "OUTPUT(G23)\n"
           "G10 = NAND(G1, G3)\n"
           "G11 = NAND(G3, G6)\n"
           "G16 = NAND(G2, G11)\n"
           "G19 = NAND(G11, G7)\n"
           "G22 = NAND(G10, G16)\n"
           "G23 = NAND(G16, G19)\n";
}

}  // namespace testhelp
