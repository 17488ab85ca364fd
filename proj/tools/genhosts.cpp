// Generates the combinational host circuits used by the test suite.
// Each profile is a layered random DAG with every input consumed, exact
// gate and output counts, and fanout capped so the line census stays in
// a range the exact counting budget can cover.

#include <cstdio>
#include <deque>
#include <string>
#include <vector>

#include "lockleak/error.hpp"
#include "lockleak/netlist.hpp"
#include "lockleak/rng.hpp"

using namespace lockleak;

namespace {

struct Profile {
    const char* name;
    uint32_t pis, pos, gates;
    uint64_t seed;
};

constexpr Profile kProfiles[] = {
    {"host432", 36, 7, 160, 432},
    {"host499", 41, 32, 202, 499},
    {"host880", 60, 26, 383, 880},
    {"host1908", 33, 25, 880, 1908},
};

// c17 is small enough to carry verbatim.
constexpr const char* kC17 =
    "# c17\n"
    "INPUT(1)\n"
    "INPUT(2)\n"
    "INPUT(3)\n"
    "INPUT(6)\n"
    "INPUT(7)\n"
    "OUTPUT(22)\n"
    "OUTPUT(23)\n"
    "10 = NAND(1, 3)\n"
    "11 = NAND(3, 6)\n"
    "16 = NAND(2, 11)\n"
    "19 = NAND(11, 7)\n"
    "22 = NAND(10, 16)\n"
    "23 = NAND(16, 19)\n";

GateKind pick_kind(Rng& rng) {
    uint64_t w = rng.below(100);
    if (w < 22) return GateKind::Nand;
    if (w < 36) return GateKind::Nor;
    if (w < 54) return GateKind::And;
    if (w < 68) return GateKind::Or;
    if (w < 77) return GateKind::Xor;
    if (w < 83) return GateKind::Xnor;
    if (w < 95) return GateKind::Not;
    return GateKind::Buf;
}

uint32_t arity_of(GateKind k, Rng& rng) {
    switch (k) {
    case GateKind::Not:
    case GateKind::Buf: return 1;
    case GateKind::Xor:
    case GateKind::Xnor: return 2;
    default: return rng.below(10) < 3 ? 3 : 2;
    }
}

Netlist build_host(const Profile& pr) {
    Rng rng(pr.seed);
    Rng kr = rng.split("kinds");
    Rng wr = rng.split("wires");

    Netlist nl;
    std::deque<NetId> fresh;  // nets with no sink yet, oldest first
    std::vector<NetId> consumed;
    for (uint32_t i = 0; i < pr.pis; ++i)
        fresh.push_back(nl.add_pi("p" + std::to_string(i)));

    uint32_t open = pr.pis;  // live count of sink-less nets
    for (uint32_t g = 0; g < pr.gates; ++g) {
        GateKind kind = pick_kind(kr);
        uint32_t arity = arity_of(kind, kr);
        // Drain the oldest sink-less nets until exactly `pos` remain open,
        // then hold there; the rest of the fanin reuses consumed nets.
        uint32_t take = 1;
        if (open > pr.pos)
            take = std::min(arity, open - pr.pos + 1);
        take = std::min<uint32_t>(take, uint32_t(fresh.size()));

        std::vector<NetId> ins;
        while (ins.size() < take && !fresh.empty()) {
            NetId n = fresh.front();
            fresh.pop_front();
            if (!nl.sinks(n).empty()) continue;  // stale entry
            ins.push_back(n);
        }
        while (ins.size() < arity) {
            if (consumed.empty()) {
                // only possible in the first few gates of tiny profiles
                ins.push_back(ins.back());
                break;
            }
            NetId n = NO_NET;
            for (int attempt = 0; attempt < 30; ++attempt) {
                NetId c = consumed[wr.below(consumed.size())];
                bool dup = false;
                for (NetId e : ins) dup |= (e == c);
                if (dup || nl.sinks(c).size() >= 3) continue;  // fanout cap
                n = c;
                break;
            }
            // a duplicate input is legal, just wasteful; accept rather than spin
            if (n == NO_NET) n = consumed[wr.below(consumed.size())];
            ins.push_back(n);
        }

        NetId out = nl.fresh_net("w" + std::to_string(g));
        nl.add_gate(kind, ins, out);
        for (NetId n : ins) {
            if (nl.sinks(n).size() == 1) {
                --open;  // first sink closed it
                consumed.push_back(n);
            }
        }
        fresh.push_back(out);
        ++open;
    }

    std::vector<NetId> finals;
    for (NetId n = 0; n < nl.num_nets(); ++n)
        if (nl.sinks(n).empty()) finals.push_back(n);
    if (finals.size() != pr.pos)
        fail(ErrorKind::Op, std::string(pr.name) + ": generator left " +
                                std::to_string(finals.size()) +
                                " open nets, wanted " +
                                std::to_string(pr.pos));
    for (NetId n : finals) {
        if (nl.is_pi(n))
            fail(ErrorKind::Op,
                 std::string(pr.name) + ": an input survived unconsumed");
        nl.add_po(n);
    }
    nl.validate();
    return nl;
}

}  // namespace

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "benchmarks";
    try {
        for (const Profile& pr : kProfiles) {
            Netlist nl = build_host(pr);
            std::string path = dir + "/" + pr.name + ".bench";
            write_bench_file(nl, path);
            std::printf("%s: %zu inputs, %zu outputs, %zu gates\n", path.c_str(),
                        nl.num_pis(), nl.num_pos(), nl.num_gates());
        }
        std::string c17path = dir + "/c17.bench";
        FILE* f = std::fopen(c17path.c_str(), "wb");
        if (!f) fail(ErrorKind::Io, "cannot write '" + c17path + "'");
        std::fputs(kC17, f);
        std::fclose(f);
        std::printf("%s: copied\n", c17path.c_str());
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
