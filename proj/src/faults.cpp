#include "lockleak/faults.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "lockleak/error.hpp"
#include "lockleak/rng.hpp"

namespace lockleak {

namespace {

// Line consumed by gate g at `slot`; the branch id is the sink position.
LineId input_line(const Netlist& nl, uint32_t g, uint32_t slot) {
    NetId n = nl.gate(g).inputs[slot];
    const std::vector<Sink>& sk = nl.sinks(n);
    if (sk.size() < 2) return LineId{n, -1};
    for (size_t i = 0; i < sk.size(); ++i)
        if (!sk[i].is_po() && sk[i].gate == g && sk[i].slot == slot)
            return LineId{n, static_cast<int32_t>(i)};
    fail(ErrorKind::Op, "sink bookkeeping out of sync for net '" +
                            nl.net_name(n) + "'");
}

struct UnionFind {
    std::vector<uint32_t> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    uint32_t find(uint32_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    // Lower index wins the root so representatives are deterministic.
    void join(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[b] = a;
        else parent[a] = b;
    }
};

}  // namespace

std::string fault_text(const Netlist& nl, const Fault& f) {
    return nl.line_text(f.line) + (f.stuck1 ? " sa1" : " sa0");
}

FaultUniverse enumerate_faults(const Netlist& nl) {
    if (nl.has_dff())
        fail(ErrorKind::Op, "stuck-at analysis expects a combinational netlist");
    const std::vector<LineId>& lines = nl.lines();
    FaultUniverse u;
    u.faults.resize(lines.size() * 2);
    for (size_t i = 0; i < lines.size(); ++i) {
        u.faults[i * 2] = {lines[i], false};
        u.faults[i * 2 + 1] = {lines[i], true};
    }
    UnionFind uf(u.faults.size());
    auto fid = [&](const LineId& l, bool s1) {
        return nl.line_index(l) * 2 + (s1 ? 1 : 0);
    };
    for (uint32_t g = 0; g < nl.num_gates(); ++g) {
        const Gate& gate = nl.gate(g);
        LineId out{gate.output, -1};
        for (uint32_t s = 0; s < gate.inputs.size(); ++s) {
            LineId in = input_line(nl, g, s);
            switch (gate.kind) {
                case GateKind::And:
                    uf.join(fid(in, false), fid(out, false));
                    break;
                case GateKind::Nand:
                    uf.join(fid(in, false), fid(out, true));
                    break;
                case GateKind::Or:
                    uf.join(fid(in, true), fid(out, true));
                    break;
                case GateKind::Nor:
                    uf.join(fid(in, true), fid(out, false));
                    break;
                case GateKind::Not:
                    uf.join(fid(in, false), fid(out, true));
                    uf.join(fid(in, true), fid(out, false));
                    break;
                case GateKind::Buf:
                    uf.join(fid(in, false), fid(out, false));
                    uf.join(fid(in, true), fid(out, true));
                    break;
                default:
                    break;  // XOR-family, MUX: no gate-boundary equivalence
            }
        }
    }
    std::vector<uint32_t> roots(u.faults.size());
    for (uint32_t i = 0; i < u.faults.size(); ++i) roots[i] = uf.find(i);
    std::vector<uint32_t> uniq = roots;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    u.class_rep = uniq;
    u.class_of.resize(u.faults.size());
    for (uint32_t i = 0; i < u.faults.size(); ++i)
        u.class_of[i] = static_cast<uint32_t>(
            std::lower_bound(uniq.begin(), uniq.end(), roots[i]) - uniq.begin());
    return u;
}

namespace {

// Single-word 3-valued kernels; semantics identical to the packed backend.
struct W3 {
    uint64_t o = 0, x = 0;
};
inline W3 and3(W3 a, W3 b) {
    return {a.o & b.o, (a.x | b.x) & (a.o | a.x) & (b.o | b.x)};
}
inline W3 or3(W3 a, W3 b) {
    return {a.o | b.o, (a.x | b.x) & ~(a.o | b.o)};
}
inline W3 xor3(W3 a, W3 b) {
    uint64_t x = a.x | b.x;
    return {(a.o ^ b.o) & ~x, x};
}
inline W3 not3(W3 a) { return {~(a.o | a.x), a.x}; }
inline W3 mux3(W3 s, W3 a, W3 b) {
    uint64_t zs = ~(s.o | s.x), za = ~(a.o | a.x), zb = ~(b.o | b.x);
    uint64_t o = (zs & a.o) | (s.o & b.o) | (s.x & a.o & b.o);
    uint64_t z = (zs & za) | (s.o & zb) | (s.x & za & zb);
    return {o, ~(o | z)};
}

// Per-class resimulation region: gates downstream of the fault point in
// topological order, plus the output slots where the effect is observable.
struct ClassCone {
    std::vector<uint32_t> gates;
    struct Obs {
        uint32_t po;
        NetId net;
        bool forced;  // the PO reads the forced value itself
    };
    std::vector<Obs> obs;
    // branch faults force exactly one gate input slot
    uint32_t sink_gate = UINT32_MAX;
    uint32_t sink_slot = 0;
};

class FaultSimEngine {
  public:
    FaultSimEngine(const Netlist& nl, const FaultUniverse& u) : nl_(nl), u_(u) {
        topo_pos_.resize(nl.num_gates());
        const std::vector<uint32_t>& order = nl.topo_gates();
        for (uint32_t i = 0; i < order.size(); ++i) topo_pos_[order[i]] = i;
        cones_.resize(u.num_classes());
        for (uint32_t c = 0; c < u.num_classes(); ++c)
            build_cone(u.faults[u.class_rep[c]], cones_[c]);
    }

    // Simulates one 64-pattern word for one class; returns the detection
    // bitmask restricted to `valid` pattern bits.
    uint64_t sim_class(uint32_t c, const PackedVals& good, size_t w,
                       uint64_t valid, std::vector<W3>& scratch,
                       std::vector<uint8_t>& have,
                       std::vector<NetId>& touched) const {
        const Fault& f = u_.faults[u_.class_rep[c]];
        const ClassCone& cone = cones_[c];
        NetId fnet = f.line.net;
        bool stem = f.line.is_stem();
        W3 forced{f.stuck1 ? ~uint64_t{0} : 0, 0};

        auto value_of = [&](NetId n, uint32_t g, uint32_t slot) -> W3 {
            if (fnet == n && (stem || (cone.sink_gate == g && cone.sink_slot == slot)))
                return forced;
            if (have[n]) return scratch[n];
            return {good.o(n)[w], good.x(n)[w]};
        };

        for (uint32_t g : cone.gates) {
            const Gate& gate = nl_.gate(g);
            W3 v;
            switch (gate.kind) {
                case GateKind::And:
                case GateKind::Nand:
                case GateKind::Or:
                case GateKind::Nor: {
                    v = value_of(gate.inputs[0], g, 0);
                    for (uint32_t s = 1; s < gate.inputs.size(); ++s) {
                        W3 b = value_of(gate.inputs[s], g, s);
                        v = (gate.kind == GateKind::And ||
                             gate.kind == GateKind::Nand)
                                ? and3(v, b)
                                : or3(v, b);
                    }
                    if (gate.kind == GateKind::Nand || gate.kind == GateKind::Nor)
                        v = not3(v);
                    break;
                }
                case GateKind::Xor:
                case GateKind::Xnor: {
                    v = value_of(gate.inputs[0], g, 0);
                    for (uint32_t s = 1; s < gate.inputs.size(); ++s)
                        v = xor3(v, value_of(gate.inputs[s], g, s));
                    if (gate.kind == GateKind::Xnor) v = not3(v);
                    break;
                }
                case GateKind::Not:
                    v = not3(value_of(gate.inputs[0], g, 0));
                    break;
                case GateKind::Buf:
                    v = value_of(gate.inputs[0], g, 0);
                    break;
                case GateKind::Mux2:
                    v = mux3(value_of(gate.inputs[0], g, 0),
                             value_of(gate.inputs[1], g, 1),
                             value_of(gate.inputs[2], g, 2));
                    break;
                case GateKind::Const0:
                    v = {0, 0};
                    break;
                case GateKind::Const1:
                    v = {~uint64_t{0}, 0};
                    break;
                case GateKind::Dff:
                    fail(ErrorKind::Op, "flip-flop inside fault cone");
            }
            NetId out = gate.output;
            if (!have[out]) {
                have[out] = 1;
                touched.push_back(out);
            }
            scratch[out] = v;
        }

        uint64_t det = 0;
        for (const ClassCone::Obs& ob : cone.obs) {
            W3 fv = ob.forced ? forced
                              : (have[ob.net]
                                     ? scratch[ob.net]
                                     : W3{good.o(ob.net)[w], good.x(ob.net)[w]});
            uint64_t go = good.o(ob.net)[w], gx = good.x(ob.net)[w];
            det |= (go ^ fv.o) & ~gx & ~fv.x;
        }
        for (NetId n : touched) have[n] = 0;
        touched.clear();
        return det & valid;
    }

    const ClassCone& cone(uint32_t c) const { return cones_[c]; }

  private:
    void build_cone(const Fault& f, ClassCone& cone) {
        NetId n = f.line.net;
        const std::vector<Sink>& sk = nl_.sinks(n);
        std::vector<Sink> seeds;
        if (f.line.is_stem()) {
            seeds = sk;
        } else {
            const Sink& s = sk[static_cast<size_t>(f.line.branch)];
            seeds.push_back(s);
            if (!s.is_po()) {
                cone.sink_gate = s.gate;
                cone.sink_slot = s.slot;
            }
        }
        std::vector<uint8_t> gate_in(nl_.num_gates(), 0);
        std::vector<uint8_t> net_in(nl_.num_nets(), 0);
        std::vector<uint32_t> queue;
        for (const Sink& s : seeds) {
            if (s.is_po()) {
                cone.obs.push_back({s.slot, n, true});
            } else if (!gate_in[s.gate]) {
                gate_in[s.gate] = 1;
                queue.push_back(s.gate);
            }
        }
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            NetId out = nl_.gate(queue[qi]).output;
            if (net_in[out]) continue;
            net_in[out] = 1;
            for (const Sink& s : nl_.sinks(out)) {
                if (s.is_po()) {
                    cone.obs.push_back({s.slot, out, false});
                } else if (!gate_in[s.gate]) {
                    gate_in[s.gate] = 1;
                    queue.push_back(s.gate);
                }
            }
        }
        cone.gates = std::move(queue);
        std::sort(cone.gates.begin(), cone.gates.end(),
                  [&](uint32_t a, uint32_t b) {
                      return topo_pos_[a] < topo_pos_[b];
                  });
        std::sort(cone.obs.begin(), cone.obs.end(),
                  [](const ClassCone::Obs& a, const ClassCone::Obs& b) {
                      return a.po < b.po;
                  });
    }

    const Netlist& nl_;
    const FaultUniverse& u_;
    std::vector<uint32_t> topo_pos_;
    std::vector<ClassCone> cones_;
};

// One word-block of fault simulation over the active classes, recording
// first detections. Partitioning across threads cannot change results:
// every class owns its result slots.
void run_block(const FaultSimEngine& eng, const Netlist& nl,
               const PackedVals& good, size_t w, size_t pattern_base,
               const std::vector<uint32_t>& active, FaultSimResult& res,
               unsigned threads) {
    size_t npat_here = std::min<size_t>(64, good.npat - w * 64);
    uint64_t valid = npat_here == 64 ? ~uint64_t{0}
                                     : ((uint64_t{1} << npat_here) - 1);
    auto work = [&](size_t lo, size_t hi) {
        std::vector<W3> scratch(nl.num_nets());
        std::vector<uint8_t> have(nl.num_nets(), 0);
        std::vector<NetId> touched;
        for (size_t i = lo; i < hi; ++i) {
            uint32_t c = active[i];
            uint64_t det = eng.sim_class(c, good, w, valid, scratch, have, touched);
            if (det) {
                res.status[c] = FaultStatus::Detected;
                res.first_pattern[c] = static_cast<uint32_t>(
                    pattern_base + w * 64 + __builtin_ctzll(det));
            }
        }
    };
    if (threads <= 1 || active.size() < 64) {
        work(0, active.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (active.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            size_t lo = t * chunk, hi = std::min(active.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }
}

void refresh_active(std::vector<uint32_t>& active,
                    const std::vector<FaultStatus>& status, bool drop) {
    if (!drop) return;
    active.erase(std::remove_if(active.begin(), active.end(),
                                [&](uint32_t c) {
                                    return status[c] != FaultStatus::Undetected &&
                                           status[c] != FaultStatus::Unclassified;
                                }),
                 active.end());
}

}  // namespace

FaultSimResult fault_simulate(const Netlist& nl, const FaultUniverse& u,
                              const std::vector<Pattern>& rows, bool drop,
                              unsigned threads) {
    if (nl.has_dff())
        fail(ErrorKind::Op, "fault simulation expects a combinational netlist");
    FaultSimResult res;
    res.status.assign(u.num_classes(), FaultStatus::Undetected);
    res.first_pattern.assign(u.num_classes(), NO_PATTERN);
    if (rows.empty() || u.num_classes() == 0) return res;

    FaultSimEngine eng(nl, u);
    PackedVals good = simulate_batch(nl, rows, threads);
    std::vector<uint32_t> active(u.num_classes());
    std::iota(active.begin(), active.end(), 0u);
    for (size_t w = 0; w < good.nwords; ++w) {
        std::vector<uint32_t> round = active;
        if (!drop) {
            // keep already-detected classes out either way; re-detecting
            // would clobber first_pattern with a later index
            round.erase(std::remove_if(round.begin(), round.end(),
                                       [&](uint32_t c) {
                                           return res.status[c] ==
                                                  FaultStatus::Detected;
                                       }),
                        round.end());
        }
        run_block(eng, nl, good, w, 0, round, res, threads);
        refresh_active(active, res.status, drop);
    }
    res.detected = static_cast<size_t>(
        std::count(res.status.begin(), res.status.end(), FaultStatus::Detected));
    return res;
}

std::vector<Value> simulate3_fault(const Netlist& nl, const Pattern& pi_values,
                                   const Fault& f) {
    if (pi_values.size() != nl.num_pis())
        fail(ErrorKind::Op, "pattern has " + std::to_string(pi_values.size()) +
                                " values for " + std::to_string(nl.num_pis()) +
                                " inputs");
    NetId fnet = f.line.net;
    bool stem = f.line.is_stem();
    uint32_t sink_gate = UINT32_MAX, sink_slot = 0;
    if (!stem) {
        const Sink& s = nl.sinks(fnet)[static_cast<size_t>(f.line.branch)];
        if (!s.is_po()) {
            sink_gate = s.gate;
            sink_slot = s.slot;
        }
    }
    Value forced = f.stuck1 ? Value::One : Value::Zero;
    std::vector<Value> values(nl.num_nets(), Value::X);
    for (size_t i = 0; i < nl.num_pis(); ++i) values[nl.pi(i)] = pi_values[i];
    if (stem && nl.is_pi(fnet)) values[fnet] = forced;
    std::vector<Value> ins;
    for (uint32_t g : nl.topo_gates()) {
        const Gate& gate = nl.gate(g);
        ins.clear();
        for (uint32_t s = 0; s < gate.inputs.size(); ++s) {
            NetId n = gate.inputs[s];
            bool hit = fnet == n && (stem || (sink_gate == g && sink_slot == s));
            ins.push_back(hit ? forced : values[n]);
        }
        Value v = eval_gate(gate.kind, ins);
        if (stem && gate.output == fnet) v = forced;
        values[gate.output] = v;
    }
    return values;
}

namespace {

// Gates feeding any of `nets`, topologically ordered.
std::vector<uint32_t> backward_gates(const Netlist& nl,
                                     const std::vector<NetId>& nets) {
    std::vector<uint8_t> seen(nl.num_nets(), 0);
    std::vector<NetId> queue;
    for (NetId n : nets)
        if (!seen[n]) {
            seen[n] = 1;
            queue.push_back(n);
        }
    std::vector<uint32_t> gates;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int32_t g = nl.driver_gate(queue[qi]);
        if (g < 0) continue;
        gates.push_back(static_cast<uint32_t>(g));
        for (NetId in : nl.gate(static_cast<uint32_t>(g)).inputs)
            if (!seen[in]) {
                seen[in] = 1;
                queue.push_back(in);
            }
    }
    std::sort(gates.begin(), gates.end());
    gates.erase(std::unique(gates.begin(), gates.end()), gates.end());
    std::vector<uint32_t> topo;
    for (uint32_t g : nl.topo_gates())
        if (std::binary_search(gates.begin(), gates.end(), g)) topo.push_back(g);
    return topo;
}

}  // namespace

void classify_undetected(const Netlist& nl, const FaultUniverse& u,
                         FaultSimResult& res, uint32_t pi_limit) {
    FaultSimEngine eng(nl, u);
    std::vector<std::vector<uint64_t>> support = nl.pi_support();
    size_t words = (nl.num_pis() + 63) / 64;
    std::vector<Value> ins;
    for (uint32_t c = 0; c < u.num_classes(); ++c) {
        if (res.status[c] != FaultStatus::Undetected) continue;
        const ClassCone& cone = eng.cone(c);
        if (cone.obs.empty()) {
            res.status[c] = FaultStatus::Untestable;  // no path to any output
            continue;
        }
        std::vector<uint64_t> mask(words, 0);
        std::vector<NetId> obs_nets;
        for (const ClassCone::Obs& ob : cone.obs) {
            obs_nets.push_back(ob.net);
            const std::vector<uint64_t>& s = support[ob.net];
            for (size_t w = 0; w < words; ++w) mask[w] |= s[w];
        }
        std::vector<uint32_t> pis;
        for (size_t i = 0; i < nl.num_pis(); ++i)
            if (mask[i / 64] >> (i % 64) & 1) pis.push_back(static_cast<uint32_t>(i));
        if (pis.size() > pi_limit) {
            res.status[c] = FaultStatus::Unclassified;
            continue;
        }

        const Fault& f = u.faults[u.class_rep[c]];
        std::vector<uint32_t> region = backward_gates(nl, obs_nets);
        // fault cone gates may sit outside the backward region only when
        // unobservable, so evaluating region + cone covers both sims
        std::vector<Value> good(nl.num_nets()), bad(nl.num_nets());
        bool detectable = false;
        uint64_t total = uint64_t{1} << pis.size();
        for (uint64_t a = 0; a < total && !detectable; ++a) {
            std::fill(good.begin(), good.end(), Value::X);
            for (size_t i = 0; i < pis.size(); ++i)
                good[nl.pi(pis[i])] = (a >> i & 1) ? Value::One : Value::Zero;
            bad = good;
            NetId fnet = f.line.net;
            bool stem = f.line.is_stem();
            Value forced = f.stuck1 ? Value::One : Value::Zero;
            if (stem && nl.is_pi(fnet)) bad[fnet] = forced;
            auto eval_into = [&](std::vector<Value>& vals, bool faulty) {
                for (uint32_t g : region) {
                    const Gate& gate = nl.gate(g);
                    ins.clear();
                    for (uint32_t s = 0; s < gate.inputs.size(); ++s) {
                        NetId n = gate.inputs[s];
                        bool hit = faulty && fnet == n &&
                                   (stem || (eng.cone(c).sink_gate == g &&
                                             eng.cone(c).sink_slot == s));
                        ins.push_back(hit ? forced : vals[n]);
                    }
                    Value v = eval_gate(gate.kind, ins);
                    if (faulty && stem && gate.output == fnet) v = forced;
                    vals[gate.output] = v;
                }
            };
            eval_into(good, false);
            eval_into(bad, true);
            for (const ClassCone::Obs& ob : cone.obs) {
                Value gv = good[ob.net];
                Value bv = ob.forced ? forced : bad[ob.net];
                if (gv != Value::X && bv != Value::X && gv != bv) {
                    detectable = true;
                    break;
                }
            }
        }
        if (!detectable) res.status[c] = FaultStatus::Untestable;
        // detectable-but-unmatched classes stay Undetected: they count
        // against coverage
    }
}

double CoverageCounts::coverage() const {
    size_t denom = collapsed - untestable - unclassified;
    if (denom == 0) return 1.0;
    return static_cast<double>(detected) / static_cast<double>(denom);
}

double CoverageCounts::raw_coverage() const {
    if (collapsed == 0) return 1.0;
    return static_cast<double>(detected) / static_cast<double>(collapsed);
}

CoverageCounts tally(const FaultUniverse& u, const FaultSimResult& res) {
    CoverageCounts c;
    c.total_faults = u.faults.size();
    c.collapsed = u.num_classes();
    for (FaultStatus s : res.status) {
        if (s == FaultStatus::Detected) ++c.detected;
        else if (s == FaultStatus::Untestable) ++c.untestable;
        else if (s == FaultStatus::Unclassified) ++c.unclassified;
    }
    return c;
}

void write_coverage_report(std::ostream& os, const CoverageCounts& c) {
    char buf[64];
    os << "total faults: " << c.total_faults << "\n";
    os << "collapsed faults: " << c.collapsed << "\n";
    os << "detected: " << c.detected << "\n";
    os << "undetectable: " << c.untestable << "\n";
    os << "unclassified: " << c.unclassified << "\n";
    std::snprintf(buf, sizeof buf, "%.2f", c.coverage() * 100.0);
    os << "coverage: " << buf << "%\n";
}

GenResult generate_patterns(const Netlist& nl, double target_coverage,
                            uint64_t seed, size_t max_patterns,
                            unsigned threads) {
    if (!(target_coverage > 0.0) || target_coverage > 1.0)
        fail(ErrorKind::Config, "coverage target must be in (0, 1]");
    FaultUniverse u = enumerate_faults(nl);
    FaultSimEngine eng(nl, u);
    FaultSimResult res;
    res.status.assign(u.num_classes(), FaultStatus::Undetected);
    res.first_pattern.assign(u.num_classes(), NO_PATTERN);

    Rng rng = Rng(seed).split("patterns");
    size_t n = nl.num_pis();
    std::vector<Pattern> all_rows;
    std::vector<uint32_t> active(u.num_classes());
    std::iota(active.begin(), active.end(), 0u);
    bool classified = false;

    auto detected_count = [&] {
        return static_cast<size_t>(std::count(res.status.begin(),
                                              res.status.end(),
                                              FaultStatus::Detected));
    };
    auto reached = [&] {
        CoverageCounts c = tally(u, res);
        double cov = classified ? c.coverage() : c.raw_coverage();
        return cov >= target_coverage;
    };

    while (!active.empty() && all_rows.size() < max_patterns && !reached()) {
        size_t count = std::min<size_t>(64, max_patterns - all_rows.size());
        std::vector<Pattern> block(count, Pattern(n, Value::Zero));
        for (size_t r = 0; r < count; ++r)
            for (size_t i = 0; i < n; ++i)
                if (rng.coin()) block[r][i] = Value::One;
        PackedVals good = simulate_batch(nl, block, threads);
        run_block(eng, nl, good, 0, all_rows.size(), active, res, threads);
        refresh_active(active, res.status, true);
        for (Pattern& p : block) all_rows.push_back(std::move(p));
        if (active.empty() || all_rows.size() >= max_patterns || reached()) {
            if (!classified) {
                // settle the denominator: provably untestable classes leave
                // the target, unclassified ones stay in the hunt
                classify_undetected(nl, u, res, 16);
                classified = true;
                refresh_active(active, res.status, true);
                for (uint32_t c = 0; c < u.num_classes(); ++c)
                    if (res.status[c] == FaultStatus::Unclassified &&
                        std::find(active.begin(), active.end(), c) == active.end())
                        active.push_back(c);
                std::sort(active.begin(), active.end());
                active.erase(std::remove_if(active.begin(), active.end(),
                                            [&](uint32_t c) {
                                                return res.status[c] ==
                                                       FaultStatus::Untestable;
                                            }),
                             active.end());
            }
        }
    }
    (void)detected_count;
    if (!classified) {
        classify_undetected(nl, u, res, 16);
        classified = true;
    }

    // greedy minimum-cover over the whole candidate pool: hitting the target
    // needs only `want` of the pool-detected classes, so the tail patterns
    // that exist purely for singleton faults beyond the target get dropped
    std::vector<uint32_t> det_classes;
    for (uint32_t c = 0; c < u.num_classes(); ++c)
        if (res.status[c] == FaultStatus::Detected) det_classes.push_back(c);
    CoverageCounts pool_counts = tally(u, res);
    size_t denom = pool_counts.collapsed - pool_counts.untestable -
                   pool_counts.unclassified;
    size_t want = det_classes.size();
    if (denom > 0) {
        double t = std::ceil(target_coverage * static_cast<double>(denom) - 1e-9);
        want = std::min(want, static_cast<size_t>(t));
    }

    size_t cwords = (det_classes.size() + 63) / 64;
    std::vector<std::vector<uint64_t>> covers(
        all_rows.size(), std::vector<uint64_t>(cwords, 0));
    if (!all_rows.empty() && cwords > 0) {
        PackedVals good = simulate_batch(nl, all_rows, threads);
        // threads split on class words so no two touch the same matrix word
        auto work = [&](size_t clo, size_t chi) {
            std::vector<W3> scratch(nl.num_nets());
            std::vector<uint8_t> have(nl.num_nets(), 0);
            std::vector<NetId> touched;
            for (size_t ci = clo; ci < chi; ++ci) {
                for (size_t w = 0; w < good.nwords; ++w) {
                    size_t npat_here = std::min<size_t>(64, good.npat - w * 64);
                    uint64_t valid = npat_here == 64
                                         ? ~uint64_t{0}
                                         : ((uint64_t{1} << npat_here) - 1);
                    uint64_t det = eng.sim_class(det_classes[ci], good, w, valid,
                                                 scratch, have, touched);
                    while (det) {
                        size_t j = w * 64 + static_cast<size_t>(__builtin_ctzll(det));
                        covers[j][ci / 64] |= uint64_t{1} << (ci % 64);
                        det &= det - 1;
                    }
                }
            }
        };
        if (threads <= 1 || det_classes.size() < 128) {
            work(0, det_classes.size());
        } else {
            std::vector<std::thread> pool;
            size_t chunk = ((det_classes.size() + threads - 1) / threads + 63) &
                           ~size_t{63};
            for (unsigned t = 0; t < threads; ++t) {
                size_t lo = t * chunk;
                size_t hi = std::min(det_classes.size(), lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back(work, lo, hi);
            }
            for (std::thread& th : pool) th.join();
        }
    }

    std::vector<uint64_t> covered(cwords, 0);
    std::vector<uint8_t> used(all_rows.size(), 0);
    std::vector<uint32_t> order;
    size_t have_cov = 0;
    while (have_cov < want) {
        size_t best = SIZE_MAX, best_gain = 0;
        for (size_t j = 0; j < all_rows.size(); ++j) {
            if (used[j]) continue;
            size_t g = 0;
            for (size_t w = 0; w < cwords; ++w)
                g += static_cast<size_t>(
                    __builtin_popcountll(covers[j][w] & ~covered[w]));
            if (g > best_gain) {
                best_gain = g;
                best = j;
            }
        }
        if (best == SIZE_MAX || best_gain == 0) break;
        used[best] = 1;
        order.push_back(static_cast<uint32_t>(best));
        for (size_t w = 0; w < cwords; ++w) covered[w] |= covers[best][w];
        have_cov += best_gain;
    }
    std::sort(order.begin(), order.end());
    std::vector<Pattern> final_rows;
    final_rows.reserve(order.size());
    for (uint32_t j : order) final_rows.push_back(all_rows[j]);

    GenResult out;
    out.generated = all_rows.size();
    FaultSimResult fin = fault_simulate(nl, u, final_rows, true, threads);
    classify_undetected(nl, u, fin, 16);
    out.counts = tally(u, fin);
    out.patterns.rows = std::move(final_rows);
    out.patterns.pi_names.reserve(n);
    for (size_t i = 0; i < n; ++i)
        out.patterns.pi_names.push_back(nl.net_name(nl.pi(i)));
    return out;
}

PatternSet import_patterns(const PatternSet& ps, const Netlist& nl) {
    std::vector<uint32_t> colmap = pattern_column_map(nl, ps);
    PatternSet out;
    out.provenance = ps.provenance;
    out.pi_names.reserve(nl.num_pis());
    for (size_t i = 0; i < nl.num_pis(); ++i)
        out.pi_names.push_back(nl.net_name(nl.pi(i)));
    out.rows.reserve(ps.rows.size());
    for (const Pattern& r : ps.rows) {
        Pattern p(nl.num_pis(), Value::X);
        for (size_t i = 0; i < p.size(); ++i) p[i] = r[colmap[i]];
        out.rows.push_back(std::move(p));
    }
    return out;
}

}  // namespace lockleak
