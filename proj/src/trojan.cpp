#include "lockleak/trojan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "lockleak/error.hpp"
#include "lockleak/rng.hpp"

namespace lockleak {

namespace {

std::vector<NetId> key_gate_outputs(const Netlist& nl, const LockRecord& rec) {
    std::vector<NetId> outs;
    for (const KeyBit& kb : rec.bits) {
        NetId n = nl.find_net(kb.key_gate_out);
        if (n == NO_NET)
            fail(ErrorKind::Op, "record names key gate output '" +
                                    kb.key_gate_out +
                                    "' which is not in the netlist");
        outs.push_back(n);
    }
    return outs;
}

std::vector<NetId> key_input_nets(const Netlist& nl, const LockRecord& rec) {
    std::vector<NetId> ins;
    for (const KeyBit& kb : rec.bits) {
        NetId n = nl.find_net(kb.key_input);
        if (n == NO_NET || !nl.is_pi(n))
            fail(ErrorKind::Op, "record names key input '" + kb.key_input +
                                    "' which is not a primary input");
        ins.push_back(n);
    }
    return ins;
}

std::vector<LineId> lines_of_nets(const Netlist& nl,
                                  const std::vector<char>& net_mask) {
    std::vector<LineId> out;
    for (const LineId& l : nl.lines())
        if (net_mask[l.net]) out.push_back(l);
    return out;
}

}  // namespace

std::vector<LineId> key_affected_lines(const Netlist& nl, const LockRecord& rec) {
    std::vector<NetId> seeds = key_gate_outputs(nl, rec);
    std::vector<char> mask = nl.forward_net_mask(seeds, true);
    return lines_of_nets(nl, mask);
}

std::vector<LineId> key_input_lines(const Netlist& nl, const LockRecord& rec) {
    std::vector<char> mask(nl.num_nets(), 0);
    for (NetId n : key_input_nets(nl, rec)) mask[n] = 1;
    return lines_of_nets(nl, mask);
}

std::vector<LineId> eligible_lines(const Netlist& nl, const LockRecord& rec) {
    std::vector<NetId> seeds = key_gate_outputs(nl, rec);
    std::vector<char> mask = nl.forward_net_mask(seeds, true);
    for (NetId n : key_input_nets(nl, rec)) mask[n] = 1;
    std::vector<LineId> out;
    for (const LineId& l : nl.lines())
        if (!mask[l.net]) out.push_back(l);
    return out;
}

LineCensus line_census(const Netlist& nl, const LockRecord& rec) {
    std::vector<NetId> seeds = key_gate_outputs(nl, rec);
    std::vector<char> mask = nl.forward_net_mask(seeds, true);
    for (NetId n : key_input_nets(nl, rec)) mask[n] = 1;
    return nl.census(lines_of_nets(nl, mask));
}

namespace {

// Per-line pattern masks: m1 = columns where the line reads 1-or-X, m0 =
// columns reading 0-or-X. A trigger cell survives iff ANDing its lines'
// masks leaves nothing.
struct LinePlanes {
    size_t W = 0;
    uint64_t N = 0;
    std::vector<uint64_t> m0, m1;  // N * W words each
    std::vector<uint64_t> valid;   // W words, bits < npat

    const uint64_t* at0(uint64_t i) const { return m0.data() + i * W; }
    const uint64_t* at1(uint64_t i) const { return m1.data() + i * W; }
};

LinePlanes build_planes(const Netlist& nl, const std::vector<LineId>& lines,
                        const std::vector<Pattern>& rows, unsigned threads) {
    PackedVals pv = simulate_batch(nl, rows, threads);
    LinePlanes lp;
    lp.W = pv.nwords;
    lp.N = lines.size();
    lp.valid.assign(lp.W, 0);
    for (size_t j = 0; j < pv.npat; ++j)
        lp.valid[j / 64] |= uint64_t{1} << (j % 64);
    lp.m0.resize(lp.N * lp.W);
    lp.m1.resize(lp.N * lp.W);
    for (uint64_t i = 0; i < lp.N; ++i) {
        std::span<const uint64_t> o = pv.o(lines[i].net);
        std::span<const uint64_t> x = pv.x(lines[i].net);
        for (size_t w = 0; w < lp.W; ++w) {
            lp.m1[i * lp.W + w] = (o[w] | x[w]) & lp.valid[w];
            lp.m0[i * lp.W + w] = (~o[w] | x[w]) & lp.valid[w];
        }
    }
    return lp;
}

void check_patterns_for(const Netlist& nl, const PatternSet& ps) {
    if (ps.rows.empty()) fail(ErrorKind::Op, "pattern set is empty");
    if (ps.pi_names.size() != nl.num_pis())
        fail(ErrorKind::Op, "pattern set covers " +
                                std::to_string(ps.pi_names.size()) +
                                " inputs but the netlist has " +
                                std::to_string(nl.num_pis()));
    for (size_t i = 0; i < ps.pi_names.size(); ++i)
        if (ps.pi_names[i] != nl.net_name(nl.pi(i)))
            fail(ErrorKind::Op,
                 "pattern columns are not in netlist input order (column " +
                     std::to_string(i) + " is '" + ps.pi_names[i] +
                     "'); import them first");
}

}  // namespace

bool trigger_stealthy(const Netlist& nl, const TriggerSpec& t,
                      const PatternSet& patterns, unsigned threads) {
    check_patterns_for(nl, patterns);
    PackedVals pv = simulate_batch(nl, patterns.rows, threads);
    std::vector<uint64_t> m(pv.nwords, 0);
    for (size_t j = 0; j < pv.npat; ++j) m[j / 64] |= uint64_t{1} << (j % 64);
    for (size_t i = 0; i < t.nodes.size(); ++i) {
        std::span<const uint64_t> o = pv.o(t.nodes[i].net);
        std::span<const uint64_t> x = pv.x(t.nodes[i].net);
        uint64_t any = 0;
        for (size_t w = 0; w < pv.nwords; ++w) {
            m[w] &= t.inverted[i] ? (~o[w] | x[w]) : (o[w] | x[w]);
            any |= m[w];
        }
        if (!any) return true;
    }
    uint64_t any = 0;
    for (uint64_t w : m) any |= w;
    return any == 0;
}

TrojanSpec design_trojan(const Netlist& nl, const LockRecord& rec,
                         const PatternSet& patterns, uint32_t p, uint64_t seed,
                         const std::optional<Pattern>& htap_hint, uint32_t r) {
    check_patterns_for(nl, patterns);
    if (p < 1) fail(ErrorKind::Config, "trigger width must be at least 1");
    std::vector<LineId> elig = eligible_lines(nl, rec);
    if (p > elig.size())
        fail(ErrorKind::Op, "trigger width " + std::to_string(p) +
                                " exceeds the " + std::to_string(elig.size()) +
                                " eligible lines");
    std::vector<char> is_key(nl.num_pis(), 0);
    for (NetId n : key_input_nets(nl, rec)) is_key[nl.pi_index(n)] = 1;

    // A candidate activation pattern collides with the test set when some
    // row matches it on every non-key column (X matches everything).
    auto in_test_set = [&](const Pattern& h) {
        for (const Pattern& row : patterns.rows) {
            bool collide = true;
            for (size_t i = 0; i < h.size() && collide; ++i) {
                if (is_key[i]) continue;
                if (h[i] != Value::X && row[i] != Value::X && row[i] != h[i])
                    collide = false;
            }
            if (collide) return true;
        }
        return false;
    };

    Rng rng(seed);
    LinePlanes lp = build_planes(nl, elig, patterns.rows, 1);
    Rng nr = rng.split("nodes");

    // One activation pattern's worth of node search: sample p definite
    // eligible lines until no pattern column matches the implied trigger.
    auto try_nodes = [&](const Pattern& htap,
                         bool demand_cand) -> std::optional<TrojanSpec> {
        std::vector<Value> h = simulate3(nl, htap);
        std::vector<uint32_t> cand;  // indices into elig with definite values
        for (uint32_t i = 0; i < elig.size(); ++i)
            if (h[elig[i].net] != Value::X) cand.push_back(i);
        if (cand.size() < p) {
            if (demand_cand)
                fail(ErrorKind::Op, "activation pattern leaves only " +
                                        std::to_string(cand.size()) +
                                        " definite trigger candidates");
            return std::nullopt;
        }
        std::vector<uint64_t> m(lp.W);
        for (int attempt = 0; attempt < 10000; ++attempt) {
            std::vector<uint32_t> sel =
                nr.sample_indices(static_cast<uint32_t>(cand.size()), p);
            std::copy(lp.valid.begin(), lp.valid.end(), m.begin());
            uint64_t any = 0;
            for (uint32_t s : sel) {
                uint32_t li = cand[s];
                const uint64_t* mb = h[elig[li].net] == Value::One ? lp.at1(li)
                                                                   : lp.at0(li);
                any = 0;
                for (size_t w = 0; w < lp.W; ++w) {
                    m[w] &= mb[w];
                    any |= m[w];
                }
                if (!any) break;
            }
            if (any) continue;  // some pattern still matches the trigger
            TrojanSpec spec;
            spec.htap = htap;
            spec.counter_depth = r;
            for (uint32_t s : sel) {
                spec.trigger.nodes.push_back(elig[cand[s]]);
                spec.trigger.inverted.push_back(h[elig[cand[s]].net] ==
                                                Value::Zero);
            }
            return spec;
        }
        return std::nullopt;
    };

    if (htap_hint) {
        Pattern htap = *htap_hint;
        if (htap.size() != nl.num_pis())
            fail(ErrorKind::Op, "activation pattern has " +
                                    std::to_string(htap.size()) +
                                    " values for " +
                                    std::to_string(nl.num_pis()) + " inputs");
        for (size_t i = 0; i < htap.size(); ++i)
            if (is_key[i]) htap[i] = Value::X;
        if (in_test_set(htap))
            fail(ErrorKind::Op, "activation pattern collides with the test set");
        std::optional<TrojanSpec> spec = try_nodes(htap, true);
        if (!spec)
            fail(ErrorKind::Op,
                 "no stealthy trigger found for this activation pattern after "
                 "10000 tries");
        return *spec;
    }

    // Some activation patterns pin every eligible line to a value the test
    // set also produces, so a dead-end node search draws a fresh pattern.
    Rng hr = rng.split("htap");
    int draws_left = 10000;
    for (int round = 0; round < 200; ++round) {
        Pattern htap(nl.num_pis(), Value::X);
        bool found = false;
        while (!found && draws_left > 0) {
            --draws_left;
            for (size_t i = 0; i < htap.size(); ++i)
                if (!is_key[i]) htap[i] = hr.coin() ? Value::One : Value::Zero;
            found = !in_test_set(htap);
        }
        if (!found)
            fail(ErrorKind::Op,
                 "no activation pattern outside the test set after 10000 tries");
        std::optional<TrojanSpec> spec = try_nodes(htap, false);
        if (spec) return *spec;
    }
    fail(ErrorKind::Op,
         "no stealthy trigger survives the test set after 200 activation "
         "patterns");
}

std::string u128_text(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

unsigned __int128 trigger_space(uint64_t n, uint32_t p) {
    if (p > n) return 0;
    constexpr unsigned __int128 MAX = ~static_cast<unsigned __int128>(0);
    unsigned __int128 c = 1;
    for (uint32_t k = 0; k < p; ++k) {
        unsigned __int128 mul = n - k;
        if (c > MAX / mul)
            fail(ErrorKind::Op, "trigger space exceeds 128-bit range");
        c = c * mul / (k + 1);
    }
    if (p >= 128 || (p > 0 && c > (MAX >> p)))
        fail(ErrorKind::Op, "trigger space exceeds 128-bit range");
    return c << p;
}

namespace {

double u128_to_double(unsigned __int128 v) {
    double hi = static_cast<double>(static_cast<uint64_t>(v >> 64));
    double lo = static_cast<double>(static_cast<uint64_t>(v));
    return hi * 18446744073709551616.0 + lo;
}

// Exhaustive cell counting. Walks line subsets depth-first, carrying the
// mask of pattern columns still matching the chosen (line, polarity)
// prefix. A dead mask proves every completion valid: all C(remaining
// lines, remaining picks) * 2^picks cells are counted at once.
struct CountCtx {
    const LinePlanes* lp;
    uint32_t p;
    const std::vector<std::vector<unsigned __int128>>* binom;
    std::vector<uint64_t> mstack;  // (p + 1) rows of W words
    unsigned __int128 valid = 0;
};

void count_rec(CountCtx& c, uint32_t d, uint64_t start, const uint64_t* m) {
    const LinePlanes& lp = *c.lp;
    size_t W = lp.W;
    uint32_t rem = c.p - d;
    uint64_t* next = c.mstack.data() + (d + 1) * W;
    for (uint64_t i = start; i + rem <= lp.N; ++i) {
        for (int b = 0; b < 2; ++b) {
            const uint64_t* mb = b ? lp.at1(i) : lp.at0(i);
            uint64_t any = 0;
            for (size_t w = 0; w < W; ++w) {
                next[w] = m[w] & mb[w];
                any |= next[w];
            }
            if (!any)
                c.valid += (*c.binom)[lp.N - 1 - i][rem - 1]
                           << (rem - 1);
            else if (rem > 1)
                count_rec(c, d + 1, i + 1, next);
        }
    }
}

}  // namespace

TrojanCount count_trojans(const Netlist& nl, const LockRecord& rec,
                          const PatternSet& patterns, uint32_t p,
                          TrojanCount::Mode mode, uint64_t budget,
                          uint64_t samples, uint64_t seed, unsigned threads) {
    check_patterns_for(nl, patterns);
    if (p < 1) fail(ErrorKind::Config, "trigger width must be at least 1");
    std::vector<LineId> elig = eligible_lines(nl, rec);
    if (p > elig.size())
        fail(ErrorKind::Op, "trigger width " + std::to_string(p) +
                                " exceeds the " + std::to_string(elig.size()) +
                                " eligible lines");
    TrojanCount out;
    out.p = p;
    out.eligible = elig.size();
    out.all_possible = trigger_space(elig.size(), p);
    out.mode = mode;

    LinePlanes lp = build_planes(nl, elig, patterns.rows, threads);

    if (mode == TrojanCount::Mode::Exact) {
        if (out.all_possible > budget)
            fail(ErrorKind::Op,
                 "exact count of " + u128_text(out.all_possible) +
                     " cells exceeds the budget of " + std::to_string(budget) +
                     "; use sampling");
        // binomials C(n, k) for n < N, k < p; all bounded by the budget check
        std::vector<std::vector<unsigned __int128>> binom(lp.N);
        for (uint64_t n = 0; n < lp.N; ++n) {
            binom[n].assign(p, 0);
            for (uint32_t k = 0; k < p; ++k) {
                if (k > n) {
                    binom[n][k] = 0;
                } else if (k == 0) {
                    binom[n][k] = 1;
                } else {
                    binom[n][k] = binom[n - 1][k - 1] +
                                  (n >= 1 ? binom[n - 1][k] : 0);
                }
            }
        }
        unsigned nthreads = std::max(1u, threads);
        std::vector<unsigned __int128> partial(nthreads, 0);
        auto work = [&](unsigned t) {
            CountCtx c{&lp, p, &binom, std::vector<uint64_t>((p + 1) * lp.W), 0};
            std::copy(lp.valid.begin(), lp.valid.end(), c.mstack.begin());
            const uint64_t* m = c.mstack.data();
            uint64_t* next = c.mstack.data() + lp.W;
            for (uint64_t i = t; i + p <= lp.N; i += nthreads) {
                for (int b = 0; b < 2; ++b) {
                    const uint64_t* mb = b ? lp.at1(i) : lp.at0(i);
                    uint64_t any = 0;
                    for (size_t w = 0; w < lp.W; ++w) {
                        next[w] = m[w] & mb[w];
                        any |= next[w];
                    }
                    if (!any)
                        c.valid += binom[lp.N - 1 - i][p - 1] << (p - 1);
                    else if (p > 1)
                        count_rec(c, 1, i + 1, next);
                }
            }
            partial[t] = c.valid;
        };
        if (nthreads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
            for (std::thread& th : pool) th.join();
        }
        for (unsigned __int128 v : partial) out.valid += v;
        return out;
    }

    // sampling: uniform cells, Wilson 95% bounds on the valid fraction
    if (samples == 0) fail(ErrorKind::Config, "sample count must be positive");
    Rng rng = Rng(seed).split("sample");
    uint64_t hits = 0;
    std::vector<uint64_t> m(lp.W);
    for (uint64_t s = 0; s < samples; ++s) {
        std::vector<uint32_t> idx =
            rng.sample_indices(static_cast<uint32_t>(lp.N), p);
        uint64_t pol = rng.next();
        std::copy(lp.valid.begin(), lp.valid.end(), m.begin());
        uint64_t any = 0;
        for (uint32_t k = 0; k < p; ++k) {
            const uint64_t* mb =
                (pol >> k & 1) ? lp.at1(idx[k]) : lp.at0(idx[k]);
            any = 0;
            for (size_t w = 0; w < lp.W; ++w) {
                m[w] &= mb[w];
                any |= m[w];
            }
            if (!any) break;
        }
        if (!any) ++hits;
    }
    out.samples = samples;
    out.hits = hits;
    double at = u128_to_double(out.all_possible);
    double n = static_cast<double>(samples);
    double phat = static_cast<double>(hits) / n;
    const double z = 1.959963984540054;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    out.estimate = at * phat;
    out.lo = at * std::max(0.0, center - half);
    out.hi = at * std::min(1.0, center + half);
    return out;
}

NetId instantiate_trigger(Netlist& nl, const TriggerSpec& t, uint32_t r,
                          const std::string& prefix) {
    if (t.nodes.empty() || t.nodes.size() != t.inverted.size())
        fail(ErrorKind::Op, "malformed trigger");
    std::vector<NetId> lits;
    for (size_t i = 0; i < t.nodes.size(); ++i) {
        NetId n = t.nodes[i].net;
        if (n >= nl.num_nets())
            fail(ErrorKind::Op, "trigger node net out of range");
        if (t.inverted[i]) {
            NetId ln = nl.fresh_net(prefix + "_l" + std::to_string(i));
            nl.add_gate(GateKind::Not, {n}, ln);
            lits.push_back(ln);
        } else {
            lits.push_back(n);
        }
    }
    NetId en;
    if (lits.size() == 1) {
        en = lits[0];
    } else {
        en = nl.fresh_net(prefix + "_en");
        nl.add_gate(GateKind::And, lits, en);
    }
    if (r <= 1) return en;

    uint32_t w = 1;
    while ((uint64_t{1} << w) < r) ++w;
    uint32_t top = r - 1;

    std::vector<NetId> b(w);
    for (uint32_t i = 0; i < w; ++i)
        b[i] = nl.fresh_net(prefix + "_b" + std::to_string(i));

    // increment: inc0 = !b0, inc_i = b_i xor (b_0 & ... & b_{i-1})
    std::vector<NetId> inc(w);
    inc[0] = nl.fresh_net(prefix + "_i0");
    nl.add_gate(GateKind::Not, {b[0]}, inc[0]);
    NetId carry = b[0];
    for (uint32_t i = 1; i < w; ++i) {
        if (i >= 2) {
            NetId c2 = nl.fresh_net(prefix + "_c" + std::to_string(i));
            nl.add_gate(GateKind::And, {carry, b[i - 1]}, c2);
            carry = c2;
        }
        inc[i] = nl.fresh_net(prefix + "_i" + std::to_string(i));
        nl.add_gate(GateKind::Xor, {b[i], carry}, inc[i]);
    }

    // saturation compare against the terminal count
    std::vector<NetId> terms(w);
    for (uint32_t i = 0; i < w; ++i) {
        if (top >> i & 1) {
            terms[i] = b[i];
        } else {
            terms[i] = nl.fresh_net(prefix + "_s" + std::to_string(i));
            nl.add_gate(GateKind::Not, {b[i]}, terms[i]);
        }
    }
    NetId sat;
    if (w == 1) {
        sat = terms[0];
    } else {
        sat = nl.fresh_net(prefix + "_sat");
        nl.add_gate(GateKind::And, terms, sat);
    }

    // state advances while enabled, holds at the top, clears when disabled
    for (uint32_t i = 0; i < w; ++i) {
        NetId hold = nl.fresh_net(prefix + "_h" + std::to_string(i));
        nl.add_gate(GateKind::Mux2, {sat, inc[i], b[i]}, hold);
        NetId d = nl.fresh_net(prefix + "_d" + std::to_string(i));
        nl.add_gate(GateKind::And, {en, hold}, d);
        uint32_t g = nl.add_gate(GateKind::Dff, {d}, b[i]);
        nl.set_no_scan(g, true);
    }
    NetId fire = nl.fresh_net(prefix + "_fire");
    nl.add_gate(GateKind::And, {en, sat}, fire);
    return fire;
}

Netlist build_sequential_trigger(const TriggerSpec& t, uint32_t r) {
    if (r < 2)
        fail(ErrorKind::Op, "counter form requires R >= 2 (R = 1 is combinational)");
    Netlist frag;
    TriggerSpec local;
    for (size_t i = 0; i < t.nodes.size(); ++i) {
        NetId pi = frag.add_pi("t" + std::to_string(i));
        local.nodes.push_back(LineId{pi, -1});
        local.inverted.push_back(t.inverted[i]);
    }
    NetId fire = instantiate_trigger(frag, local, r, "trj");
    frag.add_po(fire);
    frag.validate();
    return frag;
}

std::string payload_text(const Netlist& nl, const PayloadSpec& p) {
    std::string s = "kind=";
    s += p.kind == PayloadSpec::Kind::MuxToPo ? "mux" : "or";
    s += " victim=" + nl.line_text(p.victim);
    s += " leak=";
    if (p.leak_const) s += p.leak_invert ? "!VDD" : "VDD";
    else s += nl.line_text(p.leak_source);
    s += " po=" + std::to_string(p.observe_po);
    return s;
}

PayloadSpec parse_payload_fields(const std::vector<std::string>& fields,
                                 const Netlist& nl, const std::string& origin,
                                 size_t lineno) {
    auto bad = [&](const std::string& msg) -> void {
        fail(ErrorKind::Parse,
             origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    PayloadSpec p;
    bool have_kind = false, have_victim = false, have_leak = false, have_po = false;
    for (const std::string& f : fields) {
        size_t eq = f.find('=');
        if (eq == std::string::npos) bad("expected key=value, got '" + f + "'");
        std::string k = f.substr(0, eq), v = f.substr(eq + 1);
        if (k == "kind") {
            if (v == "mux") p.kind = PayloadSpec::Kind::MuxToPo;
            else if (v == "or") p.kind = PayloadSpec::Kind::OrForce;
            else bad("unknown payload kind '" + v + "'");
            have_kind = true;
        } else if (k == "victim") {
            p.victim = nl.parse_line_text(v);
            have_victim = true;
        } else if (k == "leak") {
            if (v == "VDD") {
                p.leak_const = true;
                p.leak_invert = false;
            } else if (v == "!VDD") {
                p.leak_const = true;
                p.leak_invert = true;
            } else {
                p.leak_const = false;
                p.leak_source = nl.parse_line_text(v);
            }
            have_leak = true;
        } else if (k == "po") {
            auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(),
                                             p.observe_po);
            if (ec != std::errc{} || ptr != v.data() + v.size())
                bad("bad output index '" + v + "'");
            if (p.observe_po >= nl.num_pos()) bad("output index out of range");
            have_po = true;
        } else {
            bad("unknown payload field '" + k + "'");
        }
    }
    if (!have_kind || !have_victim || !have_leak || !have_po)
        bad("payload line missing a field");
    return p;
}

void save_trojan(std::ostream& os, const Netlist& nl, const TrojanSpec& spec) {
    os << "p = " << spec.trigger.p() << "\n";
    os << "r = " << spec.counter_depth << "\n";
    os << "htap = " << pattern_text(spec.htap) << "\n";
    for (size_t i = 0; i < spec.trigger.nodes.size(); ++i)
        os << "node " << i << " line=" << nl.line_text(spec.trigger.nodes[i])
           << " inv=" << (spec.trigger.inverted[i] ? 1 : 0) << "\n";
    for (size_t i = 0; i < spec.payloads.size(); ++i)
        os << "payload " << i << " " << payload_text(nl, spec.payloads[i])
           << "\n";
}

void save_trojan_file(const std::string& path, const Netlist& nl,
                      const TrojanSpec& spec) {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::Io, "cannot write '" + path + "'");
    save_trojan(os, nl, spec);
    if (!os) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

TrojanSpec load_trojan(std::istream& is, const std::string& origin,
                       const Netlist& nl) {
    TrojanSpec spec;
    size_t expect_p = 0;
    bool have_p = false, have_htap = false;
    std::string raw;
    size_t lineno = 0;
    auto bad = [&](const std::string& msg) -> void {
        fail(ErrorKind::Parse,
             origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "p") {
            std::string eq;
            if (!(ls >> eq >> expect_p) || eq != "=") bad("expected p = <count>");
            have_p = true;
        } else if (tok == "r") {
            std::string eq;
            if (!(ls >> eq >> spec.counter_depth) || eq != "=")
                bad("expected r = <count>");
        } else if (tok == "htap") {
            std::string eq, pat;
            if (!(ls >> eq >> pat) || eq != "=")
                bad("expected htap = <pattern>");
            spec.htap = pattern_from_text(pat);
            if (spec.htap.size() != nl.num_pis())
                bad("activation pattern width does not match the netlist");
            have_htap = true;
        } else if (tok == "node") {
            size_t idx;
            std::string f1, f2;
            if (!(ls >> idx >> f1 >> f2)) bad("malformed node line");
            if (idx != spec.trigger.nodes.size()) bad("node lines out of order");
            if (f1.rfind("line=", 0) != 0 || f2.rfind("inv=", 0) != 0)
                bad("expected line=... inv=...");
            spec.trigger.nodes.push_back(nl.parse_line_text(f1.substr(5)));
            std::string iv = f2.substr(4);
            if (iv != "0" && iv != "1") bad("inv= must be 0 or 1");
            spec.trigger.inverted.push_back(iv == "1");
        } else if (tok == "payload") {
            size_t idx;
            if (!(ls >> idx)) bad("malformed payload line");
            if (idx != spec.payloads.size()) bad("payload lines out of order");
            std::vector<std::string> fields;
            std::string f;
            while (ls >> f) fields.push_back(f);
            spec.payloads.push_back(
                parse_payload_fields(fields, nl, origin, lineno));
        } else {
            bad("unknown trojan line '" + tok + "'");
        }
    }
    if (!have_p || !have_htap) bad("missing p or htap line");
    if (spec.trigger.nodes.size() != expect_p)
        bad("node count does not match p = " + std::to_string(expect_p));
    return spec;
}

TrojanSpec load_trojan_file(const std::string& path, const Netlist& nl) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot read '" + path + "'");
    return load_trojan(is, path, nl);
}

}  // namespace lockleak
