#include "lockleak/attack.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lockleak/error.hpp"
#include "lockleak/logicsim.hpp"
#include "lockleak/rng.hpp"

namespace lockleak {

namespace {

// Implant searches are deterministic: one fixed stream, no caller knob.
constexpr uint64_t kSearchSeed = 0x1ea41eafULL;

void check_key_bit(const LockRecord& rec, uint32_t bit) {
    if (bit >= rec.key_size())
        fail(ErrorKind::Config, "key bit " + std::to_string(bit) +
                                    " out of range for a " +
                                    std::to_string(rec.key_size()) +
                                    "-bit record");
}

NetId key_gate_out_net(const Netlist& nl, const LockRecord& rec, uint32_t bit) {
    NetId n = nl.find_net(rec.bits[bit].key_gate_out);
    if (n == NO_NET)
        fail(ErrorKind::Op, "record names key gate output '" +
                                rec.bits[bit].key_gate_out +
                                "' which is not in the netlist");
    return n;
}

NetId key_input_net(const Netlist& nl, const LockRecord& rec, uint32_t bit) {
    NetId n = nl.find_net(rec.bits[bit].key_input);
    if (n == NO_NET || !nl.is_pi(n))
        fail(ErrorKind::Op, "record names key input '" +
                                rec.bits[bit].key_input +
                                "' which is not a primary input");
    return n;
}

// Nets strictly downstream of `from`, in breadth-first discovery order.
std::vector<NetId> downstream_nets(const Netlist& nl, NetId from) {
    std::vector<char> seen(nl.num_nets(), 0);
    std::vector<NetId> order;
    std::vector<NetId> q{from};
    seen[from] = 1;
    for (size_t h = 0; h < q.size(); ++h) {
        for (const Sink& s : nl.sinks(q[h])) {
            if (s.is_po()) continue;
            NetId o = nl.gate(s.gate).output;
            if (!seen[o]) {
                seen[o] = 1;
                order.push_back(o);
                q.push_back(o);
            }
        }
    }
    return order;
}

void clear_key_columns(const Netlist& nl, const LockRecord& rec, Pattern& p) {
    for (const KeyBit& kb : rec.bits) {
        NetId n = nl.find_net(kb.key_input);
        if (n != NO_NET && nl.is_pi(n)) p[nl.pi_index(n)] = Value::X;
    }
}

struct Transparent {
    Pattern activation;  // key columns X
    NetId leak;
    bool invert;  // leaked value with the target bit at 0
};

// Look for an input pattern that arms the trigger and makes some candidate
// net a definite function of the target key bit alone (other key bits X).
// Small input counts are swept exhaustively, input 0 fastest; larger ones
// fall back to random trials.
std::optional<Transparent> search_transparent(const Netlist& nl,
                                              const LockRecord& rec,
                                              uint32_t target, NetId en,
                                              const std::vector<NetId>& cand) {
    size_t npi = nl.num_pis();
    std::vector<char> is_key(npi, 0);
    uint32_t tgt_col = 0;
    for (size_t b = 0; b < rec.bits.size(); ++b) {
        uint32_t col = nl.pi_index(key_input_net(nl, rec, uint32_t(b)));
        is_key[col] = 1;
        if (b == target) tgt_col = col;
    }
    std::vector<uint32_t> free_pi;
    for (uint32_t i = 0; i < npi; ++i)
        if (!is_key[i]) free_pi.push_back(i);

    auto try_pattern = [&](Pattern& v) -> std::optional<Transparent> {
        v[tgt_col] = Value::Zero;
        std::vector<Value> s0 = simulate3(nl, v);
        if (s0[en] != Value::One) {
            v[tgt_col] = Value::X;
            return std::nullopt;
        }
        v[tgt_col] = Value::One;
        std::vector<Value> s1 = simulate3(nl, v);
        v[tgt_col] = Value::X;
        for (NetId L : cand) {
            Value a = s0[L], b = s1[L];
            if (a != Value::X && b != Value::X && a != b)
                return Transparent{v, L, a == Value::One};
        }
        return std::nullopt;
    };

    Pattern v(npi, Value::X);
    if (free_pi.size() <= 20) {
        uint64_t total = uint64_t{1} << free_pi.size();
        for (uint64_t idx = 0; idx < total; ++idx) {
            for (size_t j = 0; j < free_pi.size(); ++j)
                v[free_pi[j]] = (idx >> j & 1) ? Value::One : Value::Zero;
            if (auto hit = try_pattern(v)) return hit;
        }
        return std::nullopt;
    }
    Rng rng = Rng(kSearchSeed).split("search");
    for (uint64_t trial = 0; trial < 1000000; ++trial) {
        for (uint32_t i : free_pi)
            v[i] = rng.coin() ? Value::One : Value::Zero;
        if (auto hit = try_pattern(v)) return hit;
    }
    return std::nullopt;
}

// Mux an internal net onto an output slot behind the fire signal.
PayloadSpec add_observation(Netlist& nl, NetId fire, NetId leak, bool invert,
                            uint32_t po_index, const std::string& name) {
    NetId old = nl.po(po_index);
    NetId y = nl.fresh_net(name);
    nl.add_gate(GateKind::Mux2, {fire, old, leak}, y);
    nl.replace_po(po_index, y);
    PayloadSpec pl;
    pl.kind = PayloadSpec::Kind::MuxToPo;
    pl.victim = LineId{old, -1};
    pl.leak_const = false;
    pl.leak_invert = invert;
    pl.leak_source = LineId{leak, -1};
    pl.observe_po = po_index;
    return pl;
}

}  // namespace

ImplantResult implant_t1(const Netlist& locked, const LockRecord& rec,
                         const TrojanSpec& trojan,
                         const std::vector<uint32_t>& targets) {
    if (targets.empty()) fail(ErrorKind::Config, "no key bits targeted");
    {
        std::vector<uint32_t> s = targets;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            fail(ErrorKind::Config, "duplicate target key bit");
    }
    for (uint32_t t : targets) check_key_bit(rec, t);

    uint32_t npo = uint32_t(locked.num_pos());
    uint32_t ntgt = uint32_t(targets.size());
    uint32_t groups = (ntgt + npo - 1) / npo;
    uint32_t sel_bits = 0;
    while ((uint32_t{1} << sel_bits) < groups) ++sel_bits;

    // Selector inputs must not disturb the trigger: pick the first spare
    // inputs outside every trigger node's support cone.
    std::vector<char> is_key(locked.num_pis(), 0);
    for (uint32_t b = 0; b < rec.key_size(); ++b)
        is_key[locked.pi_index(key_input_net(locked, rec, b))] = 1;
    std::vector<uint32_t> selector;
    if (sel_bits > 0) {
        std::vector<std::vector<uint64_t>> supp = locked.pi_support();
        size_t words = (locked.num_pis() + 63) / 64;
        std::vector<uint64_t> used(words, 0);
        for (const LineId& l : trojan.trigger.nodes)
            for (size_t w = 0; w < words; ++w) used[w] |= supp[l.net][w];
        for (uint32_t i = 0; i < locked.num_pis() && selector.size() < sel_bits;
             ++i)
            if (!is_key[i] && !(used[i / 64] >> (i % 64) & 1))
                selector.push_back(i);
        if (selector.size() < sel_bits)
            fail(ErrorKind::Op,
                 "not enough spare inputs outside the trigger support to "
                 "select " +
                     std::to_string(groups) + " groups");
    }

    ImplantResult res;
    res.tampered = locked;
    Netlist& out = res.tampered;
    NetId fire =
        instantiate_trigger(out, trojan.trigger, trojan.counter_depth, "trj0");

    TrojanSpec spec = trojan;
    spec.payloads.clear();
    uint32_t used_pos = std::min(npo, ntgt);
    for (uint32_t j = 0; j < used_pos; ++j) {
        // leaf per group: that group's key input for this output slot
        std::vector<NetId> level(uint64_t{1} << sel_bits);
        NetId fallback = key_input_net(out, rec, targets[0]);
        for (uint32_t g = 0; g < level.size(); ++g) {
            uint64_t t = uint64_t(g) * npo + j;
            level[g] = (g < groups && t < ntgt)
                           ? key_input_net(out, rec, targets[t])
                           : fallback;
        }
        for (uint32_t b = 0; b < sel_bits; ++b) {
            std::vector<NetId> next(level.size() / 2);
            for (size_t q = 0; q < next.size(); ++q) {
                if (level[2 * q] == level[2 * q + 1]) {
                    next[q] = level[2 * q];
                    continue;
                }
                NetId o = out.fresh_net("trj0_m" + std::to_string(j) + "_" +
                                        std::to_string(b) + "_" +
                                        std::to_string(q));
                out.add_gate(GateKind::Mux2,
                             {out.pi(selector[b]), level[2 * q],
                              level[2 * q + 1]},
                             o);
                next[q] = o;
            }
            level = std::move(next);
        }
        spec.payloads.push_back(add_observation(
            out, fire, level[0], false, j, "trj0_y" + std::to_string(j)));
    }
    out.validate();

    res.plan.mode = "t1";
    res.plan.r = trojan.counter_depth;
    res.plan.trojans.push_back(spec);
    res.plan.fire_nets.push_back(out.net_name(fire));
    for (uint32_t t = 0; t < ntgt; ++t) {
        uint32_t g = t / npo, j = t % npo;
        DecodeEntry e;
        e.key_bit = targets[t];
        e.trojan = 0;
        e.activation = trojan.htap;
        clear_key_columns(out, rec, e.activation);
        for (uint32_t b = 0; b < sel_bits; ++b)
            e.activation[selector[b]] = (g >> b & 1) ? Value::One : Value::Zero;
        e.po_index = j;
        e.invert = false;
        res.plan.decode.push_back(e);
    }
    return res;
}

ImplantResult implant_t2(const Netlist& locked, const LockRecord& rec,
                         const TrojanSpec& trojan, uint32_t target) {
    check_key_bit(rec, target);
    NetId kg = key_gate_out_net(locked, rec, target);
    std::vector<NetId> cand = downstream_nets(locked, kg);
    if (cand.empty())
        fail(ErrorKind::Op,
             "the target key gate feeds no downstream net to leak through "
             "(try t3)");

    Netlist search_nl = locked;
    NetId en = instantiate_trigger(search_nl, trojan.trigger, 1, "trj0");
    std::optional<Transparent> hit =
        search_transparent(search_nl, rec, target, en, cand);
    if (!hit)
        fail(ErrorKind::Op,
             "no input pattern makes the target key bit observable on a "
             "downstream net; another key gate may be masking it (try t3)");

    ImplantResult res;
    res.tampered = locked;
    NetId fire = instantiate_trigger(res.tampered, trojan.trigger,
                                     trojan.counter_depth, "trj0");
    TrojanSpec spec = trojan;
    spec.payloads = {add_observation(res.tampered, fire, hit->leak,
                                     hit->invert, 0, "trj0_y0")};
    res.tampered.validate();

    res.plan.mode = "t2";
    res.plan.r = trojan.counter_depth;
    res.plan.trojans.push_back(spec);
    res.plan.fire_nets.push_back(res.tampered.net_name(fire));
    DecodeEntry e;
    e.key_bit = target;
    e.trojan = 0;
    e.activation = hit->activation;
    clear_key_columns(res.tampered, rec, e.activation);
    e.po_index = 0;
    e.invert = hit->invert;
    res.plan.decode.push_back(e);
    return res;
}

ImplantResult implant_t3(const Netlist& locked, const LockRecord& rec,
                         const TrojanSpec& trojan, uint32_t target,
                         uint32_t blocker, PayloadSpec::Kind forcing) {
    check_key_bit(rec, target);
    check_key_bit(rec, blocker);
    if (target == blocker)
        fail(ErrorKind::Config, "target and blocker must be different key bits");

    NetId kgT = key_gate_out_net(locked, rec, target);
    NetId kgB = key_gate_out_net(locked, rec, blocker);
    std::vector<NetId> seedsT{kgT}, seedsB{kgB};
    std::vector<char> tmask = locked.forward_net_mask(seedsT, true);
    std::vector<char> bmask = locked.forward_net_mask(seedsB, true);

    // Cut gates: one input carries the target's effect, another carries only
    // the blocker's. Forcing the latter to the gate's non-controlling value
    // lets the target through.
    struct Cut {
        uint32_t gate;
        NetId victim;
        bool nc_one;  // non-controlling value is 1
    };
    std::vector<Cut> cuts;
    bool any_gate = false;
    for (uint32_t g : locked.topo_gates()) {
        const Gate& gt = locked.gate(g);
        bool nc1 = gt.kind == GateKind::And || gt.kind == GateKind::Nand;
        bool nc0 = gt.kind == GateKind::Or || gt.kind == GateKind::Nor;
        bool has_t = false;
        NetId victim = NO_NET;
        for (NetId in : gt.inputs) {
            if (tmask[in]) has_t = true;
            else if (bmask[in] && victim == NO_NET) victim = in;
        }
        if (!has_t || victim == NO_NET) continue;
        any_gate = true;
        if (!nc1 && !nc0) continue;
        if (forcing == PayloadSpec::Kind::OrForce && !nc1) continue;
        cuts.push_back({g, victim, nc1});
    }
    if (cuts.empty()) {
        if (any_gate && forcing == PayloadSpec::Kind::OrForce)
            fail(ErrorKind::Op,
                 "an OR forcing stage can only force 1; every cut gate here "
                 "needs 0");
        fail(ErrorKind::Op,
             "no non-controlling forcing value exists on any cut gate");
    }

    auto apply_force = [&](Netlist& nl, NetId ctrl, const Cut& c) -> NetId {
        NetId v = c.victim;
        NetId fv = nl.fresh_net("trj0_f");
        std::vector<uint32_t> except;
        if (forcing == PayloadSpec::Kind::OrForce) {
            except.push_back(nl.add_gate(GateKind::Or, {ctrl, v}, fv));
        } else {
            NetId k = nl.fresh_net("trj0_k");
            nl.add_gate(c.nc_one ? GateKind::Const1 : GateKind::Const0,
                        std::vector<NetId>{}, k);
            except.push_back(nl.add_gate(GateKind::Mux2, {ctrl, v, k}, fv));
        }
        nl.retarget_sinks(v, fv, except);
        return fv;
    };

    for (const Cut& c : cuts) {
        Netlist trial = locked;
        NetId en = instantiate_trigger(trial, trojan.trigger, 1, "trj0");
        apply_force(trial, en, c);
        std::vector<NetId> cand = downstream_nets(trial, kgT);
        std::optional<Transparent> hit =
            search_transparent(trial, rec, target, en, cand);
        if (!hit) continue;

        std::string leak_name = trial.net_name(hit->leak);
        ImplantResult res;
        res.tampered = locked;
        NetId fire = instantiate_trigger(res.tampered, trojan.trigger,
                                         trojan.counter_depth, "trj0");
        apply_force(res.tampered, fire, c);
        NetId leak = res.tampered.find_net(leak_name);
        if (leak == NO_NET)
            fail(ErrorKind::Op, "leak net '" + leak_name + "' vanished");

        TrojanSpec spec = trojan;
        PayloadSpec fp;
        fp.kind = forcing;
        fp.victim = LineId{c.victim, -1};
        fp.leak_const = true;
        fp.leak_invert = !c.nc_one;
        fp.observe_po = 0;
        spec.payloads = {fp, add_observation(res.tampered, fire, leak,
                                             hit->invert, 0, "trj0_y0")};
        res.tampered.validate();

        res.plan.mode = "t3";
        res.plan.r = trojan.counter_depth;
        res.plan.trojans.push_back(spec);
        res.plan.fire_nets.push_back(res.tampered.net_name(fire));
        DecodeEntry e;
        e.key_bit = target;
        e.trojan = 0;
        e.activation = hit->activation;
        clear_key_columns(res.tampered, rec, e.activation);
        e.po_index = 0;
        e.invert = hit->invert;
        res.plan.decode.push_back(e);
        res.plan.followup_t2 = {blocker};
        return res;
    }
    fail(ErrorKind::Op,
         "cutting every candidate gate still leaves the target unobservable");
}

namespace {

Value observe(const Netlist& nl, const Pattern& act, uint32_t po, uint32_t r) {
    if (r <= 1 && !nl.has_dff()) {
        std::vector<Value> s = simulate3(nl, act);
        return s[nl.po(po)];
    }
    uint32_t cycles = std::max(r, 1u);
    std::vector<Pattern> rows(cycles, act);
    std::vector<Value> init(dff_gates(nl).size(), Value::Zero);
    CycleResult cr = simulate_cycles(nl, rows, init);
    return cr.po_per_cycle.back()[po];
}

}  // namespace

ExtractOutcome extract_key(const Netlist& tampered, const AttackPlan& plan,
                           const LockRecord& rec,
                           const std::vector<bool>& oracle_key) {
    if (oracle_key.size() != rec.key_size())
        fail(ErrorKind::Config, "oracle key has " +
                                    std::to_string(oracle_key.size()) +
                                    " bits for a " +
                                    std::to_string(rec.key_size()) +
                                    "-bit record");
    Netlist oracle = apply_key(tampered, rec, oracle_key);
    std::vector<uint32_t> col(oracle.num_pis());
    for (size_t j = 0; j < oracle.num_pis(); ++j) {
        NetId t = tampered.find_net(oracle.net_name(oracle.pi(j)));
        if (t == NO_NET || !tampered.is_pi(t))
            fail(ErrorKind::Op, "input mismatch between chip and plan");
        col[j] = tampered.pi_index(t);
    }

    ExtractOutcome out;
    for (const DecodeEntry& e : plan.decode) {
        if (e.key_bit >= rec.key_size() ||
            e.activation.size() != tampered.num_pis())
            fail(ErrorKind::Op, "malformed decode entry");
        Pattern act_o(oracle.num_pis());
        for (size_t j = 0; j < act_o.size(); ++j)
            act_o[j] = e.activation[col[j]];
        Value obs = observe(oracle, act_o, e.po_index, plan.r);

        // Re-derive polarity from the tampered netlist: drive only the
        // target key input and watch the observation point.
        uint32_t kcol =
            tampered.pi_index(key_input_net(tampered, rec, e.key_bit));
        Pattern probe = e.activation;
        probe[kcol] = Value::Zero;
        Value o0 = observe(tampered, probe, e.po_index, plan.r);
        probe[kcol] = Value::One;
        Value o1 = observe(tampered, probe, e.po_index, plan.r);
        bool invert = e.invert;
        bool mismatch = false;
        if (o0 != Value::X && o1 != Value::X && o0 != o1) {
            bool derived = o0 == Value::One;
            mismatch = derived != e.invert;
            invert = derived;
        }

        ExtractOutcome::Bit b;
        b.key_bit = e.key_bit;
        b.invert_mismatch = mismatch;
        if (obs == Value::X) {
            b.ambiguous = true;
        } else {
            b.recovered = true;
            b.value = (obs == Value::One) != invert;
        }
        out.bits.push_back(b);
        if (b.recovered) ++out.num_recovered;
    }
    return out;
}

std::string extract_report(const ExtractOutcome& out, const LockRecord& rec) {
    std::ostringstream os;
    for (const ExtractOutcome::Bit& b : out.bits) {
        os << "bit " << b.key_bit << " (" << rec.bits[b.key_bit].key_input
           << "): ";
        if (b.recovered) os << "value = " << (b.value ? 1 : 0);
        else if (b.ambiguous) os << "unresolved (X observed)";
        else os << "unresolved";
        if (b.invert_mismatch) os << " [plan polarity corrected]";
        os << "\n";
    }
    os << out.num_recovered << "/" << out.bits.size()
       << " key bits recovered\n";
    return os.str();
}

void save_plan(std::ostream& os, const Netlist& tampered,
               const AttackPlan& plan) {
    os << "mode = " << plan.mode << "\n";
    os << "r = " << plan.r << "\n";
    os << "trojans = " << plan.trojans.size() << "\n";
    for (size_t i = 0; i < plan.trojans.size(); ++i) {
        os << "trojan " << i << " begin\n";
        save_trojan(os, tampered, plan.trojans[i]);
        os << "trojan " << i << " end\n";
    }
    for (size_t i = 0; i < plan.fire_nets.size(); ++i)
        os << "fire " << i << " = " << plan.fire_nets[i] << "\n";
    for (size_t i = 0; i < plan.decode.size(); ++i) {
        const DecodeEntry& e = plan.decode[i];
        os << "decode " << i << " key=" << e.key_bit << " trojan=" << e.trojan
           << " po=" << e.po_index << " inv=" << (e.invert ? 1 : 0)
           << " act=" << pattern_text(e.activation) << "\n";
    }
    if (!plan.followup_t2.empty()) {
        os << "followup =";
        for (uint32_t b : plan.followup_t2) os << " " << b;
        os << "\n";
    }
}

void save_plan_file(const std::string& path, const Netlist& tampered,
                    const AttackPlan& plan) {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::Io, "cannot write '" + path + "'");
    save_plan(os, tampered, plan);
    if (!os) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

AttackPlan load_plan(std::istream& is, const std::string& origin,
                     const Netlist& tampered) {
    AttackPlan plan;
    size_t declared = 0;
    bool have_mode = false;
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
        if (tok == "mode") {
            std::string eq;
            if (!(ls >> eq >> plan.mode) || eq != "=" ||
                (plan.mode != "t1" && plan.mode != "t2" && plan.mode != "t3"))
                bad("expected mode = t1|t2|t3");
            have_mode = true;
        } else if (tok == "r") {
            std::string eq;
            if (!(ls >> eq >> plan.r) || eq != "=") bad("expected r = <count>");
        } else if (tok == "trojans") {
            std::string eq;
            if (!(ls >> eq >> declared) || eq != "=")
                bad("expected trojans = <count>");
        } else if (tok == "trojan") {
            size_t idx;
            std::string kw;
            if (!(ls >> idx >> kw) || kw != "begin")
                bad("expected trojan <i> begin");
            if (idx != plan.trojans.size()) bad("trojan blocks out of order");
            std::ostringstream block;
            bool closed = false;
            while (std::getline(is, raw)) {
                ++lineno;
                std::string t = raw.substr(0, raw.find('#'));
                std::istringstream trim(t);
                std::string a, b, c;
                if (trim >> a >> b >> c && a == "trojan" && c == "end") {
                    closed = true;
                    break;
                }
                block << raw << "\n";
            }
            if (!closed) bad("unterminated trojan block");
            std::istringstream bs(block.str());
            plan.trojans.push_back(load_trojan(bs, origin, tampered));
        } else if (tok == "fire") {
            size_t idx;
            std::string eq, name;
            if (!(ls >> idx >> eq >> name) || eq != "=")
                bad("expected fire <i> = <net>");
            if (idx != plan.fire_nets.size()) bad("fire lines out of order");
            if (tampered.find_net(name) == NO_NET)
                bad("fire net '" + name + "' is not in the netlist");
            plan.fire_nets.push_back(name);
        } else if (tok == "decode") {
            size_t idx;
            if (!(ls >> idx)) bad("malformed decode line");
            if (idx != plan.decode.size()) bad("decode lines out of order");
            DecodeEntry e;
            bool have_act = false;
            std::string f;
            auto num = [&](const std::string& val, uint32_t& out) {
                auto [p, ec] =
                    std::from_chars(val.data(), val.data() + val.size(), out);
                if (ec != std::errc{} || p != val.data() + val.size())
                    bad("bad number '" + val + "'");
            };
            while (ls >> f) {
                size_t eq = f.find('=');
                if (eq == std::string::npos)
                    bad("expected key=value, got '" + f + "'");
                std::string k = f.substr(0, eq), val = f.substr(eq + 1);
                if (k == "key") num(val, e.key_bit);
                else if (k == "trojan") num(val, e.trojan);
                else if (k == "po") num(val, e.po_index);
                else if (k == "inv") e.invert = val == "1";
                else if (k == "act") {
                    e.activation = pattern_from_text(val);
                    have_act = true;
                } else bad("unknown decode field '" + k + "'");
            }
            if (!have_act || e.activation.size() != tampered.num_pis())
                bad("decode activation missing or the wrong width");
            plan.decode.push_back(e);
        } else if (tok == "followup") {
            std::string eq;
            if (!(ls >> eq) || eq != "=") bad("expected followup = <bits>");
            uint32_t b;
            while (ls >> b) plan.followup_t2.push_back(b);
        } else {
            bad("unknown plan line '" + tok + "'");
        }
    }
    if (!have_mode) bad("missing mode line");
    if (plan.trojans.size() != declared)
        bad("trojan block count does not match the declared count");
    if (plan.fire_nets.size() != plan.trojans.size())
        bad("fire line count does not match the trojan count");
    if (plan.decode.empty()) bad("plan has no decode entries");
    return plan;
}

AttackPlan load_plan_file(const std::string& path, const Netlist& tampered) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot read '" + path + "'");
    return load_plan(is, path, tampered);
}

}  // namespace lockleak
