// Batch driver: every subcommand is a pure function of its inputs and seed,
// so identical invocations produce byte-identical files and reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lockleak/attack.hpp"
#include "lockleak/equiv.hpp"
#include "lockleak/error.hpp"
#include "lockleak/faults.hpp"
#include "lockleak/locking.hpp"
#include "lockleak/logicsim.hpp"
#include "lockleak/netlist.hpp"
#include "lockleak/overhead.hpp"
#include "lockleak/rng.hpp"
#include "lockleak/trojan.hpp"

using namespace lockleak;

namespace {

std::ofstream open_out(const std::string& path, const std::string& head) {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::Io, "cannot write '" + path + "'");
    os << "# " << head << "\n";
    return os;
}

void finish_out(std::ofstream& os, const std::string& path) {
    if (!os) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string pct(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void require_pattern_order(const Netlist& nl, const PatternSet& ps,
                           const std::string& what) {
    if (ps.pi_names.size() != nl.num_pis())
        fail(ErrorKind::Op, what + " cover " +
                                std::to_string(ps.pi_names.size()) +
                                " inputs but the netlist has " +
                                std::to_string(nl.num_pis()));
    for (size_t i = 0; i < ps.pi_names.size(); ++i)
        if (ps.pi_names[i] != nl.net_name(nl.pi(i)))
            fail(ErrorKind::Op,
                 what + " are not in netlist input order; import them first");
}

std::vector<uint32_t> parse_targets(const std::string& list) {
    std::vector<uint32_t> out;
    std::string cur;
    std::istringstream is(list);
    while (std::getline(is, cur, ',')) {
        if (cur.empty()) continue;
        try {
            size_t pos = 0;
            unsigned long v = std::stoul(cur, &pos);
            if (pos != cur.size()) throw std::invalid_argument(cur);
            out.push_back(uint32_t(v));
        } catch (const std::exception&) {
            fail(ErrorKind::Config, "bad target '" + cur + "' in --targets");
        }
    }
    if (out.empty()) fail(ErrorKind::Config, "--targets names no key bits");
    return out;
}

int cmd_lock(const std::string& in, const std::string& out,
             const std::string& scheme, uint32_t keys, uint64_t seed) {
    Netlist nl = parse_bench_file(in);
    LockScheme sc = scheme_from_name(scheme);
    LockResult res = sc == LockScheme::XorRandom ? lock_xor(nl, keys, seed)
                                                 : lock_mux(nl, keys, seed);
    std::string head = "lockleak lock in=" + in + " out=" + out +
                       " scheme=" + scheme + " keys=" + std::to_string(keys) +
                       " seed=" + std::to_string(seed);
    {
        std::ofstream os = open_out(out, head);
        write_bench(res.netlist, os);
        finish_out(os, out);
    }
    save_key_file(out + ".key", res.record.correct_key(), head);
    {
        std::ofstream os = open_out(out + ".record", head);
        save_record(os, res.record);
        finish_out(os, out + ".record");
    }
    std::cout << "# " << head << "\n"
              << "locked netlist = " << out << "\n"
              << "key file = " << out << ".key\n"
              << "record file = " << out << ".record\n"
              << "scheme = " << scheme << "\n"
              << "key size = " << res.record.key_size() << "\n"
              << "key = " << key_text(res.record.correct_key()) << "\n";
    return 0;
}

int cmd_patterns(const std::string& in, const std::string& out,
                 const std::string& import, double coverage, uint64_t seed,
                 bool have_seed, size_t max_patterns, unsigned threads) {
    Netlist nl = parse_bench_file(in);
    if (!import.empty()) {
        std::string head = "lockleak patterns in=" + in + " out=" + out +
                           " import=" + import;
        PatternSet ps = import_patterns(load_patterns_file(import), nl);
        ps.provenance = head;
        save_patterns_file(ps, out);
        FaultUniverse u = enumerate_faults(nl);
        FaultSimResult res = fault_simulate(nl, u, ps.rows, true, threads);
        classify_undetected(nl, u, res);
        std::cout << "# " << head << "\n"
                  << "patterns = " << ps.rows.size() << "\n";
        write_coverage_report(std::cout, tally(u, res));
        return 0;
    }
    if (!have_seed)
        fail(ErrorKind::Config, "pattern generation needs --seed");
    std::string head = "lockleak patterns in=" + in + " out=" + out +
                       " coverage=" + num(coverage) +
                       " seed=" + std::to_string(seed) +
                       " max=" + std::to_string(max_patterns);
    GenResult gr = generate_patterns(nl, coverage, seed, max_patterns, threads);
    gr.patterns.provenance = head;
    save_patterns_file(gr.patterns, out);
    std::cout << "# " << head << "\n"
              << "patterns = " << gr.patterns.rows.size() << "\n"
              << "random patterns drawn = " << gr.generated << "\n";
    write_coverage_report(std::cout, gr.counts);
    return 0;
}

int cmd_census(const std::string& in, const std::string& record) {
    Netlist nl = parse_bench_file(in);
    LockRecord rec = load_record_file(record);
    LineCensus c = line_census(nl, rec);
    std::cout << "# lockleak census in=" << in << " record=" << record << "\n"
              << "inputs = " << c.pi_count << "\n"
              << "gates = " << c.gate_count << "\n"
              << "fanout branches = " << c.fanout_branches << "\n"
              << "total lines = "
              << c.pi_count + c.gate_count + c.fanout_branches << "\n"
              << "key affected = " << c.key_affected << "\n"
              << "eligible = " << c.eligible << "\n";
    return 0;
}

int cmd_count(const std::string& in, const std::string& record,
              const std::string& patterns, uint32_t type,
              const std::string& mode, uint64_t samples, uint64_t budget,
              uint64_t seed, bool have_seed, unsigned threads) {
    Netlist nl = parse_bench_file(in);
    LockRecord rec = load_record_file(record);
    PatternSet ps = load_patterns_file(patterns);
    require_pattern_order(nl, ps, "pattern columns");

    bool sample = mode == "sample";
    if (sample && !have_seed)
        fail(ErrorKind::Config, "sampled counting needs --seed");
    std::string head = "lockleak count in=" + in + " record=" + record +
                       " patterns=" + patterns +
                       " type=" + std::to_string(type) + " mode=" + mode;
    if (sample)
        head += " samples=" + std::to_string(samples) +
                " seed=" + std::to_string(seed);
    head += " budget=" + std::to_string(budget);

    TrojanCount tc = count_trojans(
        nl, rec, ps, type,
        sample ? TrojanCount::Mode::Sample : TrojanCount::Mode::Exact, budget,
        samples, seed, threads);
    std::cout << "# " << head << "\n"
              << "type = " << tc.p << "\n"
              << "eligible lines = " << tc.eligible << "\n"
              << "all cells = " << u128_text(tc.all_possible) << "\n"
              << "mode = " << mode << "\n";
    if (!sample) {
        std::cout << "valid = " << u128_text(tc.valid) << "\n";
    } else {
        char lo[64], hi[64], est[64];
        std::snprintf(est, sizeof est, "%.1f", tc.estimate);
        std::snprintf(lo, sizeof lo, "%.1f", tc.lo);
        std::snprintf(hi, sizeof hi, "%.1f", tc.hi);
        std::cout << "samples = " << tc.samples << "\n"
                  << "hits = " << tc.hits << "\n"
                  << "estimate = " << est << "\n"
                  << "ci95 = [" << lo << ", " << hi << "]\n";
    }
    return 0;
}

int cmd_design(const std::string& in, const std::string& record,
               const std::string& patterns, uint32_t type, uint64_t seed,
               const std::string& htap, uint32_t r, const std::string& out) {
    Netlist nl = parse_bench_file(in);
    LockRecord rec = load_record_file(record);
    PatternSet ps = load_patterns_file(patterns);
    require_pattern_order(nl, ps, "pattern columns");

    std::optional<Pattern> hint;
    if (!htap.empty()) hint = pattern_from_text(htap);
    std::string head = "lockleak design in=" + in + " record=" + record +
                       " patterns=" + patterns +
                       " type=" + std::to_string(type) +
                       " seed=" + std::to_string(seed);
    if (!htap.empty()) head += " htap=" + htap;
    head += " r=" + std::to_string(r) + " out=" + out;

    TrojanSpec spec = design_trojan(nl, rec, ps, type, seed, hint, r);
    {
        std::ofstream os = open_out(out, head);
        save_trojan(os, nl, spec);
        finish_out(os, out);
    }
    std::cout << "# " << head << "\n"
              << "trojan file = " << out << "\n";
    save_trojan(std::cout, nl, spec);
    return 0;
}

int cmd_attack(const std::string& in, const std::string& record,
               const std::string& trojan, const std::string& mode,
               const std::string& targets, const std::string& out,
               const std::string& plan_path) {
    Netlist nl = parse_bench_file(in);
    LockRecord rec = load_record_file(record);
    TrojanSpec spec = load_trojan_file(trojan, nl);
    std::vector<uint32_t> tg = parse_targets(targets);

    ImplantResult ir;
    if (mode == "t1") {
        ir = implant_t1(nl, rec, spec, tg);
    } else if (mode == "t2") {
        if (tg.size() != 1)
            fail(ErrorKind::Config, "t2 takes exactly one target key bit");
        ir = implant_t2(nl, rec, spec, tg[0]);
    } else {
        if (tg.size() != 2)
            fail(ErrorKind::Config,
                 "t3 takes exactly two bits: target,blocker");
        ir = implant_t3(nl, rec, spec, tg[0], tg[1]);
    }

    std::string head = "lockleak attack in=" + in + " record=" + record +
                       " trojan=" + trojan + " mode=" + mode +
                       " targets=" + targets + " out=" + out +
                       " plan=" + plan_path;
    {
        std::ofstream os = open_out(out, head);
        write_bench(ir.tampered, os);
        finish_out(os, out);
    }
    {
        std::ofstream os = open_out(plan_path, head);
        save_plan(os, ir.tampered, ir.plan);
        finish_out(os, plan_path);
    }
    std::cout << "# " << head << "\n"
              << "mode = " << ir.plan.mode << "\n"
              << "targets = " << targets << "\n"
              << "tampered netlist = " << out << "\n"
              << "plan file = " << plan_path << "\n"
              << "fire net = " << ir.plan.fire_nets[0] << "\n"
              << "decode entries = " << ir.plan.decode.size() << "\n";
    if (!ir.plan.followup_t2.empty()) {
        std::cout << "followup t2 =";
        for (uint32_t b : ir.plan.followup_t2) std::cout << " " << b;
        std::cout << "\n";
    }
    return 0;
}

int cmd_extract(const std::string& in, const std::string& plan_path,
                const std::string& key, const std::string& record) {
    Netlist tampered = parse_bench_file(in);
    AttackPlan plan = load_plan_file(plan_path, tampered);
    LockRecord rec = load_record_file(record);
    std::vector<bool> k = parse_key_text(key);
    ExtractOutcome out = extract_key(tampered, plan, rec, k);
    std::cout << "# lockleak extract in=" << in << " plan=" << plan_path
              << " key=" << key << " record=" << record << "\n"
              << extract_report(out, rec);
    return 0;
}

// Net values for one input row. Flop outputs start cleared, so a single
// cycle reflects the dormant counter state.
std::vector<Value> tampered_row_values(const Netlist& nl, const Pattern& row) {
    if (!nl.has_dff()) return simulate3(nl, row);
    std::vector<Value> val(nl.num_nets(), Value::X);
    std::vector<Value> ins;
    for (size_t i = 0; i < nl.num_pis(); ++i) val[nl.pi(i)] = row[i];
    for (uint32_t d : dff_gates(nl)) val[nl.gate(d).output] = Value::Zero;
    for (uint32_t g : nl.topo_gates()) {
        const Gate& gt = nl.gate(g);
        if (gt.kind == GateKind::Dff) continue;
        ins.clear();
        for (NetId in : gt.inputs) ins.push_back(val[in]);
        val[gt.output] = eval_gate(gt.kind, ins);
    }
    return val;
}

// Trigger outputs follow the implant naming scheme; a hand-tampered netlist
// without them degrades to an unconditional comparison.
std::vector<NetId> fire_nets_by_name(const Netlist& nl) {
    std::vector<NetId> out;
    for (NetId n = 0; n < nl.num_nets(); ++n) {
        const std::string& s = nl.net_name(n);
        if (s.rfind("trj", 0) != 0) continue;
        size_t i = 3, digits = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            ++i;
            ++digits;
        }
        if (!digits) continue;
        if (s.compare(i, std::string::npos, "_en") == 0 ||
            s.compare(i, std::string::npos, "_fire") == 0)
            out.push_back(n);
    }
    return out;
}

int cmd_verify(const std::string& locked_path, const std::string& tampered_path,
               const std::string& patterns, bool exhaustive, unsigned threads) {
    Netlist locked = parse_bench_file(locked_path);
    Netlist tampered = parse_bench_file(tampered_path);
    PatternSet ps = load_patterns_file(patterns);
    require_pattern_order(locked, ps, "pattern columns");
    if (locked.num_pos() != tampered.num_pos())
        fail(ErrorKind::Op, "netlists have different output counts (" +
                                std::to_string(locked.num_pos()) + " vs " +
                                std::to_string(tampered.num_pos()) + ")");
    std::vector<uint32_t> emb = pi_embedding(locked, tampered);

    std::cout << "# lockleak verify locked=" << locked_path
              << " tampered=" << tampered_path << " patterns=" << patterns
              << (exhaustive ? " exhaustive=1" : "") << "\n";

    uint64_t mism;
    if (!tampered.has_dff()) {
        ReplayResult rr = replay_compare(locked, tampered, ps.rows, threads);
        mism = rr.mismatches;
    } else {
        mism = 0;
        for (const Pattern& row : ps.rows) {
            Pattern trow(tampered.num_pis(), Value::X);
            for (size_t i = 0; i < row.size(); ++i) trow[emb[i]] = row[i];
            std::vector<Value> lv = simulate3(locked, row);
            std::vector<Value> tv = tampered_row_values(tampered, trow);
            for (size_t j = 0; j < locked.num_pos(); ++j) {
                Value a = lv[locked.po(j)], b = tv[tampered.po(j)];
                if (a != Value::X && b != Value::X && a != b) {
                    ++mism;
                    break;
                }
            }
        }
    }
    std::cout << "patterns checked = " << ps.rows.size() << "\n"
              << "mismatches = " << mism << "\n"
              << "stealthy = " << (mism == 0 ? "yes" : "no") << "\n";

    // the payload must stay invisible while the trigger is off: sweep the
    // tampered input space and compare POs on every row that fires nothing
    if (exhaustive) {
        std::vector<NetId> fire = fire_nets_by_name(tampered);
        size_t npi = tampered.num_pis();
        std::vector<Pattern> rows;
        if (npi <= 12) {
            rows.reserve(size_t(1) << npi);
            for (uint64_t v = 0; v < (uint64_t(1) << npi); ++v) {
                Pattern p(npi);
                for (size_t i = 0; i < npi; ++i)
                    p[i] = (v >> i & 1) ? Value::One : Value::Zero;
                rows.push_back(std::move(p));
            }
        } else {
            Rng rng = Rng(1).split("verify");
            rows.assign(10000, Pattern(npi));
            for (Pattern& p : rows)
                for (Value& v : p) v = rng.coin() ? Value::One : Value::Zero;
        }
        uint64_t fired = 0, bad = 0;
        for (const Pattern& row : rows) {
            std::vector<Value> tv = tampered_row_values(tampered, row);
            bool f = false;
            for (NetId n : fire) f = f || tv[n] == Value::One;
            if (f) {
                ++fired;
                continue;
            }
            Pattern lrow(locked.num_pis());
            for (size_t i = 0; i < lrow.size(); ++i) lrow[i] = row[emb[i]];
            std::vector<Value> lv = simulate3(locked, lrow);
            for (size_t j = 0; j < locked.num_pos(); ++j) {
                Value a = lv[locked.po(j)], b = tv[tampered.po(j)];
                if (a != Value::X && b != Value::X && a != b) {
                    ++bad;
                    break;
                }
            }
        }
        std::cout << "dormancy space = " << rows.size() << "\n"
                  << "trigger fired = " << fired << "\n"
                  << "dormancy checked = " << (rows.size() - fired) << "\n"
                  << "dormant = " << (bad == 0 ? "yes" : "no") << "\n";
    }
    return 0;
}

int cmd_overhead(const std::string& orig_path, const std::string& tampered_path,
                 const std::string& model_path, const std::string& activity) {
    Netlist orig = parse_bench_file(orig_path);
    Netlist tampered = parse_bench_file(tampered_path);
    CostModel model = model_path.empty() ? CostModel::defaults()
                                         : load_cost_model_file(model_path);
    std::optional<PatternSet> act;
    if (!activity.empty()) act = load_patterns_file(activity);

    std::string head = "lockleak overhead orig=" + orig_path +
                       " tampered=" + tampered_path;
    if (!model_path.empty()) head += " model=" + model_path;
    if (!activity.empty()) head += " activity=" + activity;

    double a0 = total_area(orig, model);
    double a1 = total_area(tampered, model);
    PowerOverhead po =
        power_overhead(orig, tampered, model, act ? &*act : nullptr);
    std::cout << "# " << head << "\n"
              << "gates original = " << orig.num_gates() << "\n"
              << "gates tampered = " << tampered.num_gates() << "\n"
              << "area original = " << num(a0) << "\n"
              << "area tampered = " << num(a1) << "\n"
              << "area overhead % = " << pct(area_overhead(orig, tampered, model))
              << "\n"
              << "leakage overhead % = " << pct(po.leakage_pct) << "\n";
    if (po.has_dynamic)
        std::cout << "dynamic overhead % = " << pct(po.dynamic_pct) << "\n";
    else
        std::cout << "dynamic overhead % = n/a (no activity patterns)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netlist locking, test generation, and tamper analysis"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads,
                   "worker cap; never changes results")
        ->check(CLI::Range(1u, 256u));

    // lock
    std::string l_in, l_out, l_scheme;
    uint32_t l_keys = 0;
    uint64_t l_seed = 0;
    CLI::App* lock = app.add_subcommand("lock", "insert key gates");
    lock->fallthrough();
    lock->add_option("--in", l_in)->required();
    lock->add_option("--out", l_out)->required();
    lock->add_option("--scheme", l_scheme)
        ->required()
        ->check(CLI::IsMember({"xor", "mux"}));
    lock->add_option("--keys", l_keys)->required();
    lock->add_option("--seed", l_seed)->required();

    // patterns
    std::string p_in, p_out, p_import;
    double p_cov = 0.99;
    uint64_t p_seed = 0;
    size_t p_max = 10000;
    CLI::App* pats = app.add_subcommand("patterns", "generate or import tests");
    pats->fallthrough();
    pats->add_option("--in", p_in)->required();
    pats->add_option("--out", p_out)->required();
    CLI::Option* p_imp = pats->add_option("--import", p_import);
    CLI::Option* p_cov_o = pats->add_option("--coverage", p_cov);
    CLI::Option* p_seed_o = pats->add_option("--seed", p_seed);
    CLI::Option* p_max_o = pats->add_option("--max", p_max);
    p_imp->excludes(p_cov_o)->excludes(p_seed_o)->excludes(p_max_o);

    // census
    std::string c_in, c_rec;
    CLI::App* cen = app.add_subcommand("census", "line bookkeeping");
    cen->fallthrough();
    cen->add_option("--in", c_in)->required();
    cen->add_option("--record", c_rec)->required();

    // count
    std::string n_in, n_rec, n_pat, n_mode;
    uint32_t n_type = 0;
    uint64_t n_samples = 200000, n_budget = 5000000000ull, n_seed = 0;
    CLI::App* cnt = app.add_subcommand("count", "count surviving trigger cells");
    cnt->fallthrough();
    cnt->add_option("--in", n_in)->required();
    cnt->add_option("--record", n_rec)->required();
    cnt->add_option("--patterns", n_pat)->required();
    cnt->add_option("--type", n_type)->required();
    cnt->add_option("--mode", n_mode)
        ->required()
        ->check(CLI::IsMember({"exact", "sample"}));
    cnt->add_option("--samples", n_samples);
    cnt->add_option("--budget", n_budget);
    CLI::Option* n_seed_o = cnt->add_option("--seed", n_seed);

    // design
    std::string d_in, d_rec, d_pat, d_htap, d_out;
    uint32_t d_type = 0, d_r = 1;
    uint64_t d_seed = 0;
    CLI::App* des = app.add_subcommand("design", "pick a stealthy trigger");
    des->fallthrough();
    des->add_option("--in", d_in)->required();
    des->add_option("--record", d_rec)->required();
    des->add_option("--patterns", d_pat)->required();
    des->add_option("--type", d_type)->required();
    des->add_option("--seed", d_seed)->required();
    des->add_option("--htap", d_htap);
    des->add_option("--r", d_r);
    des->add_option("--out", d_out)->required();

    // attack
    std::string a_in, a_rec, a_troj, a_mode, a_targets, a_out, a_plan;
    CLI::App* att = app.add_subcommand("attack", "implant a key-leak payload");
    att->fallthrough();
    att->add_option("--in", a_in)->required();
    att->add_option("--record", a_rec)->required();
    att->add_option("--trojan", a_troj)->required();
    att->add_option("--mode", a_mode)
        ->required()
        ->check(CLI::IsMember({"t1", "t2", "t3"}));
    att->add_option("--targets", a_targets)->required();
    att->add_option("--out", a_out)->required();
    att->add_option("--plan", a_plan)->required();

    // extract
    std::string e_in, e_plan, e_key, e_rec;
    CLI::App* ext = app.add_subcommand("extract", "decode key bits from a chip");
    ext->fallthrough();
    ext->add_option("--in", e_in)->required();
    ext->add_option("--plan", e_plan)->required();
    ext->add_option("--key", e_key)->required();
    ext->add_option("--record", e_rec)->required();

    // verify
    std::string v_locked, v_tampered, v_pat;
    bool v_exh = false;
    CLI::App* ver = app.add_subcommand("verify", "replay tests for stealth");
    ver->fallthrough();
    ver->add_option("--locked", v_locked)->required();
    ver->add_option("--tampered", v_tampered)->required();
    ver->add_option("--patterns", v_pat)->required();
    ver->add_flag("--exhaustive", v_exh);

    // overhead
    std::string o_orig, o_tamp, o_model, o_act;
    CLI::App* ovh = app.add_subcommand("overhead", "area and power deltas");
    ovh->fallthrough();
    ovh->add_option("--orig", o_orig)->required();
    ovh->add_option("--tampered", o_tamp)->required();
    ovh->add_option("--model", o_model);
    ovh->add_option("--activity", o_act);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*lock) return cmd_lock(l_in, l_out, l_scheme, l_keys, l_seed);
        if (*pats)
            return cmd_patterns(p_in, p_out, p_import, p_cov, p_seed,
                                p_seed_o->count() > 0, p_max, threads);
        if (*cen) return cmd_census(c_in, c_rec);
        if (*cnt)
            return cmd_count(n_in, n_rec, n_pat, n_type, n_mode, n_samples,
                             n_budget, n_seed, n_seed_o->count() > 0, threads);
        if (*des)
            return cmd_design(d_in, d_rec, d_pat, d_type, d_seed, d_htap, d_r,
                              d_out);
        if (*att)
            return cmd_attack(a_in, a_rec, a_troj, a_mode, a_targets, a_out,
                              a_plan);
        if (*ext) return cmd_extract(e_in, e_plan, e_key, e_rec);
        if (*ver) return cmd_verify(v_locked, v_tampered, v_pat, v_exh, threads);
        if (*ovh) return cmd_overhead(o_orig, o_tamp, o_model, o_act);
    } catch (const Error& e) {
        const char* name = "op";
        int code = 5;
        switch (e.kind()) {
        case ErrorKind::Config: name = "config"; code = 2; break;
        case ErrorKind::Io: name = "io"; code = 3; break;
        case ErrorKind::Parse: name = "parse"; code = 4; break;
        case ErrorKind::Op: name = "op"; code = 5; break;
        }
        std::cerr << "error: " << name << ": " << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 5;
    }
    return 1;
}
