#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lockleak/error.hpp"
#include "lockleak/faults.hpp"
#include "lockleak/locking.hpp"
#include "lockleak/rng.hpp"
#include "lockleak/trojan.hpp"

using namespace lockleak;
using testhelp::nl_from_text;

namespace {

// Reference counter: enumerate every p-subset of eligible lines and every
// polarity, then strike the cells some pattern column matches (X matches
// either polarity).
unsigned __int128 brute_count(const Netlist& nl, const LockRecord& rec,
                              const std::vector<Pattern>& rows, uint32_t p) {
    std::vector<LineId> elig = eligible_lines(nl, rec);
    std::vector<std::vector<Value>> vals;
    for (const Pattern& r : rows) vals.push_back(simulate3(nl, r));
    size_t n = elig.size();
    std::vector<uint32_t> idx(p);
    unsigned __int128 valid = 0;
    auto walk = [&](auto&& self, uint32_t depth, uint32_t from) -> void {
        if (depth == p) {
            for (uint32_t pol = 0; pol < (1u << p); ++pol) {
                bool hit = false;
                for (const auto& v : vals) {
                    bool match = true;
                    for (uint32_t k = 0; k < p && match; ++k) {
                        Value have = v[elig[idx[k]].net];
                        Value want = (pol >> k & 1) ? Value::One : Value::Zero;
                        match = have == Value::X || have == want;
                    }
                    if (match) {
                        hit = true;
                        break;
                    }
                }
                if (!hit) ++valid;
            }
            return;
        }
        for (uint32_t i = from; i + (p - depth) <= n; ++i) {
            idx[depth] = i;
            self(self, depth + 1, i + 1);
        }
    };
    walk(walk, 0, 0);
    return valid;
}

PatternSet rows_as_set(const Netlist& nl, std::vector<Pattern> rows) {
    PatternSet ps;
    for (size_t i = 0; i < nl.num_pis(); ++i)
        ps.pi_names.push_back(nl.net_name(nl.pi(i)));
    ps.rows = std::move(rows);
    return ps;
}

}  // namespace

TEST_CASE("trigger space follows the closed form") {
    CHECK(u128_text(trigger_space(3, 3)) == "8");
    CHECK(u128_text(trigger_space(7, 4)) == "560");
    CHECK(u128_text(trigger_space(233, 2)) == "108112");
    CHECK(u128_text(trigger_space(233, 3)) == "16649248");
    CHECK(u128_text(trigger_space(233, 4)) == "1914663520");
    CHECK(u128_text(trigger_space(1129, 4)) == "1077392850016");
    CHECK_THROWS_AS((void)trigger_space(100000, 30), Error);
}

TEST_CASE("u128 rendering handles zero and wide values") {
    CHECK(u128_text(0) == "0");
    CHECK(u128_text(42) == "42");
    unsigned __int128 big = 1;
    for (int i = 0; i < 100; ++i) big *= 2;
    CHECK(u128_text(big) == "1267650600228229401496703205376");
}

TEST_CASE("one definite pattern over three lines strikes exactly three cells") {
    Netlist nl = nl_from_text("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n");
    LockRecord rec;  // nothing locked: all three lines eligible
    std::vector<Pattern> rows{{Value::Zero, Value::One}};
    PatternSet ps = rows_as_set(nl, rows);
    TrojanCount c = count_trojans(nl, rec, ps, 2, TrojanCount::Mode::Exact,
                                  1000, 0, 1);
    CHECK(c.eligible == 3);
    CHECK(u128_text(c.all_possible) == "12");
    // line values (0, 1, 0): each pair matches one polarity combo
    CHECK(u128_text(c.valid) == "9");
    CHECK(c.valid == brute_count(nl, rec, rows, 2));
}

TEST_CASE("an X column strikes both polarities of its line") {
    // y = XOR(a, b) with b unknown leaves y unknown too
    Netlist nl = nl_from_text("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n");
    LockRecord rec;
    std::vector<Pattern> rows{{Value::Zero, Value::X}};
    PatternSet ps = rows_as_set(nl, rows);
    TrojanCount c = count_trojans(nl, rec, ps, 2, TrojanCount::Mode::Exact,
                                  1000, 0, 1);
    // values (0, X, X): pair (a,b) matches 2 combos, (a,y) 2, (b,y) 4
    CHECK(u128_text(c.valid) == "4");
    CHECK(c.valid == brute_count(nl, rec, rows, 2));
}

TEST_CASE("exact counting matches brute force on random locked circuits") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Netlist host = testhelp::random_netlist(900 + seed, 4, 12);
        LockResult lr = lock_xor(host, 1, seed + 1);
        Rng rng(seed);
        std::vector<Pattern> rows;
        for (int r = 0; r < 6; ++r) {
            Pattern p(lr.netlist.num_pis());
            for (Value& v : p) {
                uint64_t x = rng.below(6);
                v = x == 0 ? Value::X : (x & 1) ? Value::One : Value::Zero;
            }
            rows.push_back(std::move(p));
        }
        PatternSet ps = rows_as_set(lr.netlist, rows);
        for (uint32_t p = 1; p <= 3; ++p) {
            TrojanCount c = count_trojans(lr.netlist, lr.record, ps, p,
                                          TrojanCount::Mode::Exact, 10000000, 0,
                                          1);
            CHECK(c.valid == brute_count(lr.netlist, lr.record, rows, p));
            // thread partitioning cannot move the total
            TrojanCount c4 = count_trojans(lr.netlist, lr.record, ps, p,
                                           TrojanCount::Mode::Exact, 10000000,
                                           0, 1, 4);
            CHECK(c4.valid == c.valid);
        }
    }
}

TEST_CASE("sampling brackets the exact count") {
    Netlist host = testhelp::random_netlist(950, 5, 20);
    LockResult lr = lock_xor(host, 2, 3);
    Rng rng(9);
    std::vector<Pattern> rows;
    for (int r = 0; r < 8; ++r) {
        Pattern p(lr.netlist.num_pis());
        for (Value& v : p) v = rng.coin() ? Value::One : Value::Zero;
        rows.push_back(std::move(p));
    }
    PatternSet ps = rows_as_set(lr.netlist, rows);
    TrojanCount exact = count_trojans(lr.netlist, lr.record, ps, 2,
                                      TrojanCount::Mode::Exact, 10000000, 0, 1);
    TrojanCount mc = count_trojans(lr.netlist, lr.record, ps, 2,
                                   TrojanCount::Mode::Sample, 0, 4000, 17);
    CHECK(mc.samples == 4000);
    double ex = double(uint64_t(exact.valid));
    CHECK(mc.lo <= ex);
    CHECK(mc.hi >= ex);
    CHECK(mc.lo <= mc.estimate);
    CHECK(mc.hi >= mc.estimate);
    // same seed reproduces the estimate bit for bit
    TrojanCount mc2 = count_trojans(lr.netlist, lr.record, ps, 2,
                                    TrojanCount::Mode::Sample, 0, 4000, 17);
    CHECK(mc.hits == mc2.hits);
}

TEST_CASE("exact mode refuses cell spaces past the budget") {
    Netlist host = testhelp::random_netlist(960, 5, 30);
    LockResult lr = lock_xor(host, 1, 1);
    PatternSet ps = rows_as_set(lr.netlist,
                                {Pattern(lr.netlist.num_pis(), Value::Zero)});
    CHECK_THROWS_AS((void)count_trojans(lr.netlist, lr.record, ps, 4,
                                        TrojanCount::Mode::Exact, 100, 0, 1),
                    Error);
}

TEST_CASE("eligible lines partition the line universe") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    LockResult lr = lock_xor(orig, 2, 5);
    const Netlist& nl = lr.netlist;
    std::vector<LineId> elig = eligible_lines(nl, lr.record);
    std::vector<LineId> ka = key_affected_lines(nl, lr.record);
    std::vector<LineId> ki = key_input_lines(nl, lr.record);
    CHECK(std::is_sorted(elig.begin(), elig.end(),
                         [&](const LineId& a, const LineId& b) {
                             return nl.line_index(a) < nl.line_index(b);
                         }));
    std::set<uint32_t> seen;
    for (const LineId& l : elig) seen.insert(nl.line_index(l));
    size_t esz = seen.size();
    CHECK(esz == elig.size());
    for (const LineId& l : ka) CHECK(seen.insert(nl.line_index(l)).second);
    for (const LineId& l : ki) CHECK(seen.insert(nl.line_index(l)).second);
    CHECK(seen.size() == nl.lines().size());

    LineCensus c = line_census(nl, lr.record);
    CHECK(c.eligible == elig.size());
    CHECK(c.key_affected == ka.size() + ki.size());
    // key gate outputs count themselves as affected
    for (const KeyBit& kb : lr.record.bits) {
        NetId out = nl.find_net(kb.key_gate_out);
        CHECK(std::find(ka.begin(), ka.end(), LineId{out, -1}) != ka.end());
    }
}

TEST_CASE("designed triggers dodge the whole test set") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    LockResult lr = lock_xor(orig, 2, 5);
    GenResult g = generate_patterns(lr.netlist, 0.95, 11, 4096);
    std::vector<LineId> elig = eligible_lines(lr.netlist, lr.record);
    std::set<LineId> eset(elig.begin(), elig.end());
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        TrojanSpec spec = design_trojan(lr.netlist, lr.record, g.patterns, 2,
                                        seed);
        CHECK(spec.trigger.p() == 2);
        CHECK(spec.counter_depth == 1);
        for (const LineId& l : spec.trigger.nodes) CHECK(eset.count(l) == 1);
        CHECK(trigger_stealthy(lr.netlist, spec.trigger, g.patterns));
        REQUIRE(spec.htap.size() == lr.netlist.num_pis());
        // key columns stay unknown; the rest are pinned
        for (size_t i = 0; i < spec.htap.size(); ++i) {
            bool is_key =
                lr.netlist.net_name(lr.netlist.pi(i)).rfind("keyinput", 0) == 0;
            CHECK((spec.htap[i] == Value::X) == is_key);
        }
    }
    // determinism
    TrojanSpec a = design_trojan(lr.netlist, lr.record, g.patterns, 2, 42, {}, 4);
    TrojanSpec b = design_trojan(lr.netlist, lr.record, g.patterns, 2, 42, {}, 4);
    CHECK(a.trigger.nodes == b.trigger.nodes);
    CHECK(a.trigger.inverted == b.trigger.inverted);
    CHECK(a.htap == b.htap);
    CHECK(a.counter_depth == 4);
}

TEST_CASE("an activation hint inside the test set is rejected") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    LockResult lr = lock_xor(orig, 2, 5);
    GenResult g = generate_patterns(lr.netlist, 0.95, 11, 4096);
    REQUIRE(!g.patterns.rows.empty());
    Pattern inside = g.patterns.rows[0];
    CHECK_THROWS_AS(
        (void)design_trojan(lr.netlist, lr.record, g.patterns, 2, 1, inside),
        Error);
    // a fresh column assignment outside the set is honored verbatim
    std::set<std::string> covered;
    for (const Pattern& r : g.patterns.rows) covered.insert(pattern_text(r));
    std::optional<Pattern> hint;
    for (const Pattern& cand : testhelp::all_patterns(5)) {
        Pattern h(lr.netlist.num_pis(), Value::X);
        for (size_t i = 0; i < 5; ++i) h[i] = cand[i];
        bool hit = false;
        for (const Pattern& row : g.patterns.rows) {
            bool match = true;
            for (size_t i = 0; i < 5 && match; ++i)
                if (row[i] != Value::X && row[i] != h[i]) match = false;
            if (match) hit = true;
        }
        if (!hit) {
            hint = h;
            break;
        }
    }
    REQUIRE(hint.has_value());
    TrojanSpec spec =
        design_trojan(lr.netlist, lr.record, g.patterns, 2, 1, hint);
    for (size_t i = 0; i < 5; ++i) CHECK(spec.htap[i] == (*hint)[i]);
}

TEST_CASE("a combinational trigger fires exactly on its literal conjunction") {
    Netlist nl = nl_from_text("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n");
    TriggerSpec t;
    t.nodes = {LineId{nl.find_net("a"), -1}, LineId{nl.find_net("b"), -1}};
    t.inverted = {false, true};
    NetId fire = instantiate_trigger(nl, t, 1, "trj0");
    nl.add_po(fire);
    nl.validate();
    for (const Pattern& p : testhelp::all_patterns(2)) {
        std::vector<Value> v = simulate3(nl, p);
        Value want = (p[0] == Value::One && p[1] == Value::Zero) ? Value::One
                                                                 : Value::Zero;
        CHECK(v[fire] == want);
    }
}

TEST_CASE("counter trigger asserts on the r-th consecutive enabled cycle") {
    auto run = [](uint32_t r, const std::vector<int>& en) {
        TriggerSpec t;
        t.nodes = {LineId{0, -1}};
        t.inverted = {false};
        Netlist frag = build_sequential_trigger(t, r);
        std::vector<Pattern> cycles;
        for (int e : en)
            cycles.push_back({e ? Value::One : Value::Zero});
        std::vector<Value> init(dff_gates(frag).size(), Value::Zero);
        CycleResult res = simulate_cycles(frag, cycles, init);
        std::vector<int> fire;
        for (const auto& po : res.po_per_cycle)
            fire.push_back(po[0] == Value::One ? 1 : 0);
        return fire;
    };
    CHECK(run(2, {1, 1}) == std::vector<int>{0, 1});
    CHECK(run(2, {1, 0, 1, 1, 1}) == std::vector<int>{0, 0, 0, 1, 1});
    CHECK(run(4, {1, 1, 1, 0, 1, 1, 1, 1}) ==
          std::vector<int>{0, 0, 0, 0, 0, 0, 0, 1});
    CHECK(run(8, {1, 1, 1, 1, 1, 1, 1, 1, 1}) ==
          std::vector<int>{0, 0, 0, 0, 0, 0, 0, 1, 1});

    // every enable sequence up to length 12, against the run-length rule
    for (uint32_t r : {2u, 3u, 4u, 8u, 16u}) {
        TriggerSpec t;
        t.nodes = {LineId{0, -1}};
        t.inverted = {false};
        Netlist frag = build_sequential_trigger(t, r);
        std::vector<Value> init(dff_gates(frag).size(), Value::Zero);
        const uint32_t len = 12;
        for (uint64_t bits = 0; bits < (uint64_t{1} << len); ++bits) {
            std::vector<Pattern> cycles;
            for (uint32_t i = 0; i < len; ++i)
                cycles.push_back({(bits >> i & 1) ? Value::One : Value::Zero});
            CycleResult res = simulate_cycles(frag, cycles, init);
            uint32_t runlen = 0;
            for (uint32_t i = 0; i < len; ++i) {
                runlen = (bits >> i & 1) ? runlen + 1 : 0;
                bool want = runlen >= r;
                CHECK((res.po_per_cycle[i][0] == Value::One) == want);
            }
        }
    }
}

TEST_CASE("counter state cells are fenced off from scan") {
    TriggerSpec t;
    t.nodes = {LineId{0, -1}};
    t.inverted = {false};
    Netlist frag = build_sequential_trigger(t, 8);
    std::vector<uint32_t> dffs = dff_gates(frag);
    CHECK(dffs.size() == 3);
    for (uint32_t g : dffs) CHECK(frag.gate(g).no_scan);
    CHECK_THROWS_AS((void)build_sequential_trigger(t, 1), Error);
}

TEST_CASE("trojan files roundtrip through save and load") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    LockResult lr = lock_xor(orig, 2, 5);
    GenResult g = generate_patterns(lr.netlist, 0.95, 11, 4096);
    TrojanSpec spec = design_trojan(lr.netlist, lr.record, g.patterns, 2, 3, {}, 8);
    spec.payloads.push_back(PayloadSpec{PayloadSpec::Kind::MuxToPo,
                                        LineId{lr.netlist.po(0), -1}, true,
                                        false, LineId{}, 1});
    std::ostringstream out;
    save_trojan(out, lr.netlist, spec);
    std::istringstream in(out.str());
    TrojanSpec back = load_trojan(in, "mem", lr.netlist);
    CHECK(back.trigger.nodes == spec.trigger.nodes);
    CHECK(back.trigger.inverted == spec.trigger.inverted);
    CHECK(back.htap == spec.htap);
    CHECK(back.counter_depth == spec.counter_depth);
    REQUIRE(back.payloads.size() == 1);
    CHECK(back.payloads[0].kind == PayloadSpec::Kind::MuxToPo);
    CHECK(back.payloads[0].leak_const);
    CHECK(back.payloads[0].observe_po == 1);

    std::istringstream junk("p = 1\nr = 1\nhtap = 01\nnode 0 line=zzz inv=0\n");
    CHECK_THROWS_AS((void)load_trojan(junk, "mem", lr.netlist), Error);
}

TEST_CASE("payload fragments reject malformed output indices") {
    Netlist nl = nl_from_text(testhelp::c17_text());
    std::vector<std::string> ok{"kind=mux", "victim=G11", "leak=VDD", "po=1"};
    PayloadSpec p = parse_payload_fields(ok, nl, "mem", 1);
    CHECK(p.observe_po == 1);
    CHECK(payload_text(nl, p).find("leak=VDD") != std::string::npos);
    std::vector<std::string> bad{"kind=mux", "victim=G11", "leak=VDD", "po=1x"};
    CHECK_THROWS_AS((void)parse_payload_fields(bad, nl, "mem", 1), Error);
    std::vector<std::string> oob{"kind=mux", "victim=G11", "leak=VDD", "po=9"};
    CHECK_THROWS_AS((void)parse_payload_fields(oob, nl, "mem", 1), Error);
}
