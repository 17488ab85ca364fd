#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lockleak/equiv.hpp"
#include "lockleak/error.hpp"
#include "lockleak/locking.hpp"

using namespace lockleak;
using testhelp::nl_from_text;
using testhelp::nl_to_text;

namespace {

void check_lock_contract(const Netlist& orig, const LockResult& lr) {
    const Netlist& locked = lr.netlist;
    locked.validate();
    REQUIRE(lr.record.key_size() > 0);
    CHECK(locked.num_pis() == orig.num_pis() + lr.record.key_size());
    CHECK(locked.num_pos() == orig.num_pos());
    for (size_t i = 0; i < lr.record.key_size(); ++i)
        CHECK(lr.record.bits[i].key_input == "keyinput" + std::to_string(i));

    // correct key restores the original function
    Netlist unlocked = apply_key(locked, lr.record, lr.record.correct_key());
    CHECK(unlocked.num_pis() == orig.num_pis());
    EquivResult ok = check_equivalent(orig, unlocked);
    CHECK(ok.equivalent);

    // flipping any single bit corrupts it
    for (size_t i = 0; i < lr.record.key_size(); ++i) {
        std::vector<bool> key = lr.record.correct_key();
        key[i] = !key[i];
        EquivResult bad = check_equivalent(orig, apply_key(locked, lr.record, key));
        CHECK(!bad.equivalent);
    }
}

}  // namespace

TEST_CASE("xor locking is transparent under the correct key only") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    for (uint64_t seed : {1ull, 2ull, 9ull}) {
        LockResult lr = lock_xor(orig, 3, seed);
        check_lock_contract(orig, lr);
        CHECK(lr.record.scheme == LockScheme::XorRandom);
        // key gate kind encodes the correct bit
        for (const KeyBit& kb : lr.record.bits) {
            NetId out = lr.netlist.find_net(kb.key_gate_out);
            int64_t g = lr.netlist.driver_gate(out);
            REQUIRE(g >= 0);
            GateKind k = lr.netlist.gate(uint32_t(g)).kind;
            CHECK(k == (kb.correct ? GateKind::Xnor : GateKind::Xor));
        }
    }
}

TEST_CASE("mux locking stays acyclic and obeys the same contract") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    for (uint64_t seed : {1ull, 5ull}) {
        LockResult lr = lock_mux(orig, 3, seed);
        check_lock_contract(orig, lr);
        CHECK(lr.record.scheme == LockScheme::MuxRandom);
        for (const KeyBit& kb : lr.record.bits) CHECK(!kb.dummy.empty());
    }
    // larger random hosts shake out cycle bugs in decoy selection
    for (uint64_t seed = 0; seed < 6; ++seed) {
        Netlist host = testhelp::random_netlist(400 + seed, 8, 60);
        LockResult lr = lock_mux(host, 8, seed);
        lr.netlist.validate();
        EquivResult ok =
            check_equivalent(host, apply_key(lr.netlist, lr.record,
                                             lr.record.correct_key()));
        CHECK(ok.equivalent);
    }
}

TEST_CASE("locking is deterministic in the seed") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    LockResult a = lock_xor(orig, 4, 7);
    LockResult b = lock_xor(orig, 4, 7);
    CHECK(nl_to_text(a.netlist) == nl_to_text(b.netlist));
    CHECK(a.record.correct_key() == b.record.correct_key());
    LockResult c = lock_xor(orig, 4, 8);
    CHECK(nl_to_text(a.netlist) != nl_to_text(c.netlist));
}

TEST_CASE("key size is bounded by the available sites") {
    Netlist tiny = nl_from_text("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
    CHECK_THROWS_AS((void)lock_xor(tiny, 5, 1), Error);
    CHECK_THROWS_AS((void)lock_xor(tiny, 0, 1), Error);
}

TEST_CASE("record files roundtrip") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    LockResult lr = lock_mux(orig, 3, 11);
    std::ostringstream out;
    save_record(out, lr.record);
    std::istringstream in(out.str());
    LockRecord back = load_record(in, "mem");
    CHECK(back.scheme == lr.record.scheme);
    CHECK(back.seed == lr.record.seed);
    REQUIRE(back.key_size() == lr.record.key_size());
    for (size_t i = 0; i < back.key_size(); ++i) {
        CHECK(back.bits[i].key_input == lr.record.bits[i].key_input);
        CHECK(back.bits[i].correct == lr.record.bits[i].correct);
        CHECK(back.bits[i].site == lr.record.bits[i].site);
        CHECK(back.bits[i].key_gate_out == lr.record.bits[i].key_gate_out);
        CHECK(back.bits[i].dummy == lr.record.bits[i].dummy);
    }
    std::istringstream junk("scheme = frobnicate\n");
    CHECK_THROWS_AS((void)load_record(junk, "mem"), Error);
}

TEST_CASE("key text helpers agree") {
    std::vector<bool> key{true, false, true, true};
    CHECK(key_text(key) == "1011");
    CHECK(parse_key_text("1011") == key);
    CHECK_THROWS_AS((void)parse_key_text("10z1"), Error);
}

TEST_CASE("apply_key accepts wrong keys without structural damage") {
    Netlist orig = nl_from_text(testhelp::c17_text());
    LockResult lr = lock_xor(orig, 3, 3);
    std::vector<bool> wrong(3, false);
    std::vector<bool> right = lr.record.correct_key();
    Netlist w = apply_key(lr.netlist, lr.record, wrong);
    w.validate();
    CHECK(w.num_pis() == orig.num_pis());
    CHECK(w.num_pos() == orig.num_pos());
    if (wrong == right) return;  // 1-in-8 seed coincidence, nothing to check
    CHECK(!check_equivalent(orig, w).equivalent);
}
