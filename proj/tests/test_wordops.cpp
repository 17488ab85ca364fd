#include <cstring>
#include <vector>

#include "doctest.h"
#include "lockleak/logicsim.hpp"
#include "lockleak/rng.hpp"
#include "lockleak/wordops.hpp"

using namespace lockleak;

namespace {

struct Tri {
    uint64_t o = 0, x = 0;
};

Value decode(const Tri& t, int bit) {
    if (t.x >> bit & 1) return Value::X;
    return (t.o >> bit & 1) ? Value::One : Value::Zero;
}

Tri encode_at(Tri t, int bit, Value v) {
    if (v == Value::X) t.x |= uint64_t{1} << bit;
    else if (v == Value::One) t.o |= uint64_t{1} << bit;
    return t;
}

const Value kVals[3] = {Value::Zero, Value::One, Value::X};

}  // namespace

TEST_CASE("two-valued kernels match their bitwise definitions") {
    const WordOps& ops = wordops_scalar();
    Rng rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        uint64_t a = rng.next(), b = rng.next(), s = rng.next(), d = 0;
        ops.and2(&d, &a, &b, 1);
        CHECK(d == (a & b));
        ops.or2(&d, &a, &b, 1);
        CHECK(d == (a | b));
        ops.xor2(&d, &a, &b, 1);
        CHECK(d == (a ^ b));
        ops.not2(&d, &a, 1);
        CHECK(d == ~a);
        ops.mux2(&d, &s, &a, &b, 1);
        CHECK(d == ((~s & a) | (s & b)));
        CHECK(ops.diff_or(&a, &b, 1) == (a ^ b));
        CHECK(ops.diff_or(&a, &a, 1) == 0);
    }
}

TEST_CASE("three-valued kernels agree with eval_gate on every value combo") {
    const WordOps& ops = wordops_scalar();
    // pack all 9 binary combos into bits 0..8 of one word
    Tri a, b;
    for (int i = 0; i < 9; ++i) {
        a = encode_at(a, i, kVals[i / 3]);
        b = encode_at(b, i, kVals[i % 3]);
    }
    struct Bin {
        GateKind kind;
        void (*op)(uint64_t*, uint64_t*, const uint64_t*, const uint64_t*,
                   const uint64_t*, const uint64_t*, size_t);
    };
    const Bin bins[] = {{GateKind::And, ops.and3},
                        {GateKind::Or, ops.or3},
                        {GateKind::Xor, ops.xor3}};
    for (const Bin& bin : bins) {
        Tri d;
        bin.op(&d.o, &d.x, &a.o, &a.x, &b.o, &b.x, 1);
        for (int i = 0; i < 9; ++i) {
            Value ins[2] = {kVals[i / 3], kVals[i % 3]};
            CHECK(decode(d, i) == eval_gate(bin.kind, ins));
        }
    }
    Tri dn;
    ops.not3(&dn.o, &dn.x, &a.o, &a.x, 1);
    for (int i = 0; i < 9; ++i) {
        Value ins[1] = {kVals[i / 3]};
        CHECK(decode(dn, i) == eval_gate(GateKind::Not, ins));
    }
    // all 27 mux combos across bits 0..26
    Tri s3, a3, b3, d3;
    for (int i = 0; i < 27; ++i) {
        s3 = encode_at(s3, i, kVals[i / 9]);
        a3 = encode_at(a3, i, kVals[i / 3 % 3]);
        b3 = encode_at(b3, i, kVals[i % 3]);
    }
    ops.mux3(&d3.o, &d3.x, &s3.o, &s3.x, &a3.o, &a3.x, &b3.o, &b3.x, 1);
    for (int i = 0; i < 27; ++i) {
        Value ins[3] = {kVals[i / 9], kVals[i / 3 % 3], kVals[i % 3]};
        CHECK(decode(d3, i) == eval_gate(GateKind::Mux2, ins));
    }
}

TEST_CASE("vector backend matches scalar on random buffers") {
    const WordOps* v = wordops_avx2();
    if (!v) return;  // CPU without AVX2
    const WordOps& s = wordops_scalar();
    Rng rng(22);
    // lengths straddling the vector width, including remainders
    for (size_t n : {size_t{1}, size_t{3}, size_t{4}, size_t{7}, size_t{16},
                     size_t{33}, size_t{250}}) {
        std::vector<uint64_t> ao(n), ax(n), bo(n), bx(n), so(n), sx(n);
        for (size_t i = 0; i < n; ++i) {
            ao[i] = rng.next(); ax[i] = rng.next() & rng.next();
            bo[i] = rng.next(); bx[i] = rng.next() & rng.next();
            so[i] = rng.next(); sx[i] = rng.next() & rng.next();
        }
        std::vector<uint64_t> d1(n), d2(n), e1(n), e2(n);
        auto same = [&]() {
            CHECK(std::memcmp(d1.data(), d2.data(), n * 8) == 0);
            CHECK(std::memcmp(e1.data(), e2.data(), n * 8) == 0);
        };
        s.and2(d1.data(), ao.data(), bo.data(), n);
        v->and2(d2.data(), ao.data(), bo.data(), n);
        s.or2(e1.data(), ao.data(), bo.data(), n);
        v->or2(e2.data(), ao.data(), bo.data(), n);
        same();
        s.xor2(d1.data(), ao.data(), bo.data(), n);
        v->xor2(d2.data(), ao.data(), bo.data(), n);
        s.not2(e1.data(), ao.data(), n);
        v->not2(e2.data(), ao.data(), n);
        same();
        s.mux2(d1.data(), so.data(), ao.data(), bo.data(), n);
        v->mux2(d2.data(), so.data(), ao.data(), bo.data(), n);
        same();
        s.and3(d1.data(), e1.data(), ao.data(), ax.data(), bo.data(), bx.data(), n);
        v->and3(d2.data(), e2.data(), ao.data(), ax.data(), bo.data(), bx.data(), n);
        same();
        s.or3(d1.data(), e1.data(), ao.data(), ax.data(), bo.data(), bx.data(), n);
        v->or3(d2.data(), e2.data(), ao.data(), ax.data(), bo.data(), bx.data(), n);
        same();
        s.xor3(d1.data(), e1.data(), ao.data(), ax.data(), bo.data(), bx.data(), n);
        v->xor3(d2.data(), e2.data(), ao.data(), ax.data(), bo.data(), bx.data(), n);
        same();
        s.not3(d1.data(), e1.data(), ao.data(), ax.data(), n);
        v->not3(d2.data(), e2.data(), ao.data(), ax.data(), n);
        same();
        s.mux3(d1.data(), e1.data(), so.data(), sx.data(), ao.data(), ax.data(),
               bo.data(), bx.data(), n);
        v->mux3(d2.data(), e2.data(), so.data(), sx.data(), ao.data(), ax.data(),
                bo.data(), bx.data(), n);
        same();
        CHECK(s.diff_or(ao.data(), bo.data(), n) == v->diff_or(ao.data(), bo.data(), n));
        CHECK(v->diff_or(ao.data(), ao.data(), n) == 0);
    }
}

TEST_CASE("kernels accept dst aliasing a source") {
    const WordOps& ops = wordops();
    Rng rng(23);
    size_t n = 17;
    std::vector<uint64_t> ao(n), ax(n), bo(n), bx(n);
    for (size_t i = 0; i < n; ++i) {
        ao[i] = rng.next(); ax[i] = rng.next() & rng.next();
        bo[i] = rng.next(); bx[i] = rng.next() & rng.next();
    }
    std::vector<uint64_t> ro(n), rx(n);
    ops.and3(ro.data(), rx.data(), ao.data(), ax.data(), bo.data(), bx.data(), n);
    std::vector<uint64_t> co = ao, cx = ax;
    ops.and3(co.data(), cx.data(), co.data(), cx.data(), bo.data(), bx.data(), n);
    CHECK(co == ro);
    CHECK(cx == rx);
    std::vector<uint64_t> d = ao;
    ops.xor2(d.data(), d.data(), bo.data(), n);
    std::vector<uint64_t> r(n);
    ops.xor2(r.data(), ao.data(), bo.data(), n);
    CHECK(d == r);
}

TEST_CASE("backend forcing switches and restores") {
    CHECK(set_wordops_backend("scalar"));
    CHECK(std::string(wordops().name) == "scalar");
    if (wordops_avx2()) {
        CHECK(set_wordops_backend("avx2"));
        CHECK(std::string(wordops().name) == "avx2");
    } else {
        CHECK(!set_wordops_backend("avx2"));
    }
    CHECK(!set_wordops_backend("warp9"));
    CHECK(set_wordops_backend("auto"));
}
