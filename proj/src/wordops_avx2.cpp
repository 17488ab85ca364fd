// AVX2 variants of the packed-word kernels. This translation unit is compiled
// with -mavx2; callers reach it only through the runtime-dispatched table.
#include "lockleak/wordops.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace lockleak {
namespace {

constexpr size_t LANES = 4; // 256-bit = 4 x u64

inline __m256i ld(const uint64_t* p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}
inline void st(uint64_t* p, __m256i v) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

void v_and2(uint64_t* d, const uint64_t* a, const uint64_t* b, size_t n) {
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) st(d + i, _mm256_and_si256(ld(a + i), ld(b + i)));
    for (; i < n; ++i) d[i] = a[i] & b[i];
}
void v_or2(uint64_t* d, const uint64_t* a, const uint64_t* b, size_t n) {
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) st(d + i, _mm256_or_si256(ld(a + i), ld(b + i)));
    for (; i < n; ++i) d[i] = a[i] | b[i];
}
void v_xor2(uint64_t* d, const uint64_t* a, const uint64_t* b, size_t n) {
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) st(d + i, _mm256_xor_si256(ld(a + i), ld(b + i)));
    for (; i < n; ++i) d[i] = a[i] ^ b[i];
}
void v_not2(uint64_t* d, const uint64_t* a, size_t n) {
    const __m256i ones = _mm256_set1_epi64x(-1);
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) st(d + i, _mm256_xor_si256(ld(a + i), ones));
    for (; i < n; ++i) d[i] = ~a[i];
}
void v_mux2(uint64_t* d, const uint64_t* s, const uint64_t* a, const uint64_t* b,
            size_t n) {
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) {
        __m256i sv = ld(s + i);
        st(d + i, _mm256_or_si256(_mm256_andnot_si256(sv, ld(a + i)),
                                  _mm256_and_si256(sv, ld(b + i))));
    }
    for (; i < n; ++i) d[i] = (~s[i] & a[i]) | (s[i] & b[i]);
}

void v_and3(uint64_t* do_, uint64_t* dx, const uint64_t* ao, const uint64_t* ax,
            const uint64_t* bo, const uint64_t* bx, size_t n) {
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) {
        __m256i aov = ld(ao + i), axv = ld(ax + i);
        __m256i bov = ld(bo + i), bxv = ld(bx + i);
        __m256i o = _mm256_and_si256(aov, bov);
        __m256i x = _mm256_and_si256(
            _mm256_or_si256(axv, bxv),
            _mm256_and_si256(_mm256_or_si256(aov, axv), _mm256_or_si256(bov, bxv)));
        st(do_ + i, o);
        st(dx + i, x);
    }
    for (; i < n; ++i) {
        uint64_t o = ao[i] & bo[i];
        uint64_t x = (ax[i] | bx[i]) & (ao[i] | ax[i]) & (bo[i] | bx[i]);
        do_[i] = o;
        dx[i] = x;
    }
}
void v_or3(uint64_t* do_, uint64_t* dx, const uint64_t* ao, const uint64_t* ax,
           const uint64_t* bo, const uint64_t* bx, size_t n) {
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) {
        __m256i o = _mm256_or_si256(ld(ao + i), ld(bo + i));
        __m256i x = _mm256_andnot_si256(o, _mm256_or_si256(ld(ax + i), ld(bx + i)));
        st(do_ + i, o);
        st(dx + i, x);
    }
    for (; i < n; ++i) {
        uint64_t o = ao[i] | bo[i];
        dx[i] = (ax[i] | bx[i]) & ~o;
        do_[i] = o;
    }
}
void v_xor3(uint64_t* do_, uint64_t* dx, const uint64_t* ao, const uint64_t* ax,
            const uint64_t* bo, const uint64_t* bx, size_t n) {
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) {
        __m256i x = _mm256_or_si256(ld(ax + i), ld(bx + i));
        __m256i o = _mm256_andnot_si256(x, _mm256_xor_si256(ld(ao + i), ld(bo + i)));
        st(do_ + i, o);
        st(dx + i, x);
    }
    for (; i < n; ++i) {
        uint64_t x = ax[i] | bx[i];
        do_[i] = (ao[i] ^ bo[i]) & ~x;
        dx[i] = x;
    }
}
void v_not3(uint64_t* do_, uint64_t* dx, const uint64_t* ao, const uint64_t* ax,
            size_t n) {
    const __m256i ones = _mm256_set1_epi64x(-1);
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) {
        __m256i axv = ld(ax + i);
        st(do_ + i, _mm256_xor_si256(_mm256_or_si256(ld(ao + i), axv), ones));
        st(dx + i, axv);
    }
    for (; i < n; ++i) {
        do_[i] = ~(ao[i] | ax[i]);
        dx[i] = ax[i];
    }
}
void v_mux3(uint64_t* do_, uint64_t* dx, const uint64_t* so, const uint64_t* sx,
            const uint64_t* ao, const uint64_t* ax, const uint64_t* bo,
            const uint64_t* bx, size_t n) {
    const __m256i ones = _mm256_set1_epi64x(-1);
    size_t i = 0;
    for (; i + LANES <= n; i += LANES) {
        __m256i sov = ld(so + i), sxv = ld(sx + i);
        __m256i aov = ld(ao + i), axv = ld(ax + i);
        __m256i bov = ld(bo + i), bxv = ld(bx + i);
        __m256i zs = _mm256_xor_si256(_mm256_or_si256(sov, sxv), ones);
        __m256i za = _mm256_xor_si256(_mm256_or_si256(aov, axv), ones);
        __m256i zb = _mm256_xor_si256(_mm256_or_si256(bov, bxv), ones);
        __m256i o = _mm256_or_si256(
            _mm256_or_si256(_mm256_and_si256(zs, aov), _mm256_and_si256(sov, bov)),
            _mm256_and_si256(sxv, _mm256_and_si256(aov, bov)));
        __m256i z = _mm256_or_si256(
            _mm256_or_si256(_mm256_and_si256(zs, za), _mm256_and_si256(sov, zb)),
            _mm256_and_si256(sxv, _mm256_and_si256(za, zb)));
        st(do_ + i, o);
        st(dx + i, _mm256_xor_si256(_mm256_or_si256(o, z), ones));
    }
    for (; i < n; ++i) {
        uint64_t zs = ~(so[i] | sx[i]);
        uint64_t za = ~(ao[i] | ax[i]);
        uint64_t zb = ~(bo[i] | bx[i]);
        uint64_t o = (zs & ao[i]) | (so[i] & bo[i]) | (sx[i] & ao[i] & bo[i]);
        uint64_t z = (zs & za) | (so[i] & zb) | (sx[i] & za & zb);
        do_[i] = o;
        dx[i] = ~(o | z);
    }
}

uint64_t v_diff_or(const uint64_t* a, const uint64_t* b, size_t n) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + LANES <= n; i += LANES)
        acc = _mm256_or_si256(acc, _mm256_xor_si256(ld(a + i), ld(b + i)));
    uint64_t lanes[LANES];
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(lanes), acc);
    uint64_t r = lanes[0] | lanes[1] | lanes[2] | lanes[3];
    for (; i < n; ++i) r |= a[i] ^ b[i];
    return r;
}

} // namespace

const WordOps* wordops_avx2() {
    static const WordOps ops = {
        "avx2", v_and2, v_or2, v_xor2, v_not2, v_mux2,
        v_and3, v_or3,  v_xor3, v_not3, v_mux3, v_diff_or,
    };
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    return &ops;
}

} // namespace lockleak

#else

namespace lockleak {
const WordOps* wordops_avx2() { return nullptr; }
} // namespace lockleak

#endif
