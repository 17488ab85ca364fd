#include "lockleak/wordops.hpp"

namespace lockleak {
namespace {

void s_and2(uint64_t* d, const uint64_t* a, const uint64_t* b, size_t n) {
    for (size_t i = 0; i < n; ++i) d[i] = a[i] & b[i];
}
void s_or2(uint64_t* d, const uint64_t* a, const uint64_t* b, size_t n) {
    for (size_t i = 0; i < n; ++i) d[i] = a[i] | b[i];
}
void s_xor2(uint64_t* d, const uint64_t* a, const uint64_t* b, size_t n) {
    for (size_t i = 0; i < n; ++i) d[i] = a[i] ^ b[i];
}
void s_not2(uint64_t* d, const uint64_t* a, size_t n) {
    for (size_t i = 0; i < n; ++i) d[i] = ~a[i];
}
void s_mux2(uint64_t* d, const uint64_t* s, const uint64_t* a, const uint64_t* b,
            size_t n) {
    for (size_t i = 0; i < n; ++i) d[i] = (~s[i] & a[i]) | (s[i] & b[i]);
}

// Three-valued planes: o = definitely 1, x = unknown, zero = ~(o | x).
void s_and3(uint64_t* do_, uint64_t* dx, const uint64_t* ao, const uint64_t* ax,
            const uint64_t* bo, const uint64_t* bx, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        uint64_t o = ao[i] & bo[i];
        // X unless some side is a definite 0
        uint64_t x = (ax[i] | bx[i]) & (ao[i] | ax[i]) & (bo[i] | bx[i]);
        do_[i] = o;
        dx[i] = x;
    }
}
void s_or3(uint64_t* do_, uint64_t* dx, const uint64_t* ao, const uint64_t* ax,
           const uint64_t* bo, const uint64_t* bx, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        uint64_t o = ao[i] | bo[i];
        uint64_t x = (ax[i] | bx[i]) & ~o;
        do_[i] = o;
        dx[i] = x;
    }
}
void s_xor3(uint64_t* do_, uint64_t* dx, const uint64_t* ao, const uint64_t* ax,
            const uint64_t* bo, const uint64_t* bx, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        uint64_t x = ax[i] | bx[i];
        uint64_t o = (ao[i] ^ bo[i]) & ~x;
        do_[i] = o;
        dx[i] = x;
    }
}
void s_not3(uint64_t* do_, uint64_t* dx, const uint64_t* ao, const uint64_t* ax,
            size_t n) {
    for (size_t i = 0; i < n; ++i) {
        uint64_t o = ~(ao[i] | ax[i]);
        do_[i] = o;
        dx[i] = ax[i];
    }
}
void s_mux3(uint64_t* do_, uint64_t* dx, const uint64_t* so, const uint64_t* sx,
            const uint64_t* ao, const uint64_t* ax, const uint64_t* bo,
            const uint64_t* bx, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        uint64_t zs = ~(so[i] | sx[i]);
        uint64_t za = ~(ao[i] | ax[i]);
        uint64_t zb = ~(bo[i] | bx[i]);
        // X select resolves only when both data planes agree on a definite value
        uint64_t o = (zs & ao[i]) | (so[i] & bo[i]) | (sx[i] & ao[i] & bo[i]);
        uint64_t z = (zs & za) | (so[i] & zb) | (sx[i] & za & zb);
        do_[i] = o;
        dx[i] = ~(o | z);
    }
}

uint64_t s_diff_or(const uint64_t* a, const uint64_t* b, size_t n) {
    uint64_t acc = 0;
    for (size_t i = 0; i < n; ++i) acc |= a[i] ^ b[i];
    return acc;
}

} // namespace

const WordOps& wordops_scalar() {
    static const WordOps ops = {
        "scalar", s_and2, s_or2, s_xor2, s_not2, s_mux2,
        s_and3,   s_or3,  s_xor3, s_not3, s_mux3, s_diff_or,
    };
    return ops;
}

} // namespace lockleak
