#pragma once

#include <cstddef>
#include <cstdint>

namespace lockleak {

// Bitwise kernels over packed pattern words (bit j of a word = pattern j).
// Two-valued planes are plain masks. Three-valued signals carry two planes:
// `o` (definitely one) and `x` (unknown); zero is the absent case ~(o|x).
//
// Every kernel has a scalar reference implementation and, on x86-64 with AVX2,
// a vector variant selected once at runtime. Pointer arguments never alias
// except where a parameter doubles as destination (dst may equal any source).
struct WordOps {
    const char* name;

    // two-valued
    void (*and2)(uint64_t* dst, const uint64_t* a, const uint64_t* b, size_t n);
    void (*or2)(uint64_t* dst, const uint64_t* a, const uint64_t* b, size_t n);
    void (*xor2)(uint64_t* dst, const uint64_t* a, const uint64_t* b, size_t n);
    void (*not2)(uint64_t* dst, const uint64_t* a, size_t n);
    // dst = (~s & a) | (s & b)
    void (*mux2)(uint64_t* dst, const uint64_t* s, const uint64_t* a,
                 const uint64_t* b, size_t n);

    // three-valued (pessimistic); fold one operand pair into an accumulator
    void (*and3)(uint64_t* dst_o, uint64_t* dst_x, const uint64_t* ao,
                 const uint64_t* ax, const uint64_t* bo, const uint64_t* bx,
                 size_t n);
    void (*or3)(uint64_t* dst_o, uint64_t* dst_x, const uint64_t* ao,
                const uint64_t* ax, const uint64_t* bo, const uint64_t* bx,
                size_t n);
    void (*xor3)(uint64_t* dst_o, uint64_t* dst_x, const uint64_t* ao,
                 const uint64_t* ax, const uint64_t* bo, const uint64_t* bx,
                 size_t n);
    void (*not3)(uint64_t* dst_o, uint64_t* dst_x, const uint64_t* ao,
                 const uint64_t* ax, size_t n);
    void (*mux3)(uint64_t* dst_o, uint64_t* dst_x, const uint64_t* so,
                 const uint64_t* sx, const uint64_t* ao, const uint64_t* ax,
                 const uint64_t* bo, const uint64_t* bx, size_t n);

    // OR-reduction of a ^ b; nonzero means some pattern differs
    uint64_t (*diff_or)(const uint64_t* a, const uint64_t* b, size_t n);
};

// Selected backend: AVX2 when the CPU supports it, scalar otherwise.
const WordOps& wordops();
const WordOps& wordops_scalar();
// Null when this build or CPU cannot run AVX2.
const WordOps* wordops_avx2();
// Force a backend by name ("auto", "scalar", "avx2"); false if unavailable.
bool set_wordops_backend(const char* name);

} // namespace lockleak
