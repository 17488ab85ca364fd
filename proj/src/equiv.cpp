#include "lockleak/equiv.hpp"

#include <algorithm>

#include "lockleak/error.hpp"
#include "lockleak/rng.hpp"

namespace lockleak {

std::vector<uint32_t> pi_permutation(const Netlist& a, const Netlist& b) {
    if (a.num_pis() != b.num_pis())
        fail(ErrorKind::Op, "netlists have different input counts (" +
                                std::to_string(a.num_pis()) + " vs " +
                                std::to_string(b.num_pis()) + ")");
    return pi_embedding(a, b);
}

std::vector<uint32_t> pi_embedding(const Netlist& a, const Netlist& b) {
    std::vector<uint32_t> perm(a.num_pis());
    for (size_t i = 0; i < a.num_pis(); ++i) {
        const std::string& name = a.net_name(a.pi(i));
        NetId n = b.find_net(name);
        if (n == NO_NET || !b.is_pi(n))
            fail(ErrorKind::Op, "input '" + name + "' missing from second netlist");
        perm[i] = b.pi_index(n);
    }
    return perm;
}

namespace {

// Bits past npat in a word are batch padding, not patterns.
uint64_t live_bits(size_t npat, size_t w) {
    size_t rem = npat - w * 64;
    if (rem >= 64) return ~uint64_t{0};
    return (uint64_t{1} << rem) - 1;
}

// Compares PO planes of two batches; returns pattern index of the first
// definite mismatch (or npat if none) and the PO slot via out param.
size_t first_mismatch(const Netlist& a, const Netlist& b,
                      const std::vector<uint32_t>& perm_unused,
                      const PackedVals& va, const PackedVals& vb,
                      uint32_t& po_out) {
    (void)perm_unused;
    size_t best = va.npat;
    for (size_t j = 0; j < a.num_pos(); ++j) {
        NetId na = a.po(j);
        NetId nb = b.po(j);
        for (size_t w = 0; w * 64 < va.npat && w * 64 < best; ++w) {
            uint64_t ka = ~va.x(na)[w];
            uint64_t kb = ~vb.x(nb)[w];
            uint64_t diff = (va.o(na)[w] ^ vb.o(nb)[w]) & ka & kb &
                            live_bits(va.npat, w);
            if (!diff) continue;
            size_t idx = w * 64 + static_cast<size_t>(__builtin_ctzll(diff));
            if (idx < best) {
                best = idx;
                po_out = static_cast<uint32_t>(j);
            }
            break;  // later words in this PO can only be later patterns
        }
    }
    return best;
}

std::vector<Pattern> remap_rows(const std::vector<Pattern>& rows,
                                const std::vector<uint32_t>& perm,
                                size_t width) {
    std::vector<Pattern> out(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        Pattern p(width, Value::X);
        for (size_t i = 0; i < perm.size(); ++i) p[perm[i]] = rows[r][i];
        out[r] = std::move(p);
    }
    return out;
}

}  // namespace

ReplayResult replay_compare(const Netlist& a, const Netlist& b,
                            const std::vector<Pattern>& rows,
                            unsigned threads) {
    if (a.num_pos() != b.num_pos())
        fail(ErrorKind::Op, "netlists have different output counts (" +
                                std::to_string(a.num_pos()) + " vs " +
                                std::to_string(b.num_pos()) + ")");
    auto perm = pi_embedding(a, b);
    ReplayResult res;
    res.patterns_checked = rows.size();
    if (rows.empty()) return res;
    PackedVals va = simulate_batch(a, rows, threads);
    PackedVals vb = simulate_batch(b, remap_rows(rows, perm, b.num_pis()),
                                   threads);
    size_t nwords = va.nwords;
    for (size_t w = 0; w < nwords; ++w) {
        uint64_t diff = 0;
        for (size_t j = 0; j < a.num_pos(); ++j) {
            NetId na = a.po(j);
            NetId nb = b.po(j);
            diff |= (va.o(na)[w] ^ vb.o(nb)[w]) & ~va.x(na)[w] & ~vb.x(nb)[w];
        }
        diff &= live_bits(rows.size(), w);
        res.mismatches += static_cast<uint64_t>(__builtin_popcountll(diff));
    }
    if (res.mismatches) {
        uint32_t po = 0;
        size_t idx = first_mismatch(a, b, perm, va, vb, po);
        res.has_witness = true;
        res.witness = rows[idx];
        res.witness_po = po;
    }
    return res;
}

EquivResult check_equivalent(const Netlist& a, const Netlist& b,
                             uint32_t exhaustive_pi_limit,
                             uint64_t random_patterns, uint64_t seed,
                             unsigned threads) {
    size_t n = a.num_pis();
    EquivResult res;
    if (n <= exhaustive_pi_limit) {
        res.exhaustive = true;
        uint64_t total = uint64_t{1} << n;
        const uint64_t chunk = 1 << 12;
        for (uint64_t base = 0; base < total; base += chunk) {
            uint64_t cnt = std::min<uint64_t>(chunk, total - base);
            std::vector<Pattern> rows(cnt, Pattern(n, Value::Zero));
            for (uint64_t r = 0; r < cnt; ++r)
                for (size_t i = 0; i < n; ++i)
                    if ((base + r) >> i & 1) rows[r][i] = Value::One;
            ReplayResult rr = replay_compare(a, b, rows, threads);
            res.patterns_checked += cnt;
            if (rr.mismatches) {
                res.equivalent = false;
                res.witness = rr.witness;
                res.witness_po = rr.witness_po;
                return res;
            }
        }
        return res;
    }
    Rng rng(seed);
    Rng bits = rng.split("equiv");
    uint64_t left = random_patterns;
    while (left > 0) {
        uint64_t cnt = std::min<uint64_t>(left, 1 << 12);
        std::vector<Pattern> rows(cnt, Pattern(n, Value::Zero));
        for (uint64_t r = 0; r < cnt; ++r)
            for (size_t i = 0; i < n; ++i)
                if (bits.coin()) rows[r][i] = Value::One;
        ReplayResult rr = replay_compare(a, b, rows, threads);
        res.patterns_checked += cnt;
        if (rr.mismatches) {
            res.equivalent = false;
            res.witness = rr.witness;
            res.witness_po = rr.witness_po;
            return res;
        }
        left -= cnt;
    }
    return res;
}

}  // namespace lockleak
