#pragma once

// Seed plumbing and brute-force oracles shared by the test binaries. The
// oracles deliberately avoid the library's row reduction.

#include <cstdint>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hierdepth/agcode.hpp"
#include "hierdepth/gf.hpp"

namespace hierdepth::test {

inline std::uint64_t& seed() {
    static std::uint64_t s = [] {
        if (const char* env = std::getenv("HIERDEPTH_SEED")) return static_cast<std::uint64_t>(std::stoull(env));
        return std::uint64_t{20240611};
    }();
    return s;
}

/// Strips `--seed N` / `--seed=N` from argv and stores it.
inline void consume_seed_flag(int& argc, char** argv) {
    int out = 1;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--seed" && i + 1 < argc) {
            seed() = std::stoull(argv[++i]);
        } else if (a.rfind("--seed=", 0) == 0) {
            seed() = std::stoull(a.substr(7));
        } else {
            argv[out++] = argv[i];
        }
    }
    argc = out;
}

/// Per-test generator derived from the global seed and a salt.
inline std::mt19937_64 rng(std::uint64_t salt) { return std::mt19937_64(seed() ^ (salt * 0x9E3779B97F4A7C15ULL)); }

inline gf::FMatrix random_matrix(const gf::PrimeField& f, std::size_t rows, std::size_t cols, std::mt19937_64& g) {
    gf::FMatrix m(f, rows, cols);
    std::uniform_int_distribution<std::uint32_t> d(0, f.p() - 1);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, d(g));
    return m;
}

inline std::uint64_t ipow(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

/// Every vector of F_p^n, via an index in [0, p^n).
inline std::vector<std::uint32_t> unrank(std::uint64_t idx, std::size_t n, std::uint32_t p) {
    std::vector<std::uint32_t> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<std::uint32_t>(idx % p);
        idx /= p;
    }
    return v;
}

inline std::uint32_t dot(const std::vector<std::uint32_t>& a, std::span<const std::uint32_t> b, std::uint32_t p) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc = (acc + std::uint64_t{a[i]} * b[i]) % p;
    return static_cast<std::uint32_t>(acc);
}

/// #{v : M v^T = 0} by enumeration of F_p^cols.
inline std::uint64_t brute_kernel_size(const gf::FMatrix& m) {
    const auto p = m.field().p();
    const auto total = ipow(p, m.cols());
    std::uint64_t count = 0;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const auto v = unrank(idx, m.cols(), p);
        bool in = true;
        for (std::size_t i = 0; i < m.rows() && in; ++i) in = dot(v, m.row(i), p) == 0;
        count += in;
    }
    return count;
}

/// log_p of an exact power of p.
inline std::size_t log_p(std::uint64_t x, std::uint32_t p) {
    std::size_t e = 0;
    while (x > 1) {
        x /= p;
        ++e;
    }
    return e;
}

/// The set of all vectors in the row span, by enumerating coefficient tuples.
inline std::set<std::vector<std::uint32_t>> brute_span(const gf::FMatrix& m) {
    const auto p = m.field().p();
    std::set<std::vector<std::uint32_t>> out;
    const auto total = ipow(p, m.rows());
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const auto c = unrank(idx, m.rows(), p);
        std::vector<std::uint32_t> v(m.cols(), 0);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) v[j] = static_cast<std::uint32_t>((v[j] + std::uint64_t{c[i]} * m.get(i, j)) % p);
        out.insert(v);
    }
    return out;
}

/// Leibniz-formula determinant mod p for small square matrices.
inline std::uint32_t brute_det(const gf::FMatrix& m) {
    const auto n = m.rows();
    const auto p = m.field().p();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::int64_t acc = 0;
    do {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        std::int64_t term = 1;
        for (std::size_t i = 0; i < n; ++i) term = term * m.get(i, perm[i]) % p;
        acc = (acc + (inversions % 2 ? p - term : term)) % p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<std::uint32_t>(acc);
}

/// Minimum nonzero weight over all p^rows messages pushed through the generator.
inline std::size_t brute_min_distance(const gf::FMatrix& g) {
    const auto p = g.field().p();
    const auto total = ipow(p, g.rows());
    std::size_t best = g.cols() + 1;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        const auto c = unrank(idx, g.rows(), p);
        std::size_t w = 0;
        for (std::size_t j = 0; j < g.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < g.rows(); ++i) acc += std::uint64_t{c[i]} * g.get(i, j);
            w += acc % p != 0;
        }
        if (w > 0) best = std::min(best, w);
    }
    return best;
}

}  // namespace hierdepth::test
