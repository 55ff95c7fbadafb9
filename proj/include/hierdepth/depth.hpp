#pragma once

// Hierarchical depth: chains E_0 c E_1 c ... c E_h = E of same-rank subsheaves
// whose determinant grows by a nonzero effective divisor at every step, with
// det(E_0) pinned to a normalization class. Here those chains are tracked at the
// level of the Picard lattice.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hierdepth/bundle.hpp"
#include "hierdepth/error.hpp"
#include "hierdepth/picard.hpp"

namespace hierdepth::depth {

using bundle::SplitBundle;
using picard::DivisorClass;
using picard::LatticeKind;

/// A depth value, or NoFiltration when no normalized chain exists at all.
/// NoFiltration orders below every integer depth.
class DepthResult {
public:
    static DepthResult of(std::int64_t v) {
        if (v < 0) throw Error(Errc::InvalidArgument, "depth values are nonnegative");
        return DepthResult(v);
    }
    static DepthResult no_filtration() { return DepthResult(std::nullopt); }

    [[nodiscard]] bool has_value() const noexcept { return value_.has_value(); }
    [[nodiscard]] bool is_no_filtration() const noexcept { return !value_.has_value(); }
    [[nodiscard]] std::int64_t value() const {
        if (!value_) throw Error(Errc::NotEffective, "no normalized filtration exists");
        return *value_;
    }

    friend bool operator==(const DepthResult&, const DepthResult&) = default;
    friend auto operator<=>(const DepthResult& a, const DepthResult& b) {
        // nullopt compares less than any engaged value
        return a.value_ <=> b.value_;
    }

    [[nodiscard]] std::string str() const { return value_ ? std::to_string(*value_) : "NoFiltration"; }

private:
    explicit DepthResult(std::optional<std::int64_t> v) : value_(v) {}
    std::optional<std::int64_t> value_;
};

/// Lattice-level record of a hierarchical filtration: det(E_0) = lambda0 and
/// det(E_i) = det(E_{i-1}) + increments[i-1].
struct HierFiltration {
    DivisorClass lambda0;
    std::vector<DivisorClass> increments;
    std::size_t bundle_rank = 1;

    [[nodiscard]] std::size_t length() const noexcept { return increments.size(); }

    /// det(E_0), det(E_1), ..., det(E_h).
    [[nodiscard]] std::vector<DivisorClass> determinants() const {
        std::vector<DivisorClass> dets{lambda0};
        for (const auto& d : increments) dets.push_back(dets.back() + d);
        return dets;
    }
};

inline bool verify_filtration(const HierFiltration& f, const SplitBundle& target) {
    const auto top = bundle::det(target);
    f.lambda0.require_same(top);
    for (const auto& d : f.increments) d.require_same(top);

    if (f.bundle_rank != target.rank()) return false;
    auto acc = f.lambda0;
    for (const auto& d : f.increments) {
        if (d.is_zero() || !picard::is_effective(d)) return false;
        acc += d;
    }
    return acc == top;
}

/// Split bundle O(d_1)+...+O(d_r) on a curve: the depth is M = sum d_i - deg(lambda0)
/// when M >= 0, and no filtration exists otherwise.
inline DepthResult curve_split_depth(const std::vector<std::int64_t>& degrees, std::int64_t lambda0_degree) {
    std::int64_t total = 0;
    for (auto d : degrees) total += d;
    const auto m = total - lambda0_degree;
    return m >= 0 ? DepthResult::of(m) : DepthResult::no_filtration();
}

/// Upper bound d - d0 on the length of any normalized chain over a Picard-rank-one
/// variety. Negative means no filtration can exist.
constexpr std::int64_t rank_one_bound(std::int64_t d, std::int64_t d0) noexcept { return d - d0; }

/// Lower and upper bounds for the depth of a split bundle on P2 or P1xP1.
struct SurfaceDepth {
    DepthResult lower;
    DepthResult upper;
    /// A chain of length `lower`, when one exists.
    std::optional<HierFiltration> witness;
    bool effective = true;
};

inline SurfaceDepth surface_split_depth(const SplitBundle& b, const DivisorClass& lambda0) {
    const auto& L = b.lattice();
    if (L.kind() != LatticeKind::P2 && L.kind() != LatticeKind::P1xP1) {
        throw Error(Errc::UnsupportedLattice, "surface_split_depth supports P2 and P1xP1, got " + L.name());
    }
    const auto delta = bundle::det(b) - lambda0;
    const auto upper = picard::decompose_max(delta);
    if (!upper) return {DepthResult::no_filtration(), DepthResult::no_filtration(), std::nullopt, false};

    HierFiltration chain{lambda0, {}, b.rank()};
    bool all_disjoint = true;
    for (std::size_t i = 0; i < L.rank(); ++i) {
        if (delta[i] != 0 && !L.has_disjoint_representatives(i)) all_disjoint = false;
    }

    if (all_disjoint) {
        // one unit increment per irreducible summand
        for (std::size_t i = 0; i < L.rank(); ++i)
            for (std::int64_t t = 0; t < delta[i]; ++t) chain.increments.push_back(DivisorClass::generator(L, i));
    } else {
        // P2: each summand slot absorbs one transform along a line class, so
        // at most rank-many steps are guaranteed.
        const auto steps = std::min<std::int64_t>(*upper, static_cast<std::int64_t>(b.rank()));
        if (steps > 0) {
            chain.increments.push_back(DivisorClass::hyperplane(*upper - (steps - 1)));
            for (std::int64_t t = 1; t < steps; ++t) chain.increments.push_back(DivisorClass::hyperplane(1));
        }
    }
    const auto lower = static_cast<std::int64_t>(chain.length());
    return {DepthResult::of(lower), DepthResult::of(*upper), std::move(chain), true};
}

/// Depth on a blowup from the depth on the minimal model plus the exceptional
/// parts of det(E) (alpha) and of the normalization (beta).
inline std::int64_t mmp_exact_depth(std::int64_t h_min, const std::vector<std::int64_t>& alpha,
                                    const std::vector<std::int64_t>& beta) {
    if (alpha.size() != beta.size()) throw Error(Errc::ShapeMismatch, "alpha and beta differ in length");
    if (h_min < 0) throw Error(Errc::InvalidArgument, "h_min must be nonnegative");
    std::int64_t h = h_min;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (alpha[j] < beta[j]) {
            throw Error(Errc::NotEffective, "alpha_" + std::to_string(j + 1) + " < beta_" + std::to_string(j + 1));
        }
        h += alpha[j] - beta[j];
    }
    return h;
}

/// Number of increments with a nonzero exceptional part.
inline std::int64_t blowup_delta(const HierFiltration& f) {
    if (f.lambda0.lattice().kind() != LatticeKind::BlowupP2) {
        throw Error(Errc::LatticeMismatch, "blowup_delta expects a filtration on a blowup of P2");
    }
    std::int64_t count = 0;
    for (const auto& d : f.increments) {
        const auto split = picard::blowup_split(d);
        if (std::any_of(split.exceptional.begin(), split.exceptional.end(), [](auto c) { return c != 0; })) ++count;
    }
    return count;
}

/// Slope jumps mu(E_i) - mu(E_{i-1}) = (D_i . H) / r.
inline std::vector<Rational> slope_profile(const HierFiltration& f, const DivisorClass& polarization) {
    f.lambda0.require_same(polarization);
    std::vector<Rational> out;
    out.reserve(f.length());
    const auto r = static_cast<std::int64_t>(f.bundle_rank);
    for (const auto& d : f.increments) out.emplace_back(picard::intersect(d, polarization), r);
    return out;
}

/// mu(E_0), ..., mu(E_h).
inline std::vector<Rational> slope_sequence(const HierFiltration& f, const DivisorClass& polarization) {
    f.lambda0.require_same(polarization);
    std::vector<Rational> out;
    const auto r = static_cast<std::int64_t>(f.bundle_rank);
    for (const auto& d : f.determinants()) out.emplace_back(picard::intersect(d, polarization), r);
    return out;
}

/// Depth comparison for a same-rank subsheaf given by lowering summand degrees.
inline bool depth_monotonic_check(const std::vector<std::int64_t>& sub_degrees,
                                  const std::vector<std::int64_t>& super_degrees, std::int64_t lambda0_degree) {
    if (sub_degrees.size() != super_degrees.size()) {
        throw Error(Errc::ShapeMismatch, "sub and super bundles must have equal rank");
    }
    for (std::size_t i = 0; i < sub_degrees.size(); ++i) {
        if (sub_degrees[i] > super_degrees[i]) {
            throw Error(Errc::NotEffective, "sub degrees must not exceed super degrees");
        }
    }
    return curve_split_depth(sub_degrees, lambda0_degree) <= curve_split_depth(super_degrees, lambda0_degree);
}

}  // namespace hierdepth::depth
