#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "hierdepth/error.hpp"
#include "hierdepth/picard.hpp"

namespace hierdepth {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& q) {
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

}  // namespace hierdepth

namespace hierdepth::bundle {

using picard::DivisorClass;
using picard::Lattice;

/// Direct sum of line bundles, one DivisorClass per summand.
class SplitBundle {
public:
    explicit SplitBundle(std::vector<DivisorClass> summands) : summands_(std::move(summands)) {
        if (summands_.empty()) throw Error(Errc::InvalidArgument, "a split bundle needs at least one summand");
        for (const auto& s : summands_) summands_.front().require_same(s);
    }

    /// O(d_1) + ... + O(d_r) on a curve.
    static SplitBundle on_curve(const std::vector<std::int64_t>& degrees) {
        std::vector<DivisorClass> s;
        s.reserve(degrees.size());
        for (auto d : degrees) s.push_back(DivisorClass::points(d));
        return SplitBundle(std::move(s));
    }

    /// O(a_1 H) + ... on P2.
    static SplitBundle on_p2(const std::vector<std::int64_t>& degrees) {
        std::vector<DivisorClass> s;
        s.reserve(degrees.size());
        for (auto d : degrees) s.push_back(DivisorClass::hyperplane(d));
        return SplitBundle(std::move(s));
    }

    [[nodiscard]] const std::vector<DivisorClass>& summands() const noexcept { return summands_; }
    [[nodiscard]] const Lattice& lattice() const noexcept { return summands_.front().lattice(); }
    [[nodiscard]] std::size_t rank() const noexcept { return summands_.size(); }

    /// Summand degrees; only meaningful on rank-one lattices.
    [[nodiscard]] std::vector<std::int64_t> degrees() const {
        if (lattice().rank() != 1) throw Error(Errc::UnsupportedLattice, "degrees need a rank-one lattice");
        std::vector<std::int64_t> d;
        d.reserve(rank());
        for (const auto& s : summands_) d.push_back(s[0]);
        return d;
    }

    /// Every summand shifted by M, i.e. the bundle tensored with the line bundle M.
    [[nodiscard]] SplitBundle twisted(const DivisorClass& m) const {
        auto s = summands_;
        for (auto& c : s) c += m;
        return SplitBundle(std::move(s));
    }

    friend SplitBundle direct_sum(const SplitBundle& a, const SplitBundle& b) {
        auto s = a.summands_;
        s.insert(s.end(), b.summands_.begin(), b.summands_.end());
        return SplitBundle(std::move(s));
    }

    /// Pullback of a P2 bundle to the blowup at m points.
    [[nodiscard]] SplitBundle pullback(std::size_t m) const {
        std::vector<DivisorClass> s;
        for (const auto& c : summands_) s.push_back(picard::pullback(c, m));
        return SplitBundle(std::move(s));
    }

    friend bool operator==(const SplitBundle&, const SplitBundle&) = default;

private:
    std::vector<DivisorClass> summands_;
};

inline DivisorClass det(const SplitBundle& b) {
    auto d = DivisorClass::zero(b.lattice());
    for (const auto& s : b.summands()) d += s;
    return d;
}

/// mu_H(E) = (c1(det E) . H) / rank, exact. On curves pass the point class.
inline Rational slope(const SplitBundle& b, const DivisorClass& polarization) {
    return Rational(picard::intersect(det(b), polarization), static_cast<std::int64_t>(b.rank()));
}

struct HNGroup {
    Rational slope;
    std::size_t multiplicity;

    friend bool operator==(const HNGroup&, const HNGroup&) = default;
};

/// Harder-Narasimhan type of a split bundle on a curve: summand degrees grouped
/// by value, slopes strictly decreasing.
struct HNProfile {
    std::vector<HNGroup> groups;

    [[nodiscard]] std::size_t length() const noexcept { return groups.size(); }
    friend bool operator==(const HNProfile&, const HNProfile&) = default;
};

inline HNProfile hn_profile(const SplitBundle& b) {
    if (b.lattice().kind() != picard::LatticeKind::Curve) {
        throw Error(Errc::UnsupportedLattice, "HN profiles are computed for split bundles on curves only");
    }
    std::map<std::int64_t, std::size_t, std::greater<>> counts;
    for (auto d : b.degrees()) ++counts[d];
    HNProfile out;
    for (const auto& [d, mult] : counts) out.groups.push_back({Rational(d), mult});
    return out;
}

/// The HN filtration E^(1) c ... c E^(s) = E as nested split bundles.
inline std::vector<SplitBundle> hn_filtration(const SplitBundle& b) {
    const auto profile = hn_profile(b);
    std::vector<SplitBundle> steps;
    for (const auto& g : profile.groups) {
        std::vector<DivisorClass> keep;
        for (const auto& s : b.summands()) {
            if (Rational(s[0]) >= g.slope) keep.push_back(s);
        }
        steps.emplace_back(std::move(keep));
    }
    return steps;
}

}  // namespace hierdepth::bundle
