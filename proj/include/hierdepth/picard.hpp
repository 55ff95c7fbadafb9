#pragma once

// Divisor-class lattices of the model varieties: a curve (degree lattice), P^2,
// the blowup of P^2 at m points, and P^1 x P^1.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hierdepth/error.hpp"

namespace hierdepth::picard {

enum class LatticeKind { Curve, P2, BlowupP2, P1xP1 };

class Lattice {
public:
    static Lattice curve() { return Lattice(LatticeKind::Curve, 0); }
    static Lattice p2() { return Lattice(LatticeKind::P2, 0); }
    static Lattice p1xp1() { return Lattice(LatticeKind::P1xP1, 0); }
    static Lattice blowup_p2(std::size_t m) { return Lattice(LatticeKind::BlowupP2, m); }

    [[nodiscard]] LatticeKind kind() const noexcept { return kind_; }
    /// Number of exceptional classes; zero unless kind() == BlowupP2.
    [[nodiscard]] std::size_t exceptional_count() const noexcept { return m_; }

    [[nodiscard]] std::size_t rank() const noexcept {
        switch (kind_) {
            case LatticeKind::Curve:
            case LatticeKind::P2: return 1;
            case LatticeKind::BlowupP2: return 1 + m_;
            case LatticeKind::P1xP1: return 2;
        }
        return 0;
    }

    [[nodiscard]] bool is_surface() const noexcept { return kind_ != LatticeKind::Curve; }

    /// Gram matrix entry for generators i, j.
    [[nodiscard]] std::int64_t pairing(std::size_t i, std::size_t j) const noexcept {
        switch (kind_) {
            case LatticeKind::Curve:
            case LatticeKind::P2: return 1;
            case LatticeKind::BlowupP2:
                if (i != j) return 0;
                return i == 0 ? 1 : -1;
            case LatticeKind::P1xP1: return i == j ? 0 : 1;
        }
        return 0;
    }

    /// Generator label as used by the textual class notation.
    [[nodiscard]] std::string label(std::size_t i) const {
        switch (kind_) {
            case LatticeKind::Curve: return "P";
            case LatticeKind::P2: return "H";
            case LatticeKind::BlowupP2: return i == 0 ? "H" : "E" + std::to_string(i);
            case LatticeKind::P1xP1: return "F" + std::to_string(i + 1);
        }
        return "?";
    }

    /// Whether the generator class moves in a family with arbitrarily many
    /// pairwise disjoint effective representatives. Points on a curve, fibres
    /// on P1xP1 and exceptional classes are treated as such; H (on P2 or pulled
    /// back to a blowup) is not, since any two lines meet.
    [[nodiscard]] bool has_disjoint_representatives(std::size_t i) const noexcept {
        switch (kind_) {
            case LatticeKind::Curve: return true;
            case LatticeKind::P2: return false;
            case LatticeKind::BlowupP2: return i != 0;
            case LatticeKind::P1xP1: return true;
        }
        return false;
    }

    [[nodiscard]] std::string name() const {
        switch (kind_) {
            case LatticeKind::Curve: return "curve";
            case LatticeKind::P2: return "P2";
            case LatticeKind::BlowupP2: return "BlowupP2(" + std::to_string(m_) + ")";
            case LatticeKind::P1xP1: return "P1xP1";
        }
        return "?";
    }

    friend bool operator==(const Lattice&, const Lattice&) = default;

private:
    Lattice(LatticeKind kind, std::size_t m) : kind_(kind), m_(m) {}

    LatticeKind kind_;
    std::size_t m_;
};

/// Integer vector in the generator basis of a lattice.
class DivisorClass {
public:
    explicit DivisorClass(Lattice lattice) : lattice_(lattice), coeffs_(lattice.rank(), 0) {}
    DivisorClass(Lattice lattice, std::vector<std::int64_t> coeffs) : lattice_(lattice), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != lattice_.rank()) {
            throw Error(Errc::ShapeMismatch, "class on " + lattice_.name() + " needs " +
                                                 std::to_string(lattice_.rank()) + " coefficients");
        }
    }

    static DivisorClass zero(Lattice lattice) { return DivisorClass(lattice); }
    static DivisorClass generator(Lattice lattice, std::size_t i, std::int64_t multiple = 1) {
        DivisorClass c(lattice);
        c.coeffs_.at(i) = multiple;
        return c;
    }
    /// d times the point class on a curve.
    static DivisorClass points(std::int64_t d) { return generator(Lattice::curve(), 0, d); }
    /// a times the hyperplane class on P2.
    static DivisorClass hyperplane(std::int64_t a) { return generator(Lattice::p2(), 0, a); }

    [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
    [[nodiscard]] const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::int64_t operator[](std::size_t i) const { return coeffs_.at(i); }

    [[nodiscard]] bool is_zero() const noexcept {
        for (auto c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    /// Coefficient sum; the degree for rank-one lattices.
    [[nodiscard]] std::int64_t total() const noexcept {
        return std::accumulate(coeffs_.begin(), coeffs_.end(), std::int64_t{0});
    }

    DivisorClass& operator+=(const DivisorClass& o) {
        require_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    DivisorClass& operator-=(const DivisorClass& o) {
        require_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
    friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
    friend DivisorClass operator*(std::int64_t k, DivisorClass a) {
        for (auto& c : a.coeffs_) c *= k;
        return a;
    }
    DivisorClass operator-() const { return -1 * *this; }

    void require_same(const DivisorClass& o) const {
        if (lattice_ != o.lattice_) {
            throw Error(Errc::LatticeMismatch, "classes live on " + lattice_.name() + " and " + o.lattice_.name());
        }
    }

    friend bool operator==(const DivisorClass&, const DivisorClass&) = default;

private:
    Lattice lattice_;
    std::vector<std::int64_t> coeffs_;
};

/// Symmetric bilinear intersection pairing. On a curve this is the degree
/// pairing with (point)^2 = 1, so intersecting with the point class gives the degree.
inline std::int64_t intersect(const DivisorClass& a, const DivisorClass& b) {
    a.require_same(b);
    const auto& L = a.lattice();
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < L.rank(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < L.rank(); ++j) sum += a[i] * L.pairing(i, j) * b[j];
    }
    return sum;
}

/// Membership in the simplicial cone spanned by the generators. On BlowupP2
/// this excludes strict transforms such as f*H - E1.
inline bool is_effective(const DivisorClass& c) noexcept {
    for (auto v : c.coeffs()) {
        if (v < 0) return false;
    }
    return true;
}

/// Maximal number of irreducible effective summands (unit generator multiples),
/// or nullopt when the class is not effective.
inline std::optional<std::int64_t> decompose_max(const DivisorClass& c) {
    if (!is_effective(c)) return std::nullopt;
    return c.total();
}

struct BlowupSplit {
    DivisorClass pullback;                  // downstairs class on P2
    std::vector<std::int64_t> exceptional;  // E_j coefficients
};

inline DivisorClass pullback(const DivisorClass& c, std::size_t m) {
    if (c.lattice().kind() != LatticeKind::P2) throw Error(Errc::LatticeMismatch, "pullback expects a class on P2");
    std::vector<std::int64_t> coeffs(1 + m, 0);
    coeffs[0] = c[0];
    return {Lattice::blowup_p2(m), std::move(coeffs)};
}

/// D = f*D_X + sum m_j E_j, uniquely.
inline BlowupSplit blowup_split(const DivisorClass& c) {
    if (c.lattice().kind() != LatticeKind::BlowupP2) {
        throw Error(Errc::LatticeMismatch, "blowup_split expects a class on a blowup of P2");
    }
    std::vector<std::int64_t> ex(c.coeffs().begin() + 1, c.coeffs().end());
    return {DivisorClass::hyperplane(c[0]), std::move(ex)};
}

inline DivisorClass pushforward(const DivisorClass& c) { return blowup_split(c).pullback; }

/// Inverse of blowup_split.
inline DivisorClass recompose(const BlowupSplit& s) {
    auto c = pullback(s.pullback, s.exceptional.size());
    std::vector<std::int64_t> coeffs = c.coeffs();
    for (std::size_t j = 0; j < s.exceptional.size(); ++j) coeffs[1 + j] = s.exceptional[j];
    return {c.lattice(), std::move(coeffs)};
}

}  // namespace hierdepth::picard
