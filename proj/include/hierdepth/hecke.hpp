#pragma once

// Elementary transforms of split bundles on P^1 over F_p, modelled through
// global sections. A subsheaf E' of E = O(d_1)+...+O(d_r) is represented by the
// subspace H^0(E'(t)) of H^0(E(t)) for a fixed twist t >= 0. A transform at a
// rational point q along a fibre covector w replaces E' by the kernel of
// E' -> k(q), s |-> w . s(q).
//
// Coordinates: summand i with twisted degree e_i = d_i + t >= 0 contributes
// e_i + 1 coefficients c_0..c_{e_i} of the polynomial sum_j c_j x^j in the affine
// coordinate x; negative summands contribute nothing. Evaluation at q = a is
// sum_j c_j a^j; evaluation at infinity reads the top coefficient c_{e_i}.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hierdepth/depth.hpp"
#include "hierdepth/error.hpp"
#include "hierdepth/gf.hpp"
#include "hierdepth/picard.hpp"

namespace hierdepth::hecke {

using gf::FMatrix;
using gf::PrimeField;

/// An F_p-rational point of P^1: an affine coordinate, or infinity.
class RationalPoint {
public:
    static RationalPoint affine(std::uint32_t a) { return RationalPoint(a); }
    static RationalPoint infinity() { return RationalPoint(std::nullopt); }

    [[nodiscard]] bool is_infinity() const noexcept { return !coord_; }
    [[nodiscard]] std::uint32_t coordinate() const { return coord_.value(); }

    /// The j-th point of the fixed enumeration 0, 1, ..., p-1, infinity.
    static RationalPoint nth(std::size_t j, const PrimeField& f) {
        if (j < f.p()) return affine(static_cast<std::uint32_t>(j));
        if (j == f.p()) return infinity();
        throw Error(Errc::NotEnoughPoints, "P^1 over F_" + std::to_string(f.p()) + " has only " +
                                                std::to_string(f.p() + 1) + " rational points");
    }

    [[nodiscard]] std::string str() const { return coord_ ? std::to_string(*coord_) : "inf"; }

    friend bool operator==(const RationalPoint&, const RationalPoint&) = default;

private:
    explicit RationalPoint(std::optional<std::uint32_t> c) : coord_(c) {}
    std::optional<std::uint32_t> coord_;
};

/// Surjection onto the skyscraper at `point`, given by a nonzero fibre covector.
class PointFunctional {
public:
    PointFunctional(RationalPoint point, std::vector<std::uint32_t> covector)
        : point_(point), covector_(std::move(covector)) {
        if (std::all_of(covector_.begin(), covector_.end(), [](auto v) { return v == 0; })) {
            throw Error(Errc::InvalidArgument, "covector must be nonzero");
        }
    }

    /// Standard basis covector e_index of length r.
    static PointFunctional standard(RationalPoint point, std::size_t r, std::size_t index) {
        std::vector<std::uint32_t> w(r, 0);
        w.at(index) = 1;
        return {point, std::move(w)};
    }

    [[nodiscard]] const RationalPoint& point() const noexcept { return point_; }
    [[nodiscard]] const std::vector<std::uint32_t>& covector() const noexcept { return covector_; }

    friend bool operator==(const PointFunctional&, const PointFunctional&) = default;

private:
    RationalPoint point_;
    std::vector<std::uint32_t> covector_;
};

/// Section-space model of a subsheaf of a split bundle on P^1.
class SubsheafModel {
public:
    SubsheafModel(std::vector<std::int64_t> ambient_degrees, std::int64_t truncation, std::int64_t twist,
                  FMatrix basis, std::int64_t det_degree, std::size_t transforms_applied)
        : degrees_(std::move(ambient_degrees)),
          truncation_(truncation),
          twist_(twist),
          basis_(std::move(basis)),
          det_degree_(det_degree),
          transforms_(transforms_applied) {}

    [[nodiscard]] const std::vector<std::int64_t>& ambient_degrees() const noexcept { return degrees_; }
    [[nodiscard]] std::size_t rank() const noexcept { return degrees_.size(); }
    [[nodiscard]] std::int64_t truncation() const noexcept { return truncation_; }
    [[nodiscard]] std::int64_t twist() const noexcept { return twist_; }
    [[nodiscard]] const FMatrix& basis() const noexcept { return basis_; }
    [[nodiscard]] PrimeField field() const noexcept { return basis_.field(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return basis_.rows(); }
    [[nodiscard]] std::size_t ambient_dimension() const noexcept { return basis_.cols(); }
    [[nodiscard]] std::int64_t det_degree() const noexcept { return det_degree_; }
    [[nodiscard]] std::size_t transforms_applied() const noexcept { return transforms_; }

    /// Offset of summand i's coefficient block in the flat coordinate vector, and its width.
    [[nodiscard]] std::pair<std::size_t, std::size_t> block(std::size_t i) const {
        std::size_t offset = 0;
        for (std::size_t k = 0; k < i; ++k) offset += width(degrees_[k]);
        return {offset, width(degrees_.at(i))};
    }

    /// Flat coordinates of the functional s |-> w . s(q).
    [[nodiscard]] std::vector<std::uint32_t> functional_row(const PointFunctional& phi) const {
        if (phi.covector().size() != rank()) {
            throw Error(Errc::ShapeMismatch, "covector length " + std::to_string(phi.covector().size()) +
                                                 " does not match rank " + std::to_string(rank()));
        }
        const auto f = field();
        std::vector<std::uint32_t> row(ambient_dimension(), 0);
        for (std::size_t i = 0; i < rank(); ++i) {
            const auto w = f.reduce(phi.covector()[i]);
            const auto [offset, len] = block(i);
            if (w == 0 || len == 0) continue;
            if (phi.point().is_infinity()) {
                row[offset + len - 1] = w;
                continue;
            }
            std::uint32_t power = 1;
            const auto a = f.reduce(phi.point().coordinate());
            for (std::size_t j = 0; j < len; ++j) {
                row[offset + j] = f.mul(w, power);
                power = f.mul(power, a);
            }
        }
        return row;
    }

    friend bool operator==(const SubsheafModel&, const SubsheafModel&) = default;

private:
    std::size_t width(std::int64_t d) const noexcept {
        const auto e = d + twist_;
        return e >= 0 ? static_cast<std::size_t>(e + 1) : 0;
    }

    std::vector<std::int64_t> degrees_;
    std::int64_t truncation_;
    std::int64_t twist_;
    FMatrix basis_;
    std::int64_t det_degree_;
    std::size_t transforms_;
};

/// All sections of (O(d_1)+...+O(d_r))(twist); requires N >= max(0, max d_i).
inline SubsheafModel full_sections(const std::vector<std::int64_t>& degrees, std::int64_t truncation,
                                   const PrimeField& field, std::int64_t twist = 0) {
    if (degrees.empty()) throw Error(Errc::InvalidArgument, "rank must be positive");
    if (twist < 0) throw Error(Errc::InvalidArgument, "twist must be nonnegative");
    const auto top = std::max<std::int64_t>(0, *std::max_element(degrees.begin(), degrees.end()));
    if (truncation < top) {
        throw Error(Errc::BadTruncation, "truncation " + std::to_string(truncation) + " below max degree " +
                                             std::to_string(top));
    }
    std::size_t dim = 0;
    std::int64_t det = 0;
    for (auto d : degrees) {
        det += d;
        if (d + twist >= 0) dim += static_cast<std::size_t>(d + twist + 1);
    }
    return {degrees, truncation, twist, FMatrix::identity(field, dim), det, 0};
}

/// Kernel of the composite E' -> k(q). Drops dimension and det degree by one.
inline SubsheafModel apply_transform(const SubsheafModel& m, const PointFunctional& phi) {
    const auto row = m.functional_row(phi);
    const auto values = gf::apply_functional(m.basis(), row);
    if (std::all_of(values.begin(), values.end(), [](auto v) { return v == 0; })) {
        throw Error(Errc::VacuousTransform, "functional at " + phi.point().str() + " vanishes on the subspace");
    }
    FMatrix functional(m.field(), 0, m.ambient_dimension());
    functional.append_row(row);
    auto next = gf::restrict_kernel(m.basis(), functional);
    return {m.ambient_degrees(), m.truncation(), m.twist(), std::move(next), m.det_degree() - 1,
            m.transforms_applied() + 1};
}

/// Canonical basis of the joint kernel of several functionals.
inline FMatrix joint_kernel(const SubsheafModel& m, const std::vector<PointFunctional>& phis) {
    FMatrix functionals(m.field(), 0, m.ambient_dimension());
    for (const auto& phi : phis) functionals.append_row(m.functional_row(phi));
    return gf::restrict_kernel(m.basis(), functionals);
}

struct CommuteReport {
    std::optional<FMatrix> v12;  // transform by phi1 then phi2; empty if a step was vacuous
    std::optional<FMatrix> v21;
    FMatrix joint;
    std::size_t dim_before = 0;

    [[nodiscard]] bool equal() const { return v12 && v21 && *v12 == *v21 && *v12 == joint; }
    [[nodiscard]] std::optional<std::size_t> dim_v12() const {
        return v12 ? std::optional<std::size_t>(v12->rows()) : std::nullopt;
    }
    [[nodiscard]] std::optional<std::size_t> dim_v21() const {
        return v21 ? std::optional<std::size_t>(v21->rows()) : std::nullopt;
    }
    [[nodiscard]] std::size_t dim_joint() const { return joint.rows(); }
};

namespace detail {

inline std::optional<FMatrix> route(const SubsheafModel& m, const PointFunctional& a, const PointFunctional& b,
                                    bool propagate) {
    try {
        return apply_transform(apply_transform(m, a), b).basis();
    } catch (const Error& e) {
        if (propagate || e.code() != Errc::VacuousTransform) throw;
        return std::nullopt;
    }
}

}  // namespace detail

/// Transforms at distinct points commute: V12 = V21 = joint kernel.
inline CommuteReport commute_check(const SubsheafModel& m, const PointFunctional& phi1, const PointFunctional& phi2) {
    if (phi1.point() == phi2.point()) {
        throw Error(Errc::OverlappingSupport, "both transforms are supported at " + phi1.point().str());
    }
    return {detail::route(m, phi1, phi2, true), detail::route(m, phi2, phi1, true), joint_kernel(m, {phi1, phi2}),
            m.dimension()};
}

/// Same three routes for two transforms at one point; vacuous routes are recorded, not thrown.
inline CommuteReport probe_overlap(const SubsheafModel& m, const PointFunctional& phi1, const PointFunctional& phi2) {
    if (!(phi1.point() == phi2.point())) {
        throw Error(Errc::InvalidArgument, "probe_overlap needs equal points; use commute_check");
    }
    return {detail::route(m, phi1, phi2, false), detail::route(m, phi2, phi1, false), joint_kernel(m, {phi1, phi2}),
            m.dimension()};
}

/// Explicit filtration realizing the curve depth formula.
struct CurveFiltration {
    depth::HierFiltration filtration;
    /// chain[0] is E itself; chain[k] is the subsheaf after k transforms; chain.back() is E_0.
    std::vector<SubsheafModel> chain;
    std::vector<PointFunctional> transforms;
};

/// Smallest twist t >= 0 whose section space has room for `steps` transforms.
inline std::int64_t twist_for(const std::vector<std::int64_t>& degrees, std::int64_t steps) {
    for (std::int64_t t = 0;; ++t) {
        std::int64_t dim = 0;
        for (auto d : degrees)
            if (d + t >= 0) dim += d + t + 1;
        if (dim >= steps) return t;
    }
}

/// Chain of M = sum d_i - lambda0_degree transforms at the points 0, 1, ..., p-1, inf
/// (in that order); each uses the first standard covector that is nonzero on the
/// current subspace.
inline CurveFiltration build_curve_filtration(const std::vector<std::int64_t>& degrees, std::int64_t lambda0_degree,
                                              const PrimeField& field) {
    if (degrees.empty()) throw Error(Errc::InvalidArgument, "rank must be positive");
    std::int64_t total = 0;
    std::int64_t abs_total = 0;
    for (auto d : degrees) {
        total += d;
        abs_total += d < 0 ? -d : d;
    }
    const auto steps = total - lambda0_degree;
    if (steps < 0) throw Error(Errc::NegativeM, "sum of degrees is below the normalization degree");
    if (steps > static_cast<std::int64_t>(field.p()) + 1) {
        throw Error(Errc::NotEnoughPoints, std::to_string(steps) + " transforms need distinct points but P^1(F_" +
                                               std::to_string(field.p()) + ") has " +
                                               std::to_string(field.p() + 1));
    }

    const auto r = degrees.size();
    auto model = full_sections(degrees, abs_total + steps + 1, field, twist_for(degrees, steps));
    CurveFiltration out{{picard::DivisorClass::points(lambda0_degree), {}, r}, {model}, {}};

    for (std::int64_t j = 0; j < steps; ++j) {
        const auto q = RationalPoint::nth(static_cast<std::size_t>(j), field);
        std::optional<PointFunctional> chosen;
        for (std::size_t k = 0; k < r && !chosen; ++k) {
            auto phi = PointFunctional::standard(q, r, k);
            const auto values = gf::apply_functional(model.basis(), model.functional_row(phi));
            if (std::any_of(values.begin(), values.end(), [](auto v) { return v != 0; })) chosen = phi;
        }
        if (!chosen) throw Error(Errc::VacuousTransform, "every covector vanishes at " + q.str());
        model = apply_transform(model, *chosen);
        out.chain.push_back(model);
        out.transforms.push_back(*chosen);
        out.filtration.increments.push_back(picard::DivisorClass::points(1));
    }
    return out;
}

}  // namespace hierdepth::hecke
