#pragma once

// Evaluation codes from split bundles on P^1 / P^2 over F_p.
//
// A summand O(d), optionally twisted by ideal sheaves of points, contributes the
// space of degree-d forms vanishing to given orders at given points. The code is
// the image of the direct sum of those spaces under evaluation at a point set D,
// with coordinate j*r + i holding summand i at point j.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hierdepth/bundle.hpp"
#include "hierdepth/error.hpp"
#include "hierdepth/gf.hpp"

namespace hierdepth::agcode {

using gf::FMatrix;
using gf::PrimeField;

enum class Space { P1, P2 };

constexpr std::size_t variable_count(Space s) noexcept { return s == Space::P1 ? 2 : 3; }
inline std::string to_string(Space s) { return s == Space::P1 ? "P1" : "P2"; }

/// Projective point, normalized so the first nonzero coordinate is 1.
class ProjPoint {
public:
    static ProjPoint make(const PrimeField& f, const std::vector<std::int64_t>& coords) {
        std::vector<std::uint32_t> c;
        c.reserve(coords.size());
        for (auto v : coords) c.push_back(f.reduce(v));
        const auto lead = std::find_if(c.begin(), c.end(), [](auto v) { return v != 0; });
        if (lead == c.end()) throw Error(Errc::InvalidArgument, "the zero vector is not a projective point");
        const auto scale = f.inv(*lead);
        for (auto& v : c) v = f.mul(v, scale);
        return ProjPoint(std::move(c));
    }

    [[nodiscard]] const std::vector<std::uint32_t>& coords() const noexcept { return coords_; }
    [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }
    /// Index of the normalized coordinate (the one equal to 1).
    [[nodiscard]] std::size_t pivot() const noexcept {
        return static_cast<std::size_t>(std::find_if(coords_.begin(), coords_.end(), [](auto v) { return v != 0; }) -
                                        coords_.begin());
    }

    [[nodiscard]] std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < coords_.size(); ++i) s += (i ? ":" : "") + std::to_string(coords_[i]);
        return s;
    }

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
    friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;

private:
    explicit ProjPoint(std::vector<std::uint32_t> c) : coords_(std::move(c)) {}
    std::vector<std::uint32_t> coords_;
};

/// All F_p-rational points: [1:a:b] (a, b ascending), then [0:1:b], then [0:0:1].
inline std::vector<ProjPoint> rational_points(Space space, const PrimeField& f) {
    const auto n = variable_count(space);
    const auto p = static_cast<std::int64_t>(f.p());
    std::vector<ProjPoint> out;
    for (std::size_t pivot = 0; pivot < n; ++pivot) {
        const auto free = n - 1 - pivot;
        std::int64_t total = 1;
        for (std::size_t i = 0; i < free; ++i) total *= p;
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::vector<std::int64_t> c(n, 0);
            c[pivot] = 1;
            auto rest = idx;
            for (std::size_t i = n; i-- > pivot + 1;) {
                c[i] = rest % p;
                rest /= p;
            }
            out.push_back(ProjPoint::make(f, c));
        }
    }
    return out;
}

struct VanishingCondition {
    ProjPoint point;
    std::uint32_t order = 1;
};

/// Exponent vectors of degree-d monomials in n variables, lexicographically descending.
inline std::vector<std::vector<std::uint32_t>> monomials(std::size_t n, std::uint32_t d) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> e(n, 0);
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
        if (i + 1 == n) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (std::uint32_t a = left + 1; a-- > 0;) {
            e[i] = a;
            self(self, i + 1, left - a);
        }
    };
    rec(rec, 0, d);
    return out;
}

/// Degree-d forms vanishing to the prescribed orders; rows of `basis` are
/// coefficient vectors over monomials(variables, degree).
struct SectionBasis {
    Space space = Space::P2;
    std::uint32_t degree = 0;
    FMatrix basis;
    std::size_t condition_rank = 0;

    [[nodiscard]] std::size_t dimension() const noexcept { return basis.rows(); }
    [[nodiscard]] std::size_t unconstrained_dimension() const noexcept { return basis.cols(); }
};

namespace detail {

/// Binomial coefficients C(e, j) mod p for 0 <= j <= e <= d.
inline std::vector<std::vector<std::uint32_t>> binomials(std::uint32_t d, const PrimeField& f) {
    std::vector<std::vector<std::uint32_t>> c(d + 1);
    for (std::uint32_t e = 0; e <= d; ++e) {
        c[e].assign(e + 1, 1 % f.p());
        for (std::uint32_t j = 1; j < e; ++j) c[e][j] = f.add(c[e - 1][j - 1], c[e - 1][j]);
    }
    return c;
}

/// Multi-indices over `slots` coordinates with total strictly below `order`.
inline std::vector<std::vector<std::uint32_t>> small_multi_indices(std::size_t slots, std::uint32_t order) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> j(slots, 0);
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
        if (i == slots) {
            out.push_back(j);
            return;
        }
        for (std::uint32_t a = 0; a <= left; ++a) {
            j[i] = a;
            self(self, i + 1, left - a);
        }
    };
    if (order > 0) rec(rec, 0, order - 1);
    return out;
}

}  // namespace detail

/// Hasse-derivative functionals: coefficient of u^j in f(P + u) in the affine
/// chart of P's normalized coordinate. Valid in every characteristic.
inline FMatrix vanishing_conditions(std::uint32_t degree, const std::vector<VanishingCondition>& conditions,
                                    Space space, const PrimeField& f) {
    const auto n = variable_count(space);
    const auto mons = monomials(n, degree);
    const auto binom = detail::binomials(degree, f);
    FMatrix rows(f, 0, mons.size());
    std::vector<std::uint32_t> row(mons.size());
    for (const auto& cond : conditions) {
        if (cond.point.size() != n) throw Error(Errc::ShapeMismatch, "point " + cond.point.str() + " not in " + to_string(space));
        if (cond.order == 0) throw Error(Errc::InvalidArgument, "vanishing order must be positive");
        const auto pivot = cond.point.pivot();
        for (const auto& j : detail::small_multi_indices(n - 1, cond.order)) {
            for (std::size_t m = 0; m < mons.size(); ++m) {
                std::uint32_t value = 1;
                std::size_t slot = 0;
                for (std::size_t k = 0; k < n && value != 0; ++k) {
                    if (k == pivot) continue;
                    const auto e = mons[m][k];
                    const auto jk = j[slot++];
                    if (e < jk) {
                        value = 0;
                        break;
                    }
                    value = f.mul(value, f.mul(binom[e][jk], f.pow(cond.point.coords()[k], e - jk)));
                }
                row[m] = value;
            }
            rows.append_row(row);
        }
    }
    return rows;
}

inline SectionBasis vanishing_basis(std::uint32_t degree, const std::vector<VanishingCondition>& conditions,
                                    Space space, const PrimeField& f) {
    for (std::size_t a = 0; a < conditions.size(); ++a)
        for (std::size_t b = a + 1; b < conditions.size(); ++b)
            if (conditions[a].point == conditions[b].point) {
                throw Error(Errc::DuplicatePoint, "vanishing point " + conditions[a].point.str() + " listed twice");
            }
    const auto cond = vanishing_conditions(degree, conditions, space, f);
    const auto r = cond.rows() == 0 ? 0 : gf::rank(cond);
    return {space, degree, gf::kernel_basis(cond), r};
}

/// Value of the form with coefficient row `coeffs` at the normalized representative of P.
inline std::uint32_t evaluate(std::span<const std::uint32_t> coeffs, std::uint32_t degree, const ProjPoint& point,
                              const PrimeField& f) {
    const auto mons = monomials(point.size(), degree);
    if (mons.size() != coeffs.size()) throw Error(Errc::ShapeMismatch, "coefficient vector does not match degree");
    std::uint32_t acc = 0;
    for (std::size_t m = 0; m < mons.size(); ++m) {
        if (coeffs[m] == 0) continue;
        std::uint32_t term = coeffs[m];
        for (std::size_t k = 0; k < point.size(); ++k) term = f.mul(term, f.pow(point.coords()[k], mons[m][k]));
        acc = f.add(acc, term);
    }
    return acc;
}

/// Evaluation point. Points on an exceptional curve over a blown-up point are
/// modelled downstairs by evaluating at the blown-up point itself; `exceptional`
/// distinguishes several such points over one base.
struct EvalPoint {
    ProjPoint base;
    std::optional<std::size_t> exceptional;

    static EvalPoint regular(ProjPoint p) { return {std::move(p), std::nullopt}; }
    static EvalPoint on_exceptional(ProjPoint p, std::size_t index) { return {std::move(p), index}; }

    [[nodiscard]] std::string str() const {
        return exceptional ? "E(" + base.str() + ")#" + std::to_string(*exceptional) : base.str();
    }
    friend bool operator==(const EvalPoint&, const EvalPoint&) = default;
};

class LinearCode {
public:
    LinearCode(PrimeField field, std::size_t r, std::size_t n_points, FMatrix generator)
        : field_(field), r_(r), n_points_(n_points), generator_(std::move(generator)) {
        if (generator_.cols() != r_ * n_points_) throw Error(Errc::ShapeMismatch, "generator width must be r*N");
        message_dim_ = generator_.rows();
        k_ = generator_.rows() == 0 ? 0 : gf::rank(generator_);
    }

    [[nodiscard]] PrimeField field() const noexcept { return field_; }
    [[nodiscard]] std::size_t r() const noexcept { return r_; }
    [[nodiscard]] std::size_t point_count() const noexcept { return n_points_; }
    [[nodiscard]] std::size_t length() const noexcept { return r_ * n_points_; }
    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    [[nodiscard]] std::size_t message_dim() const noexcept { return message_dim_; }
    [[nodiscard]] const FMatrix& generator() const noexcept { return generator_; }

    /// Column index -> (point index, fibre index).
    [[nodiscard]] std::pair<std::size_t, std::size_t> block_of(std::size_t column) const {
        return {column / r_, column % r_};
    }

    [[nodiscard]] const std::optional<std::size_t>& d_min() const noexcept { return d_min_; }
    void set_d_min(std::size_t d) { d_min_ = d; }

    [[nodiscard]] const std::vector<EvalPoint>& points() const noexcept { return points_; }
    void set_points(std::vector<EvalPoint> pts) {
        if (pts.size() != n_points_) throw Error(Errc::ShapeMismatch, "point list length must be N");
        points_ = std::move(pts);
    }

    [[nodiscard]] std::vector<std::uint32_t> encode(std::span<const std::uint32_t> message) const {
        if (message.size() != generator_.rows()) throw Error(Errc::ShapeMismatch, "message length must be message_dim");
        std::vector<std::uint32_t> out(length(), 0);
        for (std::size_t i = 0; i < message.size(); ++i) {
            const auto c = field_.reduce(message[i]);
            if (c == 0) continue;
            const auto row = generator_.row(i);
            for (std::size_t j = 0; j < out.size(); ++j) out[j] = field_.add(out[j], field_.mul(c, row[j]));
        }
        return out;
    }

private:
    PrimeField field_;
    std::size_t r_;
    std::size_t n_points_;
    FMatrix generator_;
    std::size_t k_ = 0;
    std::size_t message_dim_ = 0;
    std::optional<std::size_t> d_min_;
    std::vector<EvalPoint> points_;
};

/// Generator rows: for basis element b of summand i, block j holds b(P_j) in slot i.
inline LinearCode build_code(const std::vector<SectionBasis>& bases, const std::vector<EvalPoint>& points,
                             const PrimeField& f) {
    if (bases.empty()) throw Error(Errc::EmptyMessageSpace, "no summands");
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = a + 1; b < points.size(); ++b)
            if (points[a] == points[b]) throw Error(Errc::DuplicatePoint, "evaluation point " + points[a].str() + " repeated");

    const auto r = bases.size();
    const auto n = points.size();
    std::size_t total = 0;
    for (const auto& b : bases) {
        if (b.space != bases.front().space) throw Error(Errc::ShapeMismatch, "summands live on different spaces");
        if (b.basis.field() != f) throw Error(Errc::InvalidArgument, "summand basis over a different field");
        total += b.dimension();
    }
    if (total == 0) throw Error(Errc::EmptyMessageSpace, "every summand has zero sections");
    for (const auto& pt : points)
        if (pt.base.size() != variable_count(bases.front().space)) {
            throw Error(Errc::ShapeMismatch, "point " + pt.base.str() + " not in " + to_string(bases.front().space));
        }

    FMatrix g(f, 0, r * n);
    std::vector<std::uint32_t> row(r * n);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t t = 0; t < bases[i].dimension(); ++t) {
            std::fill(row.begin(), row.end(), 0);
            for (std::size_t j = 0; j < n; ++j) row[j * r + i] = evaluate(bases[i].basis.row(t), bases[i].degree, points[j].base, f);
            g.append_row(row);
        }
    }
    LinearCode code(f, r, n, std::move(g));
    code.set_points(points);
    return code;
}

/// Exact minimum distance, or infeasible when the codeword-class count exceeds the budget.
struct DistanceResult {
    std::optional<std::size_t> value;
    std::uint64_t classes = 0;

    [[nodiscard]] bool infeasible() const noexcept { return !value; }
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// (p^k - 1)/(p - 1), saturating at uint64 max.
inline std::uint64_t projective_count(std::uint64_t p, std::size_t k) {
    std::uint64_t total = 0;
    std::uint64_t power = 1;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i < k; ++i) {
        if (total > kMax - power) return kMax;
        total += power;
        if (i + 1 < k) {
            if (power > kMax / p) return kMax;
            power *= p;
        }
    }
    return total;
}

namespace detail {

/// Minimum weight over codewords row[lead] + v*row[lead+1] + (anything on later rows).
inline std::size_t scan_class(const FMatrix& rows, std::size_t lead, std::optional<std::uint32_t> second) {
    const auto f = rows.field();
    const auto n = rows.cols();
    const auto k = rows.rows();
    std::vector<std::uint32_t> word(rows.row(lead).begin(), rows.row(lead).end());
    std::size_t first_free = lead + 1;
    if (second) {
        const auto r = rows.row(lead + 1);
        for (std::size_t j = 0; j < n; ++j) word[j] = f.add(word[j], f.mul(*second, r[j]));
        ++first_free;
    }
    std::vector<std::uint32_t> digits(k - first_free, 0);
    std::size_t best = n;
    while (true) {
        const auto w = static_cast<std::size_t>(std::count_if(word.begin(), word.end(), [](auto v) { return v != 0; }));
        best = std::min(best, w);
        // odometer: bumping digit t by one adds row (first_free + t); a wrap p-1 -> 0 is also +1 mod p
        std::size_t t = 0;
        for (; t < digits.size(); ++t) {
            const auto r = rows.row(first_free + t);
            for (std::size_t j = 0; j < n; ++j) word[j] = f.add(word[j], r[j]);
            if (++digits[t] < f.p()) break;
            digits[t] = 0;
        }
        if (t == digits.size()) break;
    }
    return best;
}

}  // namespace detail

/// Enumerates one representative per scalar class (leading coefficient 1) of the
/// nonzero codewords. Work is split by (leading row, next coefficient) and spread
/// over threads for large instances; the result is schedule-independent.
inline DistanceResult min_distance(const LinearCode& c, std::uint64_t budget = kDefaultBudget) {
    if (c.k() == 0) throw Error(Errc::EmptyMessageSpace, "the code has dimension zero");
    const auto rows = gf::row_space(c.generator());
    const auto k = rows.rows();
    const auto classes = projective_count(c.field().p(), k);
    if (classes > budget) return {std::nullopt, classes};

    struct Task {
        std::size_t lead;
        std::optional<std::uint32_t> second;
    };
    std::vector<Task> tasks;
    for (std::size_t lead = 0; lead < k; ++lead) {
        if (lead + 1 < k) {
            for (std::uint32_t v = 0; v < c.field().p(); ++v) tasks.push_back({lead, v});
        } else {
            tasks.push_back({lead, std::nullopt});
        }
    }

    const unsigned workers = classes < 200'000 ? 1U : std::max(1U, std::min(16U, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        std::size_t best = c.length();
        for (std::size_t t = next++; t < tasks.size(); t = next++) {
            best = std::min(best, detail::scan_class(rows, tasks[t].lead, tasks[t].second));
        }
        return best;
    };
    std::size_t best = c.length();
    if (workers == 1) {
        best = worker();
    } else {
        std::vector<std::future<std::size_t>> futures;
        for (unsigned w = 0; w < workers; ++w) futures.push_back(std::async(std::launch::async, worker));
        for (auto& fut : futures) best = std::min(best, fut.get());
    }
    return {best, classes};
}

/// Copy of `c` carrying its minimum distance, or nullopt if over budget.
inline std::optional<LinearCode> with_min_distance(LinearCode c, std::uint64_t budget = kDefaultBudget) {
    const auto d = min_distance(c, budget);
    if (d.infeasible()) return std::nullopt;
    c.set_d_min(*d.value);
    return c;
}

/// d_min / (r * N).
inline Rational normalized_distance(std::size_t d_min, std::size_t r, std::size_t n_points) {
    if (r * n_points == 0) throw Error(Errc::InvalidArgument, "empty code has no normalized distance");
    return {static_cast<std::int64_t>(d_min), static_cast<std::int64_t>(r * n_points)};
}

inline Rational normalized_distance(const LinearCode& c) {
    if (!c.d_min()) throw Error(Errc::DistanceUnknown, "minimum distance has not been computed");
    return normalized_distance(*c.d_min(), c.r(), c.point_count());
}

/// Indices of points whose whole r-column block is zero in every generator row.
inline std::vector<std::size_t> zero_blocks(const LinearCode& c) {
    std::vector<std::size_t> out;
    const auto& g = c.generator();
    for (std::size_t j = 0; j < c.point_count(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < g.rows() && zero; ++i)
            for (std::size_t s = 0; s < c.r() && zero; ++s)
                if (g.get(i, j * c.r() + s) != 0) zero = false;
        if (zero) out.push_back(j);
    }
    return out;
}

struct ContractionReport {
    std::size_t n_before = 0;
    std::size_t n_after = 0;
    std::vector<std::size_t> removed;
    std::size_t k_before = 0;
    std::size_t k_after = 0;
    std::optional<std::size_t> d_min_before;
    std::optional<std::size_t> d_min_after;
    std::optional<Rational> delta_before;
    std::optional<Rational> delta_after;
    bool empty_code = false;
};

struct Contraction {
    LinearCode contracted;
    ContractionReport report;
};

/// Deletes all-zero point blocks. Codeword weights are untouched, so a known
/// minimum distance carries over.
inline Contraction zero_block_contract(const LinearCode& c) {
    const auto removed = zero_blocks(c);
    std::vector<std::size_t> keep_cols;
    std::vector<EvalPoint> keep_points;
    for (std::size_t j = 0, z = 0; j < c.point_count(); ++j) {
        if (z < removed.size() && removed[z] == j) {
            ++z;
            continue;
        }
        for (std::size_t s = 0; s < c.r(); ++s) keep_cols.push_back(j * c.r() + s);
        if (!c.points().empty()) keep_points.push_back(c.points()[j]);
    }
    const auto n_after = c.point_count() - removed.size();
    LinearCode out(c.field(), c.r(), n_after, c.generator().select_columns(keep_cols));
    if (!c.points().empty()) out.set_points(std::move(keep_points));

    ContractionReport rep;
    rep.n_before = c.point_count();
    rep.n_after = n_after;
    rep.removed = removed;
    rep.k_before = c.k();
    rep.k_after = out.k();
    rep.empty_code = n_after == 0 || out.k() == 0;
    if (c.d_min() && !rep.empty_code) {
        out.set_d_min(*c.d_min());
        rep.d_min_before = c.d_min();
        rep.d_min_after = out.d_min();
        rep.delta_before = normalized_distance(c);
        rep.delta_after = normalized_distance(out);
    }
    return {std::move(out), std::move(rep)};
}

struct ComparisonReport {
    std::size_t n_before = 0;
    std::size_t n_after = 0;
    std::size_t n_zero = 0;
    std::size_t r = 0;
    std::size_t k = 0;
    std::size_t d_min = 0;
    Rational delta_before;
    Rational delta_after;
    Rational ratio;           // delta_after / delta_before
    Rational expected_ratio;  // N / (N - N_zero)
    bool ratio_matches = false;
    bool strict_improvement = false;
};

/// Contracts zero blocks, computes d_min on the contracted code, and compares
/// normalized distances. Returns nullopt when the enumeration is over budget.
inline std::optional<ComparisonReport> mmp_compare(const LinearCode& c, std::uint64_t budget = kDefaultBudget) {
    auto contraction = zero_block_contract(c);
    if (contraction.report.empty_code) throw Error(Errc::EmptyMessageSpace, "every evaluation block is zero");
    const auto d = min_distance(contraction.contracted, budget);
    if (d.infeasible()) return std::nullopt;

    ComparisonReport rep;
    rep.n_before = c.point_count();
    rep.n_after = contraction.contracted.point_count();
    rep.n_zero = contraction.report.removed.size();
    rep.r = c.r();
    rep.k = contraction.contracted.k();
    rep.d_min = *d.value;
    rep.delta_before = normalized_distance(rep.d_min, rep.r, rep.n_before);
    rep.delta_after = normalized_distance(rep.d_min, rep.r, rep.n_after);
    rep.ratio = rep.delta_after / rep.delta_before;
    rep.expected_ratio = Rational(static_cast<std::int64_t>(rep.n_before), static_cast<std::int64_t>(rep.n_after));
    rep.ratio_matches = rep.ratio == rep.expected_ratio;
    rep.strict_improvement = rep.n_zero >= 1 && rep.delta_after > rep.delta_before;
    return rep;
}

/// One generator row per line, entries in [0, p) separated by single spaces.
inline void export_generator(std::ostream& os, const LinearCode& c) {
    const auto& g = c.generator();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) os << (j ? " " : "") << g.get(i, j);
        os << '\n';
    }
}

}  // namespace hierdepth::agcode
