#pragma once

// Exact arithmetic and dense linear algebra over prime fields F_p.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hierdepth/error.hpp"

namespace hierdepth::gf {

/// Deterministic trial division; adequate for the supported range p <= 2^31.
constexpr bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0 || n % 3 == 0) return false;
    for (std::uint64_t d = 5; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

class Fp;

/// Field descriptor for F_p. Cheap to copy; all element operations are exact mod p.
class PrimeField {
public:
    static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

    explicit PrimeField(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
        if (p < 2 || p > kMaxModulus || !is_prime(p)) {
            throw Error(Errc::NotPrime, "modulus " + std::to_string(p) + " is not a prime in [2, 2^31]");
        }
    }

    [[nodiscard]] std::uint32_t p() const noexcept { return p_; }

    [[nodiscard]] std::uint32_t reduce(std::int64_t v) const noexcept {
        const auto m = static_cast<std::int64_t>(p_);
        auto r = v % m;
        if (r < 0) r += m;
        return static_cast<std::uint32_t>(r);
    }

    [[nodiscard]] std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
        const std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
    }
    [[nodiscard]] std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
        return a >= b ? a - b : static_cast<std::uint32_t>(std::uint64_t{a} + p_ - b);
    }
    [[nodiscard]] std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
    [[nodiscard]] std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
        return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
    }
    [[nodiscard]] std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept {
        std::uint32_t result = 1 % p_;
        while (e > 0) {
            if (e & 1U) result = mul(result, a);
            a = mul(a, a);
            e >>= 1U;
        }
        return result;
    }
    /// Inverse by Fermat; `a` must be nonzero.
    [[nodiscard]] std::uint32_t inv(std::uint32_t a) const {
        if (a % p_ == 0) throw Error(Errc::InvalidArgument, "zero has no inverse");
        return pow(a, p_ - 2);
    }

    [[nodiscard]] Fp element(std::int64_t v) const noexcept;

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

/// A single element of F_p, carrying its modulus.
class Fp {
public:
    Fp(std::uint32_t value, PrimeField field) noexcept : value_(value % field.p()), field_(field) {}

    [[nodiscard]] std::uint32_t value() const noexcept { return value_; }
    [[nodiscard]] PrimeField field() const noexcept { return field_; }
    [[nodiscard]] std::uint32_t modulus() const noexcept { return field_.p(); }
    [[nodiscard]] bool is_zero() const noexcept { return value_ == 0; }

    [[nodiscard]] Fp inv() const { return {field_.inv(value_), field_}; }

    friend Fp operator+(Fp a, Fp b) { return {a.field_.add(a.value_, b.checked(a).value_), a.field_}; }
    friend Fp operator-(Fp a, Fp b) { return {a.field_.sub(a.value_, b.checked(a).value_), a.field_}; }
    friend Fp operator*(Fp a, Fp b) { return {a.field_.mul(a.value_, b.checked(a).value_), a.field_}; }
    friend Fp operator/(Fp a, Fp b) { return a * b.checked(a).inv(); }
    Fp operator-() const noexcept { return {field_.neg(value_), field_}; }

    friend bool operator==(const Fp&, const Fp&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.value_; }

private:
    const Fp& checked(const Fp& other) const {
        if (field_ != other.field_) throw Error(Errc::InvalidArgument, "mixing elements of different fields");
        return *this;
    }

    std::uint32_t value_;
    PrimeField field_;
};

inline Fp PrimeField::element(std::int64_t v) const noexcept { return {reduce(v), *this}; }

/// `field_new` from the toolkit vocabulary.
inline PrimeField field_new(std::uint64_t p) { return PrimeField(p); }

/// Dense row-major matrix over F_p.
class FMatrix {
public:
    FMatrix(PrimeField field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static FMatrix identity(PrimeField field, std::size_t n) {
        FMatrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
        return m;
    }

    /// Entries are reduced mod p; all rows must have equal length.
    static FMatrix from_rows(PrimeField field, const std::vector<std::vector<std::int64_t>>& rows) {
        const std::size_t cols = rows.empty() ? 0 : rows.front().size();
        FMatrix m(field, rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw Error(Errc::ShapeMismatch, "ragged row list");
            for (std::size_t j = 0; j < cols; ++j) m.data_[i * cols + j] = field.reduce(rows[i][j]);
        }
        return m;
    }
    static FMatrix from_rows(PrimeField field, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
        std::vector<std::vector<std::int64_t>> v;
        for (const auto& r : rows) v.emplace_back(r);
        return from_rows(field, v);
    }

    [[nodiscard]] PrimeField field() const noexcept { return field_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return rows_ == 0; }

    [[nodiscard]] std::uint32_t get(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, std::int64_t v) { data_[i * cols_ + j] = field_.reduce(v); }
    [[nodiscard]] Fp at(std::size_t i, std::size_t j) const { return {get(i, j), field_}; }

    [[nodiscard]] std::span<const std::uint32_t> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<std::uint32_t> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    void append_row(std::span<const std::uint32_t> r) {
        if (r.size() != cols_) throw Error(Errc::ShapeMismatch, "row length does not match column count");
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    [[nodiscard]] bool is_zero() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](std::uint32_t v) { return v == 0; });
    }

    [[nodiscard]] FMatrix transpose() const {
        FMatrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = get(i, j);
        return t;
    }

    /// Keeps the listed columns, in the given order.
    [[nodiscard]] FMatrix select_columns(std::span<const std::size_t> keep) const {
        FMatrix out(field_, rows_, keep.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < keep.size(); ++j) out.data_[i * keep.size() + j] = get(i, keep[j]);
        return out;
    }

    friend FMatrix operator*(const FMatrix& a, const FMatrix& b) {
        if (a.field_ != b.field_) throw Error(Errc::InvalidArgument, "matrix fields differ");
        if (a.cols_ != b.rows_) throw Error(Errc::ShapeMismatch, "inner dimensions differ");
        FMatrix c(a.field_, a.rows_, b.cols_);
        const auto& f = a.field_;
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto aik = a.get(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    auto& cij = c.data_[i * c.cols_ + j];
                    cij = f.add(cij, f.mul(aik, b.get(k, j)));
                }
            }
        }
        return c;
    }

    friend bool operator==(const FMatrix&, const FMatrix&) = default;

    friend std::ostream& operator<<(std::ostream& os, const FMatrix& m) {
        for (std::size_t i = 0; i < m.rows_; ++i) {
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m.get(i, j);
            os << '\n';
        }
        return os;
    }

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint32_t> data_;
};

/// Reduced row-echelon form with zero rows dropped, plus pivot columns.
struct Echelon {
    FMatrix reduced;
    std::vector<std::size_t> pivots;
};

inline Echelon rref(FMatrix m) {
    const auto f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t lead_row = 0;
    for (std::size_t col = 0; col < m.cols() && lead_row < m.rows(); ++col) {
        std::size_t sel = lead_row;
        while (sel < m.rows() && m.get(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != lead_row) {
            auto a = m.row(sel);
            auto b = m.row(lead_row);
            std::swap_ranges(a.begin(), a.end(), b.begin());
        }
        auto pivot_row = m.row(lead_row);
        const auto scale = f.inv(pivot_row[col]);
        for (auto& v : pivot_row) v = f.mul(v, scale);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead_row) continue;
            const auto factor = m.get(r, col);
            if (factor == 0) continue;
            auto target = m.row(r);
            for (std::size_t j = col; j < m.cols(); ++j) target[j] = f.sub(target[j], f.mul(factor, pivot_row[j]));
        }
        pivots.push_back(col);
        ++lead_row;
    }
    FMatrix reduced(f, 0, m.cols());
    for (std::size_t r = 0; r < lead_row; ++r) reduced.append_row(m.row(r));
    return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const FMatrix& m) { return rref(m).pivots.size(); }

/// Canonical basis (RREF rows) of the row space; equal subspaces give equal matrices.
inline FMatrix row_space(const FMatrix& m) { return rref(m).reduced; }

/// Rows form the canonical (RREF) basis of {v : M v^T = 0}; row count = cols - rank.
inline FMatrix kernel_basis(const FMatrix& m) {
    const auto f = m.field();
    const auto [reduced, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;

    FMatrix basis(f, 0, m.cols());
    std::vector<std::uint32_t> v(m.cols());
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::fill(v.begin(), v.end(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(reduced.get(i, free));
        basis.append_row(v);
    }
    return row_space(basis);
}

/// Coordinates of a linear functional's values on each basis row: out[i] = <row_i, w>.
inline std::vector<std::uint32_t> apply_functional(const FMatrix& basis, std::span<const std::uint32_t> w) {
    if (w.size() != basis.cols()) throw Error(Errc::ShapeMismatch, "functional length does not match ambient dimension");
    const auto f = basis.field();
    std::vector<std::uint32_t> out(basis.rows(), 0);
    for (std::size_t i = 0; i < basis.rows(); ++i) {
        auto r = basis.row(i);
        std::uint32_t acc = 0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (w[j] != 0 && r[j] != 0) acc = f.add(acc, f.mul(r[j], w[j]));
        }
        out[i] = acc;
    }
    return out;
}

/// Canonical basis of {v in rowspan(basis) : <v, w_t> = 0 for every functional row w_t}.
inline FMatrix restrict_kernel(const FMatrix& basis, const FMatrix& functionals) {
    FMatrix values(basis.field(), 0, basis.rows());
    for (std::size_t t = 0; t < functionals.rows(); ++t) values.append_row(apply_functional(basis, functionals.row(t)));
    const auto combos = kernel_basis(values);
    return row_space(combos * basis);
}

}  // namespace hierdepth::gf
