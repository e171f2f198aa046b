/**
 * @file exactlin.hpp
 * @brief Exact dense linear algebra over GF(p) and Q.
 *
 * A field is a small context object (`PrimeField`, `RationalField`) that owns
 * the arithmetic; `Matrix<F>` stores the context plus row-major entries.
 * Every routine here is exact, so kernels, ranks and solutions are certified
 * without tolerances.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace nakayama {

inline bool is_prime_number(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

/// Runtime description of the ground field.
struct FieldSpec {
    enum class Kind { prime, rational };

    Kind kind = Kind::prime;
    std::uint32_t p = 2;

    static FieldSpec prime(std::int64_t p) {
        // Products of two residues must fit in 64 bits.
        if (p >= (std::int64_t{1} << 31) || !is_prime_number(p)) {
            throw InvalidParameter("field characteristic " + std::to_string(p) + " is not a supported prime");
        }
        return FieldSpec{Kind::prime, static_cast<std::uint32_t>(p)};
    }
    static FieldSpec rational() { return FieldSpec{Kind::rational, 0}; }

    bool is_prime() const { return kind == Kind::prime; }

    std::string name() const { return is_prime() ? "GF(" + std::to_string(p) + ")" : "Q"; }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

class PrimeField {
public:
    using value_type = std::uint32_t;

    explicit PrimeField(std::uint32_t p) : p_(FieldSpec::prime(p).p) {}
    explicit PrimeField(const FieldSpec& spec) : p_(spec.p) {
        if (!spec.is_prime()) throw FieldMismatch("expected a prime field, got " + spec.name());
    }

    std::uint32_t characteristic() const { return p_; }
    FieldSpec spec() const { return FieldSpec{FieldSpec::Kind::prime, p_}; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(std::int64_t v) const {
        auto r = v % static_cast<std::int64_t>(p_);
        return static_cast<value_type>(r < 0 ? r + p_ : r);
    }
    bool is_zero(value_type a) const { return a == 0; }
    value_type add(value_type a, value_type b) const {
        std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<value_type>(s >= p_ ? s - p_ : s);
    }
    value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
    value_type sub(value_type a, value_type b) const { return add(a, neg(b)); }
    value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>((std::uint64_t{a} * b) % p_);
    }
    value_type inv(value_type a) const {
        if (a == 0) throw InvalidParameter("division by zero in " + spec().name());
        // a^(p-2)
        std::uint64_t result = 1, base = a, e = p_ - 2;
        while (e > 0) {
            if (e & 1) result = result * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return static_cast<value_type>(result);
    }
    /// a -= b * c
    void sub_mul(value_type& a, value_type b, value_type c) const { a = sub(a, mul(b, c)); }
    std::string to_string(value_type a) const { return std::to_string(a); }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

class RationalField {
public:
    using value_type = boost::multiprecision::cpp_rational;

    RationalField() = default;
    explicit RationalField(const FieldSpec& spec) {
        if (spec.is_prime()) throw FieldMismatch("expected the rationals, got " + spec.name());
    }

    FieldSpec spec() const { return FieldSpec::rational(); }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(std::int64_t v) const { return v; }
    bool is_zero(const value_type& a) const { return a.is_zero(); }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const {
        if (a.is_zero()) throw InvalidParameter("division by zero in Q");
        return 1 / a;
    }
    void sub_mul(value_type& a, const value_type& b, const value_type& c) const { a -= b * c; }
    std::string to_string(const value_type& a) const { return a.str(); }

    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class F>
concept ExactField = std::equality_comparable<F> && requires(const F f, typename F::value_type a) {
    { f.zero() } -> std::convertible_to<typename F::value_type>;
    { f.one() } -> std::convertible_to<typename F::value_type>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
    { f.add(a, a) } -> std::convertible_to<typename F::value_type>;
    { f.mul(a, a) } -> std::convertible_to<typename F::value_type>;
    { f.inv(a) } -> std::convertible_to<typename F::value_type>;
    { f.spec() } -> std::same_as<FieldSpec>;
};

/// Calls `fn(field)` with the concrete field context described by `spec`.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
    if (spec.is_prime()) return std::forward<Fn>(fn)(PrimeField(spec));
    return std::forward<Fn>(fn)(RationalField(spec));
}

template <ExactField F>
class Matrix {
public:
    using value_type = typename F::value_type;

    explicit Matrix(F field, std::size_t rows = 0, std::size_t cols = 0)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

    static Matrix identity(F field, std::size_t n) {
        Matrix m(std::move(field), n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = m.field_.one();
        return m;
    }

    static Matrix from_rows(F field, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
        std::size_t r = rows.size();
        std::size_t c = r == 0 ? 0 : rows.begin()->size();
        Matrix m(std::move(field), r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c) throw DimensionMismatch("ragged matrix literal");
            std::size_t j = 0;
            for (auto v : row) m(i, j++) = m.field_.from_int(v);
            ++i;
        }
        return m;
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const {
        for (const auto& v : data_) {
            if (!field_.is_zero(v)) return false;
        }
        return true;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix column(std::size_t j) const { return columns({j}); }

    Matrix columns(const std::vector<std::size_t>& idx) const {
        Matrix out(field_, rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < idx.size(); ++k) out(i, k) = (*this)(i, idx[k]);
        return out;
    }

    Matrix row_block(std::size_t first, std::size_t count) const {
        Matrix out(field_, count, cols_);
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(first + i, j);
        return out;
    }

    /// Writes `block` with its top-left corner at (r0, c0).
    void set_block(std::size_t r0, std::size_t c0, const Matrix& block) {
        check_field(block);
        if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_) throw DimensionMismatch("block out of range");
        for (std::size_t i = 0; i < block.rows_; ++i)
            for (std::size_t j = 0; j < block.cols_; ++j) (*this)(r0 + i, c0 + j) = block(i, j);
    }

    Matrix operator*(const Matrix& rhs) const {
        check_field(rhs);
        if (cols_ != rhs.rows_) {
            throw DimensionMismatch("product of " + shape() + " and " + rhs.shape());
        }
        Matrix out(field_, rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const auto& a = (*this)(i, k);
                if (field_.is_zero(a)) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) {
                    if (field_.is_zero(rhs(k, j))) continue;
                    out(i, j) = field_.add(out(i, j), field_.mul(a, rhs(k, j)));
                }
            }
        }
        return out;
    }

    Matrix operator+(const Matrix& rhs) const { return combine(rhs, false); }
    Matrix operator-(const Matrix& rhs) const { return combine(rhs, true); }

    Matrix scaled(const value_type& s) const {
        Matrix out(*this);
        for (auto& v : out.data_) v = field_.mul(v, s);
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
        os << '[';
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m.field_.to_string(m(i, j));
        }
        return os << ']';
    }

    void check_field(const Matrix& other) const {
        if (!(field_ == other.field_)) {
            throw FieldMismatch("matrices over " + field_.spec().name() + " and " + other.field_.spec().name());
        }
    }

private:
    Matrix combine(const Matrix& rhs, bool subtract) const {
        check_field(rhs);
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("sum of " + shape() + " and " + rhs.shape());
        Matrix out(*this);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            out.data_[i] = subtract ? field_.sub(data_[i], rhs.data_[i]) : field_.add(data_[i], rhs.data_[i]);
        }
        return out;
    }

    F field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<value_type> data_;
};

/// Horizontal concatenation [a | b].
template <ExactField F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
    a.check_field(b);
    if (a.rows() != b.rows()) throw DimensionMismatch("hstack of " + a.shape() + " and " + b.shape());
    Matrix<F> out(a.field(), a.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(0, a.cols(), b);
    return out;
}

/// Vertical concatenation.
template <ExactField F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
    a.check_field(b);
    if (a.cols() != b.cols()) throw DimensionMismatch("vstack of " + a.shape() + " and " + b.shape());
    Matrix<F> out(a.field(), a.rows() + b.rows(), a.cols());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), 0, b);
    return out;
}

template <ExactField F>
Matrix<F> block_diagonal(const F& field, const std::vector<Matrix<F>>& blocks) {
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) {
        r += b.rows();
        c += b.cols();
    }
    Matrix<F> out(field, r, c);
    r = c = 0;
    for (const auto& b : blocks) {
        out.set_block(r, c, b);
        r += b.rows();
        c += b.cols();
    }
    return out;
}

template <ExactField F>
struct RrefResult {
    std::size_t rank;
    Matrix<F> reduced;
    std::vector<std::size_t> pivot_columns;
};

/// Gauss-Jordan elimination to reduced row echelon form.
template <ExactField F>
RrefResult<F> rref(Matrix<F> m) {
    const F& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && f.is_zero(m(sel, col))) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row) {
            for (std::size_t j = col; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
        }
        auto inv = f.inv(m(row, col));
        // The systems built here are sparse; only the pivot row's nonzero columns take part.
        std::vector<std::size_t> support;
        for (std::size_t j = col; j < m.cols(); ++j) {
            if (f.is_zero(m(row, j))) continue;
            m(row, j) = f.mul(m(row, j), inv);
            support.push_back(j);
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || f.is_zero(m(i, col))) continue;
            auto factor = m(i, col);
            for (auto j : support) f.sub_mul(m(i, j), factor, m(row, j));
        }
        pivots.push_back(col);
        ++row;
    }
    return {pivots.size(), std::move(m), std::move(pivots)};
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m) {
    // Eliminating along the shorter side is cheaper and gives the same rank.
    if (m.rows() > m.cols()) return rref(m.transpose()).rank;
    return rref(m).rank;
}

/// Columns form a basis of the null space {x : m x = 0}.
template <ExactField F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
    const F& f = m.field();
    auto [r, red, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (!is_pivot[j]) free_cols.push_back(j);
    }
    Matrix<F> basis(f, m.cols(), free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        basis(free_cols[k], k) = f.one();
        for (std::size_t i = 0; i < r; ++i) basis(pivots[i], k) = f.neg(red(i, free_cols[k]));
    }
    return basis;
}

template <ExactField F>
struct Solution {
    Matrix<F> particular;
    Matrix<F> null_basis;
};

/// Solves a * x = b. Returns nullopt when the system is inconsistent.
template <ExactField F>
std::optional<Solution<F>> solve(const Matrix<F>& a, const Matrix<F>& b) {
    a.check_field(b);
    if (a.rows() != b.rows()) throw DimensionMismatch("solve with " + a.shape() + " and " + b.shape());
    const F& f = a.field();
    auto [r, red, pivots] = rref(hstack(a, b));
    for (auto p : pivots) {
        if (p >= a.cols()) return std::nullopt;
    }
    Matrix<F> x(f, a.cols(), b.cols());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[i], j) = red(i, a.cols() + j);
    return Solution<F>{std::move(x), kernel_basis(a)};
}

/// Indices of standard basis vectors that extend the column space of `m` to the whole space.
template <ExactField F>
std::vector<std::size_t> complement_columns(const Matrix<F>& m) {
    Matrix<F> aug = hstack(m, Matrix<F>::identity(m.field(), m.rows()));
    auto res = rref(std::move(aug));
    std::vector<std::size_t> out;
    for (auto p : res.pivot_columns) {
        if (p >= m.cols()) out.push_back(p - m.cols());
    }
    return out;
}

/// A maximal linearly independent subset of the columns of `m`, as indices.
template <ExactField F>
std::vector<std::size_t> independent_columns(const Matrix<F>& m) {
    return rref(m).pivot_columns;
}

/// Inverse of a square matrix; throws InvalidParameter when singular.
template <ExactField F>
Matrix<F> inverse(const Matrix<F>& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square " + m.shape());
    auto sol = solve(m, Matrix<F>::identity(m.field(), m.rows()));
    if (!sol || sol->null_basis.cols() != 0) throw InvalidParameter("matrix is singular");
    return sol->particular;
}

}  // namespace nakayama
