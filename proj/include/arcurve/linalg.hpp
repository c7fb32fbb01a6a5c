#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace arcurve {

template <class K>
using Vec = std::vector<K>;

/// Dense row-major matrix over a field.
template <class K>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, K(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    K& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const K& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Vec<K> row(std::size_t i) const { return Vec<K>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }
    Vec<K> col(std::size_t j) const {
        Vec<K> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void append_row(const Vec<K>& r) {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw std::invalid_argument("row length mismatch");
        a_.insert(a_.end(), r.begin(), r.end());
        ++rows_;
    }

    static Matrix from_columns(const std::vector<Vec<K>>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        return m;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const K& x = (*this)(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    if (!o(k, j).is_zero()) r(i, j) += x * o(k, j);
            }
        return r;
    }

    Vec<K> operator*(const Vec<K>& v) const {
        Vec<K> r(rows_, K(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k)
                if (!(*this)(i, k).is_zero() && !v[k].is_zero()) r[i] += (*this)(i, k) * v[k];
        return r;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<K> a_;
};

/// In-place reduced row echelon form. Returns pivot columns.
template <class K>
std::vector<std::size_t> rref(Matrix<K>& m) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m(sel, c).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
        K inv = m(r, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            K f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

template <class K>
std::size_t rank(Matrix<K> m) {
    return rref(m).size();
}

/// Basis of {v : m v = 0}.
template <class K>
std::vector<Vec<K>> nullspace(Matrix<K> m) {
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols(), false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<Vec<K>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_piv[free]) continue;
        Vec<K> v(m.cols(), K(0));
        v[free] = K(1);
        for (std::size_t r = 0; r < piv.size(); ++r)
            if (!m(r, free).is_zero()) v[piv[r]] = -m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some solution of m x = b, or nothing.
template <class K>
std::optional<Vec<K>> solve(const Matrix<K>& m, const Vec<K>& b) {
    Matrix<K> aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    auto piv = rref(aug);
    Vec<K> x(m.cols(), K(0));
    for (std::size_t r = 0; r < piv.size(); ++r) {
        if (piv[r] == m.cols()) return std::nullopt;
        x[piv[r]] = aug(r, m.cols());
    }
    return x;
}

/// Subspace of K^n kept in reduced echelon form. Optionally tracks how each
/// echelon row is combined from the vectors passed to add().
template <class K>
class Subspace {
public:
    explicit Subspace(std::size_t dim = 0, bool track = false) : dim_(dim), track_(track) {}

    std::size_t ambient_dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    std::size_t generators_added() const { return added_; }
    const std::vector<std::size_t>& pivots() const { return piv_; }
    const std::vector<Vec<K>>& rows() const { return rows_; }

    /// Canonical representative of v modulo the subspace (zero on pivots).
    Vec<K> reduce(Vec<K> v) const {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            K c = v[piv_[r]];
            if (c.is_zero()) continue;
            axpy(v, -c, rows_[r]);
        }
        return v;
    }

    bool contains(const Vec<K>& v) const { return is_zero_vec(reduce(v)); }

    /// Adds v; returns true when v was independent of the current span.
    bool add(Vec<K> v) {
        if (v.size() != dim_) throw std::invalid_argument("subspace dimension mismatch");
        std::size_t idx = added_++;
        Vec<K> comb;
        if (track_) {
            comb.assign(added_, K(0));
            comb[idx] = K(1);
        }
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            K c = v[piv_[r]];
            if (c.is_zero()) continue;
            axpy(v, -c, rows_[r]);
            if (track_) axpy_grow(comb, -c, combs_[r]);
        }
        std::size_t p = 0;
        while (p < dim_ && v[p].is_zero()) ++p;
        if (p == dim_) return false;
        K inv = v[p].inverse();
        for (auto& e : v) if (!e.is_zero()) e *= inv;
        if (track_) for (auto& e : comb) if (!e.is_zero()) e *= inv;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            K c = rows_[r][p];
            if (c.is_zero()) continue;
            axpy(rows_[r], -c, v);
            if (track_) axpy_grow(combs_[r], -c, comb);
        }
        // keep rows sorted by pivot
        std::size_t pos = 0;
        while (pos < piv_.size() && piv_[pos] < p) ++pos;
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
        piv_.insert(piv_.begin() + static_cast<std::ptrdiff_t>(pos), p);
        if (track_) combs_.insert(combs_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(comb));
        return true;
    }

    /// Coefficients c with v = sum c_i * (i-th added vector), if v is in the span.
    std::optional<Vec<K>> express(Vec<K> v) const {
        if (!track_) throw std::logic_error("subspace does not track combinations");
        Vec<K> comb(added_, K(0));
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            K c = v[piv_[r]];
            if (c.is_zero()) continue;
            axpy(v, -c, rows_[r]);
            axpy_grow(comb, c, combs_[r]);
        }
        if (!is_zero_vec(v)) return std::nullopt;
        return comb;
    }

    static bool is_zero_vec(const Vec<K>& v) {
        for (const auto& e : v) if (!e.is_zero()) return false;
        return true;
    }

private:
    static void axpy(Vec<K>& y, const K& a, const Vec<K>& x) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!x[i].is_zero()) y[i] += a * x[i];
    }
    static void axpy_grow(Vec<K>& y, const K& a, const Vec<K>& x) {
        if (y.size() < x.size()) y.resize(x.size(), K(0));
        axpy(y, a, x);
    }

    std::size_t dim_;
    bool track_;
    std::size_t added_ = 0;
    std::vector<Vec<K>> rows_;
    std::vector<std::size_t> piv_;
    std::vector<Vec<K>> combs_;
};

}  // namespace arcurve
