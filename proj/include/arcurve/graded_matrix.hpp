#pragma once

#include "qelement.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcurve {

/// Matrix of polynomials; entry (i,j) is homogeneous of degree col_deg[j] - row_deg[i].
template <class K>
class GradedMatrix {
public:
    GradedMatrix() = default;
    GradedMatrix(std::vector<int> row_deg, std::vector<int> col_deg)
        : rows_(row_deg.size()), cols_(col_deg.size()), e_(rows_ * cols_), row_deg_(std::move(row_deg)),
          col_deg_(std::move(col_deg)) {}

    static GradedMatrix identity(const std::vector<int>& degs, const K& one) {
        GradedMatrix m(degs, degs);
        for (std::size_t i = 0; i < degs.size(); ++i) m(i, i) = WPoly<K>(one);
        return m;
    }
    static GradedMatrix scalar(const std::vector<int>& rows, int shift, const WPoly<K>& s) {
        std::vector<int> cols = rows;
        for (auto& c : cols) c += shift;
        GradedMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows.size(); ++i) m(i, i) = s;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<int>& row_degrees() const { return row_deg_; }
    const std::vector<int>& col_degrees() const { return col_deg_; }
    void set_degrees(std::vector<int> r, std::vector<int> c) {
        if (r.size() != rows_ || c.size() != cols_) throw std::invalid_argument("degree vector size mismatch");
        row_deg_ = std::move(r);
        col_deg_ = std::move(c);
    }

    WPoly<K>& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const WPoly<K>& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    std::vector<WPoly<K>> column(std::size_t j) const {
        std::vector<WPoly<K>> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_column(std::size_t j, const std::vector<WPoly<K>>& c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    /// Entry degrees agree with the degree vectors.
    bool degrees_consistent(int wx, int wy) const {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const auto& a = (*this)(i, j);
                if (a.is_zero()) continue;
                auto d = a.degree(wx, wy);
                if (!d || *d != col_deg_[j] - row_deg_[i]) return false;
            }
        return true;
    }

    bool is_zero() const {
        for (const auto& a : e_) if (!a.is_zero()) return false;
        return true;
    }

    bool has_unit_entry() const {
        for (const auto& a : e_) if (!a.coeff(0, 0).is_zero()) return true;
        return false;
    }

    GradedMatrix operator*(const GradedMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("graded matrix shape mismatch");
        GradedMatrix r(row_deg_, o.col_deg_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const auto& a = (*this)(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    if (!o(k, j).is_zero()) r(i, j) += a * o(k, j);
            }
        return r;
    }
    GradedMatrix operator+(const GradedMatrix& o) const {
        check_same_shape(o);
        GradedMatrix r = *this;
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
        return r;
    }
    GradedMatrix operator-(const GradedMatrix& o) const {
        check_same_shape(o);
        GradedMatrix r = *this;
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] -= o.e_[k];
        return r;
    }
    GradedMatrix operator-() const {
        GradedMatrix r = *this;
        for (auto& a : r.e_) a = -a;
        return r;
    }
    GradedMatrix scaled(const WPoly<K>& s) const {
        GradedMatrix r = *this;
        for (auto& a : r.e_) a = a * s;
        return r;
    }
    GradedMatrix scaled(const K& s) const {
        GradedMatrix r = *this;
        for (auto& a : r.e_) a = a.scaled(s);
        return r;
    }
    friend bool operator==(const GradedMatrix& a, const GradedMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const GradedMatrix& a, const GradedMatrix& b) { return !(a == b); }

    GradedMatrix transpose() const {
        std::vector<int> r, c;
        for (int d : col_deg_) r.push_back(-d);
        for (int d : row_deg_) c.push_back(-d);
        GradedMatrix t(r, c);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    template <class Ring>
    GradedMatrix reduced(const Ring& R) const {
        GradedMatrix r = *this;
        for (auto& a : r.e_) a = R.normal_form(a);
        return r;
    }

    /// Submatrix on the given row and column index lists.
    GradedMatrix sub(const std::vector<std::size_t>& ri, const std::vector<std::size_t>& ci) const {
        std::vector<int> rd, cd;
        for (auto i : ri) rd.push_back(row_deg_[i]);
        for (auto j : ci) cd.push_back(col_deg_[j]);
        GradedMatrix s(rd, cd);
        for (std::size_t a = 0; a < ri.size(); ++a)
            for (std::size_t b = 0; b < ci.size(); ++b) s(a, b) = (*this)(ri[a], ci[b]);
        return s;
    }

    /// [[A, B], [C, D]]; row degrees from A and C, column degrees from A and B.
    static GradedMatrix block(const GradedMatrix& A, const GradedMatrix& B, const GradedMatrix& C,
                              const GradedMatrix& D) {
        if (A.rows_ != B.rows_ || C.rows_ != D.rows_ || A.cols_ != C.cols_ || B.cols_ != D.cols_)
            throw std::invalid_argument("block shape mismatch");
        std::vector<int> rd = A.row_deg_, cd = A.col_deg_;
        rd.insert(rd.end(), C.row_deg_.begin(), C.row_deg_.end());
        cd.insert(cd.end(), B.col_deg_.begin(), B.col_deg_.end());
        GradedMatrix m(rd, cd);
        auto put = [&m](const GradedMatrix& X, std::size_t r0, std::size_t c0) {
            for (std::size_t i = 0; i < X.rows_; ++i)
                for (std::size_t j = 0; j < X.cols_; ++j) m(r0 + i, c0 + j) = X(i, j);
        };
        put(A, 0, 0);
        put(B, 0, A.cols_);
        put(C, A.rows_, 0);
        put(D, A.rows_, A.cols_);
        return m;
    }

    static GradedMatrix zeros(std::vector<int> rows, std::vector<int> cols) { return GradedMatrix(rows, cols); }

    /// Direct sum diag(A, B).
    static GradedMatrix diag(const GradedMatrix& A, const GradedMatrix& B) {
        return block(A, zeros(A.row_deg_, B.col_deg_), zeros(B.row_deg_, A.col_deg_), B);
    }

    std::vector<std::vector<std::string>> to_strings() const {
        std::vector<std::vector<std::string>> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i].push_back((*this)(i, j).to_string());
        return out;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += i ? ", [" : "[";
            for (std::size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
            s += "]";
        }
        return s + "]";
    }

private:
    void check_same_shape(const GradedMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("graded matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<WPoly<K>> e_;
    std::vector<int> row_deg_, col_deg_;
};

/// Pair (phi, psi) over S with phi psi = psi phi = g Id. cok phi has generator
/// degrees phi.row_degrees().
template <class K>
struct MatrixFactorization {
    GradedMatrix<K> phi;
    GradedMatrix<K> psi;
};

struct MFCheck {
    bool ok = false;
    bool reduced = false;
};

template <class K>
MFCheck mf_check(const MatrixFactorization<K>& mf, const HypersurfaceRing<K>& R) {
    MFCheck c;
    const auto& A = mf.phi;
    const auto& B = mf.psi;
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) return c;
    auto gI = GradedMatrix<K>::scalar(A.row_degrees(), R.deg_g(), R.g());
    auto gI2 = GradedMatrix<K>::scalar(B.row_degrees(), R.deg_g(), R.g());
    c.ok = (A * B) == gI && (B * A) == gI2;
    c.reduced = !A.has_unit_entry() && !B.has_unit_entry();
    return c;
}

/// The factorization of g attached to the ideal (x^m, y^n).
template <class K>
MatrixFactorization<K> mf_from_ideal(const HypersurfaceRing<K>& R) {
    if (!R.has_ideal()) throw std::invalid_argument("ideal parameters m, n are not set");
    int m = *R.m(), n = *R.n(), N = R.y_bound(), G = R.deg_g();
    auto top = (R.g() - R.mono(0, N)).divide_monomial(m, 0);
    if (!top) throw std::logic_error("g - y^(q+v) is not divisible by x^m");
    std::vector<int> a{m * R.q(), n * R.p()};
    std::vector<int> b{G, m * R.q() + n * R.p()};
    MatrixFactorization<K> mf{GradedMatrix<K>(a, b), GradedMatrix<K>(b, {a[0] + G, a[1] + G})};
    mf.phi(0, 0) = *top;
    mf.phi(0, 1) = -R.mono(0, n);
    mf.phi(1, 0) = R.mono(0, N - n);
    mf.phi(1, 1) = R.mono(m, 0);
    mf.psi(0, 0) = R.mono(m, 0);
    mf.psi(0, 1) = R.mono(0, n);
    mf.psi(1, 0) = -R.mono(0, N - n);
    mf.psi(1, 1) = *top;
    return mf;
}

/// (phi, psi) -> (psi, phi): cok psi is the syzygy of cok phi. The new psi
/// carries degrees shifted by deg g, so applying this twice returns the same
/// matrices presenting M(-deg g).
template <class K>
MatrixFactorization<K> syz_mf(const MatrixFactorization<K>& mf) {
    auto shifted = mf.phi;
    int G = 0;
    if (mf.psi.rows() > 0) G = mf.psi.col_degrees()[0] - mf.phi.row_degrees()[0];
    std::vector<int> r = mf.phi.row_degrees(), c = mf.phi.col_degrees();
    for (auto& d : r) d += G;
    for (auto& d : c) d += G;
    shifted.set_degrees(r, c);
    return {mf.psi, shifted};
}


namespace detail {

// phi <- E phi, psi <- psi E^-1 for E = (row k += c * row i)
template <class K>
void mf_row_op(MatrixFactorization<K>& mf, std::size_t k, std::size_t i, const WPoly<K>& c) {
    auto& A = mf.phi;
    auto& B = mf.psi;
    for (std::size_t j = 0; j < A.cols(); ++j)
        if (!A(i, j).is_zero()) A(k, j) += c * A(i, j);
    for (std::size_t r = 0; r < B.rows(); ++r)
        if (!B(r, k).is_zero()) B(r, i) -= B(r, k) * c;
}

// phi <- phi F, psi <- F^-1 psi for F = (col k += c * col j)
template <class K>
void mf_col_op(MatrixFactorization<K>& mf, std::size_t k, std::size_t j, const WPoly<K>& c) {
    auto& A = mf.phi;
    auto& B = mf.psi;
    for (std::size_t r = 0; r < A.rows(); ++r)
        if (!A(r, j).is_zero()) A(r, k) += A(r, j) * c;
    for (std::size_t s = 0; s < B.cols(); ++s)
        if (!B(k, s).is_zero()) B(j, s) -= c * B(k, s);
}

template <class K>
std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < n; ++i)
        if (i != skip) v.push_back(i);
    return v;
}

}  // namespace detail

/// Removes trivial summands (u, g/u) with u a unit entry of phi. The result
/// presents the same cokernel with no unit entries in phi.
template <class K>
MatrixFactorization<K> prune_mf(MatrixFactorization<K> mf) {
    while (true) {
        auto& A = mf.phi;
        std::optional<std::pair<std::size_t, std::size_t>> unit;
        for (std::size_t i = 0; i < A.rows() && !unit; ++i)
            for (std::size_t j = 0; j < A.cols() && !unit; ++j)
                if (!A(i, j).coeff(0, 0).is_zero()) unit = {i, j};
        if (!unit) return mf;
        auto [i, j] = *unit;
        K u = A(i, j).coeff(0, 0);
        K uinv = u.inverse();
        for (std::size_t k = 0; k < A.rows(); ++k) {
            if (k == i || A(k, j).is_zero()) continue;
            detail::mf_row_op(mf, k, i, -A(k, j).scaled(uinv));
        }
        for (std::size_t k = 0; k < A.cols(); ++k) {
            if (k == j || A(i, k).is_zero()) continue;
            detail::mf_col_op(mf, k, j, -A(i, k).scaled(uinv));
        }
        auto keep_r = detail::all_but<K>(A.rows(), i);
        auto keep_c = detail::all_but<K>(A.cols(), j);
        MatrixFactorization<K> next{mf.phi.sub(keep_r, keep_c), mf.psi.sub(keep_c, keep_r)};
        mf = std::move(next);
    }
}

/// Splits off free summands of cok phi (unit entries of psi). Returns the
/// remaining factorization and the generator degrees of the free part.
template <class K>
std::pair<MatrixFactorization<K>, std::vector<int>> split_free_mf(MatrixFactorization<K> mf) {
    auto swapped = prune_mf(MatrixFactorization<K>{mf.psi, mf.phi});
    // free summands of cok phi are the trivial summands (1, g) of (psi, phi)
    std::vector<int> free_degrees;
    MatrixFactorization<K> back{swapped.psi, swapped.phi};
    // degrees removed from the row list of phi are the free generator degrees
    std::vector<int> kept = back.phi.row_degrees();
    std::vector<int> all = mf.phi.row_degrees();
    std::multiset<int> pool(all.begin(), all.end());
    for (int d : kept) pool.erase(pool.find(d));
    free_degrees.assign(pool.begin(), pool.end());
    return {back, free_degrees};
}

enum class Over { S, R };

/// Some X with A X = B, solved column by column as a k-linear system. Over R
/// products are compared in normal form; over S exactly. X has row degrees
/// A.col_degrees() and column degrees B.col_degrees().
template <class K>
std::optional<GradedMatrix<K>> solve_right(const GradedMatrix<K>& A, const GradedMatrix<K>& B,
                                           const HypersurfaceRing<K>& R, Over over) {
    if (A.rows() != B.rows()) throw std::invalid_argument("solve_right: row count mismatch");
    auto basis = [&](int d) { return over == Over::R ? R.basis_R(d) : R.basis_S(d); };
    auto nf = [&](const WPoly<K>& a) { return over == Over::R ? R.normal_form(a) : a; };
    GradedMatrix<K> X(A.col_degrees(), B.col_degrees());
    for (std::size_t k = 0; k < B.cols(); ++k) {
        std::vector<std::pair<std::size_t, Mono>> unk;
        for (std::size_t j = 0; j < A.cols(); ++j)
            for (const auto& m : basis(B.col_degrees()[k] - A.col_degrees()[j])) unk.emplace_back(j, m);
        std::vector<std::pair<std::size_t, Mono>> eqs;
        std::map<std::pair<std::size_t, Mono>, std::size_t> eq_index;
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (const auto& m : basis(B.col_degrees()[k] - A.row_degrees()[i])) {
                eq_index[{i, m}] = eqs.size();
                eqs.emplace_back(i, m);
            }
        Matrix<K> sys(eqs.size(), unk.size());
        for (std::size_t u = 0; u < unk.size(); ++u) {
            const auto& [j, m] = unk[u];
            for (std::size_t i = 0; i < A.rows(); ++i) {
                if (A(i, j).is_zero()) continue;
                auto prod = nf(A(i, j).shifted(m.first, m.second));
                for (const auto& [mm, c] : prod.terms()) {
                    auto it = eq_index.find({i, mm});
                    if (it == eq_index.end()) throw std::logic_error("solve_right: inhomogeneous entry");
                    sys(it->second, u) += c;
                }
            }
        }
        Vec<K> rhs(eqs.size(), R.scalar(0));
        for (std::size_t i = 0; i < B.rows(); ++i) {
            auto bik = nf(B(i, k));
            for (const auto& [mm, c] : bik.terms()) {
                auto it = eq_index.find({i, mm});
                if (it == eq_index.end()) return std::nullopt;
                rhs[it->second] += c;
            }
        }
        std::optional<Vec<K>> sol;
        if (unk.empty()) {
            if (!Subspace<K>::is_zero_vec(rhs)) return std::nullopt;
            sol = Vec<K>{};
        } else {
            sol = solve(sys, rhs);
        }
        if (!sol) return std::nullopt;
        for (std::size_t u = 0; u < unk.size(); ++u)
            if (!(*sol)[u].is_zero()) X(unk[u].first, k).add_term(unk[u].second, (*sol)[u]);
    }
    return X;
}

}  // namespace arcurve
