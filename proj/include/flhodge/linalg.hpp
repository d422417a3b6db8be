#pragma once

// Exact linear algebra over the local principal ideal rings Z/p^N and O_K/p^N.
//
// Everything is built on a valuation-pivot Smith normal form. The helpers for
// kernels, cokernels, images in quotients and linear solving all read their
// answers off U, D, V.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "flhodge/padic.hpp"

namespace flh {

template <class S>
using Vec = std::vector<S>;

template <class S>
class Mat {
public:
    Mat() = default;
    Mat(ContextPtr ctx, std::size_t rows, std::size_t cols)
        : ctx_(std::move(ctx)), rows_(rows), cols_(cols), data_(rows * cols, S::zero(ctx_)) {}

    static Mat identity(const ContextPtr& ctx, std::size_t n) {
        Mat m(ctx, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S::one(ctx);
        return m;
    }

    static Mat from_columns(const ContextPtr& ctx, std::size_t rows, const std::vector<Vec<S>>& cols) {
        Mat m(ctx, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw Error(ErrorCode::ShapeMismatch, "column has wrong length");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    static Mat diagonal(const ContextPtr& ctx, const Vec<S>& d) {
        Mat m(ctx, d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    const ContextPtr& context() const { return ctx_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec<S> column(std::size_t j) const {
        Vec<S> v;
        v.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
        return v;
    }

    std::vector<Vec<S>> columns() const {
        std::vector<Vec<S>> out;
        for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
        return out;
    }

    Mat select_columns(std::size_t begin, std::size_t end) const {
        Mat m(ctx_, rows_, end - begin);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
        }
        return m;
    }

    Mat select_rows(std::size_t begin, std::size_t end) const {
        Mat m(ctx_, end - begin, cols_);
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
        }
        return m;
    }

    Mat transpose() const {
        Mat m(ctx_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        }
        return m;
    }

    /// Entrywise sigma^s.
    Mat frobenius(int s) const {
        Mat m = *this;
        for (auto& x : m.data_) x = flh::frobenius(x, s);
        return m;
    }

    Mat scaled_up(int k) const {
        Mat m = *this;
        for (auto& x : m.data_) x = x.shift_up(k);
        return m;
    }

    int min_valuation() const {
        int v = ctx_->precision();
        for (const auto& x : data_) v = std::min(v, x.valuation());
        return v;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const S& x) { return x.is_zero(); });
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw Error(ErrorCode::ShapeMismatch, "matrix product shape mismatch");
        Mat m(a.ctx_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& x = a(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += x * b(k, j);
            }
        }
        return m;
    }

    friend Vec<S> operator*(const Mat& a, const Vec<S>& v) {
        if (a.cols_ != v.size()) throw Error(ErrorCode::ShapeMismatch, "matrix-vector shape mismatch");
        Vec<S> out(a.rows_, S::zero(a.ctx_));
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
        }
        return out;
    }

    friend Mat operator+(const Mat& a, const Mat& b) {
        check_same_shape(a, b);
        Mat m = a;
        for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] += b.data_[i];
        return m;
    }

    friend Mat operator-(const Mat& a, const Mat& b) {
        check_same_shape(a, b);
        Mat m = a;
        for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] -= b.data_[i];
        return m;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    // Elementary operations used by the normal form.
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    void scale_row(std::size_t r, const S& c) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) *= c;
    }
    void scale_col(std::size_t c, const S& s) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) *= s;
    }
    /// row[dst] += c * row[src]
    void add_row(std::size_t dst, std::size_t src, const S& c) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += c * (*this)(src, j);
    }
    /// col[dst] += c * col[src]
    void add_col(std::size_t dst, std::size_t src, const S& c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += c * (*this)(i, src);
    }

private:
    static void check_same_shape(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::ShapeMismatch, "matrix shapes differ");
    }

    ContextPtr ctx_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

using ZMat = Mat<PadicScalar>;
using KMat = Mat<UnramifiedScalar>;

template <class S>
Mat<S> hstack(const Mat<S>& a, const Mat<S>& b) {
    if (a.rows() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "hstack row mismatch");
    Mat<S> m(a.context(), a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

template <class S>
Mat<S> vstack(const Mat<S>& a, const Mat<S>& b) {
    return hstack(a.transpose(), b.transpose()).transpose();
}

template <class S>
Vec<S> scaled_up(const Vec<S>& v, int k) {
    Vec<S> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.shift_up(k));
    return out;
}

template <class S>
int min_valuation(const Vec<S>& v, int precision) {
    int m = precision;
    for (const auto& x : v) m = std::min(m, x.valuation());
    return m;
}

/// U * A * V = D with U, V invertible and D diagonal, D(i,i) = p^{exponents[i]}.
template <class S>
struct NormalFormResult {
    Mat<S> U;
    Mat<S> U_inverse;
    Mat<S> D;
    Mat<S> V;
    std::vector<int> exponents;  // length min(rows, cols), nondecreasing; N means zero
};

/// Pivot is an entry of minimal valuation, ties broken by lowest (row, col).
template <class S>
NormalFormResult<S> smith_normal_form(const Mat<S>& A) {
    const ContextPtr& ctx = A.context();
    const int N = ctx->precision();
    const std::size_t r = A.rows(), c = A.cols(), n = std::min(r, c);
    NormalFormResult<S> res{Mat<S>::identity(ctx, r), Mat<S>::identity(ctx, r), A, Mat<S>::identity(ctx, c), {}};
    Mat<S>& D = res.D;

    for (std::size_t k = 0; k < n; ++k) {
        int best = N;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < r; ++i) {
            for (std::size_t j = k; j < c; ++j) {
                const int v = D(i, j).valuation();
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best == N) {
            for (std::size_t t = k; t < n; ++t) res.exponents.push_back(N);
            break;
        }
        D.swap_rows(k, bi);
        res.U.swap_rows(k, bi);
        res.U_inverse.swap_cols(k, bi);
        D.swap_cols(k, bj);
        res.V.swap_cols(k, bj);

        const S unit = D(k, k).shift_down(best);
        const S unit_inv = unit.unit_inverse();
        D.scale_row(k, unit_inv);
        res.U.scale_row(k, unit_inv);
        res.U_inverse.scale_col(k, unit);

        for (std::size_t i = k + 1; i < r; ++i) {
            if (D(i, k).is_zero()) continue;
            const S q = D(i, k).shift_down(best);
            D.add_row(i, k, -q);
            res.U.add_row(i, k, -q);
            res.U_inverse.add_col(k, i, q);
        }
        for (std::size_t j = k + 1; j < c; ++j) {
            if (D(k, j).is_zero()) continue;
            const S q = D(k, j).shift_down(best);
            D.add_col(j, k, -q);
            res.V.add_col(j, k, -q);
        }
        res.exponents.push_back(best);
    }
    return res;
}

/// A finitely generated module over the coefficient ring at precision N:
/// generator i has additive order p^{exponents[i]}; exponent N reads as
/// "free at this precision". Generators are ambient coordinate vectors.
template <class S>
struct ModuleStructure {
    std::vector<int> exponents;
    std::vector<Vec<S>> generators;
    int precision = 0;

    /// log_p of the cardinality as a module over the coefficient ring's residue field size.
    int length() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }
    int free_rank() const {
        return static_cast<int>(std::count(exponents.begin(), exponents.end(), precision));
    }
    std::vector<int> torsion_exponents() const {
        std::vector<int> t;
        for (int e : exponents) {
            if (e < precision) t.push_back(e);
        }
        return t;
    }
    int torsion_length() const {
        int s = 0;
        for (int e : torsion_exponents()) s += e;
        return s;
    }
    bool is_zero() const { return exponents.empty(); }
};

namespace detail {

template <class S>
ModuleStructure<S> sorted_structure(std::vector<std::pair<int, Vec<S>>> parts, int precision) {
    std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    ModuleStructure<S> m;
    m.precision = precision;
    for (auto& [e, g] : parts) {
        if (e == 0) continue;
        m.exponents.push_back(e);
        m.generators.push_back(std::move(g));
    }
    return m;
}

}  // namespace detail

/// Kernel of A : R^cols -> R^rows.
template <class S>
ModuleStructure<S> kernel(const Mat<S>& A) {
    const int N = A.context()->precision();
    const auto nf = smith_normal_form(A);
    std::vector<std::pair<int, Vec<S>>> parts;
    for (std::size_t i = 0; i < A.cols(); ++i) {
        if (i < nf.exponents.size()) {
            const int e = nf.exponents[i];
            parts.emplace_back(e, scaled_up(nf.V.column(i), N - e));
        } else {
            parts.emplace_back(N, nf.V.column(i));
        }
    }
    return detail::sorted_structure(std::move(parts), N);
}

/// Cokernel R^rows / A R^cols.
template <class S>
ModuleStructure<S> cokernel(const Mat<S>& A) {
    const int N = A.context()->precision();
    const auto nf = smith_normal_form(A);
    std::vector<std::pair<int, Vec<S>>> parts;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const int e = i < nf.exponents.size() ? nf.exponents[i] : N;
        parts.emplace_back(e, nf.U_inverse.column(i));
    }
    return detail::sorted_structure(std::move(parts), N);
}

/// Submodule of the free module spanned by the columns of W.
template <class S>
ModuleStructure<S> image(const Mat<S>& W) {
    const int N = W.context()->precision();
    const auto nf = smith_normal_form(W);
    const Mat<S> WV = W * nf.V;
    std::vector<std::pair<int, Vec<S>>> parts;
    for (std::size_t i = 0; i < nf.exponents.size(); ++i) parts.emplace_back(N - nf.exponents[i], WV.column(i));
    return detail::sorted_structure(std::move(parts), N);
}

/// The submodule generated by the columns of X inside R^n / (columns of Rel).
/// The quotient is embedded into a free module by scaling its cyclic factors.
template <class S>
ModuleStructure<S> image_in_quotient(const Mat<S>& X, const Mat<S>& Rel) {
    const ContextPtr& ctx = X.context();
    const int N = ctx->precision();
    if (Rel.cols() == 0) return image(X);
    const auto nf = smith_normal_form(Rel);
    Mat<S> W = nf.U * X;
    for (std::size_t i = 0; i < W.rows(); ++i) {
        const int d = i < nf.exponents.size() ? nf.exponents[i] : N;
        for (std::size_t j = 0; j < W.cols(); ++j) W(i, j) = W(i, j).shift_up(N - d);
    }
    const auto nfw = smith_normal_form(W);
    const Mat<S> XV = X * nfw.V;
    std::vector<std::pair<int, Vec<S>>> parts;
    for (std::size_t i = 0; i < nfw.exponents.size(); ++i) parts.emplace_back(N - nfw.exponents[i], XV.column(i));
    return detail::sorted_structure(std::move(parts), N);
}

/// Some x with A x = b, if one exists.
template <class S>
std::optional<Vec<S>> solve(const Mat<S>& A, const Vec<S>& b) {
    const ContextPtr& ctx = A.context();
    const int N = ctx->precision();
    const auto nf = smith_normal_form(A);
    const Vec<S> ub = nf.U * b;
    Vec<S> y(A.cols(), S::zero(ctx));
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const int e = i < nf.exponents.size() ? nf.exponents[i] : N;
        if (ub[i].valuation() < e) return std::nullopt;
        if (i < A.cols() && e < N) y[i] = ub[i].shift_down(e);
    }
    return nf.V * y;
}

template <class S>
bool in_span(const Mat<S>& A, const Vec<S>& b) {
    if (A.cols() == 0) {
        return std::all_of(b.begin(), b.end(), [](const S& x) { return x.is_zero(); });
    }
    return solve(A, b).has_value();
}

/// Inverse of a matrix whose determinant is a unit.
template <class S>
Mat<S> inverse(const Mat<S>& A) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::ShapeMismatch, "inverse of a non-square matrix");
    const auto nf = smith_normal_form(A);
    for (int e : nf.exponents) {
        if (e != 0) throw Error(ErrorCode::NotAUnit, "matrix is not invertible over the coefficient ring");
    }
    return nf.V * nf.U;
}

/// v_p(det A) from the elementary divisors; N when A is singular at this precision.
template <class S>
int determinant_valuation(const Mat<S>& A) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::ShapeMismatch, "determinant of a non-square matrix");
    const int N = A.context()->precision();
    int total = 0;
    for (int e : smith_normal_form(A).exponents) {
        if (e >= N) return N;
        total += e;
    }
    return std::min(total, N);
}

/// Determinant by cofactor-free elimination; exact for any square matrix.
template <class S>
S determinant(const Mat<S>& A) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::ShapeMismatch, "determinant of a non-square matrix");
    const auto nf = smith_normal_form(A);
    // det(U) det(A) det(V) = det(D); U, V have unit determinants computed by the same routine.
    auto unit_det = [](const Mat<S>& M) {
        // Gaussian elimination with unit pivots; M is invertible.
        Mat<S> T = M;
        const std::size_t n = T.rows();
        S det = S::one(T.context());
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            while (piv < n && !T(piv, k).is_unit()) ++piv;
            if (piv == n) throw Error(ErrorCode::NotAUnit, "non-invertible transform");
            if (piv != k) {
                T.swap_rows(piv, k);
                det = -det;
            }
            det *= T(k, k);
            const S inv = T(k, k).unit_inverse();
            for (std::size_t i = k + 1; i < n; ++i) {
                if (T(i, k).is_zero()) continue;
                T.add_row(i, k, -(T(i, k) * inv));
            }
        }
        return det;
    };
    S d = S::one(A.context());
    for (std::size_t i = 0; i < A.rows(); ++i) d *= nf.D(i, i);
    return d * (unit_det(nf.U) * unit_det(nf.V)).unit_inverse();
}

/// x -> A * sigma^twist(x) on column vectors over O_K/p^N.
struct SemilinearMap {
    KMat matrix;
    int twist = 0;

    Vec<UnramifiedScalar> apply(const Vec<UnramifiedScalar>& x) const;
};

/// (L1 o L2)(x) = L1(L2(x)).
SemilinearMap compose(const SemilinearMap& outer, const SemilinearMap& inner);

/// Z/p^N matrix of L in the basis { w^j e_k }, coordinate index k*f + j.
ZMat restrict_scalars(const SemilinearMap& map);

/// Z/p^N coordinates of an O_K vector (index k*f + j).
Vec<PadicScalar> restrict_vector(const Vec<UnramifiedScalar>& v);
Vec<UnramifiedScalar> extend_vector(const ContextPtr& ctx, const Vec<PadicScalar>& v);

/// Basis vectors are p^scale times the columns of `basis`.
template <class S>
struct ScaledBasis {
    Mat<S> basis;
    int scale = 0;
};

/// v_p(det T) where B2 = B1 * T, so relative_index(L, pL) = rank.
/// Throws SpanMismatch or InsufficientPrecision.
template <class S>
int relative_index(const ScaledBasis<S>& b1, const ScaledBasis<S>& b2, int margin = 3) {
    const Mat<S>& B1 = b1.basis;
    const Mat<S>& B2 = b2.basis;
    if (B1.rows() != B2.rows() || B1.cols() != B2.cols()) {
        throw Error(ErrorCode::SpanMismatch, "bases have different shapes");
    }
    const int N = B1.context()->precision();
    const std::size_t d = B1.cols();
    const auto nf1 = smith_normal_form(B1);
    const auto nf2 = smith_normal_form(B2);
    int max1 = 0, sum1 = 0, sum2 = 0;
    for (int e : nf1.exponents) {
        if (e >= N - margin) throw Error(ErrorCode::InsufficientPrecision, "first basis is degenerate at this precision");
        max1 = std::max(max1, e);
        sum1 += e;
    }
    for (int e : nf2.exponents) {
        if (e >= N - margin) throw Error(ErrorCode::InsufficientPrecision, "second basis is degenerate at this precision");
        sum2 += e;
    }
    // B2 must lie in the Q_p-span of B1: the rows of U1 B2 beyond rank vanish.
    const Mat<S> C = nf1.U * B2;
    for (std::size_t i = d; i < C.rows(); ++i) {
        for (std::size_t j = 0; j < C.cols(); ++j) {
            if (C(i, j).valuation() < N - margin - max1) {
                throw Error(ErrorCode::SpanMismatch, "bases span different subspaces");
            }
        }
    }
    return sum2 - sum1 + static_cast<int>(d) * (b2.scale - b1.scale);
}

}  // namespace flh
