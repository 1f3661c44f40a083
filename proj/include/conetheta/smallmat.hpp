#pragma once

#include "conetheta/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace conetheta {

// Dense matrix over an exact scalar (Int or Rat). Row-major, desk scale.
template <typename T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c, T fill = T(0))
        : rows_(r), cols_(c), data_(r * c, fill) {}
    Mat(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw Error("ragged matrix literal");
            for (const auto& v : row) data_.push_back(v);
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw Error("matrix product shape mismatch");
        Mat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == T(0)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += a * o(k, j);
            }
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        if (cols_ != v.size()) throw Error("matrix-vector shape mismatch");
        std::vector<T> r(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Mat operator-(const Mat& o) const {
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }

    std::vector<T> col(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using IMat = Mat<Int>;
using QMat = Mat<Rat>;

inline QMat to_rat(const IMat& m) {
    QMat q(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = Rat(m(i, j));
    return q;
}

// Fraction-free determinant (Bareiss).
inline Rat det(const QMat& a) {
    if (a.rows() != a.cols()) throw Error("det of non-square matrix");
    std::size_t n = a.rows();
    if (n == 0) return Rat(1);
    QMat m = a;
    Rat sign(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return Rat(0);
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            Rat f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    Rat d = sign;
    for (std::size_t k = 0; k < n; ++k) d *= m(k, k);
    return d;
}

inline Int det(const IMat& a) {
    Rat d = det(to_rat(a));
    if (!is_integer(d)) throw Error("integer determinant not integral");
    return numerator(d);
}

// Solve a x = b over Q; throws SingularSystem when no unique solution exists.
inline RatVec solve(const QMat& a, const RatVec& b) {
    std::size_t n = a.rows(), m = a.cols();
    if (b.size() != n) throw Error("solve shape mismatch");
    QMat aug(n, m + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) aug(i, j) = a(i, j);
        aug(i, m) = b[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m && row < n; ++col) {
        std::size_t p = row;
        while (p < n && aug(p, col) == 0) ++p;
        if (p == n) continue;
        aug.swap_rows(row, p);
        Rat inv = Rat(1) / aug(row, col);
        for (std::size_t j = col; j <= m; ++j) aug(row, j) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || aug(i, col) == 0) continue;
            Rat f = aug(i, col);
            for (std::size_t j = col; j <= m; ++j) aug(i, j) -= f * aug(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < n; ++i)
        if (aug(i, m) != 0) throw SingularSystem("inconsistent linear system");
    if (pivot_col.size() != m) throw SingularSystem("underdetermined linear system");
    RatVec x(m, Rat(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = aug(i, m);
    return x;
}

inline QMat inverse(const QMat& a) {
    std::size_t n = a.rows();
    if (n != a.cols()) throw Error("inverse of non-square matrix");
    QMat inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        RatVec e(n, Rat(0));
        e[j] = 1;
        RatVec x = solve(a, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
    }
    return inv;
}

inline IMat to_int_checked(const QMat& m) {
    IMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_integer(m(i, j))) throw Error("matrix entry not integral");
            r(i, j) = numerator(m(i, j));
        }
    return r;
}

struct SmithForm {
    IMat u;     // unimodular
    IMat s;     // diagonal, d_1 | d_2 | ..., non-negative
    IMat v;     // unimodular, a = u s v
};

// Smith normal form with transform tracking: a = u * s * v.
inline SmithForm smith_normal_form(const IMat& a) {
    std::size_t n = a.rows(), m = a.cols();
    IMat s = a;
    IMat u = IMat::identity(n), v = IMat::identity(m);
    // u, v accumulate the inverses of the row/col operations applied to s.
    auto row_op = [&](std::size_t i, std::size_t j, const Int& f) {
        for (std::size_t k = 0; k < m; ++k) s(i, k) -= f * s(j, k);
        for (std::size_t k = 0; k < n; ++k) u(k, j) += f * u(k, i);
    };
    auto col_op = [&](std::size_t i, std::size_t j, const Int& f) {
        for (std::size_t k = 0; k < n; ++k) s(k, i) -= f * s(k, j);
        for (std::size_t k = 0; k < m; ++k) v(j, k) += f * v(i, k);
    };
    auto row_swap = [&](std::size_t i, std::size_t j) {
        s.swap_rows(i, j);
        u.swap_cols(i, j);
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        s.swap_cols(i, j);
        v.swap_rows(i, j);
    };
    auto row_negate = [&](std::size_t i) {
        for (std::size_t k = 0; k < m; ++k) s(i, k) = -s(i, k);
        for (std::size_t k = 0; k < n; ++k) u(k, i) = -u(k, i);
    };

    std::size_t t = 0;
    while (t < n && t < m) {
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best;
        for (std::size_t i = t; i < n; ++i)
            for (std::size_t j = t; j < m; ++j)
                if (s(i, j) != 0 && (!found || abs(s(i, j)) < best)) {
                    found = true;
                    best = abs(s(i, j));
                    pi = i;
                    pj = j;
                }
        if (!found) break;
        row_swap(t, pi);
        col_swap(t, pj);
        for (bool settled = false; !settled;) {
            // Clear row and column t by gcd steps.
            bool clean = false;
            while (!clean) {
                clean = true;
                for (std::size_t i = t + 1; i < n; ++i) {
                    if (s(i, t) == 0) continue;
                    Int f = floor_div(s(i, t), s(t, t));
                    row_op(i, t, f);
                    if (s(i, t) != 0) {
                        row_swap(t, i);
                        clean = false;
                    }
                }
                for (std::size_t j = t + 1; j < m; ++j) {
                    if (s(t, j) == 0) continue;
                    Int f = floor_div(s(t, j), s(t, t));
                    col_op(j, t, f);
                    if (s(t, j) != 0) {
                        col_swap(t, j);
                        clean = false;
                    }
                }
            }
            // Pivot must divide the remaining block for the d_i | d_{i+1}
            // chain; if not, fold the offending row in and re-clear.
            settled = true;
            for (std::size_t i = t + 1; i < n && settled; ++i)
                for (std::size_t j = t + 1; j < m && settled; ++j)
                    if (s(i, j) % s(t, t) != 0) {
                        row_op(t, i, Int(-1));
                        settled = false;
                    }
        }
        if (s(t, t) < 0) row_negate(t);
        ++t;
    }
    return {u, s, v};
}

// Basis of the integer kernel {x : a x = 0}; columns of the result. The
// returned lattice is saturated (it is the full kernel).
inline IMat integer_kernel(const IMat& a) {
    SmithForm f = smith_normal_form(a);
    std::size_t m = a.cols();
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(f.s.rows(), f.s.cols()); ++i)
        if (f.s(i, i) != 0) ++r;
    // a = u s v, so a x = 0 iff s (v x) = 0 iff the first r coords of v x
    // vanish; kernel basis = v^{-1} e_j for j >= r.
    QMat vinv = inverse(to_rat(f.v));
    IMat ker(m, m - r);
    for (std::size_t j = r; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_integer(vinv(i, j))) throw Error("kernel basis not integral");
            ker(i, j - r) = numerator(vinv(i, j));
        }
    return ker;
}

// Characteristic polynomial coefficients of an integer symmetric matrix,
// p(x) = x^n + c_{n-1} x^{n-1} + ... + c_0, via Faddeev-LeVerrier.
inline std::vector<Rat> char_poly(const QMat& a) {
    std::size_t n = a.rows();
    std::vector<Rat> c(n + 1, Rat(0));
    c[n] = 1;
    QMat m(n, n);
    QMat id = QMat::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A (M_{k-1} + c_{n-k+1} I)
        QMat t = m;
        for (std::size_t i = 0; i < n; ++i) t(i, i) += c[n - k + 1];
        m = a * t;
        Rat tr(0);
        for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
        c[n - k] = -tr / Rat(k);
    }
    return c;
}

// (positive, negative) eigenvalue counts of a non-degenerate symmetric
// rational matrix, via Descartes sign changes of the characteristic
// polynomial (exact for real-rooted polynomials).
inline std::pair<int, int> sylvester_signature(const QMat& a) {
    std::size_t n = a.rows();
    std::vector<Rat> c = char_poly(a);
    if (c[0] == 0) throw Degenerate("singular symmetric matrix");
    int sign_changes = 0;
    int last = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        if (c[i] == 0) continue;
        int s = c[i] > 0 ? 1 : -1;
        if (last != 0 && s != last) ++sign_changes;
        last = s;
    }
    return {sign_changes, int(n) - sign_changes};
}

// Lower bound 0 < mu <= lambda_min for a positive definite rational matrix,
// by bisecting the characteristic polynomial with exact sign evaluation.
inline Rat eigen_lower_bound(const QMat& a) {
    std::size_t n = a.rows();
    if (n == 0) return Rat(1);
    std::vector<Rat> c = char_poly(a);
    auto eval = [&](const Rat& x) {
        Rat acc(0);
        for (std::size_t i = n + 1; i-- > 0;) acc = acc * x + c[i];
        return acc;
    };
    auto roots_above = [&](const Rat& x) {
        // All eigenvalues are > x iff p has no root in (0, x]; since p is
        // real-rooted with all roots > 0, it suffices that p(t) has constant
        // sign on [0, x]: test sign of p at x against sign at 0.
        // Simpler: p(x) != 0 and the number of roots <= x is 0. Use Descartes
        // on the shifted polynomial p(t + x).
        std::vector<Rat> shifted = c;
        // Synthetic Taylor shift by x.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = n - 1; j + 1 > i; --j)
                shifted[j] += x * shifted[j + 1];
        // Roots of p(t+x) with t <= 0 <-> roots of p <= x. Count negative
        // roots via sign changes of shifted(-t).
        int changes = 0, last = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            Rat coeff = (i % 2 == 0) ? shifted[i] : -shifted[i];
            if (coeff == 0) continue;
            int s = coeff > 0 ? 1 : -1;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        return changes == 0 && eval(x) != 0;
    };
    Rat lo(0), hi(1);
    while (!roots_above(hi)) hi /= 2;
    (void)lo;
    return hi;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline RatVec to_rat_vec(const IntVec& v) {
    RatVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

} // namespace conetheta
