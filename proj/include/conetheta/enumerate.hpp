#pragma once

#include "conetheta/lattice.hpp"
#include "conetheta/numeric.hpp"
#include "conetheta/smallmat.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace conetheta {

// Exact LDL^T of a positive definite rational matrix: a = l d l^T with l
// unit lower triangular. Returns (d, l).
inline std::pair<RatVec, QMat> ldlt(const QMat& a) {
    std::size_t n = a.rows();
    RatVec d(n, Rat(0));
    QMat l = QMat::identity(n);
    QMat w = a;
    for (std::size_t k = 0; k < n; ++k) {
        d[k] = w(k, k);
        if (d[k] <= 0) throw NotDefinite("matrix not positive definite");
        for (std::size_t i = k + 1; i < n; ++i) l(i, k) = w(i, k) / d[k];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j <= i; ++j) {
                w(i, j) -= l(i, k) * d[k] * l(j, k);
                w(j, i) = w(i, j);
            }
    }
    return {d, l};
}

// All x in Z^n with x^T a x <= 2*bound (i.e. quadratic-form value q(x) =
// x^T a x / 2 <= bound), a positive definite, exact. Fincke-Pohst with
// rational arithmetic throughout: no vector can be dropped.
inline std::vector<IntVec> fincke_pohst(const QMat& a, const Rat& bound) {
    std::size_t n = a.rows();
    std::vector<IntVec> out;
    if (bound < 0) return out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    // x^T a x = sum_k d_k (x_k + c_k)^2 with c_k = sum_{j>k} l(j,k)-style
    // back-substituted offsets: using a = l d l^T, y = l^T x.
    auto [d, l] = ldlt(a);
    QMat lt = l.transposed();
    Rat cap = 2 * bound;
    IntVec x(n, Int(0));
    std::function<void(std::size_t, const Rat&)> descend = [&](std::size_t level, const Rat& budget) {
        // level runs n-1 .. 0; budget = remaining cap.
        std::size_t k = level;
        Rat off(0);
        for (std::size_t j = k + 1; j < n; ++j) off += lt(k, j) * Rat(x[j]);
        // d_k (x_k + off)^2 <= budget, so x_k in [-off - sqrt(r), -off + sqrt(r)].
        Rat r = budget / d[k];
        Int s = isqrt_floor_rat(r);
        auto fits = [&](const Int& v) { return (Rat(v) + off) * (Rat(v) + off) <= r; };
        Int hi = rat_floor(-off) + s;           // floor(-off + sqrt(r)) is hi or hi+1
        if (fits(hi + 1)) ++hi;
        Int lo = rat_ceil(-off) - s;            // ceil(-off - sqrt(r)) is lo or lo-1
        if (fits(lo - 1)) --lo;
        for (Int v = lo; v <= hi; ++v) {
            if (!fits(v)) continue;             // only possible at the two ends
            x[k] = v;
            Rat used = d[k] * (Rat(v) + off) * (Rat(v) + off);
            if (k == 0) {
                out.push_back(x);
            } else {
                descend(k - 1, budget - used);
            }
        }
        x[k] = 0;
    };
    descend(n - 1, cap);
    return out;
}

// All v (in the lattice, or in the dual when dual = true) with |Q(v)| <=
// bound, for a definite lattice. Coordinates in the lattice basis, sorted
// lexicographically; includes 0.
inline std::vector<RatVec> enumerate_short_vectors(const IntegerLattice& l, bool dual, const Rat& bound) {
    if (!l.is_definite()) throw NotDefinite("enumerate_short_vectors needs a definite lattice");
    std::size_t n = l.rank();
    std::vector<RatVec> out;
    if (bound < 0) return out;
    QMat form(n, n);
    if (!dual) {
        form = to_rat(l.gram());
    } else {
        // v = G^{-1} m, m in Z^n: 2 Q(v) = m^T G^{-1} m.
        form = n ? inverse(to_rat(l.gram())) : QMat(0, 0);
    }
    if (l.is_negative_definite()) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) form(i, j) = -form(i, j);
    }
    QMat ginv = (dual && n) ? inverse(to_rat(l.gram())) : QMat(0, 0);
    for (const IntVec& m : fincke_pohst(form, bound)) {
        RatVec v(n);
        if (!dual) {
            for (std::size_t i = 0; i < n; ++i) v[i] = Rat(m[i]);
        } else {
            v = ginv * to_rat_vec(m);
        }
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

} // namespace conetheta
