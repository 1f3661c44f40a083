#pragma once

#include "conetheta/discriminant.hpp"
#include "conetheta/lattice.hpp"
#include "conetheta/numeric.hpp"
#include "conetheta/smallmat.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace conetheta {

// Dense complex matrix at working precision.
class CMat {
public:
    CMat() : rows_(0), cols_(0) {}
    CMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c) {}
    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1);
        return m;
    }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    CMat operator*(const CMat& o) const {
        CMat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k)
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) += (*this)(i, k) * o(k, j);
        return r;
    }
    std::vector<Complex> operator*(const std::vector<Complex>& v) const {
        std::vector<Complex> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }
    CMat conj_transpose() const {
        CMat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = conj((*this)(i, j));
        return r;
    }
    CMat conjugate() const {
        CMat r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = conj((*this)(i, j));
        return r;
    }
    CMat operator-(const CMat& o) const {
        CMat r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }
    Real max_abs() const {
        Real m(0);
        for (const Complex& z : data_) m = (std::max)(m, Real(abs(z)));
        return m;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Complex> data_;
};

// The Weil representation on C[disc], given by the actions of the
// metaplectic generators T and S.
struct WeilAction {
    DiscGroupPtr group;
    std::vector<Complex> rho_t;    // diagonal
    CMat rho_s;
    Complex signature_phase;       // i^{(b- - b+)/2}, principal branch

    CMat rho_t_matrix() const {
        CMat m(rho_t.size(), rho_t.size());
        for (std::size_t i = 0; i < rho_t.size(); ++i) m(i, i) = rho_t[i];
        return m;
    }
    // Conjugate representation.
    std::vector<Complex> rho_t_conj() const {
        std::vector<Complex> d(rho_t.size());
        for (std::size_t i = 0; i < rho_t.size(); ++i) d[i] = conj(rho_t[i]);
        return d;
    }
    CMat rho_s_conj() const { return rho_s.conjugate(); }
};

inline WeilAction weil_action(const IntegerLattice& l, const DiscGroupPtr& g) {
    WeilAction w;
    w.group = g;
    std::size_t n = g->size();
    w.rho_t.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.rho_t[i] = exp2pii(g->q_form_at(i));
    int e = l.b_minus() - l.b_plus();
    Real angle = real_pi() * Real(e) / 4;
    w.signature_phase = Complex(cos(angle), sin(angle));
    Real root = sqrt(to_real(g->order()));
    w.rho_s = CMat(n, n);
    std::vector<IntVec> tuples(n);
    for (std::size_t i = 0; i < n; ++i) tuples[i] = g->tuple(i);
    for (std::size_t d = 0; d < n; ++d)
        for (std::size_t c = 0; c < n; ++c) {
            Rat b = g->bilinear(tuples[c], tuples[d]);
            w.rho_s(d, c) = w.signature_phase * exp2pii(-b) / root;
        }
    return w;
}

inline WeilAction weil_action(const IntegerLattice& l) {
    return weil_action(l, disc_group(l));
}

inline std::vector<Complex> weil_T(const IntegerLattice& l) {
    return weil_action(l).rho_t;
}

inline CMat weil_S(const IntegerLattice& l) {
    return weil_action(l).rho_s;
}

// Intertwining operators between the discriminant groups of a finite-index
// sublattice pair sub <= big. pull is the 0/1 map C[disc sub] -> C[disc big]
// supported on classes of big-dual vectors; push is its transpose with
// multiplicities.
struct LatticeMapPair {
    DiscGroupPtr sub_group;    // source of pull
    DiscGroupPtr big_group;    // target of pull
    Int subgroup_order;        // |H| = index of sub in big
    // pull_target[i] = image index in big, or none when the class is not in
    // H-perp.
    std::vector<std::optional<std::size_t>> pull_target;

    std::vector<std::vector<std::size_t>> push_fibers() const {
        std::vector<std::vector<std::size_t>> fibers(big_group->size());
        for (std::size_t i = 0; i < pull_target.size(); ++i)
            if (pull_target[i]) fibers[*pull_target[i]].push_back(i);
        return fibers;
    }

    template <typename T>
    std::vector<T> apply_pull(const std::vector<T>& v) const {
        std::vector<T> out(big_group->size(), T(0));
        for (std::size_t i = 0; i < pull_target.size(); ++i)
            if (pull_target[i]) out[*pull_target[i]] += v[i];
        return out;
    }

    template <typename T>
    std::vector<T> apply_push(const std::vector<T>& v) const {
        std::vector<T> out(sub_group->size(), T(0));
        for (std::size_t i = 0; i < pull_target.size(); ++i)
            if (pull_target[i]) out[i] = v[*pull_target[i]];
        return out;
    }

    IMat pull_matrix() const {
        IMat m(big_group->size(), sub_group->size());
        for (std::size_t i = 0; i < pull_target.size(); ++i)
            if (pull_target[i]) m(*pull_target[i], i) = 1;
        return m;
    }
    IMat push_matrix() const { return pull_matrix().transposed(); }

    CMat pull_cmatrix() const {
        CMat m(big_group->size(), sub_group->size());
        for (std::size_t i = 0; i < pull_target.size(); ++i)
            if (pull_target[i]) m(*pull_target[i], i) = Complex(1);
        return m;
    }
};

// sub given by an integer basis matrix inside big (columns, nonzero det).
// A precomputed discriminant group for sub (e.g. a product group) may be
// supplied; it must be expressed in the sub basis.
inline LatticeMapPair pull_push_maps(const IntegerLattice& big, const IMat& sub_basis,
                                     DiscGroupPtr sub_group = nullptr) {
    std::size_t n = big.rank();
    if (sub_basis.rows() != n || sub_basis.cols() != n)
        throw NotFiniteIndex("sublattice basis must be square");
    Int d = det(sub_basis);
    if (d == 0) throw NotFiniteIndex("sublattice basis is singular");
    QMat b = to_rat(sub_basis);
    QMat binv = inverse(b);
    IMat sub_gram(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat v = big.bilinear(b.col(i), b.col(j));
            sub_gram(i, j) = numerator(v);
        }
    IntegerLattice sub = IntegerLattice::validate(sub_gram);
    if (!sub_group) sub_group = disc_group(sub);
    DiscGroupPtr big_group = disc_group(big);

    LatticeMapPair pair;
    pair.sub_group = sub_group;
    pair.big_group = big_group;
    pair.subgroup_order = abs(d);
    pair.pull_target.resize(sub_group->size());
    for (std::size_t i = 0; i < sub_group->size(); ++i) {
        RatVec lift_sub = sub_group->lift(sub_group->tuple(i));   // sub coords
        RatVec in_big = b * lift_sub;                             // big coords
        if (big.in_dual(in_big))
            pair.pull_target[i] = big_group->index(big_group->reduce(in_big));
    }
    // Sanity: H-perp has |H| * |disc big| elements.
    std::size_t count = 0;
    for (const auto& t : pair.pull_target)
        if (t) ++count;
    if (Int(count) != pair.subgroup_order * big_group->order())
        throw Error("pull/push construction: H-perp has unexpected size");
    return pair;
}

// Data of the isotropic pull/push of a primitive totally isotropic I <= L:
// maps between C[disc L] and C[disc K], K = I-perp/I, factoring through the
// superlattice L_I generated by L and I_Q intersect L-dual.
struct IsotropicMapPair {
    DiscGroupPtr l_group;
    DiscGroupPtr k_group;
    IntegerLattice k;
    IMat section;                     // K-basis representatives inside L
    Int subgroup_order;               // |H| = [L_I : L]
    // Composite maps as index tables: to_k[i in disc L] (0/1 map p_L^K),
    // from_k fibers realized by matrices below.
    std::vector<std::optional<std::size_t>> to_k_target;

    template <typename T>
    std::vector<T> apply_to_k(const std::vector<T>& v) const {
        std::vector<T> out(k_group->size(), T(0));
        for (std::size_t i = 0; i < to_k_target.size(); ++i)
            if (to_k_target[i]) out[*to_k_target[i]] += v[i];
        return out;
    }
    // p_K^L: multiplicity map, the transpose table.
    template <typename T>
    std::vector<T> apply_from_k(const std::vector<T>& v) const {
        std::vector<T> out(l_group->size(), T(0));
        for (std::size_t i = 0; i < to_k_target.size(); ++i)
            if (to_k_target[i]) out[i] = v[*to_k_target[i]];
        return out;
    }
    IMat from_k_matrix() const {
        IMat m(l_group->size(), k_group->size());
        for (std::size_t i = 0; i < to_k_target.size(); ++i)
            if (to_k_target[i]) m(i, *to_k_target[i]) = 1;
        return m;
    }
    IMat to_k_matrix() const { return from_k_matrix().transposed(); }
};

inline IsotropicMapPair isotropic_pull_push(const IntegerLattice& l, const IsotropicSublattice& iso) {
    std::size_t n = l.rank(), r = iso.rank();
    IsotropicQuotient q = isotropic_quotient(l, iso);

    // T = {t in Q^r : sum t_j c_j in L-dual}; lattice containing Z^r.
    IMat c_pair(n, r);   // columns: gram * c_j
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            Int s = 0;
            for (std::size_t k2 = 0; k2 < n; ++k2) s += l.gram()(i, k2) * iso.basis(k2, j);
            c_pair(i, j) = s;
        }
    }
    SmithForm f = smith_normal_form(c_pair);
    // c_pair = u s v; t works iff s v t integral-scaled: basis of T is
    // v^{-1} diag(1/s_i) (s_i the nonzero invariants; rank r since the
    // pairing matrix has full column rank for non-degenerate L).
    QMat vinv = inverse(to_rat(f.v));
    QMat t_basis(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        if (f.s(j, j) == 0) throw Degenerate("isotropic pairing matrix rank-deficient");
        for (std::size_t i = 0; i < r; ++i) t_basis(i, j) = vinv(i, j) / Rat(f.s(j, j));
    }
    // L_I = L + (iso.basis * T). Build a basis via SNF of stacked generators.
    QMat iso_q = to_rat(iso.basis);
    QMat gens(n, n + r);
    for (std::size_t i = 0; i < n; ++i) gens(i, i) = 1;
    QMat extra = iso_q * t_basis;
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < n; ++i) gens(i, n + j) = extra(i, j);
    Int den = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n + r; ++j) den = lcm(den, denominator(gens(i, j)));
    IMat gens_int(n, n + r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n + r; ++j)
            gens_int(i, j) = numerator(gens(i, j) * Rat(den));
    SmithForm g = smith_normal_form(gens_int);
    // Column space of gens_int = u * diag(s_i) Z^n; basis u_i * s_i / den.
    QMat li_basis(n, n);     // columns: basis of L_I in L coordinates
    for (std::size_t j = 0; j < n; ++j) {
        if (g.s(j, j) == 0) throw Degenerate("L_I basis construction failed");
        for (std::size_t i = 0; i < n; ++i)
            li_basis(i, j) = Rat(g.u(i, j)) * Rat(g.s(j, j)) / Rat(den);
    }
    IMat li_gram(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            li_gram(i, j) = numerator(l.bilinear(li_basis.col(i), li_basis.col(j)));
    IntegerLattice li = IntegerLattice::validate(li_gram);
    // L as a finite-index sublattice of L_I.
    QMat li_inv = inverse(li_basis);
    IMat l_in_li = to_int_checked(li_inv);
    LatticeMapPair inner = pull_push_maps(li, l_in_li);

    // Identify disc(K) with disc(L_I): lift a K-class through the section,
    // then correct by an I_Q component to land in the dual of L_I.
    DiscGroupPtr k_group = disc_group(q.k);
    // delta'_j in L realizing a basis of the image of y -> (c_j . y): solve
    // with the SNF of c_pair^T.
    // Image lattice R = c_pair^T Z^n in Z^r; choose delta'_j with pairings
    // forming a basis matrix A (r x r, invertible).
    IMat cpt = c_pair.transposed();           // r x n
    SmithForm h = smith_normal_form(cpt);
    // cpt = u s v: image basis vectors are u * s (first r columns).
    QMat a_cols(r, r);
    IMat deltas(n, r);
    {
        QMat v_inv = inverse(to_rat(h.v));
        for (std::size_t j = 0; j < r; ++j) {
            // preimage of image-basis column j: x with cpt x = u s e_j: x =
            // v^{-1} e_j works since s v x = s e_j.
            for (std::size_t i = 0; i < n; ++i) {
                if (!is_integer(v_inv(i, j))) throw Error("image preimage not integral");
                deltas(i, j) = numerator(v_inv(i, j));
            }
        }
        QMat dq = to_rat(deltas);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t j = 0; j < r; ++j)
                a_cols(a, j) = l.bilinear(to_rat(iso.basis).col(a), dq.col(j));
    }
    QMat a_inv = inverse(a_cols);

    IsotropicMapPair out;
    out.l_group = inner.sub_group;
    out.k_group = k_group;
    out.k = q.k;
    out.section = q.section;
    out.subgroup_order = inner.subgroup_order;

    // iso_table[k-index] = L_I disc index.
    std::vector<std::size_t> k_to_li(k_group->size());
    std::vector<bool> hit(inner.big_group->size(), false);
    QMat section_q = to_rat(q.section);
    for (std::size_t kidx = 0; kidx < k_group->size(); ++kidx) {
        RatVec m = k_group->lift(k_group->tuple(kidx));      // K coords
        RatVec x = section_q * m;                            // L coords
        // Correct x by sum t_a c_a so that all pairings with delta'_j vanish.
        RatVec rhs(r);
        for (std::size_t j = 0; j < r; ++j) rhs[j] = -l.bilinear(x, to_rat(deltas).col(j));
        RatVec t = a_inv * rhs;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t i = 0; i < n; ++i) x[i] += t[a] * Rat(iso.basis(i, a));
        // x is now in the dual of L_I; express in L_I coords and reduce.
        RatVec x_li = li_inv * x;
        if (!li.in_dual(x_li)) throw Error("isotropic identification left the dual lattice");
        std::size_t li_idx = inner.big_group->index(inner.big_group->reduce(x_li));
        if (hit[li_idx]) throw Error("isotropic identification not injective");
        hit[li_idx] = true;
        if (inner.big_group->q_form_at(li_idx) != k_group->q_form_at(kidx))
            throw Error("isotropic identification does not preserve the quadratic form");
        k_to_li[kidx] = li_idx;
    }
    if (k_group->size() != inner.big_group->size())
        throw Error("disc(K) and disc(L_I) have different orders");

    std::vector<std::size_t> li_to_k(inner.big_group->size());
    for (std::size_t kidx = 0; kidx < k_to_li.size(); ++kidx) li_to_k[k_to_li[kidx]] = kidx;
    out.to_k_target.resize(inner.sub_group->size());
    for (std::size_t i = 0; i < inner.sub_group->size(); ++i)
        if (inner.pull_target[i])
            out.to_k_target[i] = li_to_k[*inner.pull_target[i]];
    return out;
}

} // namespace conetheta
