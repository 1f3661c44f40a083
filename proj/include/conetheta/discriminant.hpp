#pragma once

#include "conetheta/lattice.hpp"
#include "conetheta/numeric.hpp"
#include "conetheta/smallmat.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace conetheta {

// The finite quadratic module Lambda-dual / Lambda. Elements are residue
// tuples against a fixed list of cyclic orders (not necessarily in Smith
// form: product groups keep the factor orders). Every generator carries an
// explicit lift to the dual lattice, and reduction of an arbitrary dual
// vector to its residue tuple is a fixed integer-linear map of gram * v.
class DiscriminantGroup {
public:
    // Number of cyclic factors (> 1 each).
    std::size_t factors() const { return orders_.size(); }
    const IntVec& orders() const { return orders_; }
    Int order() const {
        Int n = 1;
        for (const Int& d : orders_) n *= d;
        return n;
    }
    std::size_t size() const { return order().convert_to<std::size_t>(); }
    const IntegerLattice& lattice() const { return lattice_; }

    // index <-> residue tuple (mixed radix, first factor fastest).
    IntVec tuple(std::size_t index) const {
        IntVec t(factors());
        Int rem = index;
        for (std::size_t i = 0; i < factors(); ++i) {
            t[i] = rem % orders_[i];
            rem /= orders_[i];
        }
        return t;
    }
    std::size_t index(const IntVec& tup) const {
        Int idx = 0;
        for (std::size_t i = factors(); i-- > 0;)
            idx = idx * orders_[i] + mod_euclid(tup[i], orders_[i]);
        return idx.convert_to<std::size_t>();
    }

    IntVec add(const IntVec& a, const IntVec& b) const {
        IntVec c(factors());
        for (std::size_t i = 0; i < factors(); ++i)
            c[i] = mod_euclid(a[i] + b[i], orders_[i]);
        return c;
    }
    IntVec neg(const IntVec& a) const {
        IntVec c(factors());
        for (std::size_t i = 0; i < factors(); ++i)
            c[i] = mod_euclid(-a[i], orders_[i]);
        return c;
    }

    // A representative of the class in the dual lattice (coordinates in the
    // lattice basis).
    RatVec lift(const IntVec& tup) const {
        RatVec v(lattice_.rank(), Rat(0));
        for (std::size_t i = 0; i < factors(); ++i)
            for (std::size_t r = 0; r < lattice_.rank(); ++r)
                v[r] += Rat(tup[i]) * lifts_(r, i);
        return v;
    }

    // Residue tuple of a dual vector.
    IntVec reduce(const RatVec& dual_vec) const {
        RatVec p = lattice_.pairings(dual_vec);
        IntVec t(factors());
        for (std::size_t i = 0; i < factors(); ++i) {
            Rat acc(0);
            for (std::size_t j = 0; j < lattice_.rank(); ++j)
                acc += Rat(reduce_rows_(i, j)) * p[j];
            if (!is_integer(acc)) throw Error("reduce: vector not in the dual lattice");
            t[i] = mod_euclid(numerator(acc), orders_[i]);
        }
        return t;
    }

    // Q mod 1, in [0, 1).
    Rat q_form(const IntVec& tup) const { return q_table_[index(tup)]; }
    Rat q_form_at(std::size_t idx) const { return q_table_[idx]; }

    // Bilinear form mod 1, in [0, 1).
    Rat bilinear(const IntVec& a, const IntVec& b) const {
        return mod1(lattice_.bilinear(lift(a), lift(b)));
    }

    bool same_structure(const DiscriminantGroup& o) const {
        return orders_ == o.orders_ && q_table_ == o.q_table_;
    }

    static DiscriminantGroup of_lattice(const IntegerLattice& l);
    static DiscriminantGroup product(const DiscriminantGroup& g1, const DiscriminantGroup& g2);

private:
    IntegerLattice lattice_;
    IntVec orders_;
    QMat lifts_;        // rank x factors, lift of each generator
    IMat reduce_rows_;  // factors x rank, residues = reduce_rows * (gram v)
    std::vector<Rat> q_table_;

    void build_q_table() {
        std::size_t n = size();
        q_table_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            q_table_[i] = mod1(lattice_.quad(lift(tuple(i))));
    }
    friend DiscriminantGroup disc_group_raw(IntegerLattice, IntVec, QMat, IMat);
};

inline DiscriminantGroup disc_group_raw(IntegerLattice l, IntVec orders, QMat lifts, IMat rows) {
    DiscriminantGroup g;
    g.lattice_ = std::move(l);
    g.orders_ = std::move(orders);
    g.lifts_ = std::move(lifts);
    g.reduce_rows_ = std::move(rows);
    g.build_q_table();
    return g;
}

// Group structure via Smith normal form of the Gram matrix:
// dual/lattice = Z^n / G Z^n with G = U S V, so classes are residues of
// U^{-1} (gram v) against the invariant factors.
inline DiscriminantGroup DiscriminantGroup::of_lattice(const IntegerLattice& l) {
    std::size_t n = l.rank();
    SmithForm f = smith_normal_form(l.gram());
    QMat uinv = inverse(to_rat(f.u));
    QMat ginv = n ? inverse(to_rat(l.gram())) : QMat(0, 0);
    IntVec orders;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) {
        if (f.s(i, i) == 0) throw Degenerate("discriminant group of degenerate lattice");
        if (f.s(i, i) != 1) {
            orders.push_back(f.s(i, i));
            keep.push_back(i);
        }
    }
    IMat uinv_int = to_int_checked(uinv);
    QMat lifts(n, keep.size());
    IMat rows(keep.size(), n);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        // generator g_k = G^{-1} U e_{keep[k]}
        for (std::size_t r = 0; r < n; ++r) {
            Rat acc(0);
            for (std::size_t j = 0; j < n; ++j) acc += ginv(r, j) * Rat(f.u(j, keep[k]));
            lifts(r, k) = acc;
        }
        for (std::size_t j = 0; j < n; ++j) rows(k, j) = uinv_int(keep[k], j);
    }
    return disc_group_raw(l, std::move(orders), std::move(lifts), std::move(rows));
}

// Product group for an orthogonal direct sum: factor orders concatenated,
// lifts and reduction acting blockwise.
inline DiscriminantGroup DiscriminantGroup::product(const DiscriminantGroup& g1, const DiscriminantGroup& g2) {
    std::size_t n1 = g1.lattice_.rank(), n2 = g2.lattice_.rank();
    std::size_t k1 = g1.factors(), k2 = g2.factors();
    IMat gram(n1 + n2, n1 + n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n1; ++j) gram(i, j) = g1.lattice_.gram()(i, j);
    for (std::size_t i = 0; i < n2; ++i)
        for (std::size_t j = 0; j < n2; ++j) gram(n1 + i, n1 + j) = g2.lattice_.gram()(i, j);
    IntegerLattice sum = IntegerLattice::validate(gram);
    IntVec orders = g1.orders_;
    orders.insert(orders.end(), g2.orders_.begin(), g2.orders_.end());
    QMat lifts(n1 + n2, k1 + k2);
    IMat rows(k1 + k2, n1 + n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < k1; ++k) lifts(i, k) = g1.lifts_(i, k);
    for (std::size_t i = 0; i < n2; ++i)
        for (std::size_t k = 0; k < k2; ++k) lifts(n1 + i, k1 + k) = g2.lifts_(i, k);
    for (std::size_t k = 0; k < k1; ++k)
        for (std::size_t j = 0; j < n1; ++j) rows(k, j) = g1.reduce_rows_(k, j);
    for (std::size_t k = 0; k < k2; ++k)
        for (std::size_t j = 0; j < n2; ++j) rows(k1 + k, n1 + j) = g2.reduce_rows_(k, j);
    return disc_group_raw(std::move(sum), std::move(orders), std::move(lifts), std::move(rows));
}

using DiscGroupPtr = std::shared_ptr<const DiscriminantGroup>;

inline DiscGroupPtr disc_group(const IntegerLattice& l) {
    return std::make_shared<DiscriminantGroup>(DiscriminantGroup::of_lattice(l));
}

inline DiscGroupPtr disc_group_product(const DiscGroupPtr& a, const DiscGroupPtr& b) {
    return std::make_shared<DiscriminantGroup>(DiscriminantGroup::product(*a, *b));
}

} // namespace conetheta
