#pragma once

#include "conetheta/numeric.hpp"
#include "conetheta/smallmat.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace conetheta {

// An even non-degenerate lattice, given by the Gram matrix of a fixed basis.
// Vectors are coordinate tuples in that basis; dual vectors are rational
// tuples x with gram * x integral.
class IntegerLattice {
public:
    IntegerLattice() = default;

    const IMat& gram() const { return gram_; }
    std::size_t rank() const { return gram_.rows(); }
    int b_plus() const { return b_plus_; }
    int b_minus() const { return b_minus_; }
    Int determinant() const { return det_; }

    bool is_positive_definite() const { return b_minus_ == 0; }
    bool is_negative_definite() const { return b_plus_ == 0; }
    bool is_definite() const { return b_plus_ == 0 || b_minus_ == 0; }

    Rat bilinear(const RatVec& x, const RatVec& y) const {
        Rat s(0);
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j)
                s += x[i] * Rat(gram_(i, j)) * y[j];
        return s;
    }

    Rat quad(const RatVec& x) const { return bilinear(x, x) / 2; }

    // gram * x, the pairing of x with every basis vector.
    RatVec pairings(const RatVec& x) const {
        return to_rat(gram_) * x;
    }

    bool in_lattice(const RatVec& x) const {
        for (const Rat& c : x)
            if (!is_integer(c)) return false;
        return true;
    }

    bool in_dual(const RatVec& x) const {
        for (const Rat& p : pairings(x))
            if (!is_integer(p)) return false;
        return true;
    }

    std::string name;

    static IntegerLattice validate(const IMat& gram, std::string name = {});

private:
    IMat gram_;
    int b_plus_ = 0, b_minus_ = 0;
    Int det_ = 1;
};

inline IntegerLattice IntegerLattice::validate(const IMat& gram, std::string name) {
    if (gram.rows() != gram.cols()) throw NotSymmetric("gram matrix not square");
    std::size_t n = gram.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j)
            if (gram(i, j) != gram(j, i)) throw NotSymmetric("gram matrix not symmetric");
        if (mod_euclid(gram(i, i), 2) != 0) throw OddDiagonal("odd diagonal entry");
    }
    IntegerLattice lat;
    lat.gram_ = gram;
    lat.name = std::move(name);
    lat.det_ = n ? det(gram) : Int(1);
    if (lat.det_ == 0) throw Degenerate("gram matrix is singular");
    if (n) {
        auto [p, q] = sylvester_signature(to_rat(gram));
        lat.b_plus_ = p;
        lat.b_minus_ = q;
    }
    return lat;
}

inline IntegerLattice validate_even_lattice(const IMat& gram, std::string name = {}) {
    return IntegerLattice::validate(gram, std::move(name));
}

// Largest u >= 1 with v/u still in the lattice (dual = false) or in the dual
// lattice (dual = true).
inline Int imprimitivity(const RatVec& v, const IntegerLattice& ambient, bool dual) {
    bool zero = true;
    for (const Rat& c : v)
        if (c != 0) zero = false;
    if (zero) throw ZeroVector("imprimitivity of the zero vector");
    // v/u in Lambda: u | every coordinate (coords integral). v/u in the dual:
    // u | every pairing gram*v.
    RatVec probe = dual ? ambient.pairings(v) : v;
    Int g = 0;
    Int den = 1;
    for (const Rat& c : probe) den = lcm(den, denominator(c));
    for (const Rat& c : probe) g = gcd(g, numerator(c * Rat(den)));
    // v/u valid iff u divides every entry of probe (as rationals): the set of
    // valid u is divisors of g/den when den == 1; for fractional probe the
    // vector is not in the stated lattice at all.
    if (den != 1) throw Error("vector not in the stated lattice");
    return g;
}

struct IsotropicSublattice {
    IMat basis;     // columns = basis vectors, integer coordinates
    std::size_t rank() const { return basis.cols(); }
};

// Validates that the given integer vectors span a primitive totally
// isotropic sublattice.
inline IsotropicSublattice make_isotropic(const IntegerLattice& l, const IMat& basis) {
    std::size_t r = basis.cols();
    if (r == 0 || r > 2) throw Error("isotropic sublattice rank must be 1 or 2");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            RatVec bi = to_rat(basis).col(i), bj = to_rat(basis).col(j);
            if (l.bilinear(bi, bj) != 0) throw NotIsotropic("basis not totally isotropic");
        }
    // Primitive (saturated): the SNF of the basis matrix has all invariant
    // factors 1.
    SmithForm f = smith_normal_form(basis);
    for (std::size_t i = 0; i < r; ++i)
        if (f.s(i, i) != 1) throw NotPrimitive("isotropic sublattice not primitive");
    return IsotropicSublattice{basis};
}

struct IsotropicQuotient {
    IntegerLattice k;       // the induced lattice on I-perp / I
    IMat section;           // columns = representatives in L of the K-basis
    IMat perp_basis;        // columns = basis of I-perp inside L
};

// K = I-perp / I with a section picking representatives in I-perp.
inline IsotropicQuotient isotropic_quotient(const IntegerLattice& l, const IsotropicSublattice& iso) {
    std::size_t n = l.rank(), r = iso.rank();
    // I-perp = integer kernel of the r x n matrix of pairings with I.
    IMat pair_rows(r, n);
    for (std::size_t i = 0; i < r; ++i) {
        IntVec gc(n);
        for (std::size_t row = 0; row < n; ++row) {
            Int s = 0;
            for (std::size_t col = 0; col < n; ++col) s += l.gram()(row, col) * iso.basis(col, i);
            pair_rows(i, row) = s;
        }
    }
    IMat perp = integer_kernel(pair_rows);     // n x (n - r)
    // Express I inside perp: solve perp * x = iso_basis column-wise.
    std::size_t pr = perp.cols();
    IMat iso_in_perp(pr, r);
    for (std::size_t j = 0; j < r; ++j) {
        RatVec rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = Rat(iso.basis(i, j));
        // Solve overdetermined system exactly via least pivoting path: use
        // the square subsystem from solve() on the stacked normal route.
        // perp has full column rank, so solve perp^T perp x = perp^T rhs.
        QMat pq = to_rat(perp);
        QMat ptp = pq.transposed() * pq;
        RatVec ptb = pq.transposed() * rhs;
        RatVec x = solve(ptp, ptb);
        // Verify exactness.
        RatVec back = pq * x;
        for (std::size_t i = 0; i < n; ++i)
            if (back[i] != rhs[i]) throw NotIsotropic("isotropic basis not inside its perp");
        for (std::size_t i = 0; i < pr; ++i) {
            if (!is_integer(x[i])) throw NotPrimitive("isotropic sublattice not primitive in perp");
            iso_in_perp(i, j) = numerator(x[i]);
        }
    }
    // Complement of I inside perp via SNF of iso_in_perp: columns r.. of
    // u give a basis of perp/I lifted to perp.
    SmithForm f = smith_normal_form(iso_in_perp);
    for (std::size_t i = 0; i < r; ++i)
        if (f.s(i, i) != 1) throw NotPrimitive("isotropic sublattice not saturated");
    // iso_in_perp = u s v: the first r columns of u span the image; the rest
    // complete a basis of Z^pr.
    IMat comp(pr, pr - r);
    for (std::size_t j = r; j < pr; ++j)
        for (std::size_t i = 0; i < pr; ++i) comp(i, j - r) = f.u(i, j);
    IMat section = perp * comp;    // n x (pr - r) representatives in L
    std::size_t kr = pr - r;
    IMat kgram(kr, kr);
    for (std::size_t i = 0; i < kr; ++i)
        for (std::size_t j = 0; j < kr; ++j) {
            Rat b = l.bilinear(to_rat(section).col(i), to_rat(section).col(j));
            kgram(i, j) = numerator(b);
        }
    IsotropicQuotient out;
    out.k = IntegerLattice::validate(kgram);
    out.section = section;
    out.perp_basis = perp;
    return out;
}

} // namespace conetheta
