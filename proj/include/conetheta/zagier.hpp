#pragma once

#include "conetheta/classnum.hpp"
#include "conetheta/discriminant.hpp"
#include "conetheta/enumerate.hpp"
#include "conetheta/numeric.hpp"
#include "conetheta/qseries.hpp"
#include "conetheta/special.hpp"

#include <cstddef>
#include <vector>

namespace conetheta {

inline IntegerLattice rank_one_lattice(const Int& two_n) {
    IMat g(1, 1);
    g(0, 0) = two_n;
    return IntegerLattice::validate(g);
}

// Theta_{1/2,N} = sum_n q^{n^2/4N} v_{[n]} over disc([[2N]]).
inline VectorValuedQSeries theta_half(const Int& n, const Rat& bound) {
    IntegerLattice l = rank_one_lattice(2 * n);
    DiscGroupPtr g = disc_group(l);
    VectorValuedQSeries s(g, bound);
    s.weight = Rat(1, 2);
    for (Int k = 0;; ++k) {
        Rat e = Rat(k * k, 4 * n);
        if (e > bound) break;
        s.add_term(e, g->index({mod_euclid(k, 2 * n)}), Rat(1));
        if (k > 0) s.add_term(e, g->index({mod_euclid(-k, 2 * n)}), Rat(1));
    }
    return s;
}

// Theta series of a negative definite (or rank 0) lattice:
// sum_{v in dual} q^{-Q(v)} v_{[v]}, complete to the bound.
inline VectorValuedQSeries theta_definite(const IntegerLattice& l, const Rat& bound,
                                          DiscGroupPtr group = nullptr) {
    if (l.rank() > 0 && !l.is_negative_definite())
        throw NotDefinite("theta_definite needs a negative definite lattice");
    if (!group) group = disc_group(l);
    VectorValuedQSeries s(group, bound);
    s.weight = Rat(Int(l.rank()), 2);
    for (const RatVec& v : enumerate_short_vectors(l, true, bound)) {
        Rat e = -l.quad(v);
        s.add_term(e, group->index(group->reduce(v)), Rat(1));
    }
    return s;
}

// The weight 3/2 Zagier Eisenstein series F_N over disc([[2N]]). Its
// holomorphic coefficient at exponent -D/4N, class r, is the index-raising
// divisor sum (1/N) sum_{d | gcd(n, r, N)} d c_1(D/d^2) with n = (r^2-D)/4N,
// c_1(D') = H(|D'|) for D' < 0 and c_1(0) = -1/12; at N = 1 these are the
// classical Hurwitz class numbers. The non-holomorphic part is
// (sqrt(N)/(4 sqrt(y))) sum beta(y n^2/N) q^{-n^2/4N} v_[n], and the shadow
// is xi_{3/2} F_N = -(sqrt(N)/8pi) Theta_{1/2,N} at every level.
struct ZagierSeries {
    Int level;
    VectorValuedQSeries holo;
};

// mu(N) sum_{d | gcd(n, r, N)} d c_1(D/d^2) with mu(1) = 1 and mu(N) = 1/2
// for N > 1 (at level 1 every class satisfies r = -r, which folds the two
// half-contributions together). D = 0 slots give the constant terms.
inline Rat zagier_coefficient(const Int& n, const Int& d, const Int& r) {
    if (mod_euclid(r * r - d, 4 * n) != 0) throw Inadmissible("r^2 != D mod 4N");
    Int idx = (r * r - d) / (4 * n);
    Int g = gcd(gcd(idx, r), n);
    if (g == 0) g = n;   // D = 0 at the zero class: every divisor of N
    Rat total(0);
    for (Int dv = 1; dv <= g; ++dv) {
        if (g % dv != 0) continue;
        Int dd = d / (dv * dv);
        if (dd * dv * dv != d) continue;
        total += Rat(dv) * (dd == 0 ? Rat(-1, 12) : hurwitz_level1(dd));
    }
    return n == 1 ? total : total / 2;
}

inline ZagierSeries zagier_F(const Int& n, const Rat& bound) {
    IntegerLattice l = rank_one_lattice(2 * n);
    DiscGroupPtr g = disc_group(l);
    VectorValuedQSeries s(g, bound);
    s.weight = Rat(3, 2);
    Int dmax = rat_floor(bound * Rat(4 * n));
    for (Int d = 0; d >= -dmax; --d)
        for (Int r = 0; r < 2 * n; ++r) {
            if (mod_euclid(r * r - d, 4 * n) != 0) continue;
            s.add_term(Rat(-d, 4 * n), g->index({r}), zagier_coefficient(n, d, r));
        }
    return {n, s};
}

// The completion partner of a positive-norm ray carries the full
// (sqrt(N)/sqrt(y)) beta-sum as its non-holomorphic part: it is 4 F_N.
inline const Rat& zagier_completion_scale() {
    static const Rat four(4);
    return four;
}

struct ZagierValue {
    std::vector<Complex> value;
    Real tail_bound;
};

// Full F_N(tau) = F_N^+ + F_N^-, truncating both q-sums at exponent
// magnitude `trunc`; a rigorous tail estimate accompanies the value.
inline ZagierValue zagier_F_eval(const Int& n, const Complex& tau, const Rat& trunc) {
    Real y = tau.imag();
    if (y <= 0) throw Error("zagier_F_eval: tau not in the upper half-plane");
    IntegerLattice l = rank_one_lattice(2 * n);
    DiscGroupPtr g = disc_group(l);
    std::size_t dim = g->size();
    std::vector<Complex> acc(dim);
    ZagierSeries f = zagier_F(n, trunc);
    auto qpow = [&](const Rat& e) {
        return exp(Complex(0, 2) * real_pi() * tau * to_real(e));
    };
    for (const auto& [e, v] : f.holo.terms())
        for (std::size_t i = 0; i < dim; ++i)
            if (v[i] != 0) acc[i] += to_real(v[i]) * qpow(e);
    // Non-holomorphic part: (sqrt(N)/(4 sqrt(y))) beta(y k^2/N) q^{-k^2/4N}.
    Real sqn = sqrt(to_real(n));
    Real pref = sqn / (4 * sqrt(y));
    for (Int k = 0;; ++k) {
        Rat e(-k * k, 4 * n);
        if (-e > trunc) break;
        Real b = beta_fn(y * to_real(k) * to_real(k) / to_real(n));
        Complex term = pref * b * qpow(e);
        acc[g->index({mod_euclid(k, 2 * n)})] += term;
        if (k > 0) acc[g->index({mod_euclid(-k, 2 * n)})] += term;
    }
    // Tails. Holomorphic: H(D, r) <= |D| (crude count bound), terms
    // |q|^{|D|/4N}; sum_{m > M} m e^{-2 pi y m / 4N} in closed form.
    Real x0 = exp(-2 * real_pi() * y / to_real(Int(4 * n)));
    Real m0 = to_real(Int(rat_floor(trunc * Rat(4 * n)) + 1));
    Real holo_tail = (2 * to_real(n)) *          // admissible r per D, at most 2
                     pow(x0, m0) * (m0 / (1 - x0) + 1 / ((1 - x0) * (1 - x0)));
    // Non-holomorphic: beta(t) <= e^{-pi t}/pi, so the k-term is below
    // (sqrt(N)/(4 sqrt(y) pi)) e^{-pi y k^2 / 2N} after combining with
    // |q^{-k^2/4N}|.
    Real x1 = exp(-real_pi() * y / (2 * to_real(n)));
    Int k0 = isqrt_floor_rat(trunc * Rat(4 * n)) + 1;
    Real nonholo_tail = (sqn / (2 * sqrt(y) * real_pi())) * pow(x1, to_real(k0)) / (1 - x1);
    return {acc, holo_tail + nonholo_tail};
}

} // namespace conetheta
