#pragma once

#include "conetheta/numeric.hpp"
#include "conetheta/qseries.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cstddef>

namespace conetheta {

// Gauss error function E(x) = 2 int_0^x e^{-pi t^2} dt = erf(sqrt(pi) x).
inline Real gauss_E(const Real& x) {
    return boost::math::erf(sqrt(real_pi()) * x);
}

inline Real gauss_E_prime(const Real& x) {
    return 2 * exp(-real_pi() * x * x);
}

// beta(t) = (1/2pi) int_1^inf u^{-3/2} e^{-pi t u} du, t >= 0. Integration
// by parts gives the closed form e^{-pi t}/pi - sqrt(t) erfc(sqrt(pi t)).
inline Real beta_fn(const Real& t) {
    if (t < 0) throw Error("beta_fn: negative argument");
    Real pit = real_pi() * t;
    return exp(-pit) / real_pi() - sqrt(t) * boost::math::erfc(sqrt(pit));
}

// psi(x) = x E(x) + E'(x)/(2 pi) = |x| + beta(x^2).
inline Real psi_fn(const Real& x) {
    return x * gauss_E(x) + exp(-real_pi() * x * x) / real_pi();
}

inline Int sigma1(const Int& n) {
    Int s = 0;
    for (Int d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        s += d;
        if (d * d != n) s += n / d;
    }
    return s;
}

// E_2(tau) = 1 - 24 sum sigma_1(n) q^n, truncated at q^B.
inline ScalarQSeries e2_series(const Int& bound) {
    ScalarQSeries s;
    s.bound = Rat(bound);
    s.terms[0] = 1;
    for (Int n = 1; n <= bound; ++n) s.terms[n] = Rat(-24) * Rat(sigma1(n));
    return s;
}

// E_2*(tau) = E_2(tau) - 3/(pi y), summed to q^B; returns the value and a
// truncation-error estimate for the series tail.
struct E2StarValue {
    Complex value;
    Real tail_bound;
};

inline E2StarValue e2_star_eval(const Complex& tau, const Int& bound) {
    Real y = tau.imag();
    if (y <= 0) throw Error("e2_star_eval: tau not in the upper half-plane");
    Complex q = exp(Complex(0, 2) * real_pi() * tau);
    Complex acc(1);
    Complex qn(1);
    for (Int n = 1; n <= bound; ++n) {
        qn *= q;
        acc -= 24 * to_real(sigma1(n)) * qn;
    }
    acc -= Complex(3 / (real_pi() * y));
    // sigma_1(n) <= n^2, so the tail is below 24 sum_{n>B} n^2 r^n with
    // r = |q| < 1; bound by 24 r^{B+1} (B+1)^2 / (1-r)^3 via sum k^2 r^k.
    Real r = abs(q);
    Real nb = to_real(Int(bound + 1));
    Real tail = 24 * pow(r, nb) * (nb * nb + 2 * nb / (1 - r) + 2 / ((1 - r) * (1 - r))) / (1 - r);
    return {acc, tail};
}

} // namespace conetheta
