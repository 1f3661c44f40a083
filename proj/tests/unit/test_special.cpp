#include <catch2/catch_amalgamated.hpp>

#include "conetheta/classnum.hpp"
#include "conetheta/special.hpp"
#include "conetheta/zagier.hpp"

#include <functional>
#include <map>
#include <set>

using namespace conetheta;

namespace {

// Adaptive Simpson quadrature over [a, b] at working precision.
Real adaptive_simpson(const std::function<Real(Real)>& f, Real a, Real b, Real eps, int depth = 40) {
    auto simpson = [&](Real lo, Real hi) {
        Real mid = (lo + hi) / 2;
        return (hi - lo) / 6 * (f(lo) + 4 * f(mid) + f(hi));
    };
    std::function<Real(Real, Real, Real, Real, int)> rec = [&](Real lo, Real hi, Real whole,
                                                               Real tol, int d) -> Real {
        Real mid = (lo + hi) / 2;
        Real left = simpson(lo, mid), right = simpson(mid, hi);
        if (d <= 0 || abs(left + right - whole) < 15 * tol)
            return left + right + (left + right - whole) / 15;
        return rec(lo, mid, left, tol / 2, d - 1) + rec(mid, hi, right, tol / 2, d - 1);
    };
    return rec(a, b, simpson(a, b), eps, depth);
}

Real quad_E(Real x) {
    return 2 * adaptive_simpson([](Real t) { return exp(-real_pi() * t * t); }, Real(0), x,
                                Real("1e-25"));
}

Real quad_beta(Real t) {
    // substitute u = 1/v^2 to compress [1, inf): integral becomes
    // int_0^1 2 v^0 ... simpler: truncate at U with a tail below e^{-pi t U}.
    Real upper = 60;
    return adaptive_simpson([&](Real u) { return pow(u, Real(-1.5)) * exp(-real_pi() * t * u); },
                            Real(1), upper, Real("1e-25")) /
           (2 * real_pi());
}

// Independent level 1 oracle: enumerate all positive definite forms in a
// wide box, Gauss-reduce each, and count distinct classes with automorph
// weights.
Rat reduced_forms_oracle(const Int& d) {
    auto reduce = [&](BQForm q) {
        while (true) {
            if (q.c < q.a) {
                q = BQForm{q.c, -q.b, q.a};
                continue;
            }
            Int b2 = mod_euclid(q.b, 2 * q.a);
            if (b2 > q.a) b2 -= 2 * q.a;
            if (b2 != q.b) {
                q = BQForm{q.a, b2, (b2 * b2 - d) / (4 * q.a)};
                continue;
            }
            if (q.b < 0 && (q.b == -q.a || q.a == q.c)) {
                q = BQForm{q.a, -q.b, q.c};
                continue;
            }
            break;
        }
        return q;
    };
    std::set<std::tuple<Int, Int, Int>> classes;
    Rat total(0);
    for (Int a = 1; a * a <= -d; ++a)
        for (Int b = -2 * a; b <= 2 * a; ++b) {
            Int num = b * b - d;
            if (num % (4 * a) != 0) continue;
            BQForm q{a, b, num / (4 * a)};
            if (q.c <= 0) continue;
            BQForm r = reduce(q);
            if (classes.insert(r.key()).second) total += Rat(1) / Rat(form_weight(r));
        }
    return total;
}

} // namespace

TEST_CASE("gauss error function") {
    CHECK(gauss_E(Real(0)) == 0);
    for (Real x : {Real("0.3"), Real(1), Real("2.5")})
        CHECK(abs(gauss_E(-x) + gauss_E(x)) < Real("1e-40"));
    CHECK(abs(gauss_E(Real(3)) - quad_E(Real(3))) < Real("1e-12"));
    CHECK(abs(gauss_E(Real("0.7")) - quad_E(Real("0.7"))) < Real("1e-12"));
}

TEST_CASE("beta function") {
    CHECK(abs(beta_fn(Real(0)) - 1 / real_pi()) < Real("1e-40"));
    CHECK(abs(beta_fn(Real(1)) - quad_beta(Real(1))) < Real("1e-12"));
    CHECK(abs(beta_fn(Real("0.25")) - quad_beta(Real("0.25"))) < Real("1e-12"));
    for (Real t : {Real("0.1"), Real(1), Real(3), Real(7)})
        CHECK(beta_fn(t) <= exp(-real_pi() * t) / real_pi());
    CHECK_THROWS_AS(beta_fn(Real(-1)), Error);
}

TEST_CASE("psi decomposition and differential equation") {
    CHECK(abs(psi_fn(Real(0)) - 1 / real_pi()) < Real("1e-40"));
    for (int i = 0; i <= 100; ++i) {
        Real x = Real(i - 50) / 10;
        CHECK(abs(psi_fn(x) - (abs(x) + beta_fn(x * x))) < Real("1e-12"));
    }
    // x psi' + psi''/(2 pi) = psi by central differences.
    Real h("1e-8");
    for (Real x : {Real("0.37"), Real("1.9"), Real("-2.6")}) {
        Real d1 = (psi_fn(x + h) - psi_fn(x - h)) / (2 * h);
        Real d2 = (psi_fn(x + h) - 2 * psi_fn(x) + psi_fn(x - h)) / (h * h);
        CHECK(abs(x * d1 + d2 / (2 * real_pi()) - psi_fn(x)) < Real("1e-8"));
    }
}

TEST_CASE("E2 series and completion") {
    ScalarQSeries e2 = e2_series(Int(3));
    CHECK(e2.coeff(0) == 1);
    CHECK(e2.coeff(1) == -24);
    CHECK(e2.coeff(2) == -72);
    CHECK(e2.coeff(3) == -96);
    // E2(tau + 1) = E2(tau) numerically.
    Complex tau(Real("0.3"), Real("1.1"));
    auto v1 = e2_star_eval(tau, Int(60));
    auto v2 = e2_star_eval(tau + Complex(1), Int(60));
    CHECK(abs(v1.value - v2.value) < Real("1e-20") + v1.tail_bound + v2.tail_bound);
    // E2*(-1/tau) = tau^2 E2*(tau) at tau = 2i.
    Complex t2(Real(0), Real(2));
    auto a = e2_star_eval(Complex(-1) / t2, Int(40));
    auto b = e2_star_eval(t2, Int(40));
    CHECK(abs(a.value - t2 * t2 * b.value) < Real("1e-8"));
}

TEST_CASE("hurwitz class numbers at level 1") {
    CHECK(hurwitz_H(1, -3, 1) == Rat(1, 3));
    CHECK(hurwitz_H(1, -4, 0) == Rat(1, 2));
    CHECK(hurwitz_H(1, -15, 1) == Rat(2));
    CHECK(hurwitz_H(1, -23, 1) == Rat(3));
    for (Int d = -3; d >= -40; --d) {
        if (mod_euclid(d, 4) != 0 && mod_euclid(d, 4) != 1) continue;
        Int r = mod_euclid(d, 2);
        CHECK(hurwitz_H(1, d, r) == reduced_forms_oracle(d));
    }
    CHECK_THROWS_AS(hurwitz_H(1, -3, 0), Inadmissible);
    CHECK(hurwitz_H(1, -4, 0, true) == Rat(1));
}

TEST_CASE("hurwitz orbit merge stabilizes for levels 2 and 3") {
    for (Int n : {Int(2), Int(3)}) {
        for (Int d = -1; d >= -40; --d) {
            for (Int r = 0; r < 2 * n; ++r) {
                if (mod_euclid(r * r - d, 4 * n) != 0) continue;
                Rat h = hurwitz_H(n, d, r);
                CHECK(h >= 0);
                // symmetry H(D, r) = H(D, -r)
                CHECK(h == hurwitz_H(n, d, mod_euclid(-r, 2 * n)));
                // stabilization under one more doubling of the window
                Int big = n * (isqrt_floor_rat(Rat(-d, 3)) + 1) * 16;
                CHECK(h == hurwitz_orbit_count(n, d, r, big, false));
                // independent double-coset route
                CHECK(h == hurwitz_double_coset(n, d, r));
            }
        }
    }
}

TEST_CASE("hurwitz orbit merge matches the double coset route at higher level") {
    for (Int n : {Int(4), Int(5), Int(6)}) {
        int checked = 0;
        for (Int d = -1; d >= -25 && checked < 8; --d)
            for (Int r = 0; r < 2 * n; ++r) {
                if (mod_euclid(r * r - d, 4 * n) != 0) continue;
                CHECK(hurwitz_H(n, d, r) == hurwitz_double_coset(n, d, r));
                ++checked;
            }
    }
}

TEST_CASE("theta_half") {
    auto th = theta_half(Int(1), Rat(3));
    CHECK(th.coeff(Rat(0), 0) == 1);
    CHECK(th.coeff(Rat(1, 4), 1) == 2);
    CHECK(th.coeff(Rat(1), 0) == 2);
    CHECK(th.supported_on(+1));
    auto th2 = theta_half(Int(2), Rat(2));
    CHECK(th2.coeff(Rat(0), 0) == 1);
    CHECK(th2.coeff(Rat(1, 8), 1) == 1);
    CHECK(th2.coeff(Rat(1, 8), th2.group()->index({3})) == 1);
}

TEST_CASE("theta_definite") {
    auto l = validate_even_lattice(IMat{{-2}});
    auto th = theta_definite(l, Rat(4));
    CHECK(th.coeff(Rat(0), 0) == 1);
    CHECK(th.coeff(Rat(1), 0) == 2);
    CHECK(th.coeff(Rat(2), 0) == 0);
    CHECK(th.coeff(Rat(4), 0) == 2);
    CHECK(th.coeff(Rat(1, 4), 1) == 2);
    CHECK(th.supported_on(-1));

    auto rank0 = theta_definite(validate_even_lattice(IMat(0, 0)), Rat(5));
    CHECK(rank0.coeff(Rat(0), 0) == 1);
    CHECK(rank0.terms().size() == 1);

    auto a2 = theta_definite(validate_even_lattice(IMat{{-2, 1}, {1, -2}}), Rat(2));
    CHECK(a2.coeff(Rat(1), 0) == 6);
    for (const auto& [e, v] : a2.terms())
        for (const Rat& c : v) {
            CHECK(c >= 0);
            CHECK(is_integer(c));
        }
    CHECK_THROWS_AS(theta_definite(validate_even_lattice(IMat{{2}}), Rat(1)), NotDefinite);
}

TEST_CASE("zagier F holomorphic part") {
    auto f = zagier_F(Int(1), Rat(4));
    CHECK(f.holo.coeff(Rat(0), 0) == Rat(-1, 12));
    CHECK(f.holo.coeff(Rat(3, 4), 1) == Rat(1, 3));
    CHECK(f.holo.coeff(Rat(1), 0) == Rat(1, 2));
    CHECK(f.holo.coeff(Rat(2), 0) == Rat(1));
    CHECK(f.holo.coeff(Rat(7, 4), 1) == Rat(1));
    // admissibility: exponent support matches -q mod 1 (the conjugate
    // representation pattern).
    CHECK(f.holo.supported_on(-1));
    auto f2 = zagier_F(Int(2), Rat(2));
    CHECK(f2.holo.coeff(Rat(0), 0) == Rat(-1, 8));
    CHECK(f2.holo.coeff(Rat(7, 8), 1) == Rat(1, 2));       // H(7)/2
    CHECK(f2.holo.coeff(Rat(2), 0) == Rat(5, 4));          // (H(16) + 2 H(4))/2
    for (const auto& [e, v] : f2.holo.terms())
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0 && e > 0) CHECK(v[i] > 0);
}

TEST_CASE("zagier F full evaluator is modular") {
    // F(tau+1) = conj(rho_T) F(tau) and F(-1/tau) = phi^3 conj(rho_S) F(tau):
    // the numeric transformation pins the relative normalization of the
    // holomorphic and beta parts.
    for (Int n : {Int(1), Int(2), Int(3)}) {
        auto l = rank_one_lattice(2 * n);
        WeilAction w = weil_action(l);
        Complex tau(Real("0.13"), Real("0.9"));
        Rat trunc(40);
        auto fv = zagier_F_eval(n, tau, trunc);
        auto ft = zagier_F_eval(n, tau + Complex(1), trunc);
        auto fs = zagier_F_eval(n, Complex(-1) / tau, trunc);
        auto td = w.rho_t_conj();
        Real t_res(0);
        for (std::size_t i = 0; i < td.size(); ++i)
            t_res = (std::max)(t_res, Real(abs(ft.value[i] - td[i] * fv.value[i])));
        CHECK(t_res < Real("1e-10") + ft.tail_bound + fv.tail_bound);
        CMat sc = w.rho_s_conj();
        auto sv = sc * fv.value;
        Complex phi3 = pow(sqrt(tau), 3);
        Real s_res(0);
        for (std::size_t i = 0; i < sv.size(); ++i)
            s_res = (std::max)(s_res, Real(abs(fs.value[i] - phi3 * sv[i])));
        CHECK(s_res < Real("1e-8") + fs.tail_bound + fv.tail_bound);
    }
}
