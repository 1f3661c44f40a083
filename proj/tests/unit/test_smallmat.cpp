#include <catch2/catch_amalgamated.hpp>

#include "conetheta/smallmat.hpp"

#include <random>

using namespace conetheta;

TEST_CASE("determinant and inverse") {
    IMat a{{2, 1}, {1, 2}};
    CHECK(det(a) == 3);
    IMat u{{0, 1}, {1, 0}};
    CHECK(det(u) == -1);
    QMat inv = inverse(to_rat(a));
    QMat prod = inv * to_rat(a);
    CHECK(prod == QMat::identity(2));
}

TEST_CASE("smith normal form reconstructs and divides") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dist(-6, 6);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + trial % 4, m = 1 + (trial / 2) % 4;
        IMat a(n, m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) a(i, j) = dist(rng);
        SmithForm f = smith_normal_form(a);
        CHECK(abs(det(f.u)) == 1);
        CHECK(abs(det(f.v)) == 1);
        CHECK(f.u * f.s * f.v == a);
        for (std::size_t i = 0; i + 1 < std::min(n, m); ++i) {
            if (f.s(i, i) != 0 && f.s(i + 1, i + 1) != 0)
                CHECK(f.s(i + 1, i + 1) % f.s(i, i) == 0);
            if (f.s(i, i) == 0) CHECK(f.s(i + 1, i + 1) == 0);
        }
    }
}

TEST_CASE("integer kernel is the full kernel") {
    IMat a{{2, 4, 6}};
    IMat k = integer_kernel(a);
    REQUIRE(k.cols() == 2);
    for (std::size_t j = 0; j < k.cols(); ++j) {
        Int s = 0;
        for (std::size_t i = 0; i < 3; ++i) s += a(0, i) * k(i, j);
        CHECK(s == 0);
    }
    // (1, 1, -1) lies in the kernel and must be an integer combination.
    QMat kq = to_rat(k);
    QMat normal = kq.transposed() * kq;
    RatVec rhs = kq.transposed() * RatVec{Rat(1), Rat(1), Rat(-1)};
    RatVec x = solve(normal, rhs);
    for (const Rat& c : x) CHECK(is_integer(c));
}

TEST_CASE("signature via characteristic polynomial") {
    QMat hyper{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
    auto [p, q] = sylvester_signature(hyper);
    CHECK(p == 1);
    CHECK(q == 1);
    QMat a2neg{{Rat(-2), Rat(1)}, {Rat(1), Rat(-2)}};
    auto [p2, q2] = sylvester_signature(a2neg);
    CHECK(p2 == 0);
    CHECK(q2 == 2);
}

TEST_CASE("eigen lower bound is a valid bound") {
    QMat a{{Rat(2), Rat(1)}, {Rat(1), Rat(2)}};
    Rat mu = eigen_lower_bound(a);
    CHECK(mu > 0);
    CHECK(mu <= 1);   // smallest eigenvalue of [[2,1],[1,2]] is 1
    QMat small{{Rat(1, 100)}};
    Rat mu2 = eigen_lower_bound(small);
    CHECK(mu2 > 0);
    CHECK(mu2 <= Rat(1, 100));
}
