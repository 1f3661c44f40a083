#pragma once

#include "conetheta/numeric.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

namespace conetheta {

// Positive definite integral binary quadratic form a x^2 + b xy + c y^2.
struct BQForm {
    Int a, b, c;
    Int disc() const { return b * b - 4 * a * c; }
    auto key() const { return std::make_tuple(a, b, c); }
    bool operator<(const BQForm& o) const { return key() < o.key(); }
    bool operator==(const BQForm& o) const { return key() == o.key(); }
};

// Q composed with [[alpha, beta], [gamma, delta]].
inline BQForm act(const BQForm& q, const std::array<Int, 4>& m) {
    const Int &al = m[0], &be = m[1], &ga = m[2], &de = m[3];
    BQForm r;
    r.a = q.a * al * al + q.b * al * ga + q.c * ga * ga;
    r.b = 2 * q.a * al * be + q.b * (al * de + be * ga) + 2 * q.c * ga * de;
    r.c = q.a * be * be + q.b * be * de + q.c * de * de;
    return r;
}

// Stabilizer weight w_Q = |Stab|/2: 3 when the primitive part has
// discriminant -3, 2 when -4, else 1. For forms with N | a every automorph
// lies in Gamma_0(N), so the weight is level-independent.
inline Int form_weight(const BQForm& q) {
    Int g = gcd(gcd(q.a, q.b), q.c);
    Int d = q.disc() / (g * g);
    if (d == -3) return 3;
    if (d == -4) return 2;
    return 1;
}

// Weighted class number H(D) at level 1 by reduced-form enumeration:
// |b| <= a <= c with b >= 0 when |b| = a or a = c.
inline Rat hurwitz_level1(const Int& d) {
    if (d >= 0) throw Inadmissible("discriminant must be negative");
    Rat total(0);
    for (Int a = 1; 3 * a * a <= -d; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            if (mod_euclid(b - d, 2) != 0) continue;
            Int num = b * b - d;
            if (num % (4 * a) != 0) continue;
            Int c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && (b == -a || a == c)) continue;   // unreachable with b > -a
            total += Rat(1) / Rat(form_weight({a, b, c}));
        }
    }
    return total;
}

namespace detail {

// Schreier generators of Gamma_0(N) from the coset graph of
// SL_2(Z) = <S, T> on P^1(Z/N).
inline std::vector<std::array<Int, 4>> gamma0_generators(const Int& n) {
    auto mul = [](const std::array<Int, 4>& x, const std::array<Int, 4>& y) {
        return std::array<Int, 4>{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                                  x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
    };
    auto inv = [](const std::array<Int, 4>& x) {
        return std::array<Int, 4>{x[3], -x[1], -x[2], x[0]};
    };
    // Coset label: (c : d) in P^1(Z/N), normalized to the lexicographically
    // least representative among unit multiples.
    auto label = [&](const std::array<Int, 4>& g) {
        Int c = mod_euclid(g[2], n), d = mod_euclid(g[3], n);
        std::pair<Int, Int> best{-1, -1};
        for (Int u = 1; u < n; ++u) {
            if (gcd(u, n) != 1) continue;
            std::pair<Int, Int> cand{mod_euclid(u * c, n), mod_euclid(u * d, n)};
            if (best.first < 0 || cand < best) best = cand;
        }
        if (n == 1) best = {Int(0), Int(0)};
        return best;
    };
    const std::array<Int, 4> S{0, -1, 1, 0}, T{1, 1, 0, 1};
    std::map<std::pair<Int, Int>, std::array<Int, 4>> reps;
    std::vector<std::array<Int, 4>> queue{{1, 0, 0, 1}};
    reps[label(queue[0])] = queue[0];
    std::set<std::tuple<Int, Int, Int, Int>> gens_seen;
    std::vector<std::array<Int, 4>> gens;
    auto push_gen = [&](const std::array<Int, 4>& g) {
        if (mod_euclid(g[2], n) != 0) throw Error("Schreier generator not in Gamma_0(N)");
        if (g[0] == 1 && g[1] == 0 && g[2] == 0 && g[3] == 1) return;
        auto k = std::make_tuple(g[0], g[1], g[2], g[3]);
        if (gens_seen.insert(k).second) gens.push_back(g);
    };
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (const auto& x : {S, T}) {
            auto next = mul(queue[i], x);
            auto lab = label(next);
            auto it = reps.find(lab);
            if (it == reps.end()) {
                reps[lab] = next;
                queue.push_back(next);
            } else {
                push_gen(mul(next, inv(it->second)));
            }
        }
    }
    return gens;
}

} // namespace detail

// Orbit count of Q_{N,D,r} under Gamma_0(N) within the window a <= a_bound,
// with b normalized into (-a, a] by T-translations (which respect both the
// N | a and b mod 2N constraints).
inline Rat hurwitz_orbit_count(const Int& n, const Int& d, const Int& r, const Int& a_bound,
                               bool both_signs) {
    if (d >= 0) throw Inadmissible("discriminant must be negative");
    if (mod_euclid(r * r - d, 4 * n) != 0) throw Inadmissible("r^2 != D mod 4N");
    auto normalize = [&](BQForm q) {
        // b mod 2a into (-a, a]: T^k sends (a, b, c) to (a, b + 2ak, *).
        Int b2 = mod_euclid(q.b, 2 * q.a);
        if (b2 > q.a) b2 -= 2 * q.a;
        Int c2 = (b2 * b2 - d) / (4 * q.a);
        return BQForm{q.a, b2, c2};
    };
    std::vector<BQForm> seeds;
    std::map<std::tuple<Int, Int, Int>, std::size_t> index_of;
    for (Int a = n; a <= a_bound; a += n) {
        for (Int b = -a + 1; b <= a; ++b) {
            if (mod_euclid(b - r, 2 * n) != 0) continue;
            Int num = b * b - d;
            if (num % (4 * a) != 0) continue;
            BQForm q{a, b, num / (4 * a)};
            if (index_of.emplace(q.key(), seeds.size()).second) seeds.push_back(q);
        }
    }
    // Merge connected components of the generator graph explored up to a
    // cap above the seed window, so equivalence paths may pass through
    // larger forms than the seeds themselves.
    Int explore = a_bound * 4;
    auto gens = detail::gamma0_generators(n);
    gens.push_back({1, 1, 0, 1});       // T
    gens.push_back({1, 0, n, 1});       // lower parabolic, always in Gamma_0(N)
    std::vector<std::array<Int, 4>> with_inv = gens;
    for (const auto& g : gens) with_inv.push_back({g[3], -g[1], -g[2], g[0]});
    std::map<std::tuple<Int, Int, Int>, std::size_t> node_of;
    std::vector<BQForm> nodes;
    std::vector<std::size_t> parent;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t x, std::size_t y) { parent[find(x)] = find(y); };
    auto node_index = [&](const BQForm& q) {
        auto [it, fresh] = node_of.emplace(q.key(), nodes.size());
        if (fresh) {
            nodes.push_back(q);
            parent.push_back(parent.size());
        }
        return it->second;
    };
    for (const BQForm& s : seeds) node_index(s);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        BQForm q = nodes[i];
        for (const auto& g : with_inv) {
            BQForm img = normalize(act(q, g));
            if (img.a <= 0 || img.a > explore) continue;
            std::size_t j = node_index(img);
            unite(i, j);
        }
    }
    std::map<std::size_t, Int> weight_of_root;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        std::size_t rt = find(node_of.at(seeds[i].key()));
        Int w = form_weight(seeds[i]);
        auto it = weight_of_root.find(rt);
        if (it == weight_of_root.end())
            weight_of_root[rt] = w;
        else if (it->second != w)
            throw Error("inconsistent stabilizer weights within an orbit");
    }
    Rat total(0);
    for (const auto& [rt, w] : weight_of_root) total += Rat(1) / Rat(w);
    if (both_signs) total *= 2;
    return total;
}

// Independent route to the same count: within one SL_2(Z)-class with
// reduced representative f, the Gamma_0(N)-orbits meeting Q_{N,D,r}
// correspond to Aut(f)-orbits on the left cosets g Gamma_0(N) for which
// f o g satisfies the congruences. Used as a cross-check oracle.
inline Rat hurwitz_double_coset(const Int& n, const Int& d, const Int& r) {
    if (d >= 0) throw Inadmissible("discriminant must be negative");
    if (mod_euclid(r * r - d, 4 * n) != 0) throw Inadmissible("r^2 != D mod 4N");
    // Reduced representatives of all SL_2(Z)-classes of disc d.
    std::vector<BQForm> reps;
    for (Int a = 1; 3 * a * a <= -d; ++a)
        for (Int b = -a + 1; b <= a; ++b) {
            if (mod_euclid(b - d, 2) != 0) continue;
            Int num = b * b - d;
            if (num % (4 * a) != 0) continue;
            Int c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && a == c) continue;   // reduced-form tie-break
            reps.push_back({a, b, c});
        }
    // Left coset representatives of SL_2(Z) / Gamma_0(N), labeled by the
    // first column (a : c) mod N up to units.
    auto label = [&](const std::array<Int, 4>& g) {
        Int a = mod_euclid(g[0], n), c = mod_euclid(g[2], n);
        std::pair<Int, Int> best{-1, -1};
        for (Int u = 1; u < n; ++u) {
            if (gcd(u, n) != 1) continue;
            std::pair<Int, Int> cand{mod_euclid(u * a, n), mod_euclid(u * c, n)};
            if (best.first < 0 || cand < best) best = cand;
        }
        if (n == 1) best = {Int(0), Int(0)};
        return best;
    };
    auto mul = [](const std::array<Int, 4>& x, const std::array<Int, 4>& y) {
        return std::array<Int, 4>{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                                  x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
    };
    const std::array<Int, 4> S{0, -1, 1, 0}, T{1, 1, 0, 1};
    std::map<std::pair<Int, Int>, std::array<Int, 4>> cosets;
    std::vector<std::array<Int, 4>> queue{{1, 0, 0, 1}};
    cosets[label(queue[0])] = queue[0];
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (const auto& x : {S, T}) {
            auto nx = mul(x, queue[i]);   // left multiplication walks left cosets
            if (cosets.emplace(label(nx), nx).second) queue.push_back(nx);
        }
    Rat total(0);
    for (const BQForm& f : reps) {
        // Automorphs of f from the Pell solutions of its primitive part.
        Int g = gcd(gcd(f.a, f.b), f.c);
        Int d0 = d / (g * g);
        BQForm f0{f.a / g, f.b / g, f.c / g};
        std::vector<std::array<Int, 4>> aut;
        for (Int u = -1; u <= 1; ++u) {   // u^2 <= 4/|d0| and |d0| >= 3
            Int rhs = 4 + d0 * u * u;
            if (rhs < 0) continue;
            Int t = sqrt(rhs);
            if (t * t != rhs) continue;
            std::vector<Int> ts = (t == 0) ? std::vector<Int>{Int(0)} : std::vector<Int>{t, -t};
            for (const Int& tt : ts) {
                std::array<Int, 4> m{(tt - f0.b * u) / 2, -f0.c * u, f0.a * u, (tt + f0.b * u) / 2};
                if (m[0] * m[3] - m[1] * m[2] != 1)
                    throw Error("automorph construction failed");
                aut.push_back(m);
            }
        }
        Int w = Int(aut.size()) / 2;
        // Valid cosets and the Aut(f)-orbit count on them.
        std::map<std::pair<Int, Int>, std::size_t> valid;
        std::vector<std::pair<Int, Int>> labels;
        for (const auto& [lab, rep] : cosets) {
            BQForm img = act(f, rep);
            if (mod_euclid(img.a, n) != 0) continue;
            if (mod_euclid(img.b - r, 2 * n) != 0) continue;
            valid.emplace(lab, labels.size());
            labels.push_back(lab);
        }
        std::vector<std::size_t> parent(labels.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto& rep = cosets.at(labels[i]);
            for (const auto& m : aut) {
                auto moved = label(mul(m, rep));
                auto it = valid.find(moved);
                if (it == valid.end()) throw Error("automorph left the valid coset set");
                parent[find(i)] = find(it->second);
            }
        }
        std::set<std::size_t> roots;
        for (std::size_t i = 0; i < labels.size(); ++i) roots.insert(find(i));
        total += Rat(Int(roots.size())) / Rat(w);
    }
    return total;
}

// H(D, r): weighted Gamma_0(N)-orbit count of positive definite forms with
// N | a, b = r mod 2N, disc D. Level 1 uses classical reduction; higher
// levels use the orbit merge with the search bound doubled until the count
// stabilizes twice.
inline Rat hurwitz_H(const Int& n, const Int& d, const Int& r, bool both_signs = false) {
    if (d >= 0) throw Inadmissible("discriminant must be negative");
    if (mod_euclid(r * r - d, 4 * n) != 0) throw Inadmissible("r^2 != D mod 4N");
    if (n == 1) {
        Rat h = hurwitz_level1(d);
        return both_signs ? h * 2 : h;
    }
    Int a = n * (isqrt_floor_rat(Rat(-d, 3)) + 1) * 2;
    Rat prev = hurwitz_orbit_count(n, d, r, a, both_signs);
    for (int i = 0; i < 6; ++i) {
        a *= 2;
        Rat cur = hurwitz_orbit_count(n, d, r, a, both_signs);
        if (cur == prev) return cur;
        prev = cur;
    }
    throw Error("Hurwitz orbit count did not stabilize");
}

// Table of H(D, r) for all admissible pairs with |D| <= max_abs_d.
struct ClassNumberTable {
    Int level;
    std::map<std::pair<Int, Int>, Rat> entries;
};

inline ClassNumberTable class_number_table(const Int& n, const Int& max_abs_d, bool both_signs = false) {
    ClassNumberTable t;
    t.level = n;
    for (Int d = -1; d >= -max_abs_d; --d)
        for (Int r = 0; r < 2 * n; ++r)
            if (mod_euclid(r * r - d, 4 * n) == 0)
                t.entries[{d, r}] = hurwitz_H(n, d, r, both_signs);
    return t;
}

} // namespace conetheta
