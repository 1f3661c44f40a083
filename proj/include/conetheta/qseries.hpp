#pragma once

#include "conetheta/discriminant.hpp"
#include "conetheta/numeric.hpp"
#include "conetheta/weil.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace conetheta {

// Scalar q-expansion with integer exponents and exact coefficients.
struct ScalarQSeries {
    std::map<Int, Rat> terms;
    Rat bound = Rat(0);   // complete for exponents <= bound

    Rat coeff(const Int& e) const {
        auto it = terms.find(e);
        return it == terms.end() ? Rat(0) : it->second;
    }
    Int min_exp() const {
        for (const auto& [e, c] : terms)
            if (c != 0) return e;
        return Int(0);
    }
};

// Truncated vector-valued q-expansion: exact rational coefficients indexed
// by discriminant-group element, rational exponents with a common
// denominator, complete for all exponents <= bound.
class VectorValuedQSeries {
public:
    VectorValuedQSeries() = default;
    VectorValuedQSeries(DiscGroupPtr group, Rat bound)
        : group_(std::move(group)), bound_(std::move(bound)) {}

    const DiscGroupPtr& group() const { return group_; }
    const Rat& bound() const { return bound_; }
    const std::map<Rat, RatVec>& terms() const { return terms_; }
    std::optional<Rat> weight;     // bookkeeping only

    Int denom() const {
        Int d = 1;
        for (const auto& [e, c] : terms_) d = lcm(d, denominator(e));
        return d;
    }

    void add_term(const Rat& exp, std::size_t component, const Rat& value) {
        if (value == 0) return;
        if (exp > bound_) return;
        auto it = terms_.find(exp);
        if (it == terms_.end())
            it = terms_.emplace(exp, RatVec(group_->size(), Rat(0))).first;
        it->second[component] += value;
        if (it->second[component] == 0) prune(it);
    }

    Rat coeff(const Rat& exp, std::size_t component) const {
        auto it = terms_.find(exp);
        return it == terms_.end() ? Rat(0) : it->second[component];
    }

    Rat min_exp() const {
        for (const auto& [e, v] : terms_)
            for (const Rat& c : v)
                if (c != 0) return e;
        return Rat(0);
    }

    bool is_zero() const { return terms_.empty(); }

    bool same_series(const VectorValuedQSeries& o) const {
        return group_->same_structure(*o.group()) && terms_ == o.terms_;
    }

    // Every nonzero coefficient at (m, gamma) satisfies m = sign*q(gamma)
    // mod 1. Theta series of negative definite lattices and their weighted
    // relatives use sign = -1; the weight-1/2 theta uses sign = +1.
    bool supported_on(int sign) const {
        for (const auto& [e, v] : terms_)
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0 && mod1(e - Rat(sign) * group_->q_form_at(i)) != 0)
                    return false;
        return true;
    }

    VectorValuedQSeries& operator+=(const VectorValuedQSeries& o) {
        require_same_group(o);
        bound_ = (std::min)(bound_, o.bound_);
        truncate_to(bound_);
        for (const auto& [e, v] : o.terms_) {
            if (e > bound_) continue;
            for (std::size_t i = 0; i < v.size(); ++i) add_term(e, i, v[i]);
        }
        return *this;
    }

    VectorValuedQSeries operator+(const VectorValuedQSeries& o) const {
        VectorValuedQSeries r = *this;
        r += o;
        return r;
    }

    VectorValuedQSeries operator-(const VectorValuedQSeries& o) const {
        return *this + o.scaled(Rat(-1));
    }

    VectorValuedQSeries scaled(const Rat& f) const {
        VectorValuedQSeries r(group_, bound_);
        r.weight = weight;
        if (f == 0) return r;
        for (const auto& [e, v] : terms_) {
            RatVec w(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] * f;
            r.terms_.emplace(e, std::move(w));
        }
        return r;
    }

    VectorValuedQSeries truncated(const Rat& new_bound) const {
        VectorValuedQSeries r(group_, (std::min)(bound_, new_bound));
        for (const auto& [e, v] : terms_) {
            if (e > r.bound_) break;
            r.terms_.emplace(e, v);
        }
        return r;
    }

    // Coefficient-wise image under a discriminant-group map.
    template <typename MapApply>
    VectorValuedQSeries mapped(const DiscGroupPtr& target, MapApply&& apply) const {
        VectorValuedQSeries r(target, bound_);
        for (const auto& [e, v] : terms_) {
            RatVec w = apply(v);
            for (std::size_t i = 0; i < w.size(); ++i)
                if (w[i] != 0) r.add_term(e, i, w[i]);
        }
        return r;
    }

private:
    DiscGroupPtr group_;
    Rat bound_ = Rat(0);
    std::map<Rat, RatVec> terms_;

    void prune(std::map<Rat, RatVec>::iterator it) {
        for (const Rat& c : it->second)
            if (c != 0) return;
        terms_.erase(it);
    }
    void truncate_to(const Rat& b) {
        auto it = terms_.upper_bound(b);
        terms_.erase(it, terms_.end());
    }
    void require_same_group(const VectorValuedQSeries& o) const {
        if (!group_ || !o.group_ || !group_->same_structure(*o.group_))
            throw GroupMismatch("series over different discriminant groups");
    }

    friend VectorValuedQSeries tensor(const VectorValuedQSeries&, const VectorValuedQSeries&,
                                      const DiscGroupPtr&);
    friend VectorValuedQSeries scalar_multiply(const VectorValuedQSeries&, const ScalarQSeries&);
};

inline VectorValuedQSeries zero_series(const DiscGroupPtr& g, const Rat& bound) {
    return VectorValuedQSeries(g, bound);
}

// f tensor g over the product group. The product group must be the product
// of f's and g's groups (built by the caller so lattice data lines up).
inline VectorValuedQSeries tensor(const VectorValuedQSeries& f, const VectorValuedQSeries& g,
                                  const DiscGroupPtr& product_group) {
    Rat b1 = f.bound() + g.min_exp();
    Rat b2 = g.bound() + f.min_exp();
    Rat bound = (std::min)(b1, b2);
    VectorValuedQSeries r(product_group, bound);
    std::size_t n1 = f.group()->size();
    for (const auto& [e1, v1] : f.terms_)
        for (const auto& [e2, v2] : g.terms_) {
            Rat e = e1 + e2;
            if (e > bound) continue;
            for (std::size_t i = 0; i < v1.size(); ++i) {
                if (v1[i] == 0) continue;
                for (std::size_t j = 0; j < v2.size(); ++j) {
                    if (v2[j] == 0) continue;
                    // product group index: factor 1 varies fastest.
                    r.add_term(e, i + n1 * j, v1[i] * v2[j]);
                }
            }
        }
    return r;
}

// Cauchy product with a scalar series (integer exponents >= 0 in use here).
inline VectorValuedQSeries scalar_multiply(const VectorValuedQSeries& f, const ScalarQSeries& e2) {
    Rat se_min(e2.min_exp());
    Rat b1 = f.bound() + se_min;
    Rat b2 = e2.bound + f.min_exp();
    Rat bound = (std::min)(b1, b2);
    VectorValuedQSeries r(f.group(), bound);
    for (const auto& [ef, vf] : f.terms_)
        for (const auto& [es, cs] : e2.terms) {
            if (cs == 0) continue;
            Rat e = ef + Rat(es);
            if (e > bound) continue;
            for (std::size_t i = 0; i < vf.size(); ++i)
                if (vf[i] != 0) r.add_term(e, i, vf[i] * cs);
        }
    return r;
}

inline VectorValuedQSeries apply_pull(const VectorValuedQSeries& f, const LatticeMapPair& m) {
    if (!f.group()->same_structure(*m.sub_group))
        throw GroupMismatch("apply_pull: series group does not match map source");
    return f.mapped(m.big_group, [&](const RatVec& v) { return m.apply_pull(v); });
}

inline VectorValuedQSeries apply_push(const VectorValuedQSeries& f, const LatticeMapPair& m) {
    if (!f.group()->same_structure(*m.big_group))
        throw GroupMismatch("apply_push: series group does not match map source");
    return f.mapped(m.sub_group, [&](const RatVec& v) { return m.apply_push(v); });
}

inline VectorValuedQSeries apply_from_k(const VectorValuedQSeries& f, const IsotropicMapPair& m) {
    if (!f.group()->same_structure(*m.k_group))
        throw GroupMismatch("apply_from_k: series group does not match disc(K)");
    return f.mapped(m.l_group, [&](const RatVec& v) { return m.apply_from_k(v); });
}

inline VectorValuedQSeries apply_to_k(const VectorValuedQSeries& f, const IsotropicMapPair& m) {
    if (!f.group()->same_structure(*m.l_group))
        throw GroupMismatch("apply_to_k: series group does not match disc(L)");
    return f.mapped(m.k_group, [&](const RatVec& v) { return m.apply_to_k(v); });
}

} // namespace conetheta
