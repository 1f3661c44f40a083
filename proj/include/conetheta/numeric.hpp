#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/math/constants/constants.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace conetheta {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Working float precision for all transformation checks and evaluators.
// 50 significant decimal digits; change the typedefs to rescale the whole
// numeric layer.
using Real = boost::multiprecision::cpp_bin_float_50;
using Complex = boost::multiprecision::cpp_complex_50;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotSymmetric : Error { using Error::Error; };
struct OddDiagonal : Error { using Error::Error; };
struct Degenerate : Error { using Error::Error; };
struct NotDefinite : Error { using Error::Error; };
struct NotIsotropic : Error { using Error::Error; };
struct NotPrimitive : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct GroupMismatch : Error { using Error::Error; };
struct NotFiniteIndex : Error { using Error::Error; };
struct RayNotInCone : Error { using Error::Error; };
struct RelationViolated : Error { using Error::Error; };
struct IsotropicRay : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct FanIncomplete : Error { using Error::Error; };
struct Inadmissible : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };

inline const Real& real_pi() {
    static const Real pi = boost::math::constants::pi<Real>();
    return pi;
}

inline Real to_real(const Rat& r) {
    return r.convert_to<Real>();
}

inline Real to_real(const Int& n) {
    return n.convert_to<Real>();
}

// e^{2 pi i t} for exact rational t.
inline Complex exp2pii(const Rat& t) {
    Real angle = 2 * real_pi() * to_real(t);
    return Complex(cos(angle), sin(angle));
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int mod_euclid(const Int& a, const Int& b) {
    Int r = a % b;
    if (r < 0) r += abs(b);
    return r;
}

inline Int rat_floor(const Rat& r) {
    return floor_div(numerator(r), denominator(r));
}

inline Int rat_ceil(const Rat& r) {
    return -rat_floor(-r);
}

// Fractional part in [0, 1).
inline Rat mod1(const Rat& r) {
    return r - Rat(rat_floor(r));
}

inline bool is_integer(const Rat& r) {
    return denominator(r) == 1;
}

// Largest k >= 0 with k^2 <= r; requires r >= 0.
inline Int isqrt_floor_rat(const Rat& r) {
    if (r < 0) throw Error("isqrt of negative rational");
    Int fl = rat_floor(r);
    Int k = sqrt(fl);
    while (k * k > fl) --k;
    while ((k + 1) * (k + 1) <= fl) ++k;
    return k;
}

inline std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in '" + s + "'");
        return Rat(num, den);
    } catch (const std::exception& e) {
        throw InputError("bad rational '" + s + "': " + e.what());
    }
}

using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

inline bool lex_less(const RatVec& a, const RatVec& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

} // namespace conetheta
