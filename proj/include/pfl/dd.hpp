// dd.hpp
// Double-double arithmetic: an unevaluated pair of doubles carrying
// ~106 mantissa bits (~32 decimal digits).  This is the precision
// backbone for every fractional-part and phase computation in the
// library: at magnitudes around 1e13 a single double's ulp is ~2e-3,
// which destroys a fractional part, while a double-double still leaves
// ~1e-19 of headroom.
//
// The basic error-free transformations (two_sum, two_prod) and the
// exp/log/sin/cos algorithms follow the classic QD recipes
// (Hida/Li/Bailey) and Joldes et al., ACM TOMS 44 (2018).
//
// Everything here is value-type, allocation-free and thread-safe.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

namespace pfl {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace detail {

// |a| may be anything; exact: a + b = s + err.
inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// Requires |a| >= |b| (or a == 0); exact.
inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    double err = b - (s - a);
    return {s, err};
}

// Exact product via FMA.
inline DD two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

} // namespace detail

inline DD operator+(DD x, DD y) {
    DD s = detail::two_sum(x.hi, y.hi);
    DD t = detail::two_sum(x.lo, y.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DD operator+(DD x, double y) {
    DD s = detail::two_sum(x.hi, y);
    s.lo += x.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DD operator+(double x, DD y) { return y + x; }

inline DD operator-(DD x) { return {-x.hi, -x.lo}; }
inline DD operator-(DD x, DD y) { return x + (-y); }
inline DD operator-(DD x, double y) { return x + (-y); }
inline DD operator-(double x, DD y) { return (-y) + x; }

inline DD operator*(DD x, DD y) {
    DD p = detail::two_prod(x.hi, y.hi);
    p.lo += x.hi * y.lo + x.lo * y.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator*(DD x, double y) {
    DD p = detail::two_prod(x.hi, y);
    p.lo += x.lo * y;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator*(double x, DD y) { return y * x; }

inline DD operator/(DD x, DD y) {
    double q1 = x.hi / y.hi;
    DD r = x - y * q1;
    double q2 = r.hi / y.hi;
    r = r - y * q2;
    double q3 = r.hi / y.hi;
    DD q = detail::quick_two_sum(q1, q2);
    return q + q3;
}

inline DD operator/(DD x, double y) { return x / DD(y); }
inline DD operator/(double x, DD y) { return DD(x) / y; }

inline DD& operator+=(DD& x, DD y) { return x = x + y; }
inline DD& operator+=(DD& x, double y) { return x = x + y; }
inline DD& operator-=(DD& x, DD y) { return x = x - y; }
inline DD& operator*=(DD& x, DD y) { return x = x * y; }
inline DD& operator*=(DD& x, double y) { return x = x * y; }
inline DD& operator/=(DD& x, DD y) { return x = x / y; }

inline bool operator==(DD x, DD y) { return x.hi == y.hi && x.lo == y.lo; }
inline bool operator<(DD x, DD y) { return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo); }
inline bool operator>(DD x, DD y) { return y < x; }
inline bool operator<=(DD x, DD y) { return !(y < x); }
inline bool operator>=(DD x, DD y) { return !(x < y); }

inline DD dd_abs(DD x) { return x.hi < 0.0 || (x.hi == 0.0 && x.lo < 0.0) ? -x : x; }

// Exact conversion from a 64-bit integer (splits into two 32-bit halves).
inline DD dd_from_u64(std::uint64_t n) {
    double hi32 = static_cast<double>(n >> 32);
    double lo32 = static_cast<double>(n & 0xFFFFFFFFull);
    return detail::quick_two_sum(hi32 * 4294967296.0, lo32);
}

inline DD dd_from_i64(std::int64_t n) {
    if (n >= 0) return dd_from_u64(static_cast<std::uint64_t>(n));
    return -dd_from_u64(static_cast<std::uint64_t>(-(n + 1)) + 1ull);
}

// exact multiplication by a power of two
inline DD dd_ldexp(DD x, int e) { return {std::ldexp(x.hi, e), std::ldexp(x.lo, e)}; }

inline constexpr DD kDDLn2{6.931471805599453e-01, 2.3190468138462996e-17};
inline constexpr DD kDDTwoPi{6.283185307179586e+00, 2.4492935982947064e-16};
inline constexpr DD kDDSqrtHalf{7.071067811865476e-01, -4.833646656726457e-17};

// floor(x) as a double plus the remainder x - floor(x) in [0, 1).
// The split is exact: floor(hi) subtracts exactly, and the |lo| part can
// shift the result across an integer boundary by at most one.
inline std::pair<double, DD> dd_floor_split(DD x) {
    double f = std::floor(x.hi);
    DD r = detail::two_sum(x.hi - f, x.lo); // x.hi - f is exact
    if (r.hi < 0.0) {
        f -= 1.0;
        r = r + 1.0;
    }
    if (r.hi >= 1.0) {
        f += 1.0;
        r = r - 1.0;
    }
    // remainders within one dd-ulp of an integer collapse to 0
    if (r.hi < 0.0) r = DD(0.0);
    return {f, r};
}

// fractional part in [0, 1)
inline DD dd_frac(DD x) { return dd_floor_split(x).second; }

// exp(x); throws on overflow of the double exponent range.
inline DD dd_exp(DD x) {
    if (x.hi >= 709.0) throw std::overflow_error("dd_exp: argument overflows double range");
    if (x.hi <= -709.0) return DD(0.0);
    if (x.hi == 0.0 && x.lo == 0.0) return DD(1.0);

    // x = z*ln2 + 512*r, exp(x) = 2^z * exp(r)^512
    double z = std::nearbyint(x.hi / kDDLn2.hi);
    DD r = dd_ldexp(x - kDDLn2 * z, -9); // |r| <= ln2/1024
    // Taylor for expm1(r)
    DD p = r * r;
    DD s = r + dd_ldexp(p, -1);
    p = p * r;
    double fact = 6.0;
    double m = 3.0;
    DD t = p / fact;
    while (std::fabs(t.hi) > 1.0e-35) {
        s += t;
        p = p * r;
        m += 1.0;
        fact *= m;
        t = p / fact;
    }
    s += t;
    // undo the /512 scaling: (1+s) <- (1+s)^2, i.e. s <- 2s + s^2, nine times
    for (int i = 0; i < 9; ++i) s = dd_ldexp(s, 1) + s * s;
    s += 1.0;
    return dd_ldexp(s, static_cast<int>(z));
}

// natural log via one Newton step on exp (doubles the 53-bit seed accuracy)
inline DD dd_log(DD x) {
    if (!(x.hi > 0.0)) throw std::domain_error("dd_log: non-positive argument");
    DD y(std::log(x.hi));
    y = y + x * dd_exp(-y) - 1.0;
    return y;
}

// x^alpha for x > 0
inline DD dd_pow(DD x, DD alpha) { return dd_exp(alpha * dd_log(x)); }

inline DD dd_pow_ui(DD x, unsigned n) {
    DD acc(1.0);
    DD base = x;
    while (n > 0) {
        if (n & 1u) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

inline DD dd_sqrt(DD x) {
    if (x.hi == 0.0 && x.lo == 0.0) return DD(0.0);
    if (x.hi < 0.0) throw std::domain_error("dd_sqrt: negative argument");
    // Karp's trick: y ~ 1/sqrt(x), result = x*y + (x - (x*y)^2) * y / 2
    double y = 1.0 / std::sqrt(x.hi);
    double t = x.hi * y;
    DD tdd(t);
    DD err = (x - tdd * tdd) * (y * 0.5);
    return tdd + err;
}

namespace detail {

// sin and cos of t in [-pi/8, pi/8] by Taylor series
inline void sincos_taylor(DD t, DD& s, DD& c) {
    DD t2 = t * t;
    // sin
    DD term = t;
    DD acc = t;
    double fact = 1.0;
    double m = 1.0;
    for (;;) {
        term = term * t2;
        fact *= (m + 1.0) * (m + 2.0);
        m += 2.0;
        DD add = term / fact;
        if (std::fabs(add.hi) < 1.0e-35) break;
        acc = (static_cast<long>(m) % 4 == 1) ? acc + add : acc - add;
    }
    s = acc;
    // cos
    term = DD(1.0);
    acc = DD(1.0);
    fact = 1.0;
    m = 0.0;
    for (;;) {
        term = term * t2;
        fact *= (m + 1.0) * (m + 2.0);
        m += 2.0;
        DD add = term / fact;
        if (std::fabs(add.hi) < 1.0e-35) break;
        acc = (static_cast<long>(m) % 4 == 0) ? acc + add : acc - add;
    }
    c = acc;
}

} // namespace detail

// sin(2*pi*t) and cos(2*pi*t) for t in [0, 1).
// Reduction to the nearest eighth of a turn keeps the Taylor argument
// inside [-pi/8, pi/8]; the octant is recombined from exact table values.
inline void dd_sincos_2pi(DD t, double& sin_out, double& cos_out) {
    int oct = static_cast<int>(std::nearbyint(t.hi * 8.0));
    DD u = t - DD(oct / 8.0); // oct/8 is exact
    DD theta = u * kDDTwoPi;  // in [-pi/8, pi/8]
    DD s, c;
    detail::sincos_taylor(theta, s, c);
    DD S, C;
    switch (((oct % 8) + 8) % 8) {
        case 0: S = s; C = c; break;
        case 1: S = (s + c) * kDDSqrtHalf; C = (c - s) * kDDSqrtHalf; break;
        case 2: S = c; C = -s; break;
        case 3: S = (c - s) * kDDSqrtHalf; C = -((s + c) * kDDSqrtHalf); break;
        case 4: S = -s; C = -c; break;
        case 5: S = -((s + c) * kDDSqrtHalf); C = (s - c) * kDDSqrtHalf; break;
        case 6: S = -c; C = s; break;
        default: S = (s - c) * kDDSqrtHalf; C = (s + c) * kDDSqrtHalf; break;
    }
    sin_out = S.to_double();
    cos_out = C.to_double();
}

} // namespace pfl
