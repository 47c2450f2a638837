// fracpow.hpp
// Fractional parts of n^alpha in double-double precision, window
// membership with an explicit boundary tolerance, and constrained prime
// counting over windows [c, d) of the unit interval.

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "pfl/dd.hpp"
#include "pfl/primes.hpp"

namespace pfl {

// A window [c, d) of [0, 1) for the fractional part of n^alpha, with a
// boundary tolerance eta.  Values within eta of an interior cut point are
// classified Boundary rather than silently assigned a side.
struct FracWindow {
    double alpha;
    double c;
    double d;
    double eta;

    FracWindow(double alpha_, double c_, double d_, double eta_ = 1e-12);

    bool full() const { return c == 0.0 && d == 1.0; }
};

// rejects alpha within 1e-12 of an integer (or <= 0)
void validate_alpha(double alpha);

enum class Membership { In, Out, Boundary };

struct FracValue {
    double value; // {n^alpha} in [0, 1)
    double err;   // heuristic absolute-error bound for value
};

// {n^alpha} via double-double log/exp.  Values indistinguishable from an
// integer power at the error bound collapse to 0.
FracValue frac_pow(std::uint64_t n, double alpha);

// fractional part and error of h * n^alpha (the exponential-sum phase)
FracValue frac_pow_scaled(std::uint64_t n, double alpha, std::int64_t h);

// {sqrt(n)} with full relative accuracy near 0: the integer part is removed
// exactly (s = isqrt(n)), then sqrt(n) - s = (n - s^2) / (sqrt(n) + s).
double frac_sqrt_exact(std::uint64_t n);

// classification of an already-computed fractional value against a window
Membership classify(double value, const FracWindow& w);

// tri-state membership of {n^alpha}; routes alpha == 1/2 through the exact
// square-root path
Membership in_window(std::uint64_t n, const FracWindow& w);

struct ConstrainedCount {
    std::uint64_t count = 0;          // primes classified In
    std::uint64_t boundary_count = 0; // primes classified Boundary (reported, never counted)
};

// #{p prime in [x_lo, x_hi) : p ≡ a (mod q), {p^alpha} In w}
ConstrainedCount count_constrained(std::uint64_t x_lo, std::uint64_t x_hi,
                                   const FracWindow& w, std::uint64_t q, std::uint64_t a,
                                   const SieveOptions& opt = {});

struct EquidistRow {
    std::uint64_t x;
    double alpha, c, d;
    std::uint64_t q, a;
    std::uint64_t observed;
    double predicted;         // (d - c) * pi(x; q, a)
    double deviation;         // |observed - predicted| / max(1, predicted)
    std::uint64_t boundary_count;
};

// Observed window count among p <= x, p ≡ a (mod q) against its expected
// share (d - c) of the progression.  Requires (a, q) = 1 and q <= x^(1/3).
EquidistRow equidist_report(std::uint64_t x, const FracWindow& w,
                            std::uint64_t q, std::uint64_t a,
                            const SieveOptions& opt = {});

} // namespace pfl
