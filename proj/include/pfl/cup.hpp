// cup.hpp
// Smoothed 1-periodic indicators of a window [c, d): the cup is the
// indicator of [c + delta/2, d - delta/2] convolved r times with a uniform
// kernel of total width delta.  That construction is exactly 1 on
// [c + delta, d - delta], exactly 0 outside [c, d], and has closed-form
// Fourier coefficients g(h) = phase * sin(pi h L)/(pi h) * sinc(pi h delta/r)^r
// obeying |g(h)| <= min(L, 1/(pi|h|), (1/(pi|h|)) (r/(pi|h| delta))^r).
//
// Edge cups cover the two ramp zones of the main cup with ramps one tenth
// as wide, giving the pointwise sandwich
//     cup <= indicator of [c, d) <= cup + left + right.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "pfl/dd.hpp"

namespace pfl {

enum class CupFlavor { Main, LeftEdge, RightEdge };

struct CupSpec {
    double c = 0;      // window [c, d) this cup serves
    double d = 1;
    double delta = 0;  // ramp width of this cup
    int r = 1;         // smoothing order (convolution count)
    double h_cut = 0;  // Fourier cutoff H used in truncation bounds
    CupFlavor flavor = CupFlavor::Main;

    // construction internals: the pre-convolution indicator is [mid_lo, mid_hi]
    double mid_lo = 0;
    double mid_hi = 0;
    std::vector<std::uint64_t> binom; // row r of Pascal's triangle
    DD inv_r_factorial{1.0};

    double support_lo() const { return mid_lo - delta / 2; }
    double support_hi() const { return mid_hi + delta / 2; }
    double flat_lo() const { return mid_lo + delta / 2; }
    double flat_hi() const { return mid_hi - delta / 2; }
    // exact mean over one period; equals d - c - delta for the main flavor
    double mean() const { return mid_hi - mid_lo; }
};

// Main cup for [c, d) with delta = (log x_scale)^-B, H = ceil(log2 x_scale)/delta,
// r = floor(H * delta).  Requires x_scale >= 16 and d - c > 2*delta.
CupSpec build_cup(double c, double d, double B, std::uint64_t x_scale);

// Edge cups reuse the main construction with delta_1 = delta/10 and
// H_1 = 10 H (so r is unchanged); the left cup is 1 on [c, c + delta],
// the right cup is 1 on [d - delta, d].
CupSpec build_edge_cup(const CupSpec& main, CupFlavor which);

// 1-periodic evaluation; exact 0/1 off the ramps, piecewise-polynomial
// (degree r) on them, evaluated in double-double.
double cup_eval(const CupSpec& spec, double x);

// closed-form Fourier coefficient g(h) with the convention
// psi(x) = mean + sum_{h != 0} g(h) e(h x),  e(t) = exp(2 pi i t);  h != 0.
std::complex<double> fourier_coeff(const CupSpec& spec, std::int64_t h);

// min(mean, 1/(pi|h|), (1/(pi|h|)) (r/(pi|h| delta))^r); h != 0.
double coeff_bound(const CupSpec& spec, std::int64_t h);

// |g(h)| and the bound evaluated side by side in double-double, so the
// comparison is not at the mercy of double rounding.
struct CoeffCheck {
    double abs_g;
    double bound;
    bool within;
};
CoeffCheck coeff_vs_bound(const CupSpec& spec, std::int64_t h);

// Numerical quadrature of integral psi(x) e(-h x) dx over one period:
// Gauss-Legendre panels aligned to the spline knots, subdivided for the
// oscillation, ~target_points evaluations.  The independent cross-check
// for the closed form (and, at h = 0, for the mean).
std::complex<double> fourier_quadrature(const CupSpec& spec, std::int64_t h,
                                        int target_points = 2048);

// Sum of coeff_bound over all |h| > h_cut (converges geometrically).
double coeff_bound_tail(const CupSpec& spec);

struct SandwichResult {
    double max_violation; // should be <= ~1e-12; negative means slack
    double at_x;
};

// Verifies cup <= indicator <= cup + left + right on a uniform grid.
SandwichResult sandwich_check(const CupSpec& main, const CupSpec& left,
                              const CupSpec& right, std::uint64_t grid,
                              unsigned threads = 1);

} // namespace pfl
