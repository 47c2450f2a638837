// expsums.hpp
// Exponential sums e(h n^alpha) over primes (and integers) in arithmetic
// progressions, computed exactly term by term with double-double phases,
// plus the closed-form bound envelopes: the progression-sum envelope
// x^(1 - delta - eps^3/(3 alpha^2)) / q, the k-th-derivative-test envelope
//   N^(1+delta) (lambda^(1/(k(k-1))) + N^(-1/(k(k-1)))
//                + N^(-2/(k(k-1))) lambda^(-2/(k^2(k-1)))),
// the power-phase derivative envelopes with their Pochhammer factors, and
// the k selection floor(1.1 alpha / eps) + 1.
//
// Envelopes are reported with implied constant 1; they are shapes to plot
// against, never asserted as inequalities on the computed sums.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "pfl/primes.hpp"

namespace pfl {

struct ExpSum {
    std::complex<double> value;
    std::uint64_t terms = 0;
};

// sum of e(h p^alpha) over primes p in [x, 2x) with p ≡ a (mod q)
ExpSum exp_sum_primes(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                      std::int64_t h, double alpha, const SieveOptions& opt = {});

// sum of e(h n^alpha) over integers n in [lo, hi) with n ≡ a (mod q)
ExpSum exp_sum_integers(std::uint64_t lo, std::uint64_t hi, std::uint64_t q,
                        std::uint64_t a, std::int64_t h, double alpha);

// x^(1 - delta - eps^3 / (3 alpha^2)) / q.
// Requires 0 < eps < 1/3, eps < alpha/20, 0 < delta <= eps^3/(50 alpha^2), q > 2.
double thm1_bound(std::uint64_t x, std::uint64_t q, double alpha, double eps, double delta);

// the largest admissible delta, eps^3 / (50 alpha^2)
double thm1_delta_max(double alpha, double eps);

// floor(1.1 alpha / eps) + 1, clamped to >= 3
int choose_k(double alpha, double eps);

// product (alpha - i + 1) for i = 1..k
double pochhammer(double alpha, int k);

// Envelope data for a phase f on [nicest range]: 0 < lambda_k <= |f^(k)| <= L lambda_k.
struct PhaseEnvelope {
    int k = 3;
    double lambda_k = 0; // certified minimum of |f^(k)| over the range
    double L = 1;        // max/min ratio over the range
    std::uint64_t n_len = 0;
    double delta = 0.01;
};

// the k-th-derivative-test envelope (implied constant 1)
double hb_bound(const PhaseEnvelope& env);

// Envelope of the k-th derivative of f(t) = h (mq)^alpha t^alpha over
// t in [x/(mq), 2x/(mq)]: |f^(k)| = |(alpha)_k| h (mq)^k t^(alpha-k) x ...,
// evaluated at the range endpoints.  Requires k >= 3 and mq < x.
PhaseEnvelope phase_envelope_type1(std::int64_t h, std::uint64_t m, std::uint64_t q,
                                   std::uint64_t x, double alpha, int k);

struct SharpnessCell {
    std::int64_t h = 1;
    std::uint64_t m = 1, q = 3, a = 1, x = 1000;
    double alpha = 1.5;
    int k = 3;
    double hb_delta = 0.01;
};

struct SharpnessRow {
    SharpnessCell cell;
    double abs_sum = 0;   // |sum of e(f(r))| over the substituted range
    std::uint64_t terms = 0;
    double envelope = 0;  // hb_bound of the certified envelope
    double ratio = 0;     // abs_sum / envelope
};

// For each cell: substitutes n = q r + l (l ≡ a m^{-1} mod q), computes the
// true inner sum over r, and reports it against the derivative-test
// envelope.  Only |sum| <= terms is guaranteed; the ratio is measurement.
std::vector<SharpnessRow> sharpness_grid(const std::vector<SharpnessCell>& cells);

} // namespace pfl
