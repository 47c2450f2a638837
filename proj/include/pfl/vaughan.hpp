// vaughan.hpp
// Decomposition of the von-Mangoldt-weighted exponential sum over an
// arithmetic progression,
//     W = sum_{x <= n < y, n ≡ a (q)} Lambda(n) e(h n^alpha),
// into the five classical component sums driven by the cutoff
// V = floor(x^(1/3)):
//     W = -W0 + W1 - W2 + W3,        W0 = W4 + W5,
// with a_m = sum_{uv = m, u,v <= V} mu(u) Lambda(v)  (m <= V^2) and
// b_m = sum_{u | m, u <= V} mu(u).
//
// Every component sums over products m*n inside [x, y); in particular the
// Lambda-prefix component W1 ranges over n <= V within [x, y), which is
// empty whenever V < x, and the identity above is then exact.  All phase
// evaluations go through the double-double path and all accumulation is
// compensated in a fixed ascending order.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "pfl/primes.hpp"

namespace pfl {

struct VaughanCoeffs {
    std::uint64_t v = 0;       // cutoff V
    std::uint64_t b_limit = 0; // b_m computed for m <= b_limit
    // a_m as integer combinations of log p, converted to double once
    std::vector<double> a;       // index m <= V^2
    std::vector<std::int32_t> b; // index m <= b_limit
};

// requires tables.limit >= max(V^2, limit)
VaughanCoeffs vaughan_coeffs(std::uint64_t v, std::uint64_t limit, const ArithTables& tables);

struct VaughanDecomposition {
    std::uint64_t x = 0, y = 0; // range [x, y)
    std::uint64_t v = 0;        // cutoff floor(x^(1/3))
    std::uint64_t q = 1, a = 0;
    std::int64_t h = 0;
    double alpha = 0;
    std::complex<double> w, w0, w1, w2, w3, w4, w5;

    // |w - (-w0 + w1 - w2 + w3)|
    double identity_defect() const;
    // |w - (-w0 + w1 - w2 + w3)| / max(1, |w|)
    double identity_defect_rel() const;
};

// Computes W and all components by direct double loops over their ranges.
// Requires 2 <= x < y <= 2x, q >= 1, (a, q) = 1.  h = 0 is the phase-free
// degenerate mode (every e(.) = 1); alpha must be a valid non-integer.
VaughanDecomposition vaughan_split(std::uint64_t x, std::uint64_t y, std::uint64_t q,
                                   std::uint64_t a, std::int64_t h, double alpha);

// Dyadic partition of (lo, hi] into blocks (m, min(2m, hi)].
std::vector<std::pair<std::uint64_t, std::uint64_t>> dyadic_blocks(std::uint64_t lo,
                                                                   std::uint64_t hi);

} // namespace pfl
