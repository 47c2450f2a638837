// bv.hpp
// Exact computation of the summed worst-residue discrepancy
//     D(x, Q) = sum_{3 <= q <= Q} max_{(a,q)=1} | N(q, a) - G / phi(q) |
// over the primes in [x, 2x), optionally restricted to the window
// {p : {p^alpha} in [c, d)}.  N(q, a) counts window primes ≡ a (mod q) and
// G counts all window primes in range; with no window this is the
// classical single-range form.  Everything is a direct sieve sweep; no
// estimate stands in for a count.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pfl/fracpow.hpp"
#include "pfl/primes.hpp"

namespace pfl {

struct DiscrepancyRow {
    std::uint64_t q = 0;
    std::uint64_t worst_a = 0;   // smallest coprime residue attaining the max
    std::uint64_t local = 0;     // count at worst_a
    double expected = 0;         // G / phi(q)
    double discrepancy = 0;      // max over coprime residues
};

struct DiscrepancyReport {
    std::uint64_t x = 0;
    std::uint64_t q_max = 0;
    std::optional<FracWindow> window; // nullopt: classical (all primes)
    std::vector<DiscrepancyRow> rows; // q ascending, 3..q_max
    double total = 0;                 // sum of discrepancies
    std::uint64_t global_count = 0;   // window primes in [x, 2x)
    std::uint64_t boundary_total = 0; // tri-state boundary primes (excluded)
};

// q histogram memory budget in counters; larger Q ranges stream in blocks
// of moduli, one sieve sweep per block
inline constexpr std::uint64_t kResidueBudget = 1ull << 26;

DiscrepancyReport bv_discrepancy(std::uint64_t x, std::uint64_t q_max,
                                 const std::optional<FracWindow>& window,
                                 const SieveOptions& opt = {},
                                 std::uint64_t residue_budget = kResidueBudget);

struct ScalingRow {
    std::uint64_t x = 0;
    std::uint64_t q_max = 0;
    double total = 0;
    double ratio = 0;    // total / x
    double norm_log1 = 0; // total * log(x)   / x
    double norm_log2 = 0; // total * log(x)^2 / x
    double norm_log3 = 0; // total * log(x)^3 / x
};

// D(x, floor(x^(theta - eps))) across the grid, with (log x)^A probes for
// A = 1, 2, 3.  Trends only; the implied constant is not reproducible.
std::vector<ScalingRow> scaling_report(const std::vector<std::uint64_t>& x_grid,
                                       double theta, double eps, const FracWindow& window,
                                       const SieveOptions& opt = {});

} // namespace pfl
