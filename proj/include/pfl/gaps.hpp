// gaps.hpp
// Admissible tuples of shifted primes and the bounded-gap bookkeeping:
// the k primes following k as an admissible k-tuple, the residue-class
// admissibility check (explicit for p <= k, structural for p > k, where k
// distinct offsets cannot cover p classes), tuple diameter, the lower
// bound log k - 2 log log k - 1 on the sieve functional M_k (k >= 600),
// the tuple-size selectors, the gap bound 9700 m^3 e^(6m), and a scanner
// for small gaps between consecutive window-constrained primes.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfl/fracpow.hpp"
#include "pfl/primes.hpp"

namespace pfl {

struct AdmissibleTuple {
    std::vector<std::uint64_t> offsets; // strictly increasing
};

// the k primes p_{pi(k)+1} .. p_{pi(k)+k} (i.e. the k smallest primes > k)
AdmissibleTuple admissible_tuple(std::uint64_t k, const SieveOptions& opt = {});

// first/last offsets of admissible_tuple(k) without materializing it
struct TupleSpan {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    std::uint64_t k = 0;
};
TupleSpan tuple_span(std::uint64_t k, const SieveOptions& opt = {});

struct AdmissibilityResult {
    bool admissible = false;
    std::optional<std::uint64_t> witness; // covering prime if not admissible
};

// Checks every prime p <= k explicitly via residue bit-vectors (Lemire
// fast-mod); p > k needs no check.  Offsets must be strictly increasing.
AdmissibilityResult is_admissible(const AdmissibleTuple& tuple, unsigned threads = 1);

// h_k - h_1; requires k >= 2
std::uint64_t diameter(const AdmissibleTuple& tuple);

// log k - 2 log log k - 1; requires k >= 600
double mk_lower(std::uint64_t k);

// floor(390 m^2 e^(6m)), evaluated in double-double before the floor
std::uint64_t choose_k_formula(std::uint64_t m);

// smallest k >= 600 with mk_lower(k) > target (mk_lower is increasing there)
std::uint64_t min_k_for_mk(double target);

// 9700 m^3 e^(6m)
double gap_bound(std::uint64_t m);

struct GapScan {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs; // consecutive window primes with gap <= g
    std::uint64_t boundary_count = 0;                           // tri-state primes excluded from the sequence
};

// consecutive window-constrained primes (p, p') in [x, 2x) with p' - p <= g;
// g must be even and >= 2
GapScan scan_constrained_gaps(std::uint64_t x, const FracWindow& window, std::uint64_t g,
                              const SieveOptions& opt = {});

} // namespace pfl
