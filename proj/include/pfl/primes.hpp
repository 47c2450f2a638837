// primes.hpp
// Segmented prime generation and counting, nth-prime lookup, and
// linear-sieve tables of the basic arithmetic functions.
//
// Primality is stored one bit per odd integer; 2 is special-cased by the
// iteration layer.  Sweeps over a range are split into even-aligned
// segments that can be sieved by a worker pool; all reductions merge in
// ascending segment order, so results do not depend on the thread count.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfl/parallel.hpp"

namespace pfl {

inline constexpr std::uint64_t kDefaultSegmentSpan = 1ull << 24; // integers per segment
inline constexpr std::uint64_t kMaxSweepBound = 100'000'000'000'000ull;

std::uint64_t isqrt_u64(std::uint64_t n);

// inverse of m modulo q (throws unless (m, q) = 1); q >= 1
std::uint64_t mod_inverse(std::uint64_t m, std::uint64_t q);

// Exact primality bits for the odd integers in [lo, hi).
struct SieveSegment {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::vector<std::uint64_t> words; // bit i <-> odd value first_odd() + 2i

    std::uint64_t first_odd() const { return lo | 1ull; }
    std::uint64_t odd_count() const {
        std::uint64_t f = first_odd();
        return f < hi ? (hi - f + 1) / 2 : 0;
    }
    bool test_odd(std::uint64_t n) const {
        std::uint64_t i = (n - first_odd()) / 2;
        return (words[i >> 6] >> (i & 63)) & 1ull;
    }
    // n must lie in [lo, hi)
    bool is_prime(std::uint64_t n) const {
        if (n == 2) return true;
        if (n < 2 || n % 2 == 0) return false;
        return test_odd(n);
    }
    // Calls fn(p) for every prime p in [clip_lo, clip_hi) ∩ [lo, hi), ascending.
    template <class Fn>
    void for_each_prime(Fn&& fn, std::uint64_t clip_lo, std::uint64_t clip_hi) const {
        std::uint64_t from = clip_lo > lo ? clip_lo : lo;
        std::uint64_t to = clip_hi < hi ? clip_hi : hi;
        if (from <= 2 && 2 < to) fn(std::uint64_t{2});
        std::uint64_t n = from | 1ull;
        if (n < 3) n = 3;
        for (; n < to; n += 2)
            if (test_odd(n)) fn(n);
    }
    template <class Fn>
    void for_each_prime(Fn&& fn) const { for_each_prime(fn, lo, hi); }
};

// Primes up to and including `limit` (simple sieve; limit capped at ~1e8).
std::vector<std::uint32_t> small_primes(std::uint64_t limit);

// Exact primality bits for [lo, hi); 2 <= lo < hi and hi - lo bounded by span.
SieveSegment sieve_segment(std::uint64_t lo, std::uint64_t hi,
                           std::uint64_t span = kDefaultSegmentSpan);
// Same, with the caller supplying base primes up to isqrt(hi - 1).
SieveSegment sieve_segment_with_base(std::uint64_t lo, std::uint64_t hi,
                                     const std::vector<std::uint32_t>& base);

// Optional on-disk segment cache.
// Layout: "PFL1", u64le lo, u64le hi, then ceil((hi-lo)/2/8) bytes of
// odd-index bits, little-endian bit order within bytes.  lo and hi must be
// even so the byte count and the bit indexing are unambiguous.
void write_segment_cache(const SieveSegment& seg, const std::string& path);
std::optional<SieveSegment> read_segment_cache(const std::string& path);

struct SieveOptions {
    unsigned threads = 1;
    std::uint64_t segment_span = kDefaultSegmentSpan;
    std::string cache_dir; // empty: cache disabled (the default)
};

namespace detail {
std::string cache_path(const std::string& dir, std::uint64_t lo, std::uint64_t hi);
SieveSegment sweep_segment(std::uint64_t slo, std::uint64_t shi,
                           const std::vector<std::uint32_t>& base,
                           const SieveOptions& opt);
} // namespace detail

// Applies per_seg to even-aligned segments covering [lo, hi) and folds the
// per-segment results in ascending order.  per_seg must honor the clip
// bounds it is given; it may run on any thread.
template <class R, class PerSeg, class Merge>
R segment_sweep(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opt,
                R init, PerSeg per_seg, Merge merge) {
    if (lo < 2) lo = 2;
    if (lo >= hi) return init;
    if (hi > kMaxSweepBound) throw std::invalid_argument("segment_sweep: range too large");
    std::uint64_t span = opt.segment_span;
    if (span < 1024 || span % 2 != 0) throw std::invalid_argument("segment_sweep: bad segment span");
    std::uint64_t start = lo & ~1ull;
    std::uint64_t nseg = (hi - start + span - 1) / span;
    auto base = small_primes(isqrt_u64(hi - 1));
    auto results = run_indexed<R>(static_cast<std::size_t>(nseg), opt.threads, [&](std::size_t k) {
        std::uint64_t slo = start + k * span;
        std::uint64_t shi = slo + span < hi ? slo + span : hi;
        SieveSegment seg = detail::sweep_segment(slo, shi, base, opt);
        return per_seg(seg, lo, hi);
    });
    for (auto& r : results) merge(init, r);
    return init;
}

// Sequential ascending iteration over all primes in [lo, hi).
template <class Fn>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn,
                    const SieveOptions& opt = {}) {
    SieveOptions seq = opt;
    seq.threads = 1;
    struct Nothing {};
    segment_sweep<Nothing>(
        lo, hi, seq, Nothing{},
        [&](const SieveSegment& seg, std::uint64_t clo, std::uint64_t chi) {
            seg.for_each_prime(fn, clo, chi);
            return Nothing{};
        },
        [](Nothing&, const Nothing&) {});
}

// #{p <= x}, by full segmented sweep.
std::uint64_t prime_pi(std::uint64_t x, const SieveOptions& opt = {});

// #{p in [lo, hi)}, one sweep over the range only.
std::uint64_t prime_count_range(std::uint64_t lo, std::uint64_t hi,
                                const SieveOptions& opt = {});

// #{p <= x : p ≡ a (mod q)}; requires q >= 1 and 0 <= a < q.
std::uint64_t prime_pi_mod(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                           const SieveOptions& opt = {});

// n(log n + log log n + 8); requires n >= 2.  Used to size nth-prime sweeps.
double rosser_upper(std::uint64_t n);

// The n-th prime (p_1 = 2).
std::uint64_t nth_prime(std::uint64_t n, const SieveOptions& opt = {});
// Several indices resolved in one sweep; ns need not be sorted.
std::vector<std::uint64_t> nth_primes(const std::vector<std::uint64_t>& ns,
                                      const SieveOptions& opt = {});

// Linear-sieve tables, exact for all n <= limit.
// lambda_p/lambda_e hold the (prime, exponent) pair for prime powers so the
// von Mangoldt value log p is reconstructed in a single rounding.
struct ArithTables {
    std::uint64_t limit = 0;
    std::vector<std::int8_t> mu;
    std::vector<std::uint32_t> tau;
    std::vector<std::uint32_t> phi;
    std::vector<std::uint32_t> lambda_p;
    std::vector<std::uint8_t> lambda_e;

    bool is_prime_power(std::uint64_t n) const { return lambda_p[n] != 0; }
    // von Mangoldt: log p for n = p^e, else 0
    double lambda(std::uint64_t n) const;
};
ArithTables arith_tables(std::uint64_t limit, std::uint64_t memory_cap = 100'000'000);

} // namespace pfl
