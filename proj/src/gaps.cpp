#include "pfl/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pfl/dd.hpp"
#include "pfl/parallel.hpp"

namespace pfl {

AdmissibleTuple admissible_tuple(std::uint64_t k, const SieveOptions& opt) {
    if (k < 1) throw std::invalid_argument("admissible_tuple: k must be >= 1");
    if (k > 300'000'000ull)
        throw std::invalid_argument("admissible_tuple: k too large to materialize; use tuple_span");
    AdmissibleTuple t;
    t.offsets.reserve(static_cast<std::size_t>(k));
    std::uint64_t lo = k + 1;
    double guess = k < 6 ? 32.0 : rosser_upper(2 * k); // generous; extended on undershoot
    std::uint64_t hi = static_cast<std::uint64_t>(guess);
    while (t.offsets.size() < k) {
        for_each_prime(
            lo, hi,
            [&](std::uint64_t p) {
                if (t.offsets.size() < k) t.offsets.push_back(p);
            },
            opt);
        lo = hi;
        hi += opt.segment_span;
    }
    return t;
}

TupleSpan tuple_span(std::uint64_t k, const SieveOptions& opt) {
    if (k < 1) throw std::invalid_argument("tuple_span: k must be >= 1");
    TupleSpan span;
    span.k = k;
    std::uint64_t seen = 0;
    std::uint64_t lo = k + 1;
    double guess = k < 6 ? 32.0 : rosser_upper(2 * k);
    if (guess >= 9.0e18) throw std::overflow_error("tuple_span: k too large for 64-bit sweep");
    // Work in strides so the sweep stops soon after the k-th prime instead
    // of running to the a-priori bound.
    const std::uint64_t stride = 64 * opt.segment_span;
    while (seen < k) {
        std::uint64_t hi = lo + stride;
        // per-segment counts in parallel, then walk the boundary segments
        struct SegCount { std::uint64_t lo, hi, count; };
        std::vector<SegCount> counts = segment_sweep<std::vector<SegCount>>(
            lo, hi, opt, {},
            [](const SieveSegment& seg, std::uint64_t clo, std::uint64_t chi) {
                std::uint64_t from = clo > seg.lo ? clo : seg.lo;
                std::uint64_t to = chi < seg.hi ? chi : seg.hi;
                std::uint64_t n = 0;
                seg.for_each_prime([&](std::uint64_t) { ++n; }, from, to);
                return std::vector<SegCount>{{from, to, n}};
            },
            [](std::vector<SegCount>& acc, const std::vector<SegCount>& v) {
                acc.insert(acc.end(), v.begin(), v.end());
            });
        for (const auto& sc : counts) {
            bool first_here = span.first == 0 && seen + sc.count >= 1;
            bool last_here = seen + sc.count >= k && seen < k;
            if (first_here || last_here) {
                std::uint64_t idx = seen;
                for_each_prime(
                    sc.lo, sc.hi,
                    [&](std::uint64_t p) {
                        ++idx;
                        if (idx == 1) span.first = p;
                        if (idx == k) span.last = p;
                    },
                    opt);
            }
            seen += sc.count;
            if (seen >= k) break;
        }
        lo = hi;
    }
    return span;
}

namespace {

// Lemire's fast 32-bit modulo: precomputed magic per divisor.
struct FastMod {
    std::uint64_t magic;
    std::uint32_t d;
    explicit FastMod(std::uint32_t divisor)
        : magic(~0ull / divisor + 1), d(divisor) {}
    std::uint32_t operator()(std::uint32_t n) const {
        std::uint64_t low = magic * n;
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * d) >> 64);
    }
};

// does `p` cover all residue classes on the offsets?
bool covers_all_classes(const std::vector<std::uint32_t>& offs, std::uint32_t p,
                        std::vector<std::uint64_t>& scratch) {
    if (offs.size() < p) return false; // structural: too few offsets
    std::size_t words = (p + 63) / 64;
    std::fill(scratch.begin(), scratch.begin() + words, 0);
    std::uint32_t covered = 0;
    FastMod fm(p);
    for (std::uint32_t off : offs) {
        std::uint32_t r = fm(off);
        std::uint64_t bit = 1ull << (r & 63);
        std::uint64_t& w = scratch[r >> 6];
        if (!(w & bit)) {
            w |= bit;
            if (++covered == p) return true;
        }
    }
    return false;
}

} // namespace

AdmissibilityResult is_admissible(const AdmissibleTuple& tuple, unsigned threads) {
    const auto& offs = tuple.offsets;
    if (offs.empty()) throw std::invalid_argument("is_admissible: empty tuple");
    for (std::size_t i = 1; i < offs.size(); ++i)
        if (offs[i] <= offs[i - 1])
            throw std::invalid_argument("is_admissible: offsets must be strictly increasing");

    std::uint64_t k = offs.size();
    auto primes = small_primes(k);
    bool fits32 = offs.back() <= 0xFFFFFFFFull;
    std::vector<std::uint32_t> offs32;
    if (fits32) {
        offs32.reserve(offs.size());
        for (auto o : offs) offs32.push_back(static_cast<std::uint32_t>(o));
    }

    // Parallel over prime chunks; the reported witness is the smallest
    // covering prime, so the outcome does not depend on the thread count.
    const std::size_t chunk = 64;
    std::size_t nchunks = (primes.size() + chunk - 1) / chunk;
    auto results = run_indexed<std::uint64_t>(nchunks, threads, [&](std::size_t ci) {
        std::vector<std::uint64_t> scratch((k + 64) / 64 + 1, 0);
        std::size_t i0 = ci * chunk;
        std::size_t i1 = std::min(primes.size(), i0 + chunk);
        for (std::size_t i = i0; i < i1; ++i) {
            std::uint32_t p = primes[i];
            bool covered;
            if (fits32) {
                covered = covers_all_classes(offs32, p, scratch);
            } else {
                std::size_t words = (p + 63) / 64;
                std::fill(scratch.begin(), scratch.begin() + words, 0);
                std::uint32_t seen = 0;
                covered = false;
                for (auto off : offs) {
                    std::uint64_t r = off % p;
                    std::uint64_t bit = 1ull << (r & 63);
                    std::uint64_t& w = scratch[r >> 6];
                    if (!(w & bit)) {
                        w |= bit;
                        if (++seen == p) { covered = true; break; }
                    }
                }
            }
            if (covered) return static_cast<std::uint64_t>(p);
        }
        return std::uint64_t{0};
    });
    for (std::uint64_t w : results)
        if (w != 0) return {false, w};
    return {true, std::nullopt};
}

std::uint64_t diameter(const AdmissibleTuple& tuple) {
    if (tuple.offsets.size() < 2) throw std::invalid_argument("diameter: requires k >= 2");
    return tuple.offsets.back() - tuple.offsets.front();
}

double mk_lower(std::uint64_t k) {
    if (k < 600) throw std::invalid_argument("mk_lower: requires k >= 600");
    double lk = std::log(static_cast<double>(k));
    return lk - 2.0 * std::log(lk) - 1.0;
}

std::uint64_t choose_k_formula(std::uint64_t m) {
    if (m < 1) throw std::invalid_argument("choose_k_formula: m must be >= 1");
    // 390 e^6 = 157337.23 sits near an integer; evaluate in double-double
    // so the floor cannot flip on a double rounding.
    if (m > 5) throw std::overflow_error("choose_k_formula: result exceeds 64-bit range");
    DD value = DD(390.0) * static_cast<double>(m * m) * dd_exp(DD(6.0 * static_cast<double>(m)));
    auto [f, frac] = dd_floor_split(value);
    (void)frac;
    return static_cast<std::uint64_t>(f);
}

std::uint64_t min_k_for_mk(double target) {
    std::uint64_t lo = 600;
    if (mk_lower(lo) > target) return lo;
    std::uint64_t hi = lo;
    while (mk_lower(hi) <= target) {
        if (hi > (1ull << 62)) throw std::overflow_error("min_k_for_mk: target out of range");
        hi *= 2;
    }
    while (lo + 1 < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        (mk_lower(mid) > target ? hi : lo) = mid;
    }
    return hi;
}

double gap_bound(std::uint64_t m) {
    double md = static_cast<double>(m);
    return 9700.0 * md * md * md * std::exp(6.0 * md);
}

GapScan scan_constrained_gaps(std::uint64_t x, const FracWindow& window, std::uint64_t g,
                              const SieveOptions& opt) {
    if (g < 2 || g % 2 != 0) throw std::invalid_argument("scan_constrained_gaps: g must be even and >= 2");
    GapScan out;
    std::uint64_t prev = 0;
    for_each_prime(
        x, 2 * x,
        [&](std::uint64_t p) {
            switch (in_window(p, window)) {
                case Membership::Boundary: ++out.boundary_count; return;
                case Membership::Out: return;
                case Membership::In: break;
            }
            if (prev != 0 && p - prev <= g) out.pairs.emplace_back(prev, p);
            prev = p;
        },
        opt);
    return out;
}

} // namespace pfl
