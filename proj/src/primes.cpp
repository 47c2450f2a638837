#include "pfl/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <numeric>

namespace pfl {

std::uint64_t isqrt_u64(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

std::uint64_t mod_inverse(std::uint64_t m, std::uint64_t q) {
    if (q == 0) throw std::invalid_argument("mod_inverse: q must be >= 1");
    if (q == 1) return 0;
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(q);
    std::int64_t newr = static_cast<std::int64_t>(m % q);
    while (newr != 0) {
        std::int64_t quo = r / newr;
        std::int64_t tmp = t - quo * newt;
        t = newt;
        newt = tmp;
        tmp = r - quo * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: arguments not coprime");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(q) : t);
}

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
    if (limit > 100'000'000ull)
        throw std::invalid_argument("small_primes: limit too large");
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<std::uint8_t> mark(limit + 1, 1);
    mark[0] = 0;
    mark[1] = 0;
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (mark[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) mark[j] = 0;
    primes.reserve(static_cast<std::size_t>(limit > 16 ? 1.3 * limit / std::log(double(limit)) : 8));
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (mark[i]) primes.push_back(static_cast<std::uint32_t>(i));
    return primes;
}

SieveSegment sieve_segment_with_base(std::uint64_t lo, std::uint64_t hi,
                                     const std::vector<std::uint32_t>& base) {
    if (lo < 2) throw std::invalid_argument("sieve_segment: lo must be >= 2");
    if (lo >= hi) throw std::invalid_argument("sieve_segment: empty range (lo >= hi)");
    SieveSegment seg;
    seg.lo = lo;
    seg.hi = hi;
    std::uint64_t bits = seg.odd_count();
    seg.words.assign((bits + 63) / 64, ~0ull);
    std::uint64_t first = seg.first_odd();
    for (std::uint32_t p : base) {
        if (p == 2) continue;
        std::uint64_t pp = std::uint64_t{p} * p;
        if (pp >= hi) break;
        std::uint64_t start = pp;
        if (start < lo) {
            std::uint64_t k = (lo + p - 1) / p;
            start = k * p;
        }
        if (start % 2 == 0) start += p;
        for (std::uint64_t j = start; j < hi; j += 2ull * p) {
            std::uint64_t i = (j - first) / 2;
            seg.words[i >> 6] &= ~(1ull << (i & 63));
        }
    }
    // mask tail bits beyond the range so popcounts are exact
    if (bits % 64 != 0 && !seg.words.empty())
        seg.words.back() &= (1ull << (bits % 64)) - 1;
    return seg;
}

SieveSegment sieve_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t span) {
    if (lo >= hi) throw std::invalid_argument("sieve_segment: empty range (lo >= hi)");
    if (hi - lo > span) throw std::invalid_argument("sieve_segment: range too large for segment size");
    return sieve_segment_with_base(lo, hi, small_primes(isqrt_u64(hi - 1)));
}

void write_segment_cache(const SieveSegment& seg, const std::string& path) {
    if (seg.lo % 2 != 0 || seg.hi % 2 != 0)
        throw std::invalid_argument("write_segment_cache: lo and hi must be even");
    std::uint64_t nbytes = ((seg.hi - seg.lo) / 2 + 7) / 8;
    std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw std::runtime_error("write_segment_cache: cannot open " + tmp);
    auto put_u64 = [&](std::uint64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        std::fwrite(b, 1, 8, f);
    };
    std::fwrite("PFL1", 1, 4, f);
    put_u64(seg.lo);
    put_u64(seg.hi);
    std::vector<unsigned char> bytes(nbytes, 0);
    for (std::uint64_t k = 0; k < nbytes; ++k) {
        std::uint64_t w = k / 8 < seg.words.size() ? seg.words[k / 8] : 0;
        bytes[k] = static_cast<unsigned char>(w >> (8 * (k % 8)));
    }
    std::fwrite(bytes.data(), 1, bytes.size(), f);
    bool ok = std::fflush(f) == 0;
    ok = std::fclose(f) == 0 && ok;
    if (!ok) throw std::runtime_error("write_segment_cache: write failed for " + tmp);
    std::filesystem::rename(tmp, path);
}

std::optional<SieveSegment> read_segment_cache(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return std::nullopt;
    auto fail = [&](const char* msg) {
        std::fclose(f);
        throw std::runtime_error(std::string("read_segment_cache: ") + msg + ": " + path);
    };
    char magic[4];
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, "PFL1", 4) != 0) fail("bad magic");
    auto get_u64 = [&](std::uint64_t& v) {
        unsigned char b[8];
        if (std::fread(b, 1, 8, f) != 8) fail("truncated header");
        v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    };
    SieveSegment seg;
    get_u64(seg.lo);
    get_u64(seg.hi);
    if (seg.lo % 2 != 0 || seg.hi % 2 != 0 || seg.lo >= seg.hi) fail("bad bounds");
    std::uint64_t nbytes = ((seg.hi - seg.lo) / 2 + 7) / 8;
    std::uint64_t bits = seg.odd_count();
    seg.words.assign((bits + 63) / 64, 0);
    std::vector<unsigned char> bytes(nbytes);
    if (std::fread(bytes.data(), 1, nbytes, f) != nbytes) fail("truncated bits");
    for (std::uint64_t k = 0; k < nbytes; ++k)
        if (k / 8 < seg.words.size()) seg.words[k / 8] |= std::uint64_t{bytes[k]} << (8 * (k % 8));
    std::fclose(f);
    return seg;
}

namespace detail {

std::string cache_path(const std::string& dir, std::uint64_t lo, std::uint64_t hi) {
    return dir + "/pfl_seg_" + std::to_string(lo) + "_" + std::to_string(hi) + ".bin";
}

SieveSegment sweep_segment(std::uint64_t slo, std::uint64_t shi,
                           const std::vector<std::uint32_t>& base,
                           const SieveOptions& opt) {
    bool cacheable = !opt.cache_dir.empty() && slo % 2 == 0 && shi % 2 == 0;
    std::string path;
    if (cacheable) {
        path = cache_path(opt.cache_dir, slo, shi);
        if (auto cached = read_segment_cache(path)) return std::move(*cached);
    }
    SieveSegment seg = sieve_segment_with_base(slo < 2 ? 2 : slo, shi, base);
    if (cacheable && slo >= 2) write_segment_cache(seg, path);
    return seg;
}

// popcount of the primality bits for odd values in [from, to) plus the prime 2
std::uint64_t count_primes_in(const SieveSegment& seg, std::uint64_t from, std::uint64_t to) {
    if (from < seg.lo) from = seg.lo;
    if (to > seg.hi) to = seg.hi;
    if (from >= to) return 0;
    std::uint64_t total = (from <= 2 && 2 < to) ? 1 : 0;
    std::uint64_t first = seg.first_odd();
    std::uint64_t a = from | 1ull; // first odd >= from
    if (a < first) a = first;
    if (a >= to) return total;
    std::uint64_t last_odd = (to - 1) % 2 == 1 ? to - 1 : to - 2;
    if (last_odd < a) return total;
    std::uint64_t i0 = (a - first) / 2;
    std::uint64_t i1 = (last_odd - first) / 2 + 1; // exclusive bit index
    std::uint64_t w0 = i0 >> 6, w1 = (i1 - 1) >> 6;
    for (std::uint64_t w = w0; w <= w1; ++w) {
        std::uint64_t word = seg.words[w];
        if (w == w0) word &= ~0ull << (i0 & 63);
        if (w == w1 && (i1 & 63) != 0) word &= (1ull << (i1 & 63)) - 1;
        total += std::popcount(word);
    }
    return total;
}

} // namespace detail

std::uint64_t prime_pi(std::uint64_t x, const SieveOptions& opt) {
    if (x < 2) return 0;
    return prime_count_range(2, x + 1, opt);
}

std::uint64_t prime_count_range(std::uint64_t lo, std::uint64_t hi,
                                const SieveOptions& opt) {
    if (hi <= 2 || lo >= hi) return 0;
    return segment_sweep<std::uint64_t>(
        lo, hi, opt, 0ull,
        [](const SieveSegment& seg, std::uint64_t clo, std::uint64_t chi) {
            return detail::count_primes_in(seg, clo, chi);
        },
        [](std::uint64_t& acc, const std::uint64_t& v) { acc += v; });
}

std::uint64_t prime_pi_mod(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                           const SieveOptions& opt) {
    if (q < 1) throw std::invalid_argument("prime_pi_mod: q must be >= 1");
    if (a >= q) throw std::invalid_argument("prime_pi_mod: residue out of range");
    if (x < 2) return 0;
    return segment_sweep<std::uint64_t>(
        2, x + 1, opt, 0ull,
        [q, a](const SieveSegment& seg, std::uint64_t clo, std::uint64_t chi) {
            std::uint64_t n = 0;
            seg.for_each_prime([&](std::uint64_t p) { n += (p % q == a); }, clo, chi);
            return n;
        },
        [](std::uint64_t& acc, const std::uint64_t& v) { acc += v; });
}

double rosser_upper(std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("rosser_upper: requires n >= 2");
    double ln = std::log(static_cast<double>(n));
    return static_cast<double>(n) * (ln + std::log(ln) + 8.0);
}

std::vector<std::uint64_t> nth_primes(const std::vector<std::uint64_t>& ns,
                                      const SieveOptions& opt) {
    std::vector<std::uint64_t> out(ns.size(), 0);
    if (ns.empty()) return out;
    std::vector<std::size_t> order(ns.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return ns[i] < ns[j]; });
    for (std::uint64_t n : ns)
        if (n < 1) throw std::invalid_argument("nth_prime: index must be >= 1");

    std::uint64_t n_max = ns[order.back()];
    double bound = n_max < 2 ? 16.0 : rosser_upper(n_max);
    if (bound >= 9.0e18) throw std::overflow_error("nth_prime: index too large for 64-bit sweep");
    std::uint64_t limit = (static_cast<std::uint64_t>(bound) + 2) & ~1ull;
    auto base = small_primes(isqrt_u64(limit - 1));

    // Count in strides so the sweep stops soon after the largest target
    // rather than running to the sizing bound (which overshoots by ~40%).
    const std::uint64_t stride = 64 * opt.segment_span;
    std::size_t next = 0;            // next target in sorted order
    std::uint64_t count_before = 0;  // primes below current sweep start
    std::uint64_t sweep_lo = 2;
    while (next < order.size()) {
        std::uint64_t hi = sweep_lo + stride < limit ? sweep_lo + stride : limit;
        if (hi <= sweep_lo) hi = sweep_lo + stride; // past the bound: keep extending
        struct SegCount { std::uint64_t lo, hi, count; };
        std::vector<SegCount> counts = segment_sweep<std::vector<SegCount>>(
            sweep_lo, hi, opt, {},
            [](const SieveSegment& seg, std::uint64_t clo, std::uint64_t chi) {
                std::uint64_t from = clo > seg.lo ? clo : seg.lo;
                std::uint64_t to = chi < seg.hi ? chi : seg.hi;
                return std::vector<SegCount>{{from, to, detail::count_primes_in(seg, from, to)}};
            },
            [](std::vector<SegCount>& acc, const std::vector<SegCount>& v) {
                acc.insert(acc.end(), v.begin(), v.end());
            });
        for (const auto& sc : counts) {
            while (next < order.size() && ns[order[next]] <= count_before + sc.count) {
                // target lies in this segment: walk its primes with early exit
                SieveSegment seg = detail::sweep_segment(sc.lo & ~1ull, sc.hi, base, opt);
                std::uint64_t remaining = ns[order[next]] - count_before;
                std::uint64_t found = 0;
                if (sc.lo <= 2 && 2 < sc.hi && --remaining == 0) found = 2;
                if (found == 0) {
                    std::uint64_t v = (sc.lo | 1ull);
                    if (v < 3) v = 3;
                    for (; v < sc.hi; v += 2) {
                        if (seg.test_odd(v) && --remaining == 0) { found = v; break; }
                    }
                }
                out[order[next]] = found;
                ++next;
            }
            count_before += sc.count;
            if (next >= order.size()) break;
        }
        if (next < order.size()) {
            // undershoot: extend the sweep by a few segments and continue
            sweep_lo = hi;
            hi += 4 * opt.segment_span;
        }
    }
    return out;
}

std::uint64_t nth_prime(std::uint64_t n, const SieveOptions& opt) {
    return nth_primes({n}, opt)[0];
}

double ArithTables::lambda(std::uint64_t n) const {
    std::uint32_t p = lambda_p[n];
    return p == 0 ? 0.0 : std::log(static_cast<double>(p));
}

ArithTables arith_tables(std::uint64_t limit, std::uint64_t memory_cap) {
    if (limit < 1) throw std::invalid_argument("arith_tables: limit must be >= 1");
    if (limit > memory_cap)
        throw std::invalid_argument("arith_tables: limit exceeds configured memory cap");
    ArithTables t;
    t.limit = limit;
    std::size_t n = static_cast<std::size_t>(limit) + 1;
    t.mu.assign(n, 0);
    t.tau.assign(n, 0);
    t.phi.assign(n, 0);
    t.lambda_p.assign(n, 0);
    t.lambda_e.assign(n, 0);
    if (limit >= 1) {
        t.mu[1] = 1;
        t.tau[1] = 1;
        t.phi[1] = 1;
    }
    std::vector<std::uint32_t> primes;
    std::vector<std::uint32_t> cnt(n, 0); // exponent of the smallest prime factor
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.phi[i] == 0) {
            primes.push_back(static_cast<std::uint32_t>(i));
            t.mu[i] = -1;
            t.phi[i] = static_cast<std::uint32_t>(i - 1);
            t.tau[i] = 2;
            cnt[i] = 1;
            t.lambda_p[i] = static_cast<std::uint32_t>(i);
            t.lambda_e[i] = 1;
        }
        for (std::uint32_t p : primes) {
            std::uint64_t m = i * p;
            if (m > limit) break;
            if (i % p == 0) {
                t.mu[m] = 0;
                t.phi[m] = static_cast<std::uint32_t>(std::uint64_t{t.phi[i]} * p);
                cnt[m] = cnt[i] + 1;
                t.tau[m] = t.tau[i] / (cnt[i] + 1) * (cnt[m] + 1);
                if (t.lambda_p[i] == p) { // i = p^e  =>  m = p^{e+1}
                    t.lambda_p[m] = p;
                    t.lambda_e[m] = static_cast<std::uint8_t>(t.lambda_e[i] + 1);
                }
                break;
            }
            t.mu[m] = static_cast<std::int8_t>(-t.mu[i]);
            t.phi[m] = static_cast<std::uint32_t>(std::uint64_t{t.phi[i]} * (p - 1));
            cnt[m] = 1;
            t.tau[m] = t.tau[i] * 2;
        }
    }
    return t;
}

} // namespace pfl
