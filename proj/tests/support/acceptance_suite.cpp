#include "support/acceptance_suite.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "pfl/bv.hpp"
#include "pfl/cup.hpp"
#include "pfl/expsums.hpp"
#include "pfl/fracpow.hpp"
#include "pfl/gaps.hpp"
#include "pfl/primes.hpp"
#include "pfl/vaughan.hpp"
#include "support/oracles.hpp"

namespace pfl::accept {

namespace {

using Clock = std::chrono::steady_clock;

struct Reporter {
    int failures = 0;

    void line(int id, bool pass, const std::string& what, double seconds) {
        std::printf("[%s] %2d %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, what.c_str(), seconds);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    void skip(int id, const std::string& what) {
        std::printf("[SKIP] %2d %s\n", id, what.c_str());
        std::fflush(stdout);
    }
};

double secs(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void criterion_1(Reporter& rep, const SieveOptions& opt) {
    auto t0 = Clock::now();
    auto ps = nth_primes({171'807, 14'471}, opt);
    std::uint64_t diff = ps[0] - ps[1];
    std::uint64_t pi = prime_pi(157'337, opt);
    std::uint64_t kf = choose_k_formula(1);
    bool pass = diff == 2'176'652 && pi == 14'470 && kf == 157'337;
    std::ostringstream what;
    what << "tuple endpoints: p diff=" << diff << " (want 2176652), pi(157337)=" << pi
         << " (want 14470), size formula m=1 -> " << kf << " (want 157337)";
    rep.line(1, pass, what.str(), secs(t0));
}

void criterion_2(Reporter& rep, const Options& options, const SieveOptions& opt) {
    if (!options.big) {
        rep.skip(2, "m=2 tuple diameter over ~3.5e9: opt-in via --big");
        return;
    }
    auto t0 = Clock::now();
    const std::uint64_t k = 157'629'323ull;
    TupleSpan span = tuple_span(k, opt);
    std::uint64_t diam = span.last - span.first;
    bool pass = diam == 3'130'607'572ull;
    std::ostringstream what;
    what << "m=2 tuple diameter=" << diam << " (pinned 3130607572), first=" << span.first
         << " last=" << span.last;
    if (!pass) {
        // The pinned constant comes from an index slip in its derivation:
        // it equals p_k - p_(pi(k)+1), not the diameter of the k-tuple.
        std::uint64_t p_k = nth_prime(k, opt);
        what << "; note: p_k - first = " << (p_k - span.first)
             << (p_k - span.first == 3'130'607'572ull
                     ? " which reproduces the pinned constant exactly (last-index slip"
                       " k vs pi(k)+k in its derivation)"
                     : "");
    }
    rep.line(2, pass, what.str(), secs(t0));
}

void criterion_3(Reporter& rep, const Options& options, const SieveOptions& opt) {
    auto t0 = Clock::now();
    AdmissibleTuple t = admissible_tuple(157'337, opt);
    auto r = is_admissible(t, options.threads);
    bool pass = r.admissible && !r.witness.has_value();
    rep.line(3, pass, "157337-prime tuple passes the residue admissibility check", secs(t0));
}

void criterion_4(Reporter& rep) {
    auto t0 = Clock::now();
    double m1 = mk_lower(157'337);
    double m2 = mk_lower(157'629'323ull);
    bool pass = m1 > 6.0 && m2 > 12.0;
    std::ostringstream what;
    what.precision(12);
    what << "sieve-functional bounds: " << m1 << " > 6 and " << m2 << " > 12";
    rep.line(4, pass, what.str(), secs(t0));
}

void criterion_5(Reporter& rep) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(190'001);
    std::uniform_int_distribution<std::uint64_t> pick_x(1000, 10'000);
    std::uniform_int_distribution<std::uint64_t> pick_q(1, 40);
    std::uniform_int_distribution<std::int64_t> pick_h(-5, 5);
    const double alphas[] = {std::sqrt(2.0), 1.5, 0.5, 2.5};
    bool pass = true;
    double worst_defect = 0.0, worst_split = 0.0;
    int done = 0;
    while (done < 20) {
        std::uint64_t x = pick_x(rng);
        std::uint64_t y = x + 1 + rng() % x;
        std::uint64_t q = pick_q(rng);
        std::uint64_t a = rng() % q;
        if (std::gcd(a, q) != 1) continue;
        double alpha = alphas[done % 4];
        VaughanDecomposition dec = vaughan_split(x, y, q, a, pick_h(rng), alpha);
        worst_defect = std::max(worst_defect, dec.identity_defect_rel());
        double split = std::abs(dec.w0 - (dec.w4 + dec.w5)) /
                       std::max(1.0, std::abs(dec.w0));
        worst_split = std::max(worst_split, split);

        ArithTables tables = arith_tables(y);
        VaughanCoeffs coeffs = vaughan_coeffs(dec.v, y / dec.v, tables);
        for (std::uint64_t m = 2; m <= dec.v * dec.v; ++m)
            if (std::fabs(coeffs.a[m]) > std::log(static_cast<double>(m)) * (1 + 1e-12))
                pass = false;
        if (coeffs.a[1] != 0.0) pass = false;
        for (std::uint64_t m = 1; m <= coeffs.b_limit; ++m)
            if (static_cast<std::uint64_t>(std::abs(coeffs.b[m])) > tables.tau[m]) pass = false;
        ++done;
    }
    pass = pass && worst_defect <= 1e-6 && worst_split <= 1e-9;
    std::ostringstream what;
    what << "identity over 20 tuples: worst defect=" << worst_defect
         << " (<=1e-6), worst split defect=" << worst_split
         << " (<=1e-9), coefficient bounds hold";
    rep.line(5, pass, what.str(), secs(t0));
}

void criterion_6(Reporter& rep, const Options& options) {
    auto t0 = Clock::now();
    CupSpec main = build_cup(0.25, 0.75, 1.0, 1'000'000);
    CupSpec left = build_edge_cup(main, CupFlavor::LeftEdge);
    CupSpec right = build_edge_cup(main, CupFlavor::RightEdge);
    SandwichResult sw = sandwich_check(main, left, right, 1'000'000, options.threads);
    bool bounds_ok = true;
    for (std::int64_t h = 1; h <= 10'000; ++h)
        bounds_ok = bounds_ok && coeff_vs_bound(main, h).within &&
                    coeff_vs_bound(main, -h).within;
    double mean = fourier_quadrature(main, 0).real();
    double mean_err = std::fabs(mean - (main.d - main.c - main.delta));
    bool pass = sw.max_violation <= 1e-12 && bounds_ok && mean_err <= 1e-10;
    std::ostringstream what;
    what << "cup: sandwich violation=" << sw.max_violation
         << " (<=1e-12), |g|<=bound for |h|<=1e4: " << (bounds_ok ? "yes" : "NO")
         << ", quadrature mean error=" << mean_err << " (<=1e-10)";
    rep.line(6, pass, what.str(), secs(t0));
}

void criterion_7(Reporter& rep) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(7'007);
    std::uniform_int_distribution<std::uint64_t> pick(2, 1'000'000'000ull);
    double worst_sqrt = 0.0;
    std::uint64_t checked = 0;
    for (std::uint64_t i = 0; i < 100'000; ++i) {
        std::uint64_t n = pick(rng);
        double exact = frac_sqrt_exact(n);
        if (exact < 1e-10 || exact > 1.0 - 1e-10) continue;
        worst_sqrt = std::max(worst_sqrt, std::fabs(frac_pow(n, 0.5).value - exact));
        ++checked;
    }
    double worst_oracle = 0.0;
    const struct { double alpha; std::uint64_t n_max; } plans[] = {
        {std::sqrt(2.0), 1'000'000'000ull}, {1.5, 1'000'000'000ull}, {2.5, 500'000ull}};
    for (const auto& plan : plans) {
        std::uniform_int_distribution<std::uint64_t> pick_n(2, plan.n_max);
        for (int i = 0; i < 340; ++i) {
            std::uint64_t n = pick_n(rng);
            double got = frac_pow(n, plan.alpha).value;
            double want = static_cast<double>(oracle::frac_pow_big(n, plan.alpha));
            double diff = std::fabs(got - want);
            if (diff > 0.5) diff = 1.0 - diff;
            worst_oracle = std::max(worst_oracle, diff);
        }
    }
    bool pass = worst_sqrt <= 1e-12 && worst_oracle <= 1e-14 && checked > 99'000;
    std::ostringstream what;
    what << "precision: dd-vs-exact-sqrt worst=" << worst_sqrt << " (<=1e-12, " << checked
         << " samples), dd-vs-bigfloat worst=" << worst_oracle << " (<=1e-14, 1020 samples)";
    rep.line(7, pass, what.str(), secs(t0));
}

void criterion_8(Reporter& rep, const SieveOptions& opt) {
    auto t0 = Clock::now();
    std::uint64_t n = 0;
    std::uint64_t violations = 0;
    std::uint64_t limit_prime = 15'485'863; // p_1e6
    for_each_prime(2, limit_prime + 1, [&](std::uint64_t p) {
        ++n;
        if (n >= 2 && n <= 1'000'000 &&
            !(static_cast<double>(p) < rosser_upper(n)))
            ++violations;
    }, opt);
    bool pass = violations == 0 && n >= 1'000'000;
    std::ostringstream what;
    what << "p_n < n(log n + log log n + 8) for 2 <= n <= 1e6: " << violations
         << " violations over " << std::min<std::uint64_t>(n, 1'000'000) << " indices";
    rep.line(8, pass, what.str(), secs(t0));
}

void criterion_9(Reporter& rep, const SieveOptions& opt) {
    auto t0 = Clock::now();
    FracWindow w(std::sqrt(2.0), 0.0, 0.37);
    EquidistRow small = equidist_report(100'000, w, 7, 3, opt);
    EquidistRow large = equidist_report(10'000'000, w, 7, 3, opt);
    // independent observed count at x = 1e5: trial division + 50-digit frac
    std::uint64_t brute = 0;
    for (std::uint64_t p = 3; p <= 100'000; p += 7) {
        if (!oracle::is_prime_td(p)) continue;
        auto f = oracle::frac_pow_big(p, std::sqrt(2.0));
        if (abs(f - 0.37) < w.eta) continue;
        if (f < 0.37) ++brute;
    }
    bool pass = large.deviation < small.deviation && small.observed == brute;
    std::ostringstream what;
    what << "window-count deviation falls: " << small.deviation << " @1e5 -> "
         << large.deviation << " @1e7; observed(1e5)=" << small.observed
         << " vs brute force " << brute;
    rep.line(9, pass, what.str(), secs(t0));
}

void criterion_10(Reporter& rep, const SieveOptions& opt) {
    auto t0 = Clock::now();
    FracWindow w(std::sqrt(2.0), 0.0, 0.37);
    std::vector<double> ratios;
    for (std::uint64_t x : {100'000ull, 1'000'000ull, 10'000'000ull}) {
        std::uint64_t q_max = static_cast<std::uint64_t>(
            std::pow(static_cast<double>(x), 1.0 / 3.0 - 0.05));
        DiscrepancyReport rep_x = bv_discrepancy(x, q_max, w, opt);
        ratios.push_back(rep_x.total / static_cast<double>(x));
    }
    bool decreasing = ratios[0] > ratios[1] && ratios[1] > ratios[2];

    // classical-mode total at (1e5, 46) against an independent double loop
    DiscrepancyReport classical = bv_discrepancy(100'000, 46, std::nullopt, opt);
    const std::uint64_t lo = 100'000, hi = 200'000;
    std::vector<std::uint8_t> isp(hi - lo, 0);
    for (std::uint64_t n = lo; n < hi; ++n) isp[n - lo] = oracle::is_prime_td(n);
    std::uint64_t global = 0;
    for (auto b : isp) global += b;
    double brute_total = 0.0;
    for (std::uint64_t q = 3; q <= 46; ++q) {
        std::uint64_t phi = 0;
        for (std::uint64_t a = 1; a < q; ++a)
            if (std::gcd(a, q) == 1) ++phi;
        double expected = static_cast<double>(global) / static_cast<double>(phi);
        double best = -1.0;
        for (std::uint64_t a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            std::uint64_t cnt = 0;
            for (std::uint64_t n = lo + (a + q - lo % q) % q; n < hi; n += q)
                cnt += isp[n - lo];
            best = std::max(best, std::fabs(static_cast<double>(cnt) - expected));
        }
        brute_total += best;
    }
    bool exact = classical.total == brute_total;
    bool pass = decreasing && exact;
    std::ostringstream what;
    what << "discrepancy/X over {1e5,1e6,1e7}: " << ratios[0] << " > " << ratios[1] << " > "
         << ratios[2] << (decreasing ? "" : " NOT DECREASING")
         << "; classical total @ (1e5, Q=46) " << (exact ? "equals" : "DIFFERS FROM")
         << " the double loop (" << classical.total << ")";
    rep.line(10, pass, what.str(), secs(t0));
}

void criterion_11(Reporter& rep) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(41'411);
    const double alphas[] = {std::sqrt(2.0), 1.5, 2.5, 0.5};
    const std::uint64_t qs[] = {3, 5, 7, 11, 13};
    double worst = 0.0, worst_conj = 0.0;
    bool trivial_ok = true;
    for (int i = 0; i < 10; ++i) {
        std::uint64_t x = 100 + rng() % 4900;
        std::uint64_t q = qs[rng() % 5];
        std::uint64_t a = 1 + rng() % (q - 1);
        std::int64_t h = 1 + static_cast<std::int64_t>(rng() % 10);
        double alpha = alphas[i % 4];
        ExpSum got = exp_sum_primes(x, q, a, h, alpha);
        std::complex<double> want = 0.0;
        for (std::uint64_t p = x; p < 2 * x; ++p) {
            if (p % q != a || !oracle::is_prime_td(p)) continue;
            want += oracle::unit_phase_big(p, alpha, h);
        }
        worst = std::max(worst, std::abs(got.value - want));
        trivial_ok = trivial_ok && std::abs(got.value) <= static_cast<double>(got.terms) + 1e-12;
        ExpSum conj = exp_sum_primes(x, q, a, -h, alpha);
        worst_conj = std::max({worst_conj,
                               std::fabs(got.value.real() - conj.value.real()),
                               std::fabs(got.value.imag() + conj.value.imag())});
    }
    bool pass = worst <= 1e-12 && worst_conj <= 1e-12 && trivial_ok;
    std::ostringstream what;
    what << "prime sums vs per-term oracle worst=" << worst
         << " (<=1e-12), conjugation worst=" << worst_conj
         << " (<=1e-12), |T|<=terms holds";
    rep.line(11, pass, what.str(), secs(t0));
}

} // namespace

int run(const Options& options) {
    SieveOptions opt;
    opt.threads = options.threads;
    opt.cache_dir = options.cache_dir;
    Reporter rep;
    criterion_1(rep, opt);
    criterion_2(rep, options, opt);
    criterion_3(rep, options, opt);
    criterion_4(rep);
    criterion_5(rep);
    criterion_6(rep, options);
    criterion_7(rep);
    criterion_8(rep, opt);
    criterion_9(rep, opt);
    criterion_10(rep, opt);
    criterion_11(rep);
    if (rep.failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", rep.failures);
    return rep.failures;
}

} // namespace pfl::accept
