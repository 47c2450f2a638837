// pfl — command-line driver.
//
// Subcommands bind each library module to reproducible runs with CSV or
// JSON output on stdout (or a file via --out).  All magnitude flags accept
// scientific notation (1e6).  Exit codes: 0 success, 1 runtime failure,
// 2 validation failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pfl/bv.hpp"
#include "pfl/cup.hpp"
#include "pfl/expsums.hpp"
#include "pfl/fracpow.hpp"
#include "pfl/gaps.hpp"
#include "pfl/primes.hpp"
#include "pfl/vaughan.hpp"
#include "support/acceptance_suite.hpp"

namespace {

// "1000000", "1e6", "2.5e7" -> integer; rejects non-integral or huge values
std::uint64_t parse_magnitude(const std::string& text, const std::string& flag) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "not a number: " + text);
    }
    if (pos != text.size()) throw CLI::ValidationError(flag, "trailing junk in " + text);
    if (!(v >= 0 && v <= 9.0e18)) throw CLI::ValidationError(flag, "out of range: " + text);
    double r = std::nearbyint(v);
    if (std::fabs(v - r) > 1e-6) throw CLI::ValidationError(flag, "not an integer: " + text);
    return static_cast<std::uint64_t>(r);
}

struct MagFlag {
    std::string text;
    std::uint64_t value(const std::string& flag) const { return parse_magnitude(text, flag); }
};

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prime fractional-parts laboratory"};
    app.require_subcommand(1);

    unsigned threads = 1;
    app.add_option("--threads", threads, "worker threads for sweeps (deterministic output)")
        ->capture_default_str();
    std::string cache_dir;
    app.add_option("--cache-dir", cache_dir,
                   "directory for the optional sieve segment cache (off when empty)");

    auto opts = [&]() {
        pfl::SieveOptions o;
        o.threads = threads;
        o.cache_dir = cache_dir;
        return o;
    };

    std::string out_path;

    // ---- sieve ----------------------------------------------------------
    auto* sieve = app.add_subcommand("sieve", "list or count primes in [lo, hi)");
    sieve->fallthrough();
    MagFlag s_lo, s_hi;
    bool s_count = false;
    MagFlag s_nth;
    sieve->add_option("--lo", s_lo.text, "range start (inclusive, >= 2)");
    sieve->add_option("--hi", s_hi.text, "range end (exclusive)");
    sieve->add_flag("--count", s_count, "print the count instead of the primes");
    sieve->add_option("--nth", s_nth.text, "print the n-th prime (p_1 = 2) and exit");
    sieve->add_option("--out", out_path, "output path (default: stdout)");
    sieve->callback([&]() {
        std::ofstream file;
        auto& os = open_out(file, out_path);
        if (!s_nth.text.empty()) {
            os << pfl::nth_prime(s_nth.value("--nth"), opts()) << "\n";
            return;
        }
        std::uint64_t lo = s_lo.value("--lo"), hi = s_hi.value("--hi");
        if (s_count) {
            os << pfl::prime_count_range(lo, hi, opts()) << "\n";
        } else {
            pfl::for_each_prime(lo, hi, [&](std::uint64_t p) { os << p << "\n"; }, opts());
        }
    });

    // ---- count ----------------------------------------------------------
    auto* count = app.add_subcommand(
        "count", "constrained prime count and its expected share (one CSV row)");
    count->fallthrough();
    MagFlag c_x;
    double c_alpha = 0, c_c = 0, c_d = 1, c_eta = 1e-12;
    MagFlag c_q{"1"}, c_a{"0"};
    count->add_option("--x", c_x.text, "count primes p <= x")->required();
    count->add_option("--alpha", c_alpha, "power exponent (positive non-integer)")->required();
    count->add_option("--c", c_c, "window start in [0, 1)");
    count->add_option("--d", c_d, "window end in (c, 1]");
    count->add_option("--eta", c_eta, "boundary tolerance for the window cuts");
    count->add_option("--q", c_q.text, "modulus of the progression");
    count->add_option("--a", c_a.text, "residue of the progression");
    count->add_option("--out", out_path, "output path (default: stdout)");
    count->callback([&]() {
        std::ofstream file;
        auto& os = open_out(file, out_path);
        pfl::FracWindow w(c_alpha, c_c, c_d, c_eta);
        auto row = pfl::equidist_report(c_x.value("--x"), w, c_q.value("--q"),
                                          c_a.value("--a"), opts());
        os << "x,alpha,c,d,q,a,observed,predicted,deviation,boundary_count\n";
        char buf[256];
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%llu,%llu,%llu,%.17g,%.17g,%llu\n",
                      (unsigned long long)row.x, row.alpha, row.c, row.d,
                      (unsigned long long)row.q, (unsigned long long)row.a,
                      (unsigned long long)row.observed, row.predicted, row.deviation,
                      (unsigned long long)row.boundary_count);
        os << buf;
    });

    // ---- expsum ---------------------------------------------------------
    auto* expsum = app.add_subcommand(
        "expsum", "exponential sum over primes in [x, 2x) in a progression (CSV)");
    expsum->fallthrough();
    expsum->set_help_flag("--help", "print help"); // frees -h for the frequency flag
    MagFlag e_x, e_q{"3"}, e_a{"1"};
    long long e_h = 1;
    double e_alpha = 0, e_eps = 0.05, e_delta = 0;
    expsum->add_option("--x", e_x.text, "range start; the sum runs over [x, 2x)")->required();
    expsum->add_option("--q", e_q.text, "modulus");
    expsum->add_option("--a", e_a.text, "residue");
    expsum->add_option("--h", e_h, "phase frequency (nonzero integer)");
    expsum->add_option("--alpha", e_alpha, "power exponent (positive non-integer)")->required();
    expsum->add_option("--eps", e_eps, "envelope parameter (0, 1/3), < alpha/20");
    expsum->add_option("--delta", e_delta,
                       "envelope parameter; 0 selects the maximal admissible value");
    expsum->add_option("--out", out_path, "output path (default: stdout)");
    expsum->callback([&]() {
        std::ofstream file;
        auto& os = open_out(file, out_path);
        std::uint64_t x = e_x.value("--x"), q = e_q.value("--q"), a = e_a.value("--a");
        auto sum = pfl::exp_sum_primes(x, q, a, e_h, e_alpha, opts());
        double envelope = std::nan("");
        double ratio = std::nan("");
        if (q > 2 && e_h >= 1) {
            double delta = e_delta > 0 ? e_delta : pfl::thm1_delta_max(e_alpha, e_eps);
            try {
                envelope = pfl::thm1_bound(x, q, e_alpha, e_eps, delta);
                ratio = std::abs(sum.value) / envelope;
            } catch (const std::invalid_argument&) {
                // hypotheses not met; leave the envelope columns as nan
            }
        }
        os << "x,q,a,h,alpha,re,im,abs,terms,thm1_envelope,ratio\n";
        char buf[320];
        std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%lld,%.17g,%.17g,%.17g,%.17g,%llu,%.17g,%.17g\n",
                      (unsigned long long)x, (unsigned long long)q, (unsigned long long)a,
                      e_h, e_alpha, sum.value.real(), sum.value.imag(), std::abs(sum.value),
                      (unsigned long long)sum.terms, envelope, ratio);
        os << buf;
    });

    // ---- cup ------------------------------------------------------------
    auto* cup = app.add_subcommand(
        "cup", "smoothed-indicator Fourier coefficients |g(h)| vs their bound (CSV)");
    cup->fallthrough();
    double k_c = 0, k_d = 0.5, k_B = 1.0;
    MagFlag k_scale{"1000000"}, k_hmax{"100"};
    cup->add_option("--c", k_c, "window start in [0, 1)");
    cup->add_option("--d", k_d, "window end in (c, 1]");
    cup->add_option("--B", k_B, "ramp-width exponent: ramp = (log x-scale)^-B");
    cup->add_option("--x-scale", k_scale.text, "scale driving ramp width and cutoff");
    cup->add_option("--h-max", k_hmax.text, "emit rows for 1 <= h <= h-max");
    cup->add_option("--out", out_path, "output path (default: stdout)");
    cup->callback([&]() {
        std::ofstream file;
        auto& os = open_out(file, out_path);
        pfl::CupSpec spec = pfl::build_cup(k_c, k_d, k_B, k_scale.value("--x-scale"));
        os << "h,abs_g,bound\n";
        std::uint64_t hmax = k_hmax.value("--h-max");
        for (std::uint64_t h = 1; h <= hmax; ++h) {
            auto chk = pfl::coeff_vs_bound(spec, static_cast<std::int64_t>(h));
            char buf[128];
            std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n", (unsigned long long)h,
                          chk.abs_g, chk.bound);
            os << buf;
        }
    });

    // ---- vaughan --------------------------------------------------------
    auto* vaughan = app.add_subcommand(
        "vaughan", "five-component decomposition of the weighted sum over [x, y) (JSON)");
    vaughan->fallthrough();
    vaughan->set_help_flag("--help", "print help");
    MagFlag v_x, v_y, v_q{"1"}, v_a{"0"};
    long long v_h = 0;
    double v_alpha = 0;
    vaughan->add_option("--x", v_x.text, "range start (>= 2)")->required();
    vaughan->add_option("--y", v_y.text, "range end (x < y <= 2x)")->required();
    vaughan->add_option("--q", v_q.text, "modulus");
    vaughan->add_option("--a", v_a.text, "residue, coprime to q");
    vaughan->add_option("--h", v_h, "phase frequency (0 = phase-free mode)");
    vaughan->add_option("--alpha", v_alpha, "power exponent (positive non-integer)")->required();
    vaughan->add_option("--out", out_path, "output path (default: stdout)");
    vaughan->callback([&]() {
        std::ofstream file;
        auto& os = open_out(file, out_path);
        auto dec = pfl::vaughan_split(v_x.value("--x"), v_y.value("--y"), v_q.value("--q"),
                                      v_a.value("--a"), v_h, v_alpha);
        nlohmann::json j;
        j["x"] = dec.x;
        j["y"] = dec.y;
        j["v"] = dec.v;
        j["q"] = dec.q;
        j["a"] = dec.a;
        j["h"] = dec.h;
        j["alpha"] = dec.alpha;
        auto put = [&j](const char* name, std::complex<double> z) {
            j[name] = {{"re", z.real()}, {"im", z.imag()}};
        };
        put("w", dec.w);
        put("w0", dec.w0);
        put("w1", dec.w1);
        put("w2", dec.w2);
        put("w3", dec.w3);
        put("w4", dec.w4);
        put("w5", dec.w5);
        j["defect"] = dec.identity_defect();
        j["defect_rel"] = dec.identity_defect_rel();
        os << j.dump(2) << "\n";
    });

    // ---- bv -------------------------------------------------------------
    auto* bv = app.add_subcommand(
        "bv", "summed worst-residue discrepancy over moduli q <= Q on [x, 2x)");
    bv->fallthrough();
    MagFlag b_x, b_qmax;
    double b_alpha = 0, b_c = 0, b_d = 1, b_eta = 1e-12;
    bool b_classical = false;
    std::string b_csv;
    bv->add_option("--x", b_x.text, "range start; primes swept in [x, 2x)")->required();
    bv->add_option("--q-max", b_qmax.text, "largest modulus (>= 3)")->required();
    bv->add_option("--alpha", b_alpha, "power exponent for the window");
    bv->add_option("--c", b_c, "window start in [0, 1)");
    bv->add_option("--d", b_d, "window end in (c, 1]");
    bv->add_option("--eta", b_eta, "boundary tolerance for the window cuts");
    bv->add_flag("--classical", b_classical, "ignore the window: all primes count");
    bv->add_option("--csv", b_csv, "write per-modulus rows to this file (default: stdout)");
    bv->callback([&]() {
        std::optional<pfl::FracWindow> window;
        if (!b_classical) {
            if (b_alpha == 0)
                throw CLI::ValidationError("--alpha", "required unless --classical is set");
            window.emplace(b_alpha, b_c, b_d, b_eta);
        }
        auto rep = pfl::bv_discrepancy(b_x.value("--x"), b_qmax.value("--q-max"), window, opts());
        std::ofstream file;
        auto& os = open_out(file, b_csv);
        os << "q,worst_a,local,expected,discrepancy\n";
        for (const auto& row : rep.rows) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.17g,%.17g\n",
                          (unsigned long long)row.q, (unsigned long long)row.worst_a,
                          (unsigned long long)row.local, row.expected, row.discrepancy);
            os << buf;
        }
        std::fprintf(stderr, "total=%.17g global_count=%llu boundary_total=%llu\n", rep.total,
                     (unsigned long long)rep.global_count,
                     (unsigned long long)rep.boundary_total);
    });

    // ---- gaps -----------------------------------------------------------
    auto* gaps = app.add_subcommand("gaps", "admissible tuples and constrained gap scans");
    gaps->fallthrough();
    gaps->require_subcommand(1);

    auto* tuple = gaps->add_subcommand("tuple", "emit the k primes following k, one per line");
    tuple->fallthrough();
    MagFlag t_k;
    tuple->add_option("--k", t_k.text, "tuple size")->required();
    tuple->add_option("--out", out_path, "output path (default: stdout)");
    tuple->callback([&]() {
        std::ofstream file;
        auto& os = open_out(file, out_path);
        auto t = pfl::admissible_tuple(t_k.value("--k"), opts());
        for (auto off : t.offsets) os << off << "\n";
    });

    auto* check = gaps->add_subcommand("check", "admissibility of an offsets file");
    check->fallthrough();
    std::string offsets_path;
    check->add_option("--offsets-file", offsets_path, "one integer offset per line")->required();
    check->callback([&]() {
        std::ifstream in(offsets_path);
        if (!in) throw std::runtime_error("cannot open offsets file: " + offsets_path);
        pfl::AdmissibleTuple t;
        std::uint64_t v;
        while (in >> v) t.offsets.push_back(v);
        auto r = pfl::is_admissible(t, threads);
        if (r.admissible) {
            std::printf("admissible (%zu offsets)\n", t.offsets.size());
        } else {
            std::printf("not admissible: covering prime %llu\n",
                        (unsigned long long)*r.witness);
        }
    });

    auto* scan = gaps->add_subcommand("scan", "small gaps between window primes in [x, 2x)");
    scan->fallthrough();
    MagFlag g_x, g_g;
    double g_alpha = 0, g_c = 0, g_d = 1, g_eta = 1e-12;
    scan->add_option("--x", g_x.text, "range start")->required();
    scan->add_option("--alpha", g_alpha, "power exponent for the window")->required();
    scan->add_option("--c", g_c, "window start in [0, 1)");
    scan->add_option("--d", g_d, "window end in (c, 1]");
    scan->add_option("--eta", g_eta, "boundary tolerance for the window cuts");
    scan->add_option("--g", g_g.text, "report consecutive window primes with gap <= g (even)")
        ->required();
    scan->add_option("--out", out_path, "output path (default: stdout)");
    scan->callback([&]() {
        std::ofstream file;
        auto& os = open_out(file, out_path);
        pfl::FracWindow w(g_alpha, g_c, g_d, g_eta);
        auto result = pfl::scan_constrained_gaps(g_x.value("--x"), w, g_g.value("--g"), opts());
        os << "p,p_next,gap\n";
        for (auto [p, pn] : result.pairs)
            os << p << "," << pn << "," << (pn - p) << "\n";
        std::fprintf(stderr, "pairs=%zu boundary_excluded=%llu\n", result.pairs.size(),
                     (unsigned long long)result.boundary_count);
    });

    // ---- accept ---------------------------------------------------------
    auto* accept = app.add_subcommand("accept", "run the verification battery");
    accept->fallthrough();
    std::string level = "desk";
    bool big = false;
    accept->add_option("--level", level, "battery level (only \"desk\")");
    accept->add_flag("--big", big, "include the minutes-scale sweep to ~3.5e9");
    accept->callback([&]() {
        if (level != "desk") throw CLI::ValidationError("--level", "unknown level: " + level);
        pfl::accept::Options o;
        o.big = big;
        o.threads = threads;
        o.cache_dir = cache_dir;
        if (pfl::accept::run(o) != 0) throw std::runtime_error("acceptance criteria failed");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage/validation problems exit 2
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
