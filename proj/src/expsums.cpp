#include "pfl/expsums.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pfl/dd.hpp"
#include "pfl/fracpow.hpp"

namespace pfl {

namespace {

struct DDSum {
    DD re, im;
    std::uint64_t terms = 0;
};

void add_phase(DDSum& s, DD frac_turn) {
    double sn, cs;
    dd_sincos_2pi(frac_turn, sn, cs);
    s.re += cs;
    s.im += sn;
    ++s.terms;
}

} // namespace

ExpSum exp_sum_primes(std::uint64_t x, std::uint64_t q, std::uint64_t a,
                      std::int64_t h, double alpha, const SieveOptions& opt) {
    if (q < 1 || a >= q) throw std::invalid_argument("exp_sum_primes: residue out of range");
    validate_alpha(alpha);
    if (x < 1) throw std::invalid_argument("exp_sum_primes: x must be >= 1");
    DDSum total = segment_sweep<DDSum>(
        x, 2 * x, opt, {},
        [&](const SieveSegment& seg, std::uint64_t clo, std::uint64_t chi) {
            DDSum local;
            seg.for_each_prime(
                [&](std::uint64_t p) {
                    if (p % q != a) return;
                    FracValue t = frac_pow_scaled(p, alpha, h);
                    add_phase(local, DD(t.value));
                },
                clo, chi);
            return local;
        },
        [](DDSum& acc, const DDSum& v) {
            acc.re += v.re;
            acc.im += v.im;
            acc.terms += v.terms;
        });
    return {{total.re.to_double(), total.im.to_double()}, total.terms};
}

ExpSum exp_sum_integers(std::uint64_t lo, std::uint64_t hi, std::uint64_t q,
                        std::uint64_t a, std::int64_t h, double alpha) {
    if (q < 1 || a >= q) throw std::invalid_argument("exp_sum_integers: residue out of range");
    validate_alpha(alpha);
    DDSum s;
    if (lo < 1) lo = 1;
    std::uint64_t rem = lo % q;
    std::uint64_t n = lo + (a >= rem ? a - rem : q + a - rem);
    for (; n < hi; n += q) {
        FracValue t = frac_pow_scaled(n, alpha, h);
        add_phase(s, DD(t.value));
    }
    return {{s.re.to_double(), s.im.to_double()}, s.terms};
}

double thm1_delta_max(double alpha, double eps) {
    return eps * eps * eps / (50.0 * alpha * alpha);
}

double thm1_bound(std::uint64_t x, std::uint64_t q, double alpha, double eps, double delta) {
    validate_alpha(alpha);
    if (!(eps > 0.0 && eps < 1.0 / 3.0))
        throw std::invalid_argument("thm1_bound: requires 0 < eps < 1/3");
    if (!(eps < alpha / 20.0))
        throw std::invalid_argument("thm1_bound: requires eps < alpha/20");
    if (!(delta > 0.0 && delta <= thm1_delta_max(alpha, eps)))
        throw std::invalid_argument("thm1_bound: requires 0 < delta <= eps^3/(50 alpha^2)");
    if (q <= 2) throw std::invalid_argument("thm1_bound: requires q > 2");
    if (x < 2) throw std::invalid_argument("thm1_bound: requires x >= 2");
    double exponent = 1.0 - delta - eps * eps * eps / (3.0 * alpha * alpha);
    return std::pow(static_cast<double>(x), exponent) / static_cast<double>(q);
}

int choose_k(double alpha, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("choose_k: eps must be positive");
    double k = std::floor(1.1 * alpha / eps) + 1.0;
    if (k < 3.0) return 3;
    if (k > 1e9) throw std::overflow_error("choose_k: k out of range");
    return static_cast<int>(k);
}

double pochhammer(double alpha, int k) {
    double prod = 1.0;
    for (int i = 1; i <= k; ++i) prod *= alpha - static_cast<double>(i) + 1.0;
    return prod;
}

double hb_bound(const PhaseEnvelope& env) {
    if (env.k < 3) throw std::invalid_argument("hb_bound: requires k >= 3");
    if (!(env.lambda_k > 0.0)) throw std::invalid_argument("hb_bound: requires lambda_k > 0");
    if (env.n_len < 2) throw std::invalid_argument("hb_bound: requires N >= 2");
    double k = static_cast<double>(env.k);
    double kk1 = k * (k - 1.0);
    double n = static_cast<double>(env.n_len);
    double t1 = std::pow(env.lambda_k, 1.0 / kk1);
    double t2 = std::pow(n, -1.0 / kk1);
    double t3 = std::pow(n, -2.0 / kk1) * std::pow(env.lambda_k, -2.0 / (k * kk1));
    return std::pow(n, 1.0 + env.delta) * (t1 + t2 + t3);
}

PhaseEnvelope phase_envelope_type1(std::int64_t h, std::uint64_t m, std::uint64_t q,
                                   std::uint64_t x, double alpha, int k) {
    if (k < 3) throw std::invalid_argument("phase_envelope_type1: requires k >= 3");
    validate_alpha(alpha);
    if (h == 0) throw std::invalid_argument("phase_envelope_type1: requires h != 0");
    std::uint64_t mq = m * q;
    if (mq == 0 || mq >= x) throw std::invalid_argument("phase_envelope_type1: requires mq < x");
    double r1 = static_cast<double>(x) / static_cast<double>(mq);
    double r2 = 2.0 * r1;
    std::uint64_t n_len = static_cast<std::uint64_t>(std::floor(r2) - std::ceil(r1)) + 1;
    if (n_len < 2) throw std::invalid_argument("phase_envelope_type1: degenerate range");
    double pk = std::fabs(pochhammer(alpha, k));
    double scale = std::fabs(static_cast<double>(h)) * std::pow(static_cast<double>(mq), alpha);
    // |f^(k)|(t) = pk * scale * t^(alpha-k): decreasing in t for k > alpha
    double f_min = pk * scale * std::pow(r2, alpha - k);
    double f_max = pk * scale * std::pow(r1, alpha - k);
    PhaseEnvelope env;
    env.k = k;
    env.lambda_k = f_min;
    env.L = f_max / f_min; // = 2^(k - alpha)
    env.n_len = n_len;
    return env;
}

std::vector<SharpnessRow> sharpness_grid(const std::vector<SharpnessCell>& cells) {
    std::vector<SharpnessRow> rows;
    rows.reserve(cells.size());
    for (const auto& cell : cells) {
        validate_alpha(cell.alpha);
        if (std::gcd(cell.a, cell.q) != 1 || std::gcd(cell.m, cell.q) != 1)
            throw std::invalid_argument("sharpness_grid: cell requires (a,q) = (m,q) = 1");
        PhaseEnvelope env = phase_envelope_type1(cell.h, cell.m, cell.q, cell.x,
                                                 cell.alpha, cell.k);
        env.delta = cell.hb_delta;
        if (env.n_len > 10'000'000ull)
            throw std::invalid_argument("sharpness_grid: cell too large");
        // l ≡ a m^{-1} (mod q), xi = l/q; sum e(h (mq)^alpha (r + xi)^alpha)
        std::uint64_t l = (cell.a * mod_inverse(cell.m, cell.q)) % cell.q;
        if (l == 0) l = cell.q; // representative 1 <= l <= q
        DD xi = dd_from_u64(l) / static_cast<double>(cell.q);
        double r_lo = static_cast<double>(cell.x) / static_cast<double>(cell.m * cell.q);
        double r_hi = 2.0 * r_lo;
        // integer r with r_lo <= r + xi < r_hi
        auto first_r = static_cast<std::int64_t>(std::ceil(r_lo - xi.to_double()));
        DD coef = DD(std::fabs(static_cast<double>(cell.h))) *
                  dd_pow(dd_from_u64(cell.m * cell.q), DD(cell.alpha));
        if (cell.h < 0) coef = -coef;
        DDSum s;
        for (std::int64_t r = first_r;; ++r) {
            DD t = dd_from_i64(r) + xi;
            if (t.to_double() >= r_hi) break;
            if (t.to_double() < r_lo) continue;
            DD phase = dd_frac(coef * dd_pow(t, DD(cell.alpha)));
            add_phase(s, phase);
        }
        SharpnessRow row;
        row.cell = cell;
        row.abs_sum = std::abs(std::complex<double>(s.re.to_double(), s.im.to_double()));
        row.terms = s.terms;
        row.envelope = hb_bound(env);
        row.ratio = row.envelope > 0 ? row.abs_sum / row.envelope : 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace pfl
