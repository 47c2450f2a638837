#include "pfl/vaughan.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pfl/dd.hpp"
#include "pfl/fracpow.hpp"

namespace pfl {

VaughanCoeffs vaughan_coeffs(std::uint64_t v, std::uint64_t limit, const ArithTables& tables) {
    std::uint64_t v2 = v * v;
    if (tables.limit < v2 || tables.limit < limit)
        throw std::invalid_argument("vaughan_coeffs: table coverage insufficient");
    VaughanCoeffs out;
    out.v = v;
    out.b_limit = limit;

    // a_m: accumulate the integer multiplicity of each log p, convert once
    struct LogTerm { std::uint32_t p; std::int32_t mult; };
    std::vector<std::vector<LogTerm>> acc(v2 + 1);
    for (std::uint64_t u = 1; u <= v; ++u) {
        int mu = tables.mu[u];
        if (mu == 0) continue;
        for (std::uint64_t pw = 2; pw <= v; ++pw) {
            if (!tables.is_prime_power(pw)) continue;
            std::uint64_t m = u * pw;
            if (m > v2) break;
            std::uint32_t p = tables.lambda_p[pw];
            auto& terms = acc[m];
            bool merged = false;
            for (auto& t : terms)
                if (t.p == p) { t.mult += mu; merged = true; break; }
            if (!merged) terms.push_back({p, mu});
        }
    }
    out.a.assign(v2 + 1, 0.0);
    for (std::uint64_t m = 1; m <= v2; ++m) {
        double s = 0.0;
        for (const auto& t : acc[m])
            s += static_cast<double>(t.mult) * std::log(static_cast<double>(t.p));
        out.a[m] = s;
    }

    out.b.assign(limit + 1, 0);
    for (std::uint64_t u = 1; u <= v && u <= limit; ++u) {
        int mu = tables.mu[u];
        if (mu == 0) continue;
        for (std::uint64_t m = u; m <= limit; m += u) out.b[m] += mu;
    }
    return out;
}

namespace {

struct DDComplex {
    DD re, im;
    void add(double weight, std::uint64_t base, double alpha, std::int64_t h) {
        if (h == 0) {
            re += weight;
            return;
        }
        FracValue t = frac_pow_scaled(base, alpha, h);
        double s, c;
        dd_sincos_2pi(DD(t.value), s, c);
        re += weight * c;
        im += weight * s;
    }
    std::complex<double> value() const { return {re.to_double(), im.to_double()}; }
};

// first n >= lo with n ≡ r (mod q)
std::uint64_t first_in_class(std::uint64_t lo, std::uint64_t q, std::uint64_t r) {
    std::uint64_t rem = lo % q;
    return lo + (r >= rem ? r - rem : q + r - rem);
}

} // namespace

double VaughanDecomposition::identity_defect() const {
    return std::abs(w + w0 - w1 + w2 - w3);
}

double VaughanDecomposition::identity_defect_rel() const {
    return identity_defect() / std::max(1.0, std::abs(w));
}

VaughanDecomposition vaughan_split(std::uint64_t x, std::uint64_t y, std::uint64_t q,
                                   std::uint64_t a, std::int64_t h, double alpha) {
    if (!(2 <= x && x < y && y <= 2 * x))
        throw std::invalid_argument("vaughan_split: need 2 <= x < y <= 2x");
    if (q < 1 || a >= q) throw std::invalid_argument("vaughan_split: residue out of range");
    if (std::gcd(a, q) != 1) throw std::invalid_argument("vaughan_split: requires (a, q) = 1");
    validate_alpha(alpha);

    VaughanDecomposition dec;
    dec.x = x;
    dec.y = y;
    dec.q = q;
    dec.a = a;
    dec.h = h;
    dec.alpha = alpha;
    std::uint64_t v = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(x)));
    while ((v + 1) * (v + 1) * (v + 1) <= x) ++v;
    while (v * v * v > x) --v;
    dec.v = v;

    ArithTables tables = arith_tables(y);
    std::uint64_t b_limit = y / v;
    VaughanCoeffs coeffs = vaughan_coeffs(v, b_limit, tables);

    // W: Lambda-weighted sum over the progression in [x, y)
    DDComplex w;
    for (std::uint64_t n = first_in_class(x, q, a); n < y; n += q) {
        if (!tables.is_prime_power(n)) continue;
        w.add(tables.lambda(n), n, alpha, h);
    }
    dec.w = w.value();

    // W0 = W4 + W5 over m <= V^2 with coefficient a_m
    DDComplex w0, w4, w5;
    for (std::uint64_t m = 1; m <= v * v; ++m) {
        if (coeffs.a[m] == 0.0) continue;
        if (std::gcd(m, q) != 1) continue; // no n solves mn ≡ a (q)
        std::uint64_t res = q == 1 ? 0 : (a * mod_inverse(m, q)) % q;
        std::uint64_t n_lo = (x + m - 1) / m;
        std::uint64_t n_hi = (y + m - 1) / m; // exclusive
        DDComplex inner;
        for (std::uint64_t n = first_in_class(n_lo, q, res); n < n_hi; n += q)
            inner.add(1.0, m * n, alpha, h);
        double am = coeffs.a[m];
        w0.re += am * inner.re;
        w0.im += am * inner.im;
        if (m <= v) {
            w4.re += am * inner.re;
            w4.im += am * inner.im;
        } else {
            w5.re += am * inner.re;
            w5.im += am * inner.im;
        }
    }
    dec.w0 = w0.value();
    dec.w4 = w4.value();
    dec.w5 = w5.value();

    // W1: Lambda prefix n <= V, restricted to the global range [x, y)
    DDComplex w1;
    for (std::uint64_t n = first_in_class(x, q, a); n < y && n <= v; n += q) {
        if (!tables.is_prime_power(n)) continue;
        w1.add(tables.lambda(n), n, alpha, h);
    }
    dec.w1 = w1.value();

    // W2: V < m <= y/V with coefficient b_m, inner Lambda over n > V
    DDComplex w2;
    for (std::uint64_t m = v + 1; m <= b_limit; ++m) {
        if (coeffs.b[m] == 0) continue;
        if (std::gcd(m, q) != 1) continue;
        std::uint64_t res = q == 1 ? 0 : (a * mod_inverse(m, q)) % q;
        std::uint64_t n_lo = std::max<std::uint64_t>(v + 1, (x + m - 1) / m);
        std::uint64_t n_hi = (y + m - 1) / m;
        DDComplex inner;
        for (std::uint64_t n = first_in_class(n_lo, q, res); n < n_hi; n += q) {
            if (!tables.is_prime_power(n)) continue;
            inner.add(tables.lambda(n), m * n, alpha, h);
        }
        double bm = static_cast<double>(coeffs.b[m]);
        w2.re += bm * inner.re;
        w2.im += bm * inner.im;
    }
    dec.w2 = w2.value();

    // W3: m <= V with mu(m), inner log-weighted full range
    DDComplex w3;
    for (std::uint64_t m = 1; m <= v; ++m) {
        if (tables.mu[m] == 0) continue;
        if (std::gcd(m, q) != 1) continue;
        std::uint64_t res = q == 1 ? 0 : (a * mod_inverse(m, q)) % q;
        std::uint64_t n_lo = (x + m - 1) / m;
        std::uint64_t n_hi = (y + m - 1) / m;
        DDComplex inner;
        for (std::uint64_t n = first_in_class(n_lo, q, res); n < n_hi; n += q)
            inner.add(std::log(static_cast<double>(n)), m * n, alpha, h);
        double mum = static_cast<double>(tables.mu[m]);
        w3.re += mum * inner.re;
        w3.im += mum * inner.im;
    }
    dec.w3 = w3.value();

    return dec;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> dyadic_blocks(std::uint64_t lo,
                                                                   std::uint64_t hi) {
    if (lo < 1 || lo >= hi) throw std::invalid_argument("dyadic_blocks: empty range");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
    std::uint64_t m = lo;
    while (m < hi) {
        std::uint64_t m1 = std::min(2 * m, hi);
        blocks.emplace_back(m, m1);
        m = m1;
    }
    return blocks;
}

} // namespace pfl
