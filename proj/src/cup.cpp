#include "pfl/cup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pfl/parallel.hpp"

namespace pfl {

namespace {

constexpr int kMaxOrder = 64; // Pascal row must fit in uint64

std::vector<std::uint64_t> pascal_row(int r) {
    std::vector<std::uint64_t> row(static_cast<std::size_t>(r) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= r; ++i)
        for (int j = i; j > 0; --j) row[j] += row[j - 1];
    return row;
}

DD inv_factorial(int r) {
    DD f(1.0);
    for (int i = 2; i <= r; ++i) f = f * static_cast<double>(i);
    return DD(1.0) / f;
}

void finish_spec(CupSpec& s) {
    if (s.r < 1) throw std::invalid_argument("cup: smoothing order must be >= 1");
    if (s.r > kMaxOrder) throw std::invalid_argument("cup: smoothing order too large");
    s.binom = pascal_row(s.r);
    s.inv_r_factorial = inv_factorial(s.r);
}

// CDF of the sum of `order` iid U[0,1] at s (0 <= s <= order), computed in
// double-double: (1/order!) * sum_j (-1)^j C(order, j) (s - j)^order.
DD irwin_hall_cdf(const CupSpec& spec, DD s) {
    if (s.hi <= 0.0) return DD(0.0);
    if (s.hi >= static_cast<double>(spec.r)) return DD(1.0);
    int jmax = static_cast<int>(std::floor(s.hi));
    DD acc(0.0);
    for (int j = 0; j <= jmax; ++j) {
        DD term = dd_from_u64(spec.binom[static_cast<std::size_t>(j)]) *
                  dd_pow_ui(s - static_cast<double>(j), static_cast<unsigned>(spec.r));
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    acc = acc * spec.inv_r_factorial;
    if (acc.hi < 0.0) return DD(0.0);
    if (acc.hi > 1.0) return DD(1.0);
    return acc;
}

double pi_h(std::int64_t h) { return std::numbers::pi * static_cast<double>(h); }

// sin(pi * z) via the double-double circle reduction
DD dd_sin_pi(DD z) {
    DD t = dd_frac(dd_ldexp(z, -1)); // z/2 mod 1
    double s, c;
    dd_sincos_2pi(t, s, c);
    return DD(s);
}

} // namespace

CupSpec build_cup(double c, double d, double B, std::uint64_t x_scale) {
    if (!(0.0 <= c && c < d && d <= 1.0))
        throw std::invalid_argument("build_cup: window must satisfy 0 <= c < d <= 1");
    if (x_scale < 16) throw std::invalid_argument("build_cup: x_scale must be >= 16");
    double lx = std::log(static_cast<double>(x_scale));
    double delta = std::pow(lx, -B);
    double l2 = std::ceil(std::log2(static_cast<double>(x_scale)));
    double H = l2 / delta;
    // floor(H * delta) with H = l2/delta equals l2 in exact arithmetic;
    // snap the product back to the integer it represents
    double hd = H * delta;
    int r = static_cast<int>(std::fabs(hd - std::nearbyint(hd)) < 1e-9
                                 ? std::nearbyint(hd)
                                 : std::floor(hd));
    if (!(d - c > 2.0 * delta))
        throw std::invalid_argument("build_cup: interval too narrow for the ramp width");
    CupSpec s;
    s.c = c;
    s.d = d;
    s.delta = delta;
    s.r = r;
    s.h_cut = H;
    s.flavor = CupFlavor::Main;
    s.mid_lo = c + delta / 2;
    s.mid_hi = d - delta / 2;
    finish_spec(s);
    return s;
}

CupSpec build_edge_cup(const CupSpec& main, CupFlavor which) {
    if (main.flavor != CupFlavor::Main)
        throw std::invalid_argument("build_edge_cup: base spec must be the main flavor");
    if (which == CupFlavor::Main)
        throw std::invalid_argument("build_edge_cup: requested flavor must be an edge");
    CupSpec s;
    s.c = main.c;
    s.d = main.d;
    s.delta = main.delta / 10.0;
    s.r = main.r; // floor(H1 * delta1) = floor(H * delta)
    s.h_cut = 10.0 * main.h_cut;
    s.flavor = which;
    double flo, fhi; // the region where the edge cup must be exactly 1
    if (which == CupFlavor::LeftEdge) {
        flo = main.c;
        fhi = main.c + main.delta;
    } else {
        flo = main.d - main.delta;
        fhi = main.d;
    }
    s.mid_lo = flo - s.delta / 2;
    s.mid_hi = fhi + s.delta / 2;
    finish_spec(s);
    return s;
}

double cup_eval(const CupSpec& spec, double x) {
    double lo = spec.support_lo();
    double t = x - std::floor(x - lo); // in [lo, lo + 1)
    if (t >= spec.support_hi()) return 0.0;
    if (t >= spec.flat_lo() && t <= spec.flat_hi()) return 1.0;
    double rr = static_cast<double>(spec.r);
    if (t < spec.flat_lo()) {
        DD s = DD(rr) * (DD(t) - DD(lo)) / DD(spec.delta);
        return irwin_hall_cdf(spec, s).to_double();
    }
    DD s = DD(rr) * (DD(spec.support_hi()) - DD(t)) / DD(spec.delta);
    return irwin_hall_cdf(spec, s).to_double();
}

namespace {

struct CoeffParts {
    DD abs_g;   // |g(h)|
    DD phase_t; // phase as a fraction of a turn: g = |g|-signed * e(phase)
    DD signed_amp;
};

CoeffParts coeff_parts(const CupSpec& spec, std::int64_t h) {
    if (h == 0) throw std::invalid_argument("fourier_coeff: h = 0 is the mean, exposed separately");
    DD L = DD(spec.mid_hi) - DD(spec.mid_lo);
    DD w = DD(spec.delta) / static_cast<double>(spec.r);
    DD hd = dd_from_i64(h);
    DD pih = DD(std::numbers::pi) * hd;
    // sin(pi h L) / (pi h)
    DD first = dd_sin_pi(hd * L) / pih;
    // sinc(pi h delta / r)^r
    DD z = hd * w;
    DD sinc = dd_sin_pi(z) / (DD(std::numbers::pi) * z);
    DD amp = first * dd_pow_ui(sinc, static_cast<unsigned>(spec.r));
    // phase factor e(-h (mid_lo + mid_hi) / 2)
    DD phase_t = dd_frac(-(hd * (DD(spec.mid_lo) + DD(spec.mid_hi))) * 0.5);
    return {dd_abs(amp), phase_t, amp};
}

DD bound_dd(const CupSpec& spec, std::int64_t h) {
    DD L = DD(spec.mid_hi) - DD(spec.mid_lo);
    double ah = std::fabs(static_cast<double>(h));
    DD inv_pih = DD(1.0) / (DD(std::numbers::pi) * ah);
    DD best = L < inv_pih ? L : inv_pih;
    DD ratio = DD(static_cast<double>(spec.r)) / (DD(std::numbers::pi) * ah * DD(spec.delta));
    if (ratio < DD(1.0)) { // otherwise the third branch exceeds the second
        DD third = inv_pih * dd_pow_ui(ratio, static_cast<unsigned>(spec.r));
        if (third < best) best = third;
    }
    return best;
}

} // namespace

std::complex<double> fourier_coeff(const CupSpec& spec, std::int64_t h) {
    CoeffParts p = coeff_parts(spec, h);
    double sn, cs;
    dd_sincos_2pi(p.phase_t, sn, cs);
    double amp = p.signed_amp.to_double();
    return {amp * cs, amp * sn};
}

double coeff_bound(const CupSpec& spec, std::int64_t h) {
    if (h == 0) throw std::invalid_argument("coeff_bound: h must be nonzero");
    return bound_dd(spec, h).to_double();
}

CoeffCheck coeff_vs_bound(const CupSpec& spec, std::int64_t h) {
    CoeffParts p = coeff_parts(spec, h);
    DD b = bound_dd(spec, h);
    return {p.abs_g.to_double(), b.to_double(), p.abs_g <= b};
}

double coeff_bound_tail(const CupSpec& spec) {
    double total = 0.0;
    std::int64_t h = static_cast<std::int64_t>(std::floor(spec.h_cut)) + 1;
    for (;;) {
        double term = coeff_bound(spec, h);
        total += 2.0 * term; // +h and -h
        if (term < 1e-40 * std::max(total, 1e-300) || term == 0.0) break;
        ++h;
        if (h > static_cast<std::int64_t>(spec.h_cut) + 10'000'000) break;
    }
    return total;
}

namespace {

struct GaussRule {
    std::vector<double> node;   // on [-1, 1]
    std::vector<double> weight;
};

// Newton iteration on Legendre polynomials; standard 2n-1 exactness rule.
GaussRule gauss_legendre(int n) {
    GaussRule g;
    g.node.resize(n);
    g.weight.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        g.node[i] = x;
        g.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return g;
}

} // namespace

std::complex<double> fourier_quadrature(const CupSpec& spec, std::int64_t h,
                                        int target_points) {
    static const GaussRule rule = gauss_legendre(24);
    double lo = spec.support_lo();
    double w = spec.delta / spec.r;
    std::vector<double> cuts;
    cuts.push_back(lo);
    for (int j = 1; j <= spec.r; ++j) cuts.push_back(lo + j * w);
    cuts.push_back(spec.flat_hi());
    for (int j = spec.r; j >= 1; --j) cuts.push_back(spec.support_hi() - j * w + w);
    cuts.push_back(spec.support_hi());
    cuts.push_back(lo + 1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double per_unit = std::max(1.0, std::fabs(static_cast<double>(h)) / 2.5);
    (void)target_points; // panel count is driven by the oscillation rate
    std::complex<double> total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        int panels = static_cast<int>(std::ceil((b - a) * per_unit)) + 1;
        for (int p = 0; p < panels; ++p) {
            double pa = a + (b - a) * p / panels;
            double pb = a + (b - a) * (p + 1) / panels;
            double half = 0.5 * (pb - pa);
            double mid = 0.5 * (pa + pb);
            for (int k = 0; k < 24; ++k) {
                double x = mid + half * rule.node[k];
                double s, c;
                double arg = -2.0 * std::numbers::pi * static_cast<double>(h) * x;
                s = std::sin(arg);
                c = std::cos(arg);
                double v = cup_eval(spec, x);
                total += rule.weight[k] * half * v * std::complex<double>(c, s);
            }
        }
    }
    return total;
}

SandwichResult sandwich_check(const CupSpec& main, const CupSpec& left,
                              const CupSpec& right, std::uint64_t grid,
                              unsigned threads) {
    if (left.flavor != CupFlavor::LeftEdge || right.flavor != CupFlavor::RightEdge ||
        left.c != main.c || left.d != main.d || right.c != main.c || right.d != main.d ||
        left.delta != main.delta / 10.0 || right.delta != main.delta / 10.0)
        throw std::invalid_argument("sandwich_check: incompatible cup specs");
    if (grid < 1) throw std::invalid_argument("sandwich_check: empty grid");
    const std::uint64_t chunk = 1ull << 16;
    std::uint64_t nchunks = (grid + chunk - 1) / chunk;
    auto results = run_indexed<SandwichResult>(
        static_cast<std::size_t>(nchunks), threads, [&](std::size_t ci) {
            SandwichResult best{-1e300, 0.0};
            std::uint64_t i0 = ci * chunk;
            std::uint64_t i1 = std::min(grid, i0 + chunk);
            for (std::uint64_t i = i0; i < i1; ++i) {
                double x = static_cast<double>(i) / static_cast<double>(grid);
                double chi = (main.c <= x && x < main.d) ? 1.0 : 0.0;
                double psi = cup_eval(main, x);
                double v = psi - chi;
                if (v > best.max_violation) best = {v, x};
                double upper = chi - (psi + cup_eval(left, x) + cup_eval(right, x));
                if (upper > best.max_violation) best = {upper, x};
            }
            return best;
        });
    SandwichResult out{-1e300, 0.0};
    for (const auto& r : results)
        if (r.max_violation > out.max_violation) out = r;
    return out;
}

} // namespace pfl
