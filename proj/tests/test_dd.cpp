#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pfl/dd.hpp"

#include <cmath>
#include <random>

#include "support/oracles.hpp"

using namespace pfl;
using pfl::oracle::bigfloat;

namespace {

bigfloat to_big(DD x) { return bigfloat(x.hi) + bigfloat(x.lo); }

double rel_err(DD got, bigfloat want) {
    bigfloat diff = abs(to_big(got) - want);
    bigfloat mag = abs(want);
    if (mag < 1e-300) return static_cast<double>(diff);
    return static_cast<double>(diff / mag);
}

} // namespace

TEST_CASE("field operations against the big-float oracle") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_int_distribution<int> scale(-40, 40);
    for (int i = 0; i < 2000; ++i) {
        double a = std::ldexp(uni(rng), scale(rng));
        double b = std::ldexp(uni(rng), scale(rng));
        double c = uni(rng) * 1e-17;
        DD x = DD(a) + c;
        DD y(b);
        bigfloat xb = to_big(x), yb = to_big(y);
        CHECK(rel_err(x + y, xb + yb) < 1e-30);
        CHECK(rel_err(x - y, xb - yb) < 1e-30);
        CHECK(rel_err(x * y, xb * yb) < 1e-30);
        if (b != 0.0) CHECK(rel_err(x / y, xb / yb) < 1e-30);
    }
}

TEST_CASE("u64 conversion is exact") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t n = rng();
        DD x = dd_from_u64(n);
        CHECK(to_big(x) == bigfloat(n));
    }
    CHECK(dd_from_u64(0).to_double() == 0.0);
    CHECK(to_big(dd_from_u64(~0ull)) == bigfloat(~0ull));
    CHECK(to_big(dd_from_i64(-123456789012345678ll)) == bigfloat(-123456789012345678ll));
}

TEST_CASE("exp and log near full double-double precision") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        double a = uni(rng);
        DD e = dd_exp(DD(a));
        CHECK(rel_err(e, exp(bigfloat(a))) < 1e-29);
    }
    std::uniform_real_distribution<double> pos(1e-6, 1e15);
    for (int i = 0; i < 500; ++i) {
        double a = pos(rng);
        CHECK(rel_err(dd_log(DD(a)), log(bigfloat(a))) < 1e-29);
    }
    CHECK_THROWS(dd_exp(DD(1000.0)));
    CHECK_THROWS(dd_log(DD(-1.0)));
    CHECK(dd_exp(DD(0.0)).to_double() == 1.0);
}

TEST_CASE("floor split and fractional part at large magnitudes") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> mant(1.0, 2.0);
    for (int e = 0; e <= 50; e += 5) {
        for (int i = 0; i < 100; ++i) {
            double hi = std::ldexp(mant(rng), e);
            double lo = std::ldexp(mant(rng) - 1.5, e - 55);
            DD x = DD(hi) + lo;
            bigfloat xb = to_big(x);
            bigfloat want = xb - floor(xb);
            DD f = dd_frac(x);
            CHECK(f.hi >= 0.0);
            CHECK(f.to_double() <= 1.0);
            bigfloat got = to_big(f);
            // equal mod 1 (the wrap may report 1-eps as 0)
            bigfloat diff = abs(got - want);
            if (diff > 0.5) diff = abs(diff - 1);
            CHECK(static_cast<double>(diff) < 1e-25);
        }
    }
    CHECK(dd_frac(DD(5.0)).to_double() == 0.0);
    CHECK(dd_frac(DD(-0.25)).to_double() == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("sin/cos of full turns against the oracle") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    bigfloat two_pi = 2 * boost::math::constants::pi<bigfloat>();
    for (int i = 0; i < 2000; ++i) {
        double t = uni(rng);
        double s, c;
        dd_sincos_2pi(DD(t), s, c);
        double ws = static_cast<double>(sin(two_pi * t));
        double wc = static_cast<double>(cos(two_pi * t));
        CHECK(std::fabs(s - ws) < 4e-16);
        CHECK(std::fabs(c - wc) < 4e-16);
        CHECK(std::fabs(s * s + c * c - 1.0) < 1e-15);
    }
    double s, c;
    dd_sincos_2pi(DD(0.0), s, c);
    CHECK(s == 0.0);
    CHECK(c == 1.0);
    dd_sincos_2pi(DD(0.25), s, c);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(c) < 1e-16);
}

TEST_CASE("pow helpers") {
    CHECK(rel_err(dd_pow_ui(DD(3.0), 7), bigfloat(2187)) < 1e-30);
    CHECK(dd_pow_ui(DD(2.0), 0).to_double() == 1.0);
    CHECK(rel_err(dd_sqrt(DD(2.0)), sqrt(bigfloat(2))) < 1e-30);
    DD p = dd_pow(dd_from_u64(1000000007ull), DD(std::sqrt(2.0)));
    bigfloat want = pow(bigfloat(1000000007ull), bigfloat(std::sqrt(2.0)));
    CHECK(rel_err(p, want) < 1e-28);
}
