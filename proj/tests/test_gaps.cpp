#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pfl/gaps.hpp"

#include <cmath>
#include <set>

#include "support/oracles.hpp"

using namespace pfl;

TEST_CASE("tuple of the k primes following k") {
    CHECK(admissible_tuple(1).offsets == std::vector<std::uint64_t>{2});
    CHECK(admissible_tuple(5).offsets == std::vector<std::uint64_t>{7, 11, 13, 17, 19});
    AdmissibleTuple t2 = admissible_tuple(2);
    CHECK(t2.offsets == std::vector<std::uint64_t>{3, 5});
    CHECK_THROWS(admissible_tuple(0));
}

TEST_CASE("tuple span avoids materialization") {
    TupleSpan s = tuple_span(5);
    CHECK(s.first == 7);
    CHECK(s.last == 19);
    AdmissibleTuple t = admissible_tuple(1000);
    TupleSpan big = tuple_span(1000);
    CHECK(big.first == t.offsets.front());
    CHECK(big.last == t.offsets.back());
    // spans are thread-count independent
    SieveOptions opt;
    opt.threads = 4;
    opt.segment_span = 1 << 14;
    TupleSpan par = tuple_span(1000, opt);
    CHECK(par.first == big.first);
    CHECK(par.last == big.last);
}

TEST_CASE("admissibility checks") {
    AdmissibleTuple ok;
    ok.offsets = {0, 2};
    auto r = is_admissible(ok);
    CHECK(r.admissible);
    CHECK(!r.witness.has_value());

    AdmissibleTuple bad;
    bad.offsets = {0, 1};
    r = is_admissible(bad);
    CHECK(!r.admissible);
    CHECK(r.witness == 2);

    // covering all classes mod 3 while missing one mod 2 still fails
    AdmissibleTuple mod3;
    mod3.offsets = {1, 3, 5}; // residues mod 3: 1, 0, 2
    r = is_admissible(mod3);
    CHECK(!r.admissible);
    CHECK(r.witness == 3);

    AdmissibleTuple dup;
    dup.offsets = {3, 3};
    CHECK_THROWS(is_admissible(dup));
    AdmissibleTuple empty;
    CHECK_THROWS(is_admissible(empty));
}

TEST_CASE("prime tuples are admissible, with an independent residue oracle") {
    for (std::uint64_t k : {1ull, 2ull, 5ull, 37ull, 200ull, 1000ull}) {
        AdmissibleTuple t = admissible_tuple(k);
        auto r = is_admissible(t);
        CHECK(r.admissible);
        // oracle: direct residue sets for each prime p <= k
        for (std::uint64_t p = 2; p <= k; ++p) {
            if (!oracle::is_prime_td(p)) continue;
            std::set<std::uint64_t> classes;
            for (std::uint64_t off : t.offsets) classes.insert(off % p);
            CHECK(classes.size() < p);
        }
    }
    // threads agree with the sequential answer
    AdmissibleTuple t = admissible_tuple(1000);
    CHECK(is_admissible(t, 4).admissible == is_admissible(t, 1).admissible);
}

TEST_CASE("diameter") {
    AdmissibleTuple t = admissible_tuple(5);
    CHECK(diameter(t) == 12);
    CHECK(diameter(t) >= t.offsets.size() - 1); // distinct integers spread out
    AdmissibleTuple one = admissible_tuple(1);
    CHECK_THROWS(diameter(one));
}

TEST_CASE("sieve-functional lower bound") {
    CHECK(mk_lower(157'337) > 6.0);
    CHECK(mk_lower(157'337) == doctest::Approx(6.0019824).epsilon(1e-6));
    CHECK(mk_lower(157'629'323) > 12.0);
    CHECK_THROWS(mk_lower(599));
    CHECK_NOTHROW(mk_lower(600));
    // strictly increasing
    double prev = mk_lower(600);
    for (std::uint64_t k : {1000ull, 10'000ull, 157'337ull, 1'000'000'000ull}) {
        double v = mk_lower(k);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("tuple-size selectors") {
    CHECK(choose_k_formula(1) == 157'337);
    CHECK(choose_k_formula(2) == 253'897'474); // 1560 e^12 = 253897474.61
    CHECK(choose_k_formula(2) > choose_k_formula(1));
    CHECK(choose_k_formula(3) > choose_k_formula(2));
    CHECK_THROWS(choose_k_formula(0));
    CHECK_THROWS(choose_k_formula(6)); // beyond 64-bit

    // the threshold selector: smallest k whose bound clears the target
    std::uint64_t k6 = min_k_for_mk(6.0);
    CHECK(mk_lower(k6) > 6.0);
    CHECK(mk_lower(k6 - 1) <= 6.0);
    CHECK(k6 < 157'337); // the formula value is not minimal for m = 1
    // for the m = 2 target the documented tuple size is exactly minimal
    std::uint64_t k12 = min_k_for_mk(12.0);
    CHECK(k12 == 157'629'323);
    CHECK(mk_lower(k12 - 1) <= 12.0);
}

TEST_CASE("gap bound values") {
    CHECK(gap_bound(1) == doctest::Approx(3.9132593e6).epsilon(1e-7));
    CHECK(gap_bound(2) > gap_bound(1));
    CHECK(gap_bound(3) > gap_bound(2));
    // the m = 1 tuple diameter sits under the bound
    AdmissibleTuple t = admissible_tuple(choose_k_formula(1));
    CHECK(static_cast<double>(diameter(t)) <= gap_bound(1));
    CHECK(diameter(t) == 2'176'652);
}

TEST_CASE("constrained gap scan") {
    // unconstrained specialization: twin primes in [100, 200)
    FracWindow full(std::sqrt(2.0), 0.0, 1.0);
    GapScan twins = scan_constrained_gaps(100, full, 2);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> want{
        {101, 103}, {107, 109}, {137, 139}, {149, 151}, {179, 181}, {191, 193}, {197, 199}};
    CHECK(twins.pairs == want);
    CHECK(twins.boundary_count == 0);

    // constrained: against a brute-force oracle
    FracWindow w(0.5, 0.0, 0.5);
    GapScan got = scan_constrained_gaps(1000, w, 10);
    std::vector<std::uint64_t> seq;
    for (std::uint64_t n = 1000; n < 2000; ++n) {
        if (!oracle::is_prime_td(n)) continue;
        auto f = oracle::frac_pow_big(n, 0.5);
        if (abs(f - 0.5) < 1e-12) continue;
        if (f < 0.5) seq.push_back(n);
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> brute;
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i] - seq[i - 1] <= 10) brute.emplace_back(seq[i - 1], seq[i]);
    CHECK(got.pairs == brute);

    // consecutiveness: nothing constrained lies strictly between a pair
    for (auto [p, pn] : got.pairs) {
        for (std::uint64_t n = p + 1; n < pn; ++n) {
            if (!oracle::is_prime_td(n)) continue;
            CHECK(in_window(n, w) != Membership::In);
        }
    }

    // empty result when g is below the minimal gap
    GapScan none = scan_constrained_gaps(100, full, 2);
    bool has_non_twin = false;
    for (auto [p, pn] : none.pairs) has_non_twin |= (pn - p) > 2;
    CHECK(!has_non_twin);

    CHECK_THROWS(scan_constrained_gaps(100, full, 3)); // odd g
    CHECK_THROWS(scan_constrained_gaps(100, full, 0));
}
