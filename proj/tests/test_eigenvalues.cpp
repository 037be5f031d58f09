// Topological eigenvalue tests: phase discrepancy over matching pairs,
// verdicts over radius schedules, and the group structure of passers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "aperiodic/eigenvalues.hpp"
#include "aperiodic/errors.hpp"
#include "aperiodic/pointset.hpp"
#include "aperiodic/presets.hpp"
#include "aperiodic/substitution.hpp"

using namespace aperiodic;

namespace {

constexpr double kPi = std::numbers::pi;
const double kTau = (1.0 + std::sqrt(5.0)) / 2.0;

DecoratedPointSet preset_point_set(const std::string& name, int order) {
    const auto sub = preset_substitution(name);
    if (sub.mirror) return from_word(two_sided_word(sub, order), sub, 0);
    const auto w = iterate(sub, order);
    return from_word(w, sub, w.size() / 2);
}

}  // namespace

TEST_CASE("discrepancy basics") {
    const auto ps = preset_point_set("thue-morse", 14);
    const auto pairs = matching_pairs(ps, 4.0, 256);
    REQUIRE(!pairs.empty());

    SUBCASE("k = 0 gives zero discrepancy") {
        CHECK(discrepancy_over_pairs(pairs, 0.0) == 0.0);
    }
    SUBCASE("symmetry under k -> -k is exact") {
        for (double k : {0.3, 1.1, 2.0 * kPi / 3.0, 3.0}) {
            CHECK(discrepancy_over_pairs(pairs, k) == discrepancy_over_pairs(pairs, -k));
        }
    }
    SUBCASE("subadditivity over a fixed pair sample") {
        // |e^{i(a+b)} - 1| <= |e^{ia} - 1| + |e^{ib} - 1| pointwise, and the
        // max of a sum is at most the sum of maxes
        for (double k1 : {0.2, 0.9, 2.2}) {
            for (double k2 : {0.5, 1.7}) {
                const double lhs = discrepancy_over_pairs(pairs, k1 + k2);
                const double rhs = discrepancy_over_pairs(pairs, k1) +
                                   discrepancy_over_pairs(pairs, k2);
                CHECK(lhs <= rhs + 1e-15);
            }
        }
    }
    SUBCASE("discrepancy is bounded by 2") {
        for (double k = 0.1; k < 6.3; k += 0.37)
            CHECK(discrepancy_over_pairs(pairs, k) <= 2.0);
    }
}

TEST_CASE("periodic chain: reciprocal lattice passes, other wave numbers fail") {
    const auto ps = preset_point_set("periodic:3", 10);
    for (double m : {1.0, 2.0, 3.0}) {
        const auto s = eigenvalue_discrepancy(ps, 2.0 * kPi * m / 3.0, 8.0, 512);
        REQUIRE(s.pairs_used > 0);
        CHECK(s.discrepancy < 1e-9);  // separations are exact multiples of 3
    }
    SUBCASE("quarter of the reciprocal vector is rejected") {
        const auto r = eigenvalue_verdict(ps, kPi / 6.0);
        CHECK(r.verdict == "rejected");
    }
}

TEST_CASE("doubling chain: dyadic wave numbers pass, thirds are rejected") {
    const auto ps = preset_point_set("thue-morse", 17);

    SUBCASE("k = pi is topological with tiny discrepancy") {
        const auto report = eigenvalue_verdict(ps, kPi);
        CHECK(report.verdict == "topological");
        REQUIRE(report.discrepancies.size() == 5);
        CHECK(report.discrepancies.back() < 1e-3);
        CHECK(report.radii == std::vector<double>{2, 4, 8, 16, 32});
        for (auto n : report.pairs_used) CHECK(n > 0);
    }
    SUBCASE("k = 2 pi / 3 is rejected with the full sqrt(3) floor") {
        // separations are even, so e^{ik(x-y)} cycles through third roots of
        // unity away from 1; the discrepancy floor is |e^{2 pi i/3} - 1| = sqrt 3
        const auto report = eigenvalue_verdict(ps, 2.0 * kPi / 3.0);
        CHECK(report.verdict == "rejected");
        for (double d : report.discrepancies) CHECK(d >= std::sqrt(3.0) - 1e-9);
    }
    SUBCASE("small pair budgets can miss the floor, larger ones restore it") {
        const auto d64 = eigenvalue_discrepancy(ps, 2.0 * kPi / 3.0, 32.0, 64);
        const auto d512 = eigenvalue_discrepancy(ps, 2.0 * kPi / 3.0, 32.0, 512);
        const auto d4096 = eigenvalue_discrepancy(ps, 2.0 * kPi / 3.0, 32.0, 4096);
        CHECK(d64.discrepancy <= d512.discrepancy + 1e-12);
        CHECK(d512.discrepancy <= d4096.discrepancy + 1e-12);
        CHECK(d4096.discrepancy == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    }
}

TEST_CASE("golden chain: discrepancies decay like 1/R") {
    const auto fib = preset_substitution("fibonacci");
    const auto w = iterate(fib, 24);
    const auto ps = from_word(w, fib, w.size() / 2);
    const double k = 2.0 * kPi * (kTau - 1.0);

    SUBCASE("default radii leave 2 pi / tau undecided") {
        // unlike the dyadic case there is no exact cancellation; D ~ 1/R and
        // radius 32 is nowhere near the 1e-3 pass level
        const auto report = eigenvalue_verdict(ps, k);
        CHECK(report.verdict == "undecided");
        CHECK(report.discrepancies.front() > report.discrepancies.back());
        CHECK(report.discrepancies.back() > 1e-3);
    }
    SUBCASE("golden-ratio radius schedule certifies it") {
        EigenvalueTestOptions opts;
        opts.radii = {55, 233, 987, 4181, 17711};
        opts.tol = 1e-2;
        const auto report = eigenvalue_verdict(ps, k, opts);
        CHECK(report.verdict == "topological");
    }
}

TEST_CASE("group closure of passers") {
    const auto ps = preset_point_set("thue-morse", 14);
    CHECK(group_closure_check(ps, kPi, kPi, 16.0, 1e-3));
    CHECK(group_closure_check(ps, kPi / 2.0, kPi / 2.0, 16.0, 1e-3));
    CHECK(group_closure_check(ps, kPi, 0.0, 16.0, 1e-3));
    SUBCASE("the precondition is enforced") {
        CHECK_THROWS_AS(group_closure_check(ps, 2.0 * kPi / 3.0, kPi, 16.0, 1e-3),
                        InputError);
    }
}

TEST_CASE("empty pair samples stay undecided") {
    // a word whose radius-2 patches are pairwise distinct has no matching
    // pairs at all, so no verdict can be reached
    Substitution s;
    s.alphabet = {"a", "b", "c", "d"};
    s.rules = {{0, 1}, {2, 3}, {0, 2}, {1, 3}};
    s.lengths = {1.0, 1.0, 1.0, 1.0};
    Word w;
    w.letters = {0, 1, 2, 3, 0, 1, 2, 3, 1, 0, 3, 2};
    const auto ps = from_word(w, s, 6);
    CHECK(matching_pairs(ps, 2.0, 64).empty());
    EigenvalueTestOptions opts;
    opts.radii = {1.0, 1.5, 2.0};
    opts.max_pairs = 64;
    const auto report = eigenvalue_verdict(ps, 1.0, opts);
    CHECK(report.verdict == "undecided");
    CHECK(report.pairs_used.back() == 0);
    CHECK(report.discrepancies.back() == 0.0);
}

TEST_CASE("option validation") {
    const auto ps = preset_point_set("thue-morse", 10);
    EigenvalueTestOptions opts;
    SUBCASE("at least three radii") {
        opts.radii = {4.0, 8.0};
        CHECK_THROWS_WITH_AS(eigenvalue_verdict(ps, 1.0, opts),
                             "eigenvalue_verdict: at least 3 radii required",
                             InputError);
    }
    SUBCASE("strictly increasing radii") {
        opts.radii = {4.0, 4.0, 8.0};
        CHECK_THROWS_WITH_AS(eigenvalue_verdict(ps, 1.0, opts),
                             "eigenvalue_verdict: radius schedule must be strictly increasing",
                             InputError);
    }
    SUBCASE("largest radius must fit the window") {
        opts.radii = {128.0, 256.0, 2048.0};
        CHECK_THROWS_AS(eigenvalue_verdict(ps, 1.0, opts), WindowError);
    }
}

TEST_CASE("periodic:4 verdict grid") {
    // exactly the quarter multiples of 2 pi pass; everything else on a
    // coarse k-grid is rejected
    const auto ps = preset_point_set("periodic:4", 10);
    for (int m = 1; m <= 4; ++m) {
        const auto r = eigenvalue_verdict(ps, kPi * m / 2.0);
        CAPTURE(m);
        CHECK(r.verdict == "topological");
        CHECK(r.discrepancies.back() < 1e-9);
    }
    for (double k : {0.4, 1.0, 2.0, 2.8, 4.0}) {
        const auto r = eigenvalue_verdict(ps, k);
        CAPTURE(k);
        CHECK(r.verdict == "rejected");
    }
}

TEST_CASE("report serialization") {
    const auto ps = preset_point_set("thue-morse", 13);
    const auto report = eigenvalue_verdict(ps, kPi);
    const auto json = eigenvalue_report_to_json(report);
    CHECK(json.find("\"verdict\": \"topological\"") != std::string::npos);
    CHECK(json.find("\"radii\"") != std::string::npos);
    CHECK(json.find("\"pairs_used\"") != std::string::npos);
    CHECK(json.back() == '\n');
}
