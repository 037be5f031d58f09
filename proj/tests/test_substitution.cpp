// Substitution rules: iteration, two-sided completion, abelianization,
// Perron-Frobenius data, Pisot check, and patch frequencies.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "aperiodic/errors.hpp"
#include "aperiodic/presets.hpp"
#include "aperiodic/substitution.hpp"
#include "oracles.hpp"

using namespace aperiodic;

namespace {

const double kTau = (1.0 + std::sqrt(5.0)) / 2.0;

std::string render(const Substitution& sub, const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) out += ' ';
        out += sub.alphabet[w.letters[i]];
    }
    return out;
}

// counts[a] = occurrences of letter a in the word
std::vector<std::int64_t> letter_counts(const Substitution& sub, const Word& w) {
    std::vector<std::int64_t> counts(sub.alphabet.size(), 0);
    for (const auto id : w.letters) ++counts[id];
    return counts;
}

std::vector<std::vector<std::int64_t>> mat_mul(const std::vector<std::vector<std::int64_t>>& x,
                                               const std::vector<std::vector<std::int64_t>>& y) {
    const std::size_t n = x.size();
    std::vector<std::vector<std::int64_t>> out(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) out[i][j] += x[i][k] * y[k][j];
    return out;
}

}  // namespace

TEST_CASE("json round trip and validation") {
    const std::string doc = R"({"alphabet": ["1","1b"],
        "rules": {"1": ["1","1b"], "1b": ["1b","1"]},
        "lengths": {"1": 1.0, "1b": 1.0},
        "seed": "1", "mirror": true})";
    const auto sub = substitution_from_json(doc);
    CHECK(sub.alphabet == std::vector<std::string>{"1", "1b"});
    CHECK(sub.rules == std::vector<std::vector<std::uint8_t>>{{0, 1}, {1, 0}});
    CHECK(sub.lengths == std::vector<double>{1.0, 1.0});
    CHECK(sub.seed == 0);
    CHECK(sub.mirror);

    const auto again = substitution_from_json(substitution_to_json(sub));
    CHECK(again.alphabet == sub.alphabet);
    CHECK(again.rules == sub.rules);
    CHECK(again.lengths == sub.lengths);
    CHECK(again.seed == sub.seed);
    CHECK(again.mirror == sub.mirror);

    SUBCASE("unknown letter in a rule") {
        CHECK_THROWS_AS(substitution_from_json(
                            R"({"alphabet":["a","b"],
                                "rules":{"a":["a","x"],"b":["a"]},
                                "lengths":{"a":1.0,"b":1.0},"seed":"a"})"),
                        InputError);
    }
    SUBCASE("nonpositive length") {
        CHECK_THROWS_AS(substitution_from_json(
                            R"({"alphabet":["a"],
                                "rules":{"a":["a","a"]},
                                "lengths":{"a":0.0},"seed":"a"})"),
                        InputError);
    }
    SUBCASE("letter lookup") {
        CHECK(sub.letter("1b") == 1);
        CHECK_THROWS_AS(sub.letter("2"), InputError);
    }
    SUBCASE("structural validation") {
        Substitution broken = sub;
        broken.rules[0].clear();
        CHECK_THROWS_AS(broken.validate(), InputError);
    }
}

TEST_CASE("iteration of the doubling rule and the golden rule") {
    const auto tm = preset_substitution("thue-morse");
    CHECK(render(tm, iterate(tm, 0)) == "1");
    CHECK(render(tm, iterate(tm, 2)) == "1 1b 1b 1");
    CHECK(render(tm, iterate(tm, 3)) == "1 1b 1b 1 1b 1 1 1b");
    CHECK(render(tm, iterate_letter(tm, 1, 2)) == "1b 1 1 1b");

    const auto fib = preset_substitution("fibonacci");
    CHECK(render(fib, iterate(fib, 3)) == "a b a a b");
    CHECK(iterate(fib, 10).size() == 144);  // Fibonacci number F_12

    SUBCASE("prefix stability when the seed rule starts with the seed") {
        for (const char* name : {"thue-morse", "fibonacci", "period-doubling"}) {
            const auto sub = preset_substitution(name);
            const auto w6 = iterate(sub, 6);
            const auto w7 = iterate(sub, 7);
            REQUIRE(w6.size() <= w7.size());
            for (std::int64_t i = 0; i < w6.size(); ++i)
                CHECK(w6.letters[i] == w7.letters[i]);
        }
    }
}

TEST_CASE("two-sided words mirror the right half") {
    const auto tm = preset_substitution("thue-morse");
    const auto w = two_sided_word(tm, 6);
    CHECK(w.first_index == -64);
    CHECK(w.size() == 128);
    for (std::int64_t m = 1; m <= 64; ++m) CHECK(w.at(-m) == w.at(m - 1));
    // the right half is the one-sided iterate
    const auto right = iterate(tm, 6);
    for (std::int64_t i = 0; i < 64; ++i) CHECK(w.at(i) == right.letters[i]);

    SUBCASE("rules without mirror completion are rejected") {
        CHECK_THROWS_AS(two_sided_word(preset_substitution("fibonacci"), 3), InputError);
    }
}

TEST_CASE("abelianization matrix and exact count identities") {
    const auto tm = preset_substitution("thue-morse");
    const auto fib = preset_substitution("fibonacci");
    const auto m_tm = substitution_matrix(tm);
    const auto m_fib = substitution_matrix(fib);
    CHECK(m_tm.entries == std::vector<std::vector<std::int64_t>>{{1, 1}, {1, 1}});
    CHECK(m_fib.entries == std::vector<std::vector<std::int64_t>>{{1, 1}, {1, 0}});

    for (const auto* sub : {&tm, &fib}) {
        const auto m = substitution_matrix(*sub);
        // counts in iterate(n) equal M^n applied to the seed unit vector
        auto power = m.entries;
        for (int n = 1; n <= 12; ++n) {
            const auto counts = letter_counts(*sub, iterate(*sub, n));
            for (std::size_t a = 0; a < counts.size(); ++a)
                CHECK(counts[a] == power[a][sub->seed]);
            power = mat_mul(power, m.entries);
        }
        // |iterate(n+1)| equals the rule-length weighted composition
        for (int n = 0; n <= 12; ++n) {
            const auto counts = letter_counts(*sub, iterate(*sub, n));
            std::int64_t predicted = 0;
            for (std::size_t a = 0; a < counts.size(); ++a)
                predicted += counts[a] * static_cast<std::int64_t>(sub->rules[a].size());
            CHECK(iterate(*sub, n + 1).size() == predicted);
        }
    }
}

TEST_CASE("primitivity, Perron-Frobenius data, and the Pisot property") {
    const auto tm = preset_substitution("thue-morse");
    const auto fib = preset_substitution("fibonacci");
    CHECK(is_primitive(substitution_matrix(tm)));
    CHECK(is_primitive(substitution_matrix(fib)));

    const auto pf_tm = pf_data(substitution_matrix(tm));
    CHECK(pf_tm.lambda == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pf_tm.frequencies[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pf_tm.frequencies[1] == doctest::Approx(0.5).epsilon(1e-12));

    const auto pf_fib = pf_data(substitution_matrix(fib));
    CHECK(pf_fib.lambda == doctest::Approx(kTau).epsilon(1e-12));
    CHECK(pf_fib.frequencies[0] == doctest::Approx(kTau - 1.0).epsilon(1e-12));
    CHECK(pf_fib.frequencies[0] + pf_fib.frequencies[1] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(is_pisot(substitution_matrix(tm)));   // roots {2, 0}
    CHECK(is_pisot(substitution_matrix(fib)));  // roots {tau, -1/tau}

    SUBCASE("a rule with a large second root is not Pisot") {
        Substitution s;  // a -> abbb, b -> a: roots of x^2 - x - 3
        s.alphabet = {"a", "b"};
        s.rules = {{0, 1, 1, 1}, {0}};
        s.lengths = {1.0, 1.0};
        CHECK_FALSE(is_pisot(substitution_matrix(s)));
    }
    SUBCASE("non-primitive matrices are rejected with the failing power named") {
        Substitution s;  // two decoupled letters
        s.alphabet = {"a", "b"};
        s.rules = {{0, 0}, {1, 1}};
        s.lengths = {1.0, 1.0};
        CHECK_FALSE(is_primitive(substitution_matrix(s)));
        CHECK_THROWS_WITH_AS(pf_data(substitution_matrix(s)),
                             doctest::Contains("not primitive"), InputError);
    }
    SUBCASE("alphabets above the dense-solve limit are rejected") {
        CHECK_THROWS_AS(is_pisot(substitution_matrix(preset_substitution("periodic:9"))),
                        UnsupportedError);
    }
}

TEST_CASE("patch frequencies of single letters") {
    const auto tm = preset_substitution("thue-morse");
    const auto est = patch_frequency(tm, std::vector<std::string>{"1"});
    CHECK(est.value == 0.5);  // every iterate is exactly balanced
    CHECK(est.achieved == 0.0);

    // the golden rule letter frequency matches the PF eigenvector
    const auto fib = preset_substitution("fibonacci");
    const auto est_a = patch_frequency(fib, std::vector<std::string>{"a"});
    const auto pf = pf_data(substitution_matrix(fib));
    CHECK(est_a.value == doctest::Approx(pf.frequencies[0]).epsilon(1e-6));
}

TEST_CASE("pair frequency: brute-force counting oracle at consecutive orders") {
    const auto tm = preset_substitution("thue-morse");

    SUBCASE("pinned defaults throw with both estimates carried") {
        // counts of "1 1b" never double exactly, so the 1e-8 default cannot
        // be met by order 26; the error carries the two last estimates
        try {
            patch_frequency(tm, std::vector<std::string>{"1", "1b"});
            FAIL("expected ConvergenceError");
        } catch (const ConvergenceError& e) {
            CHECK(std::abs(e.previous_estimate - 1.0 / 3.0) < 1e-6);
            CHECK(std::abs(e.last_estimate - 1.0 / 3.0) < 1e-6);
        }
    }

    SUBCASE("a practical tolerance converges and matches direct counting") {
        FrequencyOptions opts;
        opts.rel_tol = 1e-6;
        const auto est = patch_frequency(tm, std::vector<std::string>{"1", "1b"}, opts);
        const auto s20 = iterate(tm, 20);
        const auto s21 = iterate(tm, 21);
        const std::vector<std::uint8_t> pattern{0, 1};
        const double f20 = static_cast<double>(oracles::count_occurrences(s20.letters, pattern)) /
                           static_cast<double>(s20.size());
        const double f21 = static_cast<double>(oracles::count_occurrences(s21.letters, pattern)) /
                           static_cast<double>(s21.size());
        CHECK(std::abs(f20 - f21) < 1e-6);  // the two counts already agree
        CHECK(std::abs(est.value - f21) < 1e-6);
        CHECK(std::abs(est.value - 1.0 / 3.0) < 1e-6);
    }
}

TEST_CASE("absent words get frequency zero from the factor-set certificate") {
    const auto tm = preset_substitution("thue-morse");
    // the sequence is cube-free, so three equal letters never occur
    for (const std::uint8_t letter : {0, 1}) {
        const std::vector<std::uint8_t> cube{letter, letter, letter};
        const auto est = patch_frequency(tm, cube);
        CHECK(est.value == 0.0);
        CHECK(est.achieved == 0.0);
    }
}

TEST_CASE("fixed-length frequencies sum to one") {
    const auto tm = preset_substitution("thue-morse");
    // presence is decided by a direct factor scan at an order where the
    // factor sets of these lengths have stabilized
    const auto s11 = iterate(tm, 11).letters;
    const auto s12 = iterate(tm, 12).letters;
    for (std::size_t L = 1; L <= 4; ++L)
        REQUIRE(oracles::factor_set(s11, L) == oracles::factor_set(s12, L));

    // absent words use the default options (the absence certificate fires
    // early); present words use a high min_order so that every count stops
    // at the same comparison and the estimates telescope
    FrequencyOptions present_opts;
    present_opts.rel_tol = 1e-4;
    present_opts.min_order = 22;

    const std::size_t expected_present[] = {2, 4, 6, 10};  // factor complexity
    for (std::size_t L = 1; L <= 4; ++L) {
        const auto factors = oracles::factor_set(s12, L);
        CHECK(factors.size() == expected_present[L - 1]);
        double sum = 0.0;
        for (unsigned mask = 0; mask < (1u << L); ++mask) {
            std::vector<std::uint8_t> word;
            for (std::size_t j = 0; j < L; ++j) word.push_back((mask >> j) & 1u);
            const bool present = factors.count(word) > 0;
            const auto est = present ? patch_frequency(tm, word, present_opts)
                                     : patch_frequency(tm, word);
            if (!present) CHECK(est.value == 0.0);
            sum += est.value;
        }
        CHECK(std::abs(sum - 1.0) < 1e-6);
    }
}

TEST_CASE("frequency input validation") {
    const auto tm = preset_substitution("thue-morse");
    CHECK_THROWS_AS(patch_frequency(tm, std::vector<std::uint8_t>{}), InputError);
    CHECK_THROWS_AS(patch_frequency(tm, std::vector<std::uint8_t>{7}), InputError);
    FrequencyOptions bad;
    bad.min_order = 10;
    bad.max_order = 5;
    CHECK_THROWS_AS(patch_frequency(tm, std::vector<std::uint8_t>{0}, bad), InputError);
}

TEST_CASE("common prefix diagnostic") {
    CHECK_FALSE(common_prefix_ok(preset_substitution("thue-morse")));  // 1 vs 1b
    CHECK(common_prefix_ok(preset_substitution("fibonacci")));         // a, a
    CHECK(common_prefix_ok(preset_substitution("period-doubling")));
}

TEST_CASE("preset catalogue") {
    CHECK(is_preset_name("thue-morse"));
    CHECK(is_preset_name("periodic:5"));
    CHECK_FALSE(is_preset_name("penrose"));
    CHECK_THROWS_AS(preset_substitution("penrose"), InputError);
    CHECK_THROWS_AS(preset_substitution("periodic:0"), InputError);
    const auto names = preset_names();
    CHECK(std::find(names.begin(), names.end(), "fibonacci") != names.end());
}
