#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "fuzzstat/corpus.hpp"
#include "fuzzstat/schemes.hpp"

using namespace fuzzstat;

namespace {

const AlphaGrid& alpha() {
    static const AlphaGrid g = AlphaGrid::uniform(17);
    return g;
}

} // namespace

TEST_CASE("example names parse with hyphen and alias forms") {
    CHECK(example_from_string("moving-hump") == ExampleName::moving_hump);
    CHECK(example_from_string("moving_hump") == ExampleName::moving_hump);
    CHECK(example_from_string("squares") == ExampleName::squares_indicator);
    CHECK(example_from_string("squares-indicator") == ExampleName::squares_indicator);
    CHECK(example_from_string("exp-decay") == ExampleName::exp_decay);
    CHECK(example_from_string("power-xn") == ExampleName::power_xn);
    CHECK(example_from_string("random-crisp") == ExampleName::random_crisp);
    CHECK(example_from_string("random-triangular") == ExampleName::random_triangular);
    CHECK_THROWS_AS(example_from_string("bogus"), SpecParseError);
    for (ExampleName n : {ExampleName::squares_indicator, ExampleName::exp_decay,
                          ExampleName::moving_hump, ExampleName::power_xn,
                          ExampleName::random_crisp, ExampleName::random_triangular})
        CHECK(example_from_string(to_string(n)) == n);
}

TEST_CASE("squares indicator is the crisp perfect-square characteristic") {
    const FuzzyFunctionSequence f = instantiate(default_spec(ExampleName::squares_indicator), alpha());
    CHECK(f.constant_in_x());
    CHECK(f.member_value(9, 0.3) == 1.0);
    CHECK(f.member_value(10, 0.3) == 0.0);
    CHECK(f.member_value(1, 0.0) == 1.0);
    CHECK(f.member_value(2, 0.0) == 0.0);
    CHECK(f.limit_value(0.5) == 0.0);
    CHECK(is_perfect_square(144));
    CHECK_FALSE(is_perfect_square(143));
    CHECK(is_perfect_square(0));

    // Any domain is allowed for the x-independent family.
    ExampleSpec wide = default_spec(ExampleName::squares_indicator);
    wide.domain_lo = -3.0;
    wide.domain_hi = 7.0;
    CHECK(instantiate(wide, alpha()).member_value(4, -2.5) == 1.0);
}

TEST_CASE("exp_decay is pinned to [0,1] and flags the origin") {
    const FuzzyFunctionSequence f = instantiate(default_spec(ExampleName::exp_decay), alpha());
    CHECK(f.member_value(3, 0.5) == std::exp(-1.5));
    CHECK(f.member_value(5, 0.0) == 1.0);
    CHECK(f.limit_value(0.0) == 0.0);  // candidate limit, not the pointwise one
    REQUIRE(f.flagged().size() == 1);
    CHECK(f.flagged()[0].x == 0.0);
    CHECK_FALSE(f.flagged()[0].note.empty());

    ExampleSpec bad = default_spec(ExampleName::exp_decay);
    bad.domain_hi = 2.0;
    CHECK_THROWS_AS(instantiate(bad, alpha()), std::invalid_argument);
}

TEST_CASE("moving hump rides its arch with exact membership tests") {
    const FuzzyFunctionSequence f = instantiate(default_spec(ExampleName::moving_hump), alpha());

    // x = 0.25 sits on the k = 3 arch [1/5, 1/4]; u = kx = 0.75.
    CHECK(f.member_value(3, 0.25) == 0.48);  // 0.75 / (1 + 0.5625) = 12/25
    CHECK(f.member_value(3, 0.15) == 0.0);   // off arch
    CHECK(f.member_value(1, 0.4) == doctest::Approx(0.4 / 1.16));
    CHECK(f.limit_value(0.5) == 0.0);

    CHECK(hump_arch_contains(3, 0.25));
    CHECK(hump_arch_contains(3, 0.2));
    CHECK_FALSE(hump_arch_contains(3, 0.26));
    CHECK_FALSE(hump_arch_contains(3, 0.19));
    CHECK_FALSE(hump_arch_contains(3, 0.0));

    CHECK(hump_on_arch_boundary(0.25));
    CHECK(hump_on_arch_boundary(0.125));
    CHECK(hump_on_arch_boundary(1.0));
    CHECK_FALSE(hump_on_arch_boundary(0.3));
    CHECK_FALSE(hump_on_arch_boundary(0.0));

    // Late arches fall between fixed grid points; the hint channel covers them.
    const std::vector<double> hints = f.sup_hints(1000);
    bool covered = false;
    for (double h : hints) covered = covered || hump_arch_contains(1000, h);
    CHECK(covered);
}

TEST_CASE("power family keeps members continuous and flags the jump point") {
    const FuzzyFunctionSequence f = instantiate(default_spec(ExampleName::power_xn), alpha());
    CHECK(f.member_value(2, 1.0) == 1.0);
    CHECK(f.member_value(2, 0.5) == 0.25);
    CHECK(f.limit_value(1.0) == 1.0);
    CHECK(f.limit_value(0.999) == 0.0);
    REQUIRE(f.flagged().size() == 1);
    CHECK(f.flagged()[0].x == 1.0);
}

TEST_CASE("random families are seed-deterministic lattice draws") {
    const FuzzyFunctionSequence a = instantiate(default_spec(ExampleName::random_crisp, 7), alpha());
    const FuzzyFunctionSequence b = instantiate(default_spec(ExampleName::random_crisp, 7), alpha());
    const FuzzyFunctionSequence c = instantiate(default_spec(ExampleName::random_crisp, 8), alpha());

    bool any_diff = false;
    for (std::uint64_t k = 1; k <= 20; ++k)
        for (double x : {0.0, 0.25, 0.5, 1.0}) {
            const double va = a.member_value(k, x);
            CHECK(va == b.member_value(k, x));
            CHECK(va >= -8.0);
            CHECK(va <= 8.0);
            CHECK(va * 1024.0 == std::floor(va * 1024.0));  // lattice step 2^-10
            if (va != c.member_value(k, x)) any_diff = true;
        }
    CHECK(any_diff);
    CHECK(a.params()["seed"] == 7);

    const FuzzyFunctionSequence t = instantiate(default_spec(ExampleName::random_triangular, 7), alpha());
    bool any_fuzzy = false;
    for (std::uint64_t k = 1; k <= 20; ++k) {
        const FuzzyNumber m = t.member(k, 0.5);
        if (!m.is_crisp()) any_fuzzy = true;
        CHECK(m.lower(0) <= m.upper(0));
    }
    CHECK(any_fuzzy);
    CHECK(t.member(3, 0.5) == instantiate(default_spec(ExampleName::random_triangular, 7), alpha())
                                   .member(3, 0.5));
}

TEST_CASE("oracles recompute the manifest quantities by brute force") {
    const ExampleSpec squares = default_spec(ExampleName::squares_indicator);
    CHECK(oracle_value(squares, OracleQuantity::square_count, 10000) == 100.0);
    CHECK(oracle_value(squares, OracleQuantity::square_count, 100) == 10.0);
    CHECK(oracle_value(squares, OracleQuantity::square_count, 99) == 9.0);
    CHECK(oracle_value(squares, OracleQuantity::square_count, 1) == 1.0);
    CHECK(oracle_value(squares, OracleQuantity::square_count, 0) == 0.0);

    const ExampleSpec hump = default_spec(ExampleName::moving_hump);
    for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{5}, std::uint64_t{50}})
        CHECK(oracle_value(hump, OracleQuantity::hump_formula_sup, k) ==
              doctest::Approx(0.5).epsilon(1e-9));
    // Arch-restricted sup at k = 1: u ranges over [1/3, 1/2], max at u = 1/2.
    CHECK(oracle_value(hump, OracleQuantity::hump_arch_sup, 1) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(oracle_value(hump, OracleQuantity::hump_arch_sup, 10) > 0.45);

    const ExampleSpec decay = default_spec(ExampleName::exp_decay);
    const double corner10 = oracle_value(decay, OracleQuantity::exp_corner_min, 10);
    CHECK(corner10 == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(corner10 > 1.0 / 3.0);

    CHECK_THROWS_AS(oracle_value(squares, OracleQuantity::hump_formula_sup, 1),
                    std::invalid_argument);
}

TEST_CASE("the corpus manifest names every family once with its expectations") {
    const nlohmann::ordered_json manifest = corpus_manifest();
    REQUIRE(manifest.is_array());
    REQUIRE(manifest.size() == 6);
    std::set<std::string> names;
    for (const auto& entry : manifest) {
        REQUIRE(entry.contains("name"));
        REQUIRE(entry.contains("domain"));
        REQUIRE(entry.contains("expected"));
        names.insert(entry["name"].get<std::string>());
    }
    CHECK(names.size() == 6);
    CHECK(manifest[0]["name"] == "squares_indicator");
    CHECK(manifest[0]["expected"]["count_at_T_10000"] == 100);
}
