#include <doctest.h>

#include <stdexcept>

#include "fuzzstat/schemes.hpp"

using namespace fuzzstat;

namespace {

const ValidationItem& item_named(const ValidationReport& rep, const std::string& check) {
    for (const ValidationItem& it : rep.items)
        if (it.check == check) return it;
    throw std::logic_error("missing validation item " + check);
}

} // namespace

TEST_CASE("weight accumulation over preset and parsed windows") {
    const WeightSequence unit = WeightSequence::unit();
    const WindowScheme stat = WindowScheme::statistical();

    const WindowAccumulation a = accumulate(unit, stat, 10);
    CHECK(a.window.lo == 1);
    CHECK(a.window.hi == 10);
    CHECK(a.total == 10.0);
    CHECK(a.total_pow(1.0) == 10.0);

    const WindowScheme doubling = parse_scheme("window:n,2n-1");
    const WindowAccumulation b = accumulate(unit, doubling, 7);
    CHECK(b.window.lo == 7);
    CHECK(b.window.hi == 13);
    CHECK(b.total == 7.0);

    // t_k = 2 + 1/k over [3, 5]: 6 + 1/3 + 1/4 + 1/5.
    const WeightSequence shifted("two_plus_inv", [](std::uint64_t k) {
        return 2.0 + 1.0 / static_cast<double>(k);
    }, 2.0);
    const WindowScheme fixed = parse_scheme("window:3,5");
    const double expected = (2.0 + 1.0 / 3.0) + (2.0 + 1.0 / 4.0) + (2.0 + 1.0 / 5.0);
    const WindowAccumulation c = accumulate(shifted, fixed, 1);
    CHECK(c.total == expected);
    CHECK(c.total == doctest::Approx(6.7833333333).epsilon(1e-9));
}

TEST_CASE("empty and oversized windows are rejected by accumulate") {
    const WeightSequence unit = WeightSequence::unit();
    const WindowScheme shrinking = parse_scheme("window:n,n-2");
    CHECK(shrinking.window(1).empty());
    CHECK_THROWS_AS(accumulate(unit, shrinking, 1), std::domain_error);
}

TEST_CASE("preset windows reproduce their defining rules") {
    const WindowScheme stat = WindowScheme::statistical();
    CHECK(stat.window(5).lo == 1);
    CHECK(stat.window(5).hi == 5);

    const WindowScheme lin = WindowScheme::lambda_linear();
    CHECK(lin.window(5).lo == 1);
    CHECK(lin.window(5).hi == 5);

    const WindowScheme sq = WindowScheme::lambda_sqrt();
    CHECK(sq.window(9).lo == 7);  // lambda(9) = 3
    CHECK(sq.window(9).hi == 9);
    CHECK(sq.window(100).lo == 91);
    CHECK(sq.window(1).lo == 1);
    CHECK(sq.window(1).hi == 1);

    const WindowScheme lac = WindowScheme::lacunary_pow2();
    CHECK(lac.window(3).lo == 5);  // (2^2, 2^3]
    CHECK(lac.window(3).hi == 8);
    CHECK(lac.window(1).lo == 2);
    CHECK(lac.window(1).hi == 2);

    // Endpoints stay exact far beyond double's integer range.
    const IndexWindow big = lac.window(100);
    CHECK(big.lo == (wide_uint{1} << 99) + 1);
    CHECK(big.hi == (wide_uint{1} << 100));
    CHECK(to_string(big.hi) == "1267650600228229401496703205376");
    CHECK_THROWS(lac.window(127));
}

TEST_CASE("lambda windows enforce admissibility on a prefix") {
    CHECK_THROWS_AS(WindowScheme::lambda_windows(
                        "bad", [](std::uint64_t n) { return n == 1 ? std::uint64_t{1} : n + 5; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(WindowScheme::lambda_windows("bad0", [](std::uint64_t) { return std::uint64_t{0}; }),
                    std::invalid_argument);
}

TEST_CASE("validation certifies the admissible presets and reports surrogates") {
    const WeightSequence unit = WeightSequence::unit();
    const ValidationReport rep = validate(unit, WindowScheme::statistical(), 10000);
    CHECK(rep.passed());
    CHECK(rep.checked_horizon == 10000);
    CHECK_FALSE(rep.clamped);
    CHECK(item_named(rep, "weights.tail_lower_bound").surrogate);
    CHECK(item_named(rep, "scheme.gap_growth").surrogate);
    CHECK(item_named(rep, "scheme.lower_edge_nondecreasing").passed);

    const nlohmann::ordered_json j = rep.to_json();
    CHECK(j["passed"] == true);
    CHECK(j["horizon"] == 10000);
    CHECK(j["items"].is_array());
}

TEST_CASE("validation flags a false liminf declaration with its first witness") {
    const ValidationReport rep =
        validate(WeightSequence::reciprocal(), WindowScheme::statistical(), 1000);
    CHECK_FALSE(rep.passed());
    const ValidationItem& it = item_named(rep, "weights.tail_lower_bound");
    CHECK_FALSE(it.passed);
    CHECK(it.surrogate);
    REQUIRE(it.witness.has_value());
    CHECK(*it.witness == 11);  // 1/11 < the declared 0.1
}

TEST_CASE("validation flags bounded-gap schemes") {
    const ValidationReport rep =
        validate(WeightSequence::unit(), parse_scheme("window:n,n+3"), 1000);
    CHECK_FALSE(rep.passed());
    CHECK_FALSE(item_named(rep, "scheme.gap_growth").passed);
}

TEST_CASE("lacunary validation clamps to the representable prefix and still passes") {
    const ValidationReport rep =
        validate(WeightSequence::unit(), WindowScheme::lacunary_pow2(), 10000);
    CHECK(rep.passed());
    CHECK(rep.clamped);
    CHECK(rep.checked_horizon < 10000);
}

TEST_CASE("spec strings parse into schemes and weights") {
    const WindowScheme s = parse_scheme("window:n,2n-1");
    CHECK(s.window(7).lo == 7);
    CHECK(s.window(7).hi == 13);
    CHECK(s.has_real_rules());
    CHECK(s.lo_value(7) == 7.0);
    CHECK(s.hi_value(7) == 13.0);

    CHECK(parse_scheme("preset:statistical").window(5).hi == 5);
    CHECK(parse_scheme("preset:lambda:sqrt").window(9).lo == 7);
    CHECK(parse_scheme("preset:lacunary:pow2").window(3).lo == 5);

    CHECK(parse_weights("weights:unit")(123) == 1.0);
    CHECK(parse_weights("weights:const:2.5")(7) == 2.5);
    CHECK(parse_weights("weights:inv_k")(4) == 0.25);

    CHECK_THROWS_AS(parse_scheme("window:2x-1"), SpecParseError);
    CHECK_THROWS_AS(parse_scheme("preset:bogus"), SpecParseError);
    CHECK_THROWS_AS(parse_scheme("nonsense"), SpecParseError);
    CHECK_THROWS_AS(parse_weights("weights:nope"), SpecParseError);
    CHECK_THROWS_AS(parse_weights("unit"), SpecParseError);

    try {
        parse_scheme("window:2x-1");
        FAIL("expected SpecParseError");
    } catch (const SpecParseError& e) {
        CHECK(e.token == "2x-1");
    }
}

TEST_CASE("integer square root is exact at boundaries") {
    CHECK(integer_sqrt(0) == 0);
    CHECK(integer_sqrt(1) == 1);
    CHECK(integer_sqrt(3) == 1);
    CHECK(integer_sqrt(4) == 2);
    CHECK(integer_sqrt(10000) == 100);
    for (std::uint64_t k = 1; k <= 2000; ++k) {
        CHECK(integer_sqrt(k * k) == k);
        CHECK(integer_sqrt(k * k - 1) == k - 1);
    }
    const std::uint64_t big = std::uint64_t{1} << 31;
    CHECK(integer_sqrt(big * big) == big);
    CHECK(integer_sqrt(big * big - 1) == big - 1);
    CHECK(integer_sqrt(std::numeric_limits<std::uint64_t>::max()) == 4294967295ULL);
}

TEST_CASE("weight constructors reject degenerate declarations") {
    CHECK_THROWS_AS(WeightSequence::constant(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightSequence("z", [](std::uint64_t) { return 0.0; }, 0.0),
                    std::invalid_argument);
}
