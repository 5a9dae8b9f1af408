#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pidlab/distribution.hpp"
#include "pidlab/fixtures.hpp"
#include "pidlab/rng.hpp"
#include "pidlab/serialize.hpp"

using namespace pidlab;

namespace {

Variable bit(const std::string& name) { return {name, Alphabet(2)}; }

JointDistribution table_fixture() { return make(FixtureId::reduced_or).dist; }

}  // namespace

TEST_CASE("build accepts a fair coin") {
    const auto d = build({bit("X")}, {{{0}, 0.5}, {{1}, 0.5}});
    CHECK(d.cell_count() == 2);
    CHECK(d.cell(0) == 0.5);
}

TEST_CASE("build fills unlisted cells with zero") {
    const auto d = table_fixture();
    CHECK(d.cell_count() == 8);
    int zeros = 0;
    for (std::size_t i = 0; i < d.cell_count(); ++i) zeros += d.cell(i) == 0.0;
    CHECK(zeros == 5);
    const int a[] = {0, 0, 0};
    CHECK(d.prob(a) == 0.5);
}

TEST_CASE("build validation errors") {
    CHECK_THROWS_AS(build({bit("X")}, {{{0}, 0.5}, {{1}, 0.4}}), NotNormalized);
    CHECK_THROWS_AS(build({bit("X")}, {{{0}, -0.1}, {{1}, 1.1}}), NegativeProbability);
    CHECK_THROWS_AS(build({bit("X")}, {{{0}, 0.5}, {{0}, 0.5}}), DuplicateCell);
    CHECK_THROWS_AS(build({bit("X")}, {{{2}, 1.0}}), OutOfRangeValue);
    CHECK_THROWS_AS(build({bit("X"), bit("X")}, {{{0, 0}, 1.0}}), NameCollision);

    std::vector<Variable> many;
    for (int i = 0; i < 27; ++i) many.push_back(bit("B" + std::to_string(i)));
    CHECK_THROWS_AS(build(std::move(many), {}), CellCapExceeded);
}

TEST_CASE("build renormalize flag rescales by the sum") {
    const auto d = build({bit("X")}, {{{0}, 1.0}, {{1}, 3.0}}, true);
    CHECK(d.cell(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d.cell(1) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("marginalize sums out dropped variables") {
    const auto d = table_fixture();
    const auto m = marginalize(d, {"S1"});
    REQUIRE(m.cell_count() == 2);
    CHECK(m.cell(0) == 0.75);
    CHECK(m.cell(1) == 0.25);
}

TEST_CASE("marginalize keep-all is the identity") {
    const auto d = table_fixture();
    const auto m = marginalize(d, {"S1", "S2", "T"});
    for (std::size_t i = 0; i < d.cell_count(); ++i) CHECK(m.cell(i) == d.cell(i));
    CHECK_THROWS_AS(marginalize(d, {"nope"}), UnknownVariable);
    CHECK_THROWS_AS(marginalize(d, {}), UnknownVariable);
}

TEST_CASE("marginalize composes over intersections") {
    const auto f = random_system(7, {3, 2}, 4);
    const auto once = marginalize(f.dist, {"S1", "T"});
    const auto twice = marginalize(once, {"T"});
    const auto direct = marginalize(f.dist, {"T"});
    for (std::size_t i = 0; i < direct.cell_count(); ++i) {
        CHECK(twice.cell(i) == doctest::Approx(direct.cell(i)).epsilon(1e-15));
    }
}

TEST_CASE("condition renormalizes surviving slice") {
    const auto d = table_fixture();
    const auto c1 = condition(d, "T", 1);
    REQUIRE(c1.cell_count() == 4);
    const int s10[] = {1, 0};
    const int s01[] = {0, 1};
    CHECK(c1.prob(s10) == 0.5);
    CHECK(c1.prob(s01) == 0.5);

    const auto c0 = condition(d, "T", 0);
    const int s00[] = {0, 0};
    CHECK(c0.prob(s00) == 1.0);
}

TEST_CASE("condition on zero-mass value throws") {
    const auto d = build({bit("X"), bit("Y")},
                         {{{0, 0}, 0.5}, {{1, 0}, 0.5}});
    CHECK_THROWS_AS(condition(d, "Y", 1), ZeroMassCondition);
    CHECK_THROWS_AS(condition(d, "Z", 0), UnknownVariable);
}

TEST_CASE("condition commutes with marginalizing other variables") {
    const auto f = random_system(11, {2, 3}, 3);
    // Condition then drop S2, against drop S2 then condition.
    const auto left = marginalize(condition(f.dist, "T", 1), {"S1"});
    const auto right = condition(marginalize(f.dist, {"S1", "T"}), "T", 1);
    for (std::size_t i = 0; i < left.cell_count(); ++i) {
        CHECK(left.cell(i) == doctest::Approx(right.cell(i)).epsilon(1e-13));
    }
}

TEST_CASE("group merges into one composite variable") {
    const auto f = random_system(3, {2, 2}, 2);
    const auto g = group(f.dist, {"S1", "S2"}, "S12");
    REQUIRE(g.variable_count() == 2);
    CHECK(g.variables()[0].name == "S12");
    CHECK(g.variables()[0].alphabet.cardinality() == 4);
    // Reindexing only: every cell of the original appears unchanged.
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int t = 0; t < 2; ++t) {
                const int orig[] = {a, b, t};
                const int merged[] = {a * 2 + b, t};
                CHECK(f.dist.prob(orig) == g.prob(merged));
            }
        }
    }
}

TEST_CASE("group composite index follows merge-list order") {
    const auto f = random_system(5, {2, 3}, 2);
    const auto g = group(f.dist, {"T", "S1"}, "TS1");  // reversed, non-adjacent
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 3; ++b) {
            for (int t = 0; t < 2; ++t) {
                const int orig[] = {a, b, t};
                const int merged[] = {t * 2 + a, b};
                CHECK(f.dist.prob(orig) == g.prob(merged));
            }
        }
    }
    CHECK_THROWS_AS(group(f.dist, {"S1"}, "X"), InvalidSpec);
    CHECK_THROWS_AS(group(f.dist, {"S1", "T"}, "S2"), NameCollision);
}

TEST_CASE("product multiplies independent factors") {
    const auto coin = build({bit("X")}, {{{0}, 0.5}, {{1}, 0.5}});
    const auto coin2 = build({bit("Y")}, {{{0}, 0.5}, {{1}, 0.5}});
    const auto p = product(coin, coin2);
    REQUIRE(p.cell_count() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(p.cell(i) == 0.25);
    CHECK_THROWS_AS(product(coin, coin), NameCollision);
}

TEST_CASE("product marginalizes back to its factors") {
    const auto a = random_system(21, {2, 3}, 2);
    const auto b = random_system(22, {2, 2}, 3);
    // Rename b's variables to avoid collisions.
    std::vector<Variable> renamed;
    for (const auto& v : b.dist.variables()) renamed.push_back({v.name + "b", v.alphabet});
    const JointDistribution b2(renamed, std::vector<double>(b.dist.probs().begin(),
                                                            b.dist.probs().end()));
    const auto p = product(a.dist, b2);
    const auto back = marginalize(p, {"S1", "S2", "T"});
    for (std::size_t i = 0; i < back.cell_count(); ++i) {
        CHECK(back.cell(i) == doctest::Approx(a.dist.cell(i)).epsilon(1e-15));
    }
}

TEST_CASE("from_samples computes plug-in frequencies") {
    const auto d = from_samples({{0}, {0}, {1}, {1}}, {bit("X")});
    CHECK(d.cell(0) == 0.5);
    CHECK(d.cell(1) == 0.5);

    const auto point = from_samples({{1}}, {bit("X")});
    CHECK(point.cell(1) == 1.0);

    CHECK_THROWS_AS(from_samples({}, {bit("X")}), EmptySampleSet);
    CHECK_THROWS_AS(from_samples({{2}}, {bit("X")}), OutOfRangeValue);
}

TEST_CASE("from_samples converges to the sampled law") {
    // Draw a million samples from the three-cell fixture and compare cells.
    const auto d = table_fixture();
    std::mt19937_64 rng(99);
    std::vector<std::vector<int>> samples;
    samples.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) {
        const double u = uniform01(rng);
        if (u < 0.5) {
            samples.push_back({0, 0, 0});
        } else if (u < 0.75) {
            samples.push_back({1, 0, 1});
        } else {
            samples.push_back({0, 1, 1});
        }
    }
    const auto est = from_samples(samples, {bit("S1"), bit("S2"), bit("T")});
    for (std::size_t i = 0; i < d.cell_count(); ++i) {
        CHECK(std::abs(est.cell(i) - d.cell(i)) < 5e-3);
    }
}

TEST_CASE("group preserves every pre-image cell exactly") {
    const auto f = random_system(31, {3, 2}, 2);
    const auto g = group(f.dist, {"S2", "T"}, "ST");
    double sum_orig = 0.0, sum_grouped = 0.0;
    for (std::size_t i = 0; i < f.dist.cell_count(); ++i) sum_orig += f.dist.cell(i);
    for (std::size_t i = 0; i < g.cell_count(); ++i) sum_grouped += g.cell(i);
    CHECK(sum_orig == sum_grouped);
}

TEST_CASE("reorder permutes variables without changing the law") {
    const auto f = random_system(41, {2, 3}, 2);
    const auto r = reorder(f.dist, {"T", "S2", "S1"});
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 3; ++b) {
            for (int t = 0; t < 2; ++t) {
                const int orig[] = {a, b, t};
                const int perm[] = {t, b, a};
                CHECK(f.dist.prob(orig) == r.prob(perm));
            }
        }
    }
}

TEST_CASE("document round trip is exact") {
    const auto f = make(FixtureId::reduced_or);
    const auto doc = to_document(f.dist, &f.spec);
    const auto d2 = distribution_from_document(doc);
    REQUIRE(d2.cell_count() == f.dist.cell_count());
    for (std::size_t i = 0; i < d2.cell_count(); ++i) CHECK(d2.cell(i) == f.dist.cell(i));

    const auto spec2 = spec_from_document(doc);
    REQUIRE(spec2.has_value());
    CHECK(spec2->sources == f.spec.sources);
    CHECK(spec2->target == f.spec.target);
}

TEST_CASE("document parsing rejects malformed input") {
    std::istringstream bad("{not json");
    CHECK_THROWS_AS(read_document(bad), ParseError);

    nlohmann::json missing;
    missing["cells"] = nlohmann::json::array();
    CHECK_THROWS_AS(distribution_from_document(missing), ParseError);

    nlohmann::json doc;
    doc["variables"] = {{{"name", "X"}, {"cardinality", 2}}};
    doc["cells"] = {{{"assignment", {0}}, {"p", 0.4}}, {{"assignment", {1}}, {"p", 0.4}}};
    CHECK_THROWS_AS(distribution_from_document(doc), NotNormalized);
}

TEST_CASE("labels survive serialization and stay unique") {
    const auto d = build({{"X", Alphabet(2, {"down", "up"})}}, {{{0}, 0.5}, {{1}, 0.5}});
    const auto doc = to_document(d);
    const auto d2 = distribution_from_document(doc);
    CHECK(d2.variables()[0].alphabet.labels() == std::vector<std::string>{"down", "up"});
    CHECK_THROWS_AS(Alphabet(2, {"a", "a"}), NameCollision);
    CHECK_THROWS_AS(Alphabet(2, {"a"}), OutOfRangeValue);
    CHECK_THROWS_AS(Alphabet(0), OutOfRangeValue);
}
