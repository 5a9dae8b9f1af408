#include <doctest.h>

#include <cmath>

#include "pidlab/fixtures.hpp"
#include "pidlab/measures.hpp"
#include "support/oracle.hpp"

using namespace pidlab;

namespace {

// Frozen reference values for the three-cell fixture, computed by direct
// enumeration before the library existed.
constexpr double kTableMiS1T = 0.31127812445913294;
constexpr double kTableUn = 0.23751681623626553;
constexpr double kTableRed = 0.07376130822286742;
constexpr double kTableSyn = 0.45120505930460153;

oracle::Dist as_oracle(const JointDistribution& d) { return oracle::from_library(d); }

}  // namespace

TEST_CASE("unique information on canonical systems") {
    const auto table = make(FixtureId::reduced_or);
    CHECK(unique_info(table.dist, table.spec, 0) ==
          doctest::Approx(kTableUn).epsilon(1e-12));
    CHECK(unique_info(table.dist, table.spec, 1) ==
          doctest::Approx(kTableUn).epsilon(1e-12));

    const auto x = make(FixtureId::xor_pair);
    CHECK(unique_info(x.dist, x.spec, 0) == 0.0);

    const auto ict = make(FixtureId::independent_copy_target);
    CHECK(unique_info(ict.dist, ict.spec, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("redundancy on canonical systems") {
    const auto table = make(FixtureId::reduced_or);
    CHECK(redundant_info(table.dist, table.spec) ==
          doctest::Approx(kTableRed).epsilon(1e-12));
    CHECK(std::abs(redundant_info(table.dist, table.spec) - 0.074) < 1e-3);

    const auto ict = make(FixtureId::independent_copy_target);
    CHECK(std::abs(redundant_info(ict.dist, ict.spec)) < 1e-12);

    const auto copy = make(FixtureId::copy_pair);
    CHECK(redundant_info(copy.dist, copy.spec) == doctest::Approx(1.0).epsilon(1e-12));

    const auto triple = make(FixtureId::xor_triple_system2);
    CHECK_THROWS_AS(redundant_info(triple.dist, triple.spec), WrongArity);
}

TEST_CASE("synergy on canonical systems") {
    const auto table = make(FixtureId::reduced_or);
    CHECK(synergy2(table.dist, table.spec) ==
          doctest::Approx(kTableSyn).epsilon(1e-12));

    const auto x = make(FixtureId::xor_pair);
    CHECK(synergy2(x.dist, x.spec) == doctest::Approx(1.0).epsilon(1e-12));

    const auto copy = make(FixtureId::copy_pair);
    CHECK(std::abs(synergy2(copy.dist, copy.spec)) < 1e-12);
}

TEST_CASE("equivalent forms agree on random systems") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto f = make(FixtureId::random, seed);
        CHECK(std::abs(redundant_info(f.dist, f.spec) -
                       redundant_info_alt(f.dist, f.spec)) < 1e-10);
        CHECK(std::abs(synergy2(f.dist, f.spec) - synergy2_alt(f.dist, f.spec)) < 1e-10);
    }
}

TEST_CASE("general synergy reduces to the two-source form") {
    const auto x = make(FixtureId::xor_pair);
    CHECK(std::abs(synergy_general(x.dist, x.spec) - 1.0) < 1e-12);
    CHECK(std::abs(synergy_general(x.dist, x.spec) - synergy2(x.dist, x.spec)) < 1e-10);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto f = make(FixtureId::random, seed + 40000);
        CHECK(std::abs(synergy_general(f.dist, f.spec) - synergy2(f.dist, f.spec)) <
              1e-10);
    }
}

TEST_CASE("general synergy of the triple-xor system vanishes") {
    // Every complement pair pins the target, so the decoupled family leaves
    // H(T | blocks) at zero, like H(T | sources).
    const auto f = make(FixtureId::xor_triple_system2);
    CHECK(std::abs(synergy_general(f.dist, f.spec)) < 1e-12);
    CHECK(std::abs(oracle::synergy_general(as_oracle(f.dist), {0, 1, 2}, 3)) < 1e-12);
}

TEST_CASE("general synergy vanishes when one source pins the target") {
    // T = S1; S2, S3 independent noise.
    std::vector<CellEntry> cells;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) cells.push_back({{a, b, c, a}, 0.125});
    const auto d = build({{"S1", Alphabet(2)}, {"S2", Alphabet(2)}, {"S3", Alphabet(2)},
                          {"T", Alphabet(2)}},
                         cells);
    CHECK(std::abs(synergy_general(d, {{"S1", "S2", "S3"}, "T"})) < 1e-12);
}

TEST_CASE("general measures match the brute-force oracle on random systems") {
    const std::vector<std::vector<int>> shapes{{2, 2, 2}, {3, 2, 2}, {2, 3, 4}};
    const std::vector<int> target_cards{2, 3, 2};
    for (std::size_t shape = 0; shape < shapes.size(); ++shape) {
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const auto f = random_system(seed + 300 + 50 * shape, shapes[shape],
                                         target_cards[shape]);
            const auto od = as_oracle(f.dist);
            for (std::size_t i = 0; i < 3; ++i) {
                CHECK(std::abs(unique_info(f.dist, f.spec, i) -
                               oracle::unique_info(od, {0, 1, 2}, static_cast<int>(i),
                                                   3)) < 1e-10);
            }
            CHECK(std::abs(synergy_general(f.dist, f.spec) -
                           oracle::synergy_general(od, {0, 1, 2}, 3)) < 1e-10);
            CHECK(std::abs(se_k(f.dist, f.spec, 2) -
                           oracle::se_k(od, {0, 1, 2}, 2, 3)) < 1e-10);
            CHECK(std::abs(tse(f.dist, f.spec).tse - oracle::tse(od, {0, 1, 2}, 3)) <
                  1e-10);
        }
    }
}

TEST_CASE("synergistic effects telescope") {
    const auto x = make(FixtureId::xor_pair);
    const auto spectrum = tse(x.dist, x.spec);
    REQUIRE(spectrum.se.size() == 1);
    CHECK(spectrum.se.at(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spectrum.tse == doctest::Approx(1.0).epsilon(1e-12));

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto f = random_system(seed + 600, {2, 2, 2}, 2);
        const auto sp = tse(f.dist, f.spec);
        CHECK(std::abs(sp.se.at(2) + sp.se.at(3) - sp.tse) < 1e-10);
    }
}

TEST_CASE("synergistic effects vanish for conditionally independent sources") {
    const auto ict = make(FixtureId::independent_copy_target);
    const auto sp = tse(ict.dist, ict.spec);
    CHECK(std::abs(sp.tse) < 1e-12);
    CHECK(std::abs(se_k(ict.dist, ict.spec, 2)) < 1e-12);

    const auto triple = make(FixtureId::xor_triple_system2);
    const auto sp3 = tse(triple.dist, triple.spec);
    CHECK(std::abs(sp3.se.at(2)) < 1e-12);
    CHECK(std::abs(sp3.se.at(3)) < 1e-12);
    CHECK(std::abs(sp3.tse) < 1e-12);

    CHECK_THROWS_AS(se_k(triple.dist, triple.spec, 5), KOutOfRange);
    CHECK_THROWS_AS(se_k(triple.dist, triple.spec, 1), KOutOfRange);
}

TEST_CASE("pid2_full reproduces the reference decomposition") {
    const auto table = make(FixtureId::reduced_or);
    const auto pid = pid2_full(table.dist, table.spec);
    CHECK(pid.red == doctest::Approx(kTableRed).epsilon(1e-12));
    CHECK(pid.un[0] == doctest::Approx(kTableUn).epsilon(1e-12));
    CHECK(pid.un[1] == doctest::Approx(kTableUn).epsilon(1e-12));
    CHECK(pid.syn == doctest::Approx(kTableSyn).epsilon(1e-12));
    CHECK(pid.mi_joint == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pid.mi_marginals[0] == doctest::Approx(kTableMiS1T).epsilon(1e-12));

    // Three-decimal reference values.
    CHECK(std::abs(pid.red - 0.074) < 1e-3);
    CHECK(std::abs(pid.un[0] - 0.238) < 1e-3);
    CHECK(std::abs(pid.un[1] - 0.238) < 1e-3);
    CHECK(std::abs(pid.syn - 0.451) < 1e-3);

    const auto x = make(FixtureId::xor_pair);
    const auto px = pid2_full(x.dist, x.spec);
    CHECK(px.red == doctest::Approx(0.0));
    CHECK(px.un[0] == doctest::Approx(0.0));
    CHECK(px.un[1] == doctest::Approx(0.0));
    CHECK(px.syn == doctest::Approx(1.0).epsilon(1e-12));

    const auto ict = make(FixtureId::independent_copy_target);
    const auto pict = pid2_full(ict.dist, ict.spec);
    CHECK(std::abs(pict.red) < 1e-12);
    CHECK(pict.un[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pict.un[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pict.syn) < 1e-12);
}

TEST_CASE("reconstruction identities hold on random systems") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto f = make(FixtureId::random, seed + 70000);
        const auto pid = pid2_full(f.dist, f.spec);
        CHECK(std::abs(pid.red + pid.syn + pid.un[0] + pid.un[1] - pid.mi_joint) < 1e-10);
        CHECK(std::abs(pid.red + pid.un[0] - pid.mi_marginals[0]) < 1e-10);
        CHECK(std::abs(pid.red + pid.un[1] - pid.mi_marginals[1]) < 1e-10);
        CHECK(std::abs(pid.syn + pid.un[0] - pid.cmi[0]) < 1e-10);
        CHECK(std::abs(pid.syn + pid.un[1] - pid.cmi[1]) < 1e-10);
        CHECK(pid.red >= -1e-12);
        CHECK(pid.un[0] >= -1e-12);
        CHECK(pid.un[1] >= -1e-12);
    }
}

TEST_CASE("grouped sources recover the joint mutual information") {
    const auto table = make(FixtureId::reduced_or);
    const auto grouped = group(table.dist, {"S1", "S2"}, "S12");
    CHECK(mutual_info(grouped, {"S12"}, {"T"}) ==
          doctest::Approx(mutual_info(table.dist, {"S1", "S2"}, {"T"})).epsilon(1e-12));
}

TEST_CASE("two independent copies of the reference table add their atoms") {
    const auto f = make(FixtureId::reduced_or);
    std::vector<Variable> renamed;
    for (const auto& v : f.dist.variables()) renamed.push_back({v.name + "x", v.alphabet});
    const JointDistribution copy(
        renamed, std::vector<double>(f.dist.probs().begin(), f.dist.probs().end()));

    auto joint = product(f.dist, copy);
    CHECK(joint.cell_count() == 64);
    joint = group(joint, {"S1", "S1x"}, "A");
    joint = group(joint, {"S2", "S2x"}, "B");
    joint = group(joint, {"T", "Tx"}, "TT");

    const auto pid = pid2_full(joint, {{"A", "B"}, "TT"});
    CHECK(pid.mi_joint == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pid.red == doctest::Approx(2 * kTableRed).epsilon(1e-10));
    CHECK(pid.un[0] == doctest::Approx(2 * kTableUn).epsilon(1e-10));
    CHECK(pid.syn == doctest::Approx(2 * kTableSyn).epsilon(1e-10));
}

TEST_CASE("additivity over independent products") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f1 = make(FixtureId::random, seed + 81000);
        const auto f2r = make(FixtureId::random, seed + 82000);
        std::vector<Variable> renamed;
        for (const auto& v : f2r.dist.variables()) renamed.push_back({v.name + "x", v.alphabet});
        const JointDistribution d2(
            renamed, std::vector<double>(f2r.dist.probs().begin(), f2r.dist.probs().end()));

        auto joint = product(f1.dist, d2);
        joint = group(joint, {"S1", "S1x"}, "A");
        joint = group(joint, {"S2", "S2x"}, "B");
        joint = group(joint, {"T", "Tx"}, "TT");
        const SystemSpec spec{{"A", "B"}, "TT"};

        const auto whole = pid2_full(joint, spec);
        const auto p1 = pid2_full(f1.dist, f1.spec);
        const auto p2 = pid2_full(f2r.dist, f2r.spec);
        CHECK(std::abs(whole.red - p1.red - p2.red) < 1e-9);
        CHECK(std::abs(whole.un[0] - p1.un[0] - p2.un[0]) < 1e-9);
        CHECK(std::abs(whole.un[1] - p1.un[1] - p2.un[1]) < 1e-9);
        CHECK(std::abs(whole.syn - p1.syn - p2.syn) < 1e-9);
    }
}

TEST_CASE("atoms move continuously with the joint law") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto f = make(FixtureId::random, seed + 91000);
        const auto base = pid2_full(f.dist, f.spec);

        // Shift 1e-6 of mass between the two largest cells: total variation
        // exactly 1e-6.
        std::vector<double> probs(f.dist.probs().begin(), f.dist.probs().end());
        std::size_t hi = 0, lo = 1;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > probs[hi]) hi = i;
        }
        lo = hi == 0 ? 1 : 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (i != hi && probs[i] > probs[lo]) lo = i;
        }
        probs[hi] -= 1e-6;
        probs[lo] += 1e-6;
        const JointDistribution nearby(f.dist.variables(), std::move(probs));

        const auto moved = pid2_full(nearby, f.spec);
        CHECK(std::abs(moved.red - base.red) < 1e-4);
        CHECK(std::abs(moved.un[0] - base.un[0]) < 1e-4);
        CHECK(std::abs(moved.un[1] - base.un[1]) < 1e-4);
        CHECK(std::abs(moved.syn - base.syn) < 1e-4);
    }
}

TEST_CASE("the summed synergies of the triple-xor system exceed its entropy") {
    const auto f = make(FixtureId::xor_triple_system2);
    const auto rep = wesp_audit(f.dist, {"S1", "S2", "S3"});
    CHECK(rep.sum_syn == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep.joint_entropy == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.violated);
    for (const auto s : rep.syn_per_member) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("independent bits show no synergy excess") {
    const auto a = build({{"X1", Alphabet(2)}}, {{{0}, 0.5}, {{1}, 0.5}});
    const auto b = build({{"X2", Alphabet(2)}}, {{{0}, 0.5}, {{1}, 0.5}});
    const auto c = build({{"X3", Alphabet(2)}}, {{{0}, 0.5}, {{1}, 0.5}});
    const auto d = product(product(a, b), c);
    const auto rep = wesp_audit(d, {"X1", "X2", "X3"});
    CHECK(std::abs(rep.sum_syn) < 1e-12);
    CHECK(rep.joint_entropy == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_FALSE(rep.violated);
}

TEST_CASE("a copied triple has no synergy toward any member") {
    std::vector<CellEntry> cells{{{0, 0, 0}, 0.5}, {{1, 1, 1}, 0.5}};
    const auto d = build({{"X1", Alphabet(2)}, {"X2", Alphabet(2)}, {"X3", Alphabet(2)}},
                         cells);
    const auto rep = wesp_audit(d, {"X1", "X2", "X3"});
    CHECK(std::abs(rep.sum_syn) < 1e-12);
    CHECK_FALSE(rep.violated);
    CHECK_THROWS_AS(wesp_audit(d, {"X1", "X2"}), WrongArity);
}

TEST_CASE("axiom audit passes on fixtures and random systems") {
    for (const auto id : {FixtureId::reduced_or, FixtureId::xor_pair,
                          FixtureId::copy_pair, FixtureId::independent_copy_target}) {
        const auto f = make(id);
        const auto rep = axiom_audit(f.dist, f.spec);
        CHECK(rep.all_pass());
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto f = make(FixtureId::random, seed + 50000);
        CHECK(axiom_audit(f.dist, f.spec).all_pass());
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto f = random_system(seed + 60000, {2, 2, 2}, 2);
        const auto rep = axiom_audit(f.dist, f.spec);
        if (!rep.all_pass()) MESSAGE(to_text(rep));
        CHECK(rep.all_pass());
    }
    // Mixed cardinalities exercise the grouping and subsystem reindexing.
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto f = random_system(seed + 65000, {3, 2, 4}, 3);
        const auto rep = axiom_audit(f.dist, f.spec);
        if (!rep.all_pass()) MESSAGE(to_text(rep));
        CHECK(rep.all_pass());
    }
}

TEST_CASE("audit report serializes one line per check") {
    const auto f = make(FixtureId::xor_pair);
    const auto rep = axiom_audit(f.dist, f.spec);
    const auto text = to_text(rep);
    CHECK(text.find("PASS eq1_reconstruction") != std::string::npos);
    CHECK(text.find("all checks passed") != std::string::npos);
}

TEST_CASE("the two fixed systems force equal atoms with unequal information") {
    const auto rep = fixture_inconsistency_check();
    CHECK(rep.premises.all_pass());
    CHECK(rep.system1_mi == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep.system2_mi == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.forced_atom_sum == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep.sum_exceeds_system2_mi);
    const auto text = to_text(rep);
    CHECK(text.find("no consistent assignment exists") != std::string::npos);
}
