#include "pidlab/fixtures.hpp"

#include "pidlab/rng.hpp"

namespace pidlab {

namespace {

Variable bit(const std::string& name) { return {name, Alphabet(2)}; }

Fixture make_xor_pair() {
    std::vector<CellEntry> cells;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) cells.push_back({{a, b, a ^ b}, 0.25});
    }
    return {build({bit("S1"), bit("S2"), bit("T")}, cells), {{"S1", "S2"}, "T"}};
}

Fixture make_xor_triple() {
    std::vector<CellEntry> cells;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const int c = a ^ b;
            cells.push_back({{a, b, c, a * 4 + b * 2 + c}, 0.25});
        }
    }
    return {build({bit("S1"), bit("S2"), bit("S3"), {"T", Alphabet(8)}}, cells),
            {{"S1", "S2", "S3"}, "T"}};
}

Fixture make_reduced_or() {
    std::vector<CellEntry> cells{
        {{0, 0, 0}, 0.5}, {{1, 0, 1}, 0.25}, {{0, 1, 1}, 0.25}};
    return {build({bit("S1"), bit("S2"), bit("T")}, cells), {{"S1", "S2"}, "T"}};
}

Fixture make_copy_pair() {
    std::vector<CellEntry> cells{{{0, 0, 0}, 0.5}, {{1, 1, 1}, 0.5}};
    return {build({bit("S1"), bit("S2"), bit("T")}, cells), {{"S1", "S2"}, "T"}};
}

Fixture make_independent_copy_target() {
    std::vector<CellEntry> cells;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) cells.push_back({{a, b, a * 2 + b}, 0.25});
    }
    return {build({bit("S1"), bit("S2"), {"T", Alphabet(4)}}, cells), {{"S1", "S2"}, "T"}};
}

}  // namespace

std::optional<FixtureId> fixture_id_from_name(const std::string& name) {
    if (name == "xor_pair") return FixtureId::xor_pair;
    if (name == "xor_triple_system2") return FixtureId::xor_triple_system2;
    if (name == "system1") return FixtureId::system1;
    if (name == "reduced_or") return FixtureId::reduced_or;
    if (name == "copy_pair") return FixtureId::copy_pair;
    if (name == "independent_copy_target") return FixtureId::independent_copy_target;
    if (name == "random") return FixtureId::random;
    return std::nullopt;
}

std::string fixture_name(FixtureId id) {
    switch (id) {
        case FixtureId::xor_pair: return "xor_pair";
        case FixtureId::xor_triple_system2: return "xor_triple_system2";
        case FixtureId::system1: return "system1";
        case FixtureId::reduced_or: return "reduced_or";
        case FixtureId::copy_pair: return "copy_pair";
        case FixtureId::independent_copy_target: return "independent_copy_target";
        case FixtureId::random: return "random";
    }
    return "?";
}

JointDistribution system1_expanded() {
    // Six free bits; the three derived bits close one xor triple each. The
    // sources pack one bit from every triple, the sub-targets pick one bit
    // of each triple so that each is the xor of bits held by the other two
    // sources.
    std::vector<CellEntry> cells;
    for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
            for (int x4 = 0; x4 < 2; ++x4)
                for (int x5 = 0; x5 < 2; ++x5)
                    for (int x7 = 0; x7 < 2; ++x7)
                        for (int x8 = 0; x8 < 2; ++x8) {
                            const int x3 = x1 ^ x2, x6 = x4 ^ x5, x9 = x7 ^ x8;
                            const int s1 = x1 * 4 + x4 * 2 + x7;
                            const int s2 = x2 * 4 + x5 * 2 + x8;
                            const int s3 = x3 * 4 + x6 * 2 + x9;
                            cells.push_back({{s1, s2, s3, x1, x5, x9}, 1.0 / 64.0});
                        }
    return build({{"S1", Alphabet(8)}, {"S2", Alphabet(8)}, {"S3", Alphabet(8)},
                  bit("T1"), bit("T2"), bit("T3")},
                 cells);
}

Fixture make(FixtureId id, std::optional<std::uint64_t> seed) {
    switch (id) {
        case FixtureId::xor_pair: return make_xor_pair();
        case FixtureId::xor_triple_system2: return make_xor_triple();
        case FixtureId::system1:
            return {group(system1_expanded(), {"T1", "T2", "T3"}, "T"),
                    {{"S1", "S2", "S3"}, "T"}};
        case FixtureId::reduced_or: return make_reduced_or();
        case FixtureId::copy_pair: return make_copy_pair();
        case FixtureId::independent_copy_target: return make_independent_copy_target();
        case FixtureId::random: {
            if (!seed) throw MissingSeed("fixture 'random' needs a seed");
            std::mt19937_64 rng(derive_seed(*seed, 0));
            const int c1 = 2 + static_cast<int>(uniform_below(rng, 3));
            const int c2 = 2 + static_cast<int>(uniform_below(rng, 3));
            const int ct = 2 + static_cast<int>(uniform_below(rng, 3));
            return random_system(*seed, {c1, c2}, ct);
        }
    }
    throw Error("unhandled fixture id");
}

Fixture random_system(std::uint64_t seed, const std::vector<int>& cards,
                      int target_card) {
    if (cards.empty()) throw InvalidSpec("random system needs at least one source");
    for (int c : cards) {
        if (c < 2) throw OutOfRangeValue("source cardinality must be >= 2");
    }
    if (target_card < 2) throw OutOfRangeValue("target cardinality must be >= 2");

    std::vector<Variable> vars;
    for (std::size_t i = 0; i < cards.size(); ++i) {
        vars.push_back({"S" + std::to_string(i + 1), Alphabet(cards[i])});
    }
    vars.push_back({"T", Alphabet(target_card)});

    std::size_t n = static_cast<std::size_t>(target_card);
    for (int c : cards) n *= static_cast<std::size_t>(c);
    if (n > JointDistribution::kDefaultCellCap) {
        throw CellCapExceeded("random system would exceed cell cap");
    }

    std::mt19937_64 rng(derive_seed(seed, 1));
    std::vector<double> probs(n);
    double sum = 0.0;
    for (double& p : probs) {
        p = uniform01(rng);
        sum += p;
    }
    for (double& p : probs) p /= sum;

    SystemSpec spec;
    for (std::size_t i = 0; i < cards.size(); ++i) spec.sources.push_back(vars[i].name);
    spec.target = "T";
    return {JointDistribution(std::move(vars), std::move(probs)), std::move(spec)};
}

}  // namespace pidlab
