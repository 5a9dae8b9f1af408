#ifndef PIDLAB_FIXTURES_HPP
#define PIDLAB_FIXTURES_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "pidlab/distribution.hpp"

namespace pidlab {

// Canonical test systems. All fixture probabilities are dyadic rationals,
// exactly representable in double precision.
enum class FixtureId {
    xor_pair,                 // T = S1 xor S2, fair independent bits
    xor_triple_system2,       // S_i = x_i with x3 = x1 xor x2, T = (x1,x2,x3)
    system1,                  // three xor triples, T = (x1,x5,x9)
    reduced_or,               // {(0,0,0): 1/2, (1,0,1): 1/4, (0,1,1): 1/4}
    copy_pair,                // S1 = S2 = T, one fair bit
    independent_copy_target,  // T = (S1,S2), independent fair bits
    random,                   // seeded random system (two sources)
};

std::optional<FixtureId> fixture_id_from_name(const std::string& name);
std::string fixture_name(FixtureId id);

struct Fixture {
    JointDistribution dist;
    SystemSpec spec;
};

// Deterministic constructor for each fixture. `seed` is required for
// FixtureId::random and ignored otherwise.
Fixture make(FixtureId id, std::optional<std::uint64_t> seed = std::nullopt);

// System 1 with the target kept as its three independent sub-target bits
// T1, T2, T3 instead of one composite variable.
JointDistribution system1_expanded();

// Random system with iid uniform cell weights, normalized; deterministic in
// the seed. `cards` lists one source cardinality per source.
Fixture random_system(std::uint64_t seed, const std::vector<int>& cards,
                      int target_card);

}  // namespace pidlab

#endif  // PIDLAB_FIXTURES_HPP
