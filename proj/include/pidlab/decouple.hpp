#ifndef PIDLAB_DECOUPLE_HPP
#define PIDLAB_DECOUPLE_HPP

#include <string>
#include <utility>
#include <vector>

#include "pidlab/distribution.hpp"

namespace pidlab {

// Joint law over primed source blocks, any retained unprimed sources, and
// the target. For every realized target value t the block conditionals
// factorize (blocks are conditionally independent given the target), and
// each primed block keeps the original joint law of its source subset with
// the target. Target values of zero mass contribute nothing.
struct DecoupledSystem {
    JointDistribution dist;
    // Primed block name -> the source subset it copies, in source order.
    std::vector<std::pair<std::string, std::vector<std::string>>> prime_map;
    std::vector<std::string> retained;  // unprimed sources kept as separate variables
    std::string target;
};

// "S1" -> "S1'", {"S1","S3"} -> "S1+S3'".
std::string primed_name(const std::vector<std::string>& subset);

// Primes source i against the joint of the remaining sources:
// variables (Si', other sources unprimed, T).
DecoupledSystem decouple_pair(const JointDistribution& d, const SystemSpec& spec,
                              std::size_t i,
                              std::size_t cell_cap = JointDistribution::kDefaultCellCap);

// One composite primed block per complement subset {all sources except k},
// enumerated for k = 1..N: variables (block_1, ..., block_N, T).
DecoupledSystem decouple_complements(const JointDistribution& d, const SystemSpec& spec,
                                     std::size_t cell_cap = JointDistribution::kDefaultCellCap);

// One composite primed block per source subset of cardinality k, blocks in
// lexicographic order of their index sets: variables (block_1, ..., block_m, T).
DecoupledSystem decouple_k_subsets(const JointDistribution& d, const SystemSpec& spec,
                                   int k,
                                   std::size_t cell_cap = JointDistribution::kDefaultCellCap);

}  // namespace pidlab

#endif  // PIDLAB_DECOUPLE_HPP
