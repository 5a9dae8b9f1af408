#ifndef PIDLAB_INFO_HPP
#define PIDLAB_INFO_HPP

#include <string>
#include <vector>

#include "pidlab/distribution.hpp"

namespace pidlab {

// All information quantities are in bits (base-2 logarithms) and computed
// from exact marginalizations, never from sampled surrogates. Entropy-typed
// values are >= 0; mutual-information-typed values may come out a hair
// negative from rounding and are clamped to 0 when within kNegativeFloor,
// anything below that raises InternalConsistency.
using Bits = double;

inline constexpr double kNegativeFloor = -1e-12;

using VarSet = std::vector<std::string>;

// H(vars), with the 0 log 0 = 0 convention.
Bits entropy(const JointDistribution& d, const VarSet& vars);

// H(vars | given) = H(vars u given) - H(given).
Bits cond_entropy(const JointDistribution& d, const VarSet& vars, const VarSet& given);

// I(a; b) = H(a) + H(b) - H(a, b).
Bits mutual_info(const JointDistribution& d, const VarSet& a, const VarSet& b);

// I(a; b | given) = H(a | given) - H(a | b, given).
Bits cond_mutual_info(const JointDistribution& d, const VarSet& a, const VarSet& b,
                      const VarSet& given);

}  // namespace pidlab

#endif  // PIDLAB_INFO_HPP
