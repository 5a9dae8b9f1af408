#ifndef PIDLAB_DISTRIBUTION_HPP
#define PIDLAB_DISTRIBUTION_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pidlab/errors.hpp"

namespace pidlab {

// Finite alphabet of a discrete variable. Labels are optional display
// strings; when present there is exactly one per symbol and they are unique.
class Alphabet {
public:
    explicit Alphabet(int cardinality);
    Alphabet(int cardinality, std::vector<std::string> labels);

    int cardinality() const { return cardinality_; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    int cardinality_ = 1;
    std::vector<std::string> labels_;  // empty, or one label per symbol
};

struct Variable {
    std::string name;
    Alphabet alphabet;
};

// Dense joint probability distribution over named finite-alphabet variables.
//
// Cells are stored row-major in variable order (the first variable varies
// slowest). Every entry is nonnegative and the entries sum to one within
// kSumTolerance. The total cell count is capped so that the combinatorial
// constructions downstream fail loudly instead of exhausting memory.
// Instances are immutable after construction and safe to share across
// threads.
class JointDistribution {
public:
    static constexpr std::size_t kDefaultCellCap = std::size_t{1} << 26;
    static constexpr double kSumTolerance = 1e-9;

    JointDistribution(std::vector<Variable> variables, std::vector<double> probs,
                      std::size_t cell_cap = kDefaultCellCap);

    const std::vector<Variable>& variables() const { return variables_; }
    std::size_t variable_count() const { return variables_.size(); }
    std::size_t cell_count() const { return probs_.size(); }
    std::span<const double> probs() const { return probs_; }
    double cell(std::size_t flat) const { return probs_[flat]; }

    bool has_variable(std::string_view name) const;
    // Position of a named variable; throws UnknownVariable if absent.
    std::size_t index_of(std::string_view name) const;
    int cardinality(std::size_t var) const { return variables_[var].alphabet.cardinality(); }

    std::size_t flat_index(std::span<const int> assignment) const;
    double prob(std::span<const int> assignment) const;
    void unflatten(std::size_t flat, std::span<int> assignment) const;

private:
    std::vector<Variable> variables_;
    std::vector<double> probs_;
    std::vector<std::size_t> strides_;
};

// Designates the source variables and the target variable of a system
// within a JointDistribution. Names must be distinct, present in the
// distribution, and the target must not be a source.
struct SystemSpec {
    std::vector<std::string> sources;
    std::string target;

    void validate(const JointDistribution& d) const;
};

struct CellEntry {
    std::vector<int> assignment;
    double p = 0.0;
};

// Builds a distribution from sparse cell entries; unlisted cells are zero.
// Entries must be nonnegative and sum to one within the tolerance unless
// `renormalize` is set, in which case they are scaled by their sum.
JointDistribution build(std::vector<Variable> variables,
                        const std::vector<CellEntry>& entries,
                        bool renormalize = false,
                        std::size_t cell_cap = JointDistribution::kDefaultCellCap);

// Sums out every variable not in `keep`. Output variables follow d's order.
JointDistribution marginalize(const JointDistribution& d,
                              const std::vector<std::string>& keep);

// Conditional distribution over the remaining variables given `on` = value.
JointDistribution condition(const JointDistribution& d, const std::string& on,
                            int value);

// Replaces the variables in `merge` (two or more) by one composite variable
// whose symbols enumerate the merged assignments row-major in `merge` order.
// The composite takes the position of the first merged variable in d's
// order; probabilities are reindexed, never altered.
JointDistribution group(const JointDistribution& d,
                        const std::vector<std::string>& merge,
                        const std::string& new_name);

// Independent product over the concatenated variable lists.
JointDistribution product(const JointDistribution& a, const JointDistribution& b,
                          std::size_t cell_cap = JointDistribution::kDefaultCellCap);

// Plug-in (maximum-likelihood) frequencies of the given samples.
JointDistribution from_samples(const std::vector<std::vector<int>>& samples,
                               std::vector<Variable> variables);

// Permutes variables into the given order (all names must be listed once).
JointDistribution reorder(const JointDistribution& d,
                          const std::vector<std::string>& order);

}  // namespace pidlab

#endif  // PIDLAB_DISTRIBUTION_HPP
