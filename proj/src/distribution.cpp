#include "pidlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace pidlab {

namespace {

std::size_t checked_cell_count(const std::vector<Variable>& variables,
                               std::size_t cell_cap) {
    std::size_t n = 1;
    for (const auto& v : variables) {
        const auto c = static_cast<std::size_t>(v.alphabet.cardinality());
        if (c == 0 || n > cell_cap / c) {
            throw CellCapExceeded("cell count exceeds cap of " +
                                  std::to_string(cell_cap) + " cells");
        }
        n *= c;
    }
    return n;
}

void check_unique_names(const std::vector<Variable>& variables) {
    std::unordered_set<std::string_view> seen;
    for (const auto& v : variables) {
        if (v.name.empty()) throw NameCollision("variable name must be non-empty");
        if (!seen.insert(v.name).second) {
            throw NameCollision("duplicate variable name '" + v.name + "'");
        }
    }
}

}  // namespace

Alphabet::Alphabet(int cardinality) : cardinality_(cardinality) {
    if (cardinality < 1) throw OutOfRangeValue("alphabet cardinality must be >= 1");
}

Alphabet::Alphabet(int cardinality, std::vector<std::string> labels)
    : Alphabet(cardinality) {
    if (!labels.empty()) {
        if (labels.size() != static_cast<std::size_t>(cardinality)) {
            throw OutOfRangeValue("label count must match cardinality");
        }
        std::unordered_set<std::string_view> seen;
        for (const auto& l : labels) {
            if (!seen.insert(l).second) {
                throw NameCollision("duplicate alphabet label '" + l + "'");
            }
        }
        labels_ = std::move(labels);
    }
}

JointDistribution::JointDistribution(std::vector<Variable> variables,
                                     std::vector<double> probs,
                                     std::size_t cell_cap)
    : variables_(std::move(variables)), probs_(std::move(probs)) {
    if (variables_.empty()) throw UnknownVariable("distribution needs at least one variable");
    check_unique_names(variables_);
    const std::size_t n = checked_cell_count(variables_, cell_cap);
    if (probs_.size() != n) {
        throw OutOfRangeValue("probability array has " + std::to_string(probs_.size()) +
                              " cells, expected " + std::to_string(n));
    }

    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw NegativeProbability("negative or NaN cell probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw NotNormalized("cell probabilities sum to " + std::to_string(sum));
    }

    strides_.resize(variables_.size());
    std::size_t s = 1;
    for (std::size_t i = variables_.size(); i-- > 0;) {
        strides_[i] = s;
        s *= static_cast<std::size_t>(variables_[i].alphabet.cardinality());
    }
}

bool JointDistribution::has_variable(std::string_view name) const {
    for (const auto& v : variables_) {
        if (v.name == name) return true;
    }
    return false;
}

std::size_t JointDistribution::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].name == name) return i;
    }
    throw UnknownVariable("unknown variable '" + std::string(name) + "'");
}

std::size_t JointDistribution::flat_index(std::span<const int> assignment) const {
    if (assignment.size() != variables_.size()) {
        throw OutOfRangeValue("assignment arity mismatch");
    }
    std::size_t flat = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const int v = assignment[i];
        if (v < 0 || v >= variables_[i].alphabet.cardinality()) {
            throw OutOfRangeValue("symbol " + std::to_string(v) + " out of range for '" +
                                  variables_[i].name + "'");
        }
        flat += static_cast<std::size_t>(v) * strides_[i];
    }
    return flat;
}

double JointDistribution::prob(std::span<const int> assignment) const {
    return probs_[flat_index(assignment)];
}

void JointDistribution::unflatten(std::size_t flat, std::span<int> assignment) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        assignment[i] = static_cast<int>(flat / strides_[i]);
        flat %= strides_[i];
    }
}

void SystemSpec::validate(const JointDistribution& d) const {
    if (sources.empty()) throw InvalidSpec("spec needs at least one source");
    std::unordered_set<std::string_view> seen;
    for (const auto& s : sources) {
        if (!d.has_variable(s)) throw UnknownVariable("unknown source variable '" + s + "'");
        if (!seen.insert(s).second) throw InvalidSpec("duplicate source variable '" + s + "'");
    }
    if (!d.has_variable(target)) throw UnknownVariable("unknown target variable '" + target + "'");
    if (seen.count(target) != 0) throw InvalidSpec("target '" + target + "' is also a source");
}

JointDistribution build(std::vector<Variable> variables,
                        const std::vector<CellEntry>& entries, bool renormalize,
                        std::size_t cell_cap) {
    check_unique_names(variables);
    const std::size_t n = checked_cell_count(variables, cell_cap);

    std::vector<double> probs(n, 0.0);
    std::vector<bool> filled(n, false);
    // Flat indexing duplicated here so entries can be validated before the
    // distribution invariants are enforced.
    std::vector<std::size_t> strides(variables.size());
    std::size_t s = 1;
    for (std::size_t i = variables.size(); i-- > 0;) {
        strides[i] = s;
        s *= static_cast<std::size_t>(variables[i].alphabet.cardinality());
    }

    double sum = 0.0;
    for (const auto& e : entries) {
        if (e.assignment.size() != variables.size()) {
            throw OutOfRangeValue("cell assignment arity mismatch");
        }
        std::size_t flat = 0;
        for (std::size_t i = 0; i < variables.size(); ++i) {
            const int v = e.assignment[i];
            if (v < 0 || v >= variables[i].alphabet.cardinality()) {
                throw OutOfRangeValue("symbol " + std::to_string(v) +
                                      " out of range for '" + variables[i].name + "'");
            }
            flat += static_cast<std::size_t>(v) * strides[i];
        }
        if (!(e.p >= 0.0)) throw NegativeProbability("negative or NaN cell probability");
        if (filled[flat]) throw DuplicateCell("duplicate cell assignment");
        filled[flat] = true;
        probs[flat] = e.p;
        sum += e.p;
    }

    if (renormalize) {
        if (sum <= 0.0) throw NotNormalized("cannot renormalize zero total mass");
        for (double& p : probs) p /= sum;
    } else if (std::abs(sum - 1.0) > JointDistribution::kSumTolerance) {
        throw NotNormalized("cell probabilities sum to " + std::to_string(sum));
    }
    return JointDistribution(std::move(variables), std::move(probs), cell_cap);
}

JointDistribution marginalize(const JointDistribution& d,
                              const std::vector<std::string>& keep) {
    if (keep.empty()) throw UnknownVariable("marginalize needs a non-empty keep set");
    std::vector<bool> kept(d.variable_count(), false);
    for (const auto& name : keep) kept[d.index_of(name)] = true;

    std::vector<Variable> out_vars;
    for (std::size_t i = 0; i < d.variable_count(); ++i) {
        if (kept[i]) out_vars.push_back(d.variables()[i]);
    }
    if (out_vars.size() == d.variable_count()) return d;

    // Stride of each input variable in the output tensor (0 when dropped).
    std::vector<std::size_t> out_stride(d.variable_count(), 0);
    std::size_t s = 1;
    for (std::size_t i = d.variable_count(); i-- > 0;) {
        if (kept[i]) {
            out_stride[i] = s;
            s *= static_cast<std::size_t>(d.cardinality(i));
        }
    }

    std::vector<double> out(s, 0.0);
    std::vector<int> digits(d.variable_count(), 0);
    for (std::size_t flat = 0; flat < d.cell_count(); ++flat) {
        std::size_t of = 0;
        for (std::size_t i = 0; i < d.variable_count(); ++i) {
            of += static_cast<std::size_t>(digits[i]) * out_stride[i];
        }
        out[of] += d.cell(flat);
        for (std::size_t i = d.variable_count(); i-- > 0;) {
            if (++digits[i] < d.cardinality(i)) break;
            digits[i] = 0;
        }
    }
    return JointDistribution(std::move(out_vars), std::move(out));
}

JointDistribution condition(const JointDistribution& d, const std::string& on,
                            int value) {
    const std::size_t ci = d.index_of(on);
    if (value < 0 || value >= d.cardinality(ci)) {
        throw OutOfRangeValue("conditioning value out of range for '" + on + "'");
    }
    if (d.variable_count() < 2) {
        throw InvalidSpec("conditioning would leave no variables");
    }

    std::vector<Variable> out_vars;
    for (std::size_t i = 0; i < d.variable_count(); ++i) {
        if (i != ci) out_vars.push_back(d.variables()[i]);
    }

    std::size_t n_out = 1;
    for (const auto& v : out_vars) n_out *= static_cast<std::size_t>(v.alphabet.cardinality());

    std::vector<double> slice(n_out, 0.0);
    double mass = 0.0;
    std::vector<int> digits(d.variable_count(), 0);
    std::size_t of = 0;
    for (std::size_t flat = 0; flat < d.cell_count(); ++flat) {
        if (digits[ci] == value) {
            slice[of] = d.cell(flat);
            mass += d.cell(flat);
            ++of;
        }
        for (std::size_t i = d.variable_count(); i-- > 0;) {
            if (++digits[i] < d.cardinality(i)) break;
            digits[i] = 0;
        }
    }
    if (mass <= 0.0) {
        throw ZeroMassCondition("Pr(" + on + " = " + std::to_string(value) + ") is zero");
    }
    for (double& p : slice) p /= mass;
    return JointDistribution(std::move(out_vars), std::move(slice));
}

JointDistribution group(const JointDistribution& d,
                        const std::vector<std::string>& merge,
                        const std::string& new_name) {
    if (merge.size() < 2) throw InvalidSpec("group needs at least two variables");
    std::vector<std::size_t> merge_idx;
    std::unordered_set<std::size_t> merged;
    for (const auto& name : merge) {
        const std::size_t i = d.index_of(name);
        if (!merged.insert(i).second) throw InvalidSpec("duplicate variable in merge list");
        merge_idx.push_back(i);
    }
    for (std::size_t i = 0; i < d.variable_count(); ++i) {
        if (merged.count(i) == 0 && d.variables()[i].name == new_name) {
            throw NameCollision("composite name '" + new_name + "' already in use");
        }
    }

    // Composite symbol index is row-major in merge-list order.
    int comp_card = 1;
    for (std::size_t i : merge_idx) comp_card *= d.cardinality(i);
    std::vector<std::size_t> comp_stride(merge_idx.size());
    {
        std::size_t s = 1;
        for (std::size_t k = merge_idx.size(); k-- > 0;) {
            comp_stride[k] = s;
            s *= static_cast<std::size_t>(d.cardinality(merge_idx[k]));
        }
    }

    const std::size_t comp_pos = *std::min_element(merge_idx.begin(), merge_idx.end());
    std::vector<Variable> out_vars;
    std::vector<std::size_t> out_pos(d.variable_count(), 0);  // output slot per input var
    std::size_t comp_slot = 0;
    for (std::size_t i = 0; i < d.variable_count(); ++i) {
        if (i == comp_pos) {
            comp_slot = out_vars.size();
            out_vars.push_back({new_name, Alphabet(comp_card)});
        } else if (merged.count(i) == 0) {
            out_pos[i] = out_vars.size();
            out_vars.push_back(d.variables()[i]);
        }
    }

    std::vector<std::size_t> out_strides(out_vars.size());
    std::size_t s = 1;
    for (std::size_t i = out_vars.size(); i-- > 0;) {
        out_strides[i] = s;
        s *= static_cast<std::size_t>(out_vars[i].alphabet.cardinality());
    }

    std::vector<double> out(d.cell_count(), 0.0);
    std::vector<int> digits(d.variable_count(), 0);
    for (std::size_t flat = 0; flat < d.cell_count(); ++flat) {
        std::size_t comp_digit = 0;
        for (std::size_t k = 0; k < merge_idx.size(); ++k) {
            comp_digit += static_cast<std::size_t>(digits[merge_idx[k]]) * comp_stride[k];
        }
        std::size_t of = comp_digit * out_strides[comp_slot];
        for (std::size_t i = 0; i < d.variable_count(); ++i) {
            if (merged.count(i) == 0) {
                of += static_cast<std::size_t>(digits[i]) * out_strides[out_pos[i]];
            }
        }
        out[of] = d.cell(flat);
        for (std::size_t i = d.variable_count(); i-- > 0;) {
            if (++digits[i] < d.cardinality(i)) break;
            digits[i] = 0;
        }
    }
    return JointDistribution(std::move(out_vars), std::move(out));
}

JointDistribution product(const JointDistribution& a, const JointDistribution& b,
                          std::size_t cell_cap) {
    for (const auto& v : b.variables()) {
        if (a.has_variable(v.name)) {
            throw NameCollision("variable '" + v.name + "' present in both factors");
        }
    }
    if (a.cell_count() > cell_cap / b.cell_count()) {
        throw CellCapExceeded("product would exceed cell cap");
    }

    std::vector<Variable> out_vars = a.variables();
    out_vars.insert(out_vars.end(), b.variables().begin(), b.variables().end());
    std::vector<double> out(a.cell_count() * b.cell_count());
    for (std::size_t ia = 0; ia < a.cell_count(); ++ia) {
        const double pa = a.cell(ia);
        for (std::size_t ib = 0; ib < b.cell_count(); ++ib) {
            out[ia * b.cell_count() + ib] = pa * b.cell(ib);
        }
    }
    return JointDistribution(std::move(out_vars), std::move(out), cell_cap);
}

JointDistribution from_samples(const std::vector<std::vector<int>>& samples,
                               std::vector<Variable> variables) {
    if (samples.empty()) throw EmptySampleSet("no samples given");
    check_unique_names(variables);
    const std::size_t n = checked_cell_count(variables, JointDistribution::kDefaultCellCap);

    std::vector<std::size_t> strides(variables.size());
    std::size_t s = 1;
    for (std::size_t i = variables.size(); i-- > 0;) {
        strides[i] = s;
        s *= static_cast<std::size_t>(variables[i].alphabet.cardinality());
    }

    std::vector<std::size_t> counts(n, 0);
    for (const auto& sample : samples) {
        if (sample.size() != variables.size()) {
            throw OutOfRangeValue("sample arity mismatch");
        }
        std::size_t flat = 0;
        for (std::size_t i = 0; i < variables.size(); ++i) {
            if (sample[i] < 0 || sample[i] >= variables[i].alphabet.cardinality()) {
                throw OutOfRangeValue("sample symbol out of range for '" +
                                      variables[i].name + "'");
            }
            flat += static_cast<std::size_t>(sample[i]) * strides[i];
        }
        ++counts[flat];
    }

    std::vector<double> probs(n);
    const double total = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < n; ++i) probs[i] = static_cast<double>(counts[i]) / total;
    return JointDistribution(std::move(variables), std::move(probs));
}

JointDistribution reorder(const JointDistribution& d,
                          const std::vector<std::string>& order) {
    if (order.size() != d.variable_count()) {
        throw InvalidSpec("reorder must list every variable exactly once");
    }
    std::vector<std::size_t> src_idx;
    std::unordered_set<std::size_t> seen;
    bool identity = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = d.index_of(order[k]);
        if (!seen.insert(i).second) throw InvalidSpec("duplicate variable in reorder list");
        identity = identity && (i == k);
        src_idx.push_back(i);
    }
    if (identity) return d;

    std::vector<Variable> out_vars;
    for (std::size_t i : src_idx) out_vars.push_back(d.variables()[i]);

    // out_stride_of_src[i] = stride in the output tensor of input variable i
    std::vector<std::size_t> out_stride_of_src(d.variable_count());
    std::size_t s = 1;
    for (std::size_t k = order.size(); k-- > 0;) {
        out_stride_of_src[src_idx[k]] = s;
        s *= static_cast<std::size_t>(out_vars[k].alphabet.cardinality());
    }

    std::vector<double> out(d.cell_count());
    std::vector<int> digits(d.variable_count(), 0);
    for (std::size_t flat = 0; flat < d.cell_count(); ++flat) {
        std::size_t of = 0;
        for (std::size_t i = 0; i < d.variable_count(); ++i) {
            of += static_cast<std::size_t>(digits[i]) * out_stride_of_src[i];
        }
        out[of] = d.cell(flat);
        for (std::size_t i = d.variable_count(); i-- > 0;) {
            if (++digits[i] < d.cardinality(i)) break;
            digits[i] = 0;
        }
    }
    return JointDistribution(std::move(out_vars), std::move(out));
}

}  // namespace pidlab
