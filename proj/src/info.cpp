#include "pidlab/info.hpp"

#include <cmath>
#include <unordered_set>

namespace pidlab {

namespace {

void check_nonempty(const VarSet& vars, const char* which) {
    if (vars.empty()) throw InvalidSpec(std::string(which) + " set must be non-empty");
}

void check_disjoint(const VarSet& a, const VarSet& b) {
    std::unordered_set<std::string_view> seen(a.begin(), a.end());
    for (const auto& name : b) {
        if (seen.count(name) != 0) {
            throw OverlappingSets("variable '" + name + "' appears in both sets");
        }
    }
}

VarSet unite(const VarSet& a, const VarSet& b) {
    VarSet u = a;
    u.insert(u.end(), b.begin(), b.end());
    return u;
}

double raw_entropy(const JointDistribution& d, const VarSet& vars) {
    VarSet unique;
    std::unordered_set<std::string_view> seen;
    for (const auto& name : vars) {
        d.index_of(name);  // throws UnknownVariable early
        if (seen.insert(name).second) unique.push_back(name);
    }
    const JointDistribution m =
        unique.size() == d.variable_count() ? d : marginalize(d, unique);
    double h = 0.0;
    for (double p : m.probs()) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

double floor_clamp(double v, const char* what) {
    if (v >= 0.0) return v;
    if (v >= kNegativeFloor) return 0.0;
    throw InternalConsistency(std::string(what) + " came out " + std::to_string(v) +
                              ", below the numerical floor");
}

}  // namespace

Bits entropy(const JointDistribution& d, const VarSet& vars) {
    check_nonempty(vars, "entropy");
    return raw_entropy(d, vars);
}

Bits cond_entropy(const JointDistribution& d, const VarSet& vars, const VarSet& given) {
    check_nonempty(vars, "entropy");
    check_nonempty(given, "conditioning");
    check_disjoint(vars, given);
    return floor_clamp(raw_entropy(d, unite(vars, given)) - raw_entropy(d, given),
                       "conditional entropy");
}

Bits mutual_info(const JointDistribution& d, const VarSet& a, const VarSet& b) {
    check_nonempty(a, "mutual information");
    check_nonempty(b, "mutual information");
    check_disjoint(a, b);
    return floor_clamp(raw_entropy(d, a) + raw_entropy(d, b) - raw_entropy(d, unite(a, b)),
                       "mutual information");
}

Bits cond_mutual_info(const JointDistribution& d, const VarSet& a, const VarSet& b,
                      const VarSet& given) {
    check_nonempty(a, "mutual information");
    check_nonempty(b, "mutual information");
    check_nonempty(given, "conditioning");
    check_disjoint(a, b);
    check_disjoint(a, given);
    check_disjoint(b, given);
    const double v = raw_entropy(d, unite(a, given)) + raw_entropy(d, unite(b, given)) -
                     raw_entropy(d, given) - raw_entropy(d, unite(unite(a, b), given));
    return floor_clamp(v, "conditional mutual information");
}

}  // namespace pidlab
