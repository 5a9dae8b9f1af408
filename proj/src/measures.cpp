#include "pidlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pidlab/fixtures.hpp"

namespace pidlab {

namespace {

constexpr double kRouteTolerance = 1e-10;

VarSet block_names(const DecoupledSystem& dec) {
    VarSet names;
    names.reserve(dec.prime_map.size());
    for (const auto& [name, subset] : dec.prime_map) names.push_back(name);
    return names;
}

void require_two_sources(const SystemSpec& spec, const char* what) {
    if (spec.sources.size() != 2) {
        throw WrongArity(std::string(what) + " needs exactly two sources, got " +
                         std::to_string(spec.sources.size()));
    }
}

Bits family_cond_entropy(const JointDistribution& d, const SystemSpec& spec, int k) {
    const DecoupledSystem fam = decouple_k_subsets(d, spec, k);
    return cond_entropy(fam.dist, {spec.target}, block_names(fam));
}

// Nonempty strict subsets of `names`; exhaustive for up to four names,
// singletons only beyond that to keep audits desk-scale.
std::vector<VarSet> strict_subsets(const VarSet& names) {
    std::vector<VarSet> subsets;
    const std::size_t n = names.size();
    if (n <= 4) {
        for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
            VarSet s;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::size_t{1} << i)) s.push_back(names[i]);
            }
            subsets.push_back(std::move(s));
        }
    } else {
        for (const auto& name : names) subsets.push_back({name});
    }
    return subsets;
}

std::string joined(const VarSet& names) {
    std::string s;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) s += ',';
        s += names[i];
    }
    return s;
}

}  // namespace

Bits unique_info(const JointDistribution& d, const SystemSpec& spec, std::size_t i) {
    const DecoupledSystem dec = decouple_pair(d, spec, i);
    const std::string& primed = dec.prime_map.front().first;
    if (dec.retained.empty()) return mutual_info(dec.dist, {primed}, {spec.target});
    return cond_mutual_info(dec.dist, {primed}, {spec.target}, dec.retained);
}

Bits redundant_info(const JointDistribution& d, const SystemSpec& spec) {
    require_two_sources(spec, "redundant_info");
    spec.validate(d);
    const Bits mi1 = mutual_info(d, {spec.sources[0]}, {spec.target});
    const Bits red = mi1 - unique_info(d, spec, 0);
#ifndef NDEBUG
    if (std::abs(red - redundant_info_alt(d, spec)) > kRouteTolerance) {
        throw InternalConsistency("redundancy routes disagree");
    }
#endif
    return red;
}

Bits redundant_info_alt(const JointDistribution& d, const SystemSpec& spec) {
    require_two_sources(spec, "redundant_info_alt");
    const DecoupledSystem dec = decouple_pair(d, spec, 0);
    return mutual_info(dec.dist, {dec.prime_map.front().first}, {spec.sources[1]});
}

Bits synergy2(const JointDistribution& d, const SystemSpec& spec) {
    require_two_sources(spec, "synergy2");
    spec.validate(d);
    const Bits cmi1 = cond_mutual_info(d, {spec.sources[0]}, {spec.target},
                                       {spec.sources[1]});
    const Bits syn = cmi1 - unique_info(d, spec, 0);
#ifndef NDEBUG
    if (std::abs(syn - synergy2_alt(d, spec)) > kRouteTolerance) {
        throw InternalConsistency("synergy routes disagree");
    }
#endif
    return syn;
}

Bits synergy2_alt(const JointDistribution& d, const SystemSpec& spec) {
    require_two_sources(spec, "synergy2_alt");
    spec.validate(d);
    const DecoupledSystem dec = decouple_pair(d, spec, 0);
    return cond_entropy(dec.dist, {spec.target},
                        {dec.prime_map.front().first, spec.sources[1]}) -
           cond_entropy(d, {spec.target}, spec.sources);
}

Bits synergy_general(const JointDistribution& d, const SystemSpec& spec) {
    spec.validate(d);
    const DecoupledSystem dec = decouple_complements(d, spec);
    return cond_entropy(dec.dist, {spec.target}, block_names(dec)) -
           cond_entropy(d, {spec.target}, spec.sources);
}

Bits se_k(const JointDistribution& d, const SystemSpec& spec, int k) {
    spec.validate(d);
    const int n = static_cast<int>(spec.sources.size());
    if (k < 2 || k > n) {
        throw KOutOfRange("SE_K defined for K in [2, " + std::to_string(n) + "], got " +
                          std::to_string(k));
    }
    return family_cond_entropy(d, spec, k - 1) - family_cond_entropy(d, spec, k);
}

SynergySpectrum tse(const JointDistribution& d, const SystemSpec& spec) {
    spec.validate(d);
    const int n = static_cast<int>(spec.sources.size());
    if (n < 2) throw WrongArity("total synergistic effect needs at least two sources");

    std::vector<Bits> h(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) h[static_cast<std::size_t>(k)] = family_cond_entropy(d, spec, k);

    SynergySpectrum out;
    Bits sum = 0.0;
    for (int k = 2; k <= n; ++k) {
        const Bits v = h[static_cast<std::size_t>(k - 1)] - h[static_cast<std::size_t>(k)];
        out.se[k] = v;
        sum += v;
    }
    out.tse = h[1] - cond_entropy(d, {spec.target}, spec.sources);
    if (std::abs(out.tse - sum) > kRouteTolerance) {
        throw InternalConsistency("telescoped and direct total synergy disagree by " +
                                  std::to_string(out.tse - sum));
    }
    return out;
}

PidResult pid2_full(const JointDistribution& d, const SystemSpec& spec) {
    require_two_sources(spec, "pid2_full");
    spec.validate(d);
    const std::string& s1 = spec.sources[0];
    const std::string& s2 = spec.sources[1];

    PidResult r;
    r.mi_joint = mutual_info(d, {s1, s2}, {spec.target});
    r.mi_marginals = {mutual_info(d, {s1}, {spec.target}),
                      mutual_info(d, {s2}, {spec.target})};
    r.cmi = {cond_mutual_info(d, {s1}, {spec.target}, {s2}),
             cond_mutual_info(d, {s2}, {spec.target}, {s1})};
    r.un = {unique_info(d, spec, 0), unique_info(d, spec, 1)};

    const Bits red1 = r.mi_marginals[0] - r.un[0];
    const Bits red2 = r.mi_marginals[1] - r.un[1];
    if (std::abs(red1 - red2) > kRouteTolerance) {
        throw InternalConsistency("redundancy differs across sources by " +
                                  std::to_string(red1 - red2));
    }
    r.red = red1;
    r.syn = r.cmi[0] - r.un[0];
    return r;
}

WespReport wesp_audit(const JointDistribution& d, const std::vector<std::string>& members) {
    if (members.size() < 3) throw WrongArity("audit needs at least three members");
    const JointDistribution m = marginalize(d, members);

    WespReport rep;
    rep.joint_entropy = entropy(m, members);
    for (std::size_t i = 0; i < members.size(); ++i) {
        SystemSpec spec;
        spec.target = members[i];
        for (std::size_t j = 0; j < members.size(); ++j) {
            if (j != i) spec.sources.push_back(members[j]);
        }
        rep.syn_per_member.push_back(synergy_general(m, spec));
        rep.sum_syn += rep.syn_per_member.back();
    }
    rep.violated = rep.sum_syn > rep.joint_entropy + 1e-9;
    return rep;
}

bool AuditReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AxiomCheck& c) { return c.pass; });
}

AuditReport axiom_audit(const JointDistribution& d, const SystemSpec& spec,
                        double tolerance) {
    spec.validate(d);
    const std::size_t n = spec.sources.size();
    if (n < 2) throw WrongArity("audit needs at least two sources");

    AuditReport rep;
    rep.tolerance = tolerance;
    auto add = [&](std::string name, double margin) {
        rep.checks.push_back({std::move(name), margin, margin >= -tolerance});
    };
    auto add_eq = [&](std::string name, double residual) {
        add(std::move(name), -std::abs(residual));
    };

    std::vector<Bits> un(n), mi(n);
    for (std::size_t i = 0; i < n; ++i) {
        un[i] = unique_info(d, spec, i);
        mi[i] = mutual_info(d, {spec.sources[i]}, {spec.target});
    }

    for (std::size_t i = 0; i < n; ++i) {
        const std::string& si = spec.sources[i];
        VarSet rest;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) rest.push_back(spec.sources[j]);
        }

        add("un_nonneg[" + si + "]", un[i]);
        add("un_le_mi[" + si + "]", mi[i] - un[i]);
        add("un_le_cond_entropy[" + si + "]",
            cond_entropy(d, {spec.target}, rest) - un[i]);

        // Conditioning on fewer sources can only increase unique information.
        for (const auto& subset : strict_subsets(rest)) {
            VarSet keep{si};
            keep.insert(keep.end(), subset.begin(), subset.end());
            SystemSpec sub{keep, spec.target};
            keep.push_back(spec.target);
            const Bits un_sub = unique_info(marginalize(d, keep), sub, 0);
            add("un_monotone[" + si + "|{" + joined(subset) + "}]", un_sub - un[i]);
        }
    }

    if (n == 2) {
        const PidResult pr = pid2_full(d, spec);
        add_eq("eq1_reconstruction",
               pr.red + pr.syn + pr.un[0] + pr.un[1] - pr.mi_joint);
        add_eq("eq2_source1", pr.red + pr.un[0] - pr.mi_marginals[0]);
        add_eq("eq2_source2", pr.red + pr.un[1] - pr.mi_marginals[1]);
        add_eq("eq3_source1", pr.syn + pr.un[0] - pr.cmi[0]);
        add_eq("eq3_source2", pr.syn + pr.un[1] - pr.cmi[1]);
        add_eq("red_commutative",
               (pr.mi_marginals[0] - pr.un[0]) - (pr.mi_marginals[1] - pr.un[1]));
        add_eq("red_alt_route", pr.red - redundant_info_alt(d, spec));
        add_eq("syn_alt_route", pr.syn - synergy2_alt(d, spec));
        add("red_nonneg", pr.red);
        add("red_le_min_mi", std::min(mi[0], mi[1]) - pr.red);
    }

    const Bits syn = synergy_general(d, spec);
    const Bits ht_all = cond_entropy(d, {spec.target}, spec.sources);
    double bound = std::numeric_limits<double>::infinity();
    for (const auto& subset : strict_subsets(spec.sources)) {
        bound = std::min(bound, cond_entropy(d, {spec.target}, subset));
    }
    add("syn_subset_bound", (bound - ht_all) - syn);

    if (n >= 3) {
        // Merging two sources into one composite can only increase synergy.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::string merged = spec.sources[i] + "+" + spec.sources[j];
                const JointDistribution g =
                    group(d, {spec.sources[i], spec.sources[j]}, merged);
                SystemSpec gspec;
                gspec.target = spec.target;
                gspec.sources.push_back(merged);
                for (std::size_t k = 0; k < n; ++k) {
                    if (k != i && k != j) gspec.sources.push_back(spec.sources[k]);
                }
                add("syn_group_monotone[" + merged + "]",
                    synergy_general(g, gspec) - syn);
            }
        }
    }
    return rep;
}

std::string to_text(const AuditReport& report) {
    std::ostringstream os;
    for (const auto& c : report.checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name << "  margin=" << c.margin << '\n';
    }
    os << (report.all_pass() ? "all checks passed" : "CHECKS FAILED")
       << " (tolerance " << report.tolerance << ")\n";
    return os.str();
}

InconsistencyReport fixture_inconsistency_check() {
    InconsistencyReport rep;
    rep.premises.tolerance = 1e-12;
    auto add_eq = [&](std::string name, double residual) {
        rep.premises.checks.push_back(
            {std::move(name), -std::abs(residual), std::abs(residual) <= 1e-12});
    };

    // System 1: target split into its three independent sub-target bits.
    const JointDistribution s1 = system1_expanded();
    const VarSet t_all{"T1", "T2", "T3"};
    rep.system1_mi = mutual_info(s1, {"S1", "S2", "S3"}, t_all);
    add_eq("system1_mi_joint_equals_3", rep.system1_mi - 3.0);
    add_eq("system1_subtarget_mi_12", mutual_info(s1, {"T1"}, {"T2"}));
    add_eq("system1_subtarget_mi_13", mutual_info(s1, {"T1"}, {"T3"}));
    add_eq("system1_subtarget_mi_23", mutual_info(s1, {"T2"}, {"T3"}));
    add_eq("system1_subtarget_total_correlation",
           entropy(s1, {"T1"}) + entropy(s1, {"T2"}) + entropy(s1, {"T3"}) -
               entropy(s1, t_all));

    // Each sub-target is seen only by its own source, yet fully determined
    // by the other two sources jointly; that pins a unit atom per rotation.
    struct Rotation {
        const char* ti;
        const char* own;
        const char* other1;
        const char* other2;
    };
    const Rotation rotations[] = {{"T1", "S1", "S2", "S3"},
                                  {"T2", "S2", "S1", "S3"},
                                  {"T3", "S3", "S1", "S2"}};
    for (const auto& rot : rotations) {
        const std::string tag = std::string("[") + rot.ti + "]";
        add_eq("system1_zero_mi_" + std::string(rot.other1) + tag,
               mutual_info(s1, {rot.other1}, {rot.ti}));
        add_eq("system1_zero_mi_" + std::string(rot.other2) + tag,
               mutual_info(s1, {rot.other2}, {rot.ti}));
        add_eq("system1_pair_determines" + tag,
               cond_entropy(s1, {rot.ti}, {rot.other1, rot.other2}));
        add_eq("system1_forced_atom" + tag,
               mutual_info(s1, {rot.own}, {rot.ti}) - 1.0);
    }

    // System 2: every source pair is independent and determines the target
    // both ways, so the pair-level shared atom is zero and the single-source
    // atoms are pinned to one bit each.
    const Fixture s2 = make(FixtureId::xor_triple_system2);
    rep.system2_mi = mutual_info(s2.dist, s2.spec.sources, {s2.spec.target});
    add_eq("system2_mi_joint_equals_2", rep.system2_mi - 2.0);

    rep.forced_atom_sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            const std::string a = s2.spec.sources[i];
            const std::string b = s2.spec.sources[j];
            const std::string tag = "[" + a + "," + b + "]";
            add_eq("system2_sources_independent" + tag,
                   mutual_info(s2.dist, {a}, {b}));
            add_eq("system2_pair_determines_target" + tag,
                   cond_entropy(s2.dist, {s2.spec.target}, {a, b}));
            add_eq("system2_target_determines_pair" + tag,
                   cond_entropy(s2.dist, {a, b}, {s2.spec.target}));
        }
        const Bits forced = mutual_info(s2.dist, {s2.spec.sources[i]}, {s2.spec.target});
        add_eq("system2_forced_atom[" + s2.spec.sources[i] + "]", forced - 1.0);
        rep.forced_atom_sum += forced;
    }

    rep.sum_exceeds_system2_mi = rep.forced_atom_sum > rep.system2_mi + 1e-9;
    return rep;
}

std::string to_text(const InconsistencyReport& report) {
    std::ostringstream os;
    os << to_text(report.premises);
    os << "system1 joint mutual information: " << report.system1_mi << " bits\n";
    os << "system2 joint mutual information: " << report.system2_mi << " bits\n";
    os << "forced atom sum in both systems:  " << report.forced_atom_sum << " bits\n";
    os << (report.sum_exceeds_system2_mi
               ? "forced atoms exceed system2 information: no consistent assignment exists\n"
               : "no inconsistency exhibited\n");
    return os.str();
}

}  // namespace pidlab
