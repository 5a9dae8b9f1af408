#ifndef PIDLAB_MEASURES_HPP
#define PIDLAB_MEASURES_HPP

#include <map>
#include <string>
#include <vector>

#include "pidlab/decouple.hpp"
#include "pidlab/info.hpp"

namespace pidlab {

// The four two-source information atoms plus the mutual informations they
// reconstruct: red + un[i] = mi_marginals[i], syn + un[i] = cmi[i], and
// red + syn + sum(un) = mi_joint, all within 1e-10. Red and Un are
// nonnegative up to rounding; Syn may be genuinely negative.
struct PidResult {
    Bits red = 0;
    std::vector<Bits> un;
    Bits syn = 0;
    Bits mi_joint = 0;
    std::vector<Bits> mi_marginals;
    std::vector<Bits> cmi;
};

// SE_K for K = 2..N plus their total; tse equals the sum of the se values
// within 1e-10 (checked at construction).
struct SynergySpectrum {
    std::map<int, Bits> se;
    Bits tse = 0;
};

// Unique information from source i: I(S_i'; T | other sources) on the
// pairwise-decoupled system.
Bits unique_info(const JointDistribution& d, const SystemSpec& spec, std::size_t i);

// Two-source redundancy I(S1;T) - Un(S1 -> T | S2), and the equivalent
// I(S1'; S2) route on the decoupled system.
Bits redundant_info(const JointDistribution& d, const SystemSpec& spec);
Bits redundant_info_alt(const JointDistribution& d, const SystemSpec& spec);

// Two-source synergy I(S1;T|S2) - Un(S1 -> T | S2), and the equivalent
// H(T|S1',S2) - H(T|S1,S2) route.
Bits synergy2(const JointDistribution& d, const SystemSpec& spec);
Bits synergy2_alt(const JointDistribution& d, const SystemSpec& spec);

// N-source synergy: H(T | complement family) - H(T | sources).
Bits synergy_general(const JointDistribution& d, const SystemSpec& spec);

// K-th order synergistic effect: H(T | (K-1)-subset family) - H(T | K-subset
// family), for 2 <= K <= N.
Bits se_k(const JointDistribution& d, const SystemSpec& spec, int k);

// Total synergistic effect, computed both as H(T | singleton family) -
// H(T | sources) and as the sum of SE_K; the two routes must agree.
SynergySpectrum tse(const JointDistribution& d, const SystemSpec& spec);

// All four atoms of a two-source system. Redundancy is computed from both
// sides and must agree within 1e-10.
PidResult pid2_full(const JointDistribution& d, const SystemSpec& spec);

// For each member, the synergy from all other members to it; their sum can
// exceed the joint entropy of the system.
struct WespReport {
    std::vector<Bits> syn_per_member;
    Bits sum_syn = 0;
    Bits joint_entropy = 0;
    bool violated = false;  // sum_syn > joint_entropy beyond tolerance
};
WespReport wesp_audit(const JointDistribution& d, const std::vector<std::string>& members);

// One audited inequality or identity: pass iff margin >= -tolerance.
// For identities the margin is -|residual|; for bounds it is bound - value.
struct AxiomCheck {
    std::string name;
    double margin = 0;
    bool pass = false;
};

struct AuditReport {
    std::vector<AxiomCheck> checks;
    double tolerance = 0;
    bool all_pass() const;
};

// Audits the measure axioms on one system: reconstruction identities,
// commutativity and the equivalent-form identities (two sources),
// nonnegativity and upper bounds for redundancy and unique information,
// unique-information monotonicity under added conditioning, and the synergy
// subset bound plus grouping monotonicity.
AuditReport axiom_audit(const JointDistribution& d, const SystemSpec& spec,
                        double tolerance = 1e-9);

std::string to_text(const AuditReport& report);

// Two fixed three-source systems whose pairwise-forced atom values coincide
// while their joint mutual informations differ; the numerical exhibit that
// no lattice-consistent assignment of atoms can exist.
struct InconsistencyReport {
    AuditReport premises;
    Bits system1_mi = 0;           // 3 bits
    Bits system2_mi = 0;           // 2 bits
    Bits forced_atom_sum = 0;      // 1 + 1 + 1 in both systems
    bool sum_exceeds_system2_mi = false;
};
InconsistencyReport fixture_inconsistency_check();

std::string to_text(const InconsistencyReport& report);

}  // namespace pidlab

#endif  // PIDLAB_MEASURES_HPP
