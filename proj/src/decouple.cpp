#include "pidlab/decouple.hpp"

#include <numeric>

namespace pidlab {

namespace {

// One factor of the conditional-independence construction: a subset of
// source variables that enters the product through its joint conditional
// given the target. A primed segment is emitted as one composite variable
// (or a single primed copy); a retained segment keeps the original separate
// variables.
struct Segment {
    std::vector<std::string> names;  // subset, in source order
    bool primed = true;
};

JointDistribution reduce_to_system(const JointDistribution& d, const SystemSpec& spec) {
    std::vector<std::string> order = spec.sources;
    order.push_back(spec.target);
    if (order.size() == d.variable_count()) return reorder(d, order);
    return reorder(marginalize(d, order), order);
}

DecoupledSystem make_decoupled(const JointDistribution& sys, const SystemSpec& spec,
                               const std::vector<Segment>& segments,
                               std::size_t cell_cap) {
    const std::size_t t_card =
        static_cast<std::size_t>(sys.cardinality(sys.index_of(spec.target)));

    // Target marginal and, per segment, the joint (subset, T) marginal laid
    // out as [subset row-major][t].
    const JointDistribution t_marg = marginalize(sys, {spec.target});
    std::vector<std::vector<double>> cond;  // cond[k][b * t_card + t]
    std::vector<std::size_t> states;        // composite state count per segment
    std::size_t out_cells = t_card;
    for (const auto& seg : segments) {
        std::vector<std::string> keep = seg.names;
        keep.push_back(spec.target);
        const JointDistribution m = marginalize(sys, keep);
        std::vector<double> c(m.cell_count());
        const std::size_t b_states = m.cell_count() / t_card;
        for (std::size_t b = 0; b < b_states; ++b) {
            for (std::size_t t = 0; t < t_card; ++t) {
                const double pt = t_marg.cell(t);
                c[b * t_card + t] = pt > 0.0 ? m.cell(b * t_card + t) / pt : 0.0;
            }
        }
        if (out_cells > cell_cap / b_states) {
            throw CellCapExceeded("decoupled joint would exceed cell cap");
        }
        out_cells *= b_states;
        cond.push_back(std::move(c));
        states.push_back(b_states);
    }

    // Output variables: a primed segment becomes one variable, a retained
    // segment keeps its original variables; target last. The flat layout of
    // a composite block equals that of its separate component variables, so
    // both cases share the same tensor fill.
    std::vector<Variable> out_vars;
    std::vector<std::pair<std::string, std::vector<std::string>>> prime_map;
    std::vector<std::string> retained;
    for (const auto& seg : segments) {
        if (seg.primed) {
            if (seg.names.size() == 1) {
                out_vars.push_back({primed_name(seg.names),
                                    sys.variables()[sys.index_of(seg.names[0])].alphabet});
            } else {
                int card = 1;
                for (const auto& n : seg.names) card *= sys.cardinality(sys.index_of(n));
                out_vars.push_back({primed_name(seg.names), Alphabet(card)});
            }
            prime_map.emplace_back(out_vars.back().name, seg.names);
        } else {
            for (const auto& n : seg.names) {
                out_vars.push_back(sys.variables()[sys.index_of(n)]);
                retained.push_back(n);
            }
        }
    }
    out_vars.push_back(sys.variables()[sys.index_of(spec.target)]);

    std::vector<double> probs(out_cells, 0.0);
    std::vector<std::size_t> b(segments.size(), 0);
    for (std::size_t flat = 0; flat < out_cells; flat += t_card) {
        for (std::size_t t = 0; t < t_card; ++t) {
            double p = t_marg.cell(t);
            for (std::size_t k = 0; k < segments.size() && p > 0.0; ++k) {
                p *= cond[k][b[k] * t_card + t];
            }
            probs[flat + t] = p;
        }
        for (std::size_t k = segments.size(); k-- > 0;) {
            if (++b[k] < states[k]) break;
            b[k] = 0;
        }
    }

    return DecoupledSystem{JointDistribution(std::move(out_vars), std::move(probs), cell_cap),
                           std::move(prime_map), std::move(retained), spec.target};
}

}  // namespace

std::string primed_name(const std::vector<std::string>& subset) {
    std::string name;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i > 0) name += '+';
        name += subset[i];
    }
    return name + '\'';
}

DecoupledSystem decouple_pair(const JointDistribution& d, const SystemSpec& spec,
                              std::size_t i, std::size_t cell_cap) {
    spec.validate(d);
    if (i >= spec.sources.size()) {
        throw InvalidSpec("source index " + std::to_string(i) + " out of range");
    }
    const JointDistribution sys = reduce_to_system(d, spec);
    std::vector<Segment> segments;
    segments.push_back({{spec.sources[i]}, true});
    Segment rest{{}, false};
    for (std::size_t k = 0; k < spec.sources.size(); ++k) {
        if (k != i) rest.names.push_back(spec.sources[k]);
    }
    if (!rest.names.empty()) segments.push_back(std::move(rest));
    return make_decoupled(sys, spec, segments, cell_cap);
}

DecoupledSystem decouple_complements(const JointDistribution& d, const SystemSpec& spec,
                                     std::size_t cell_cap) {
    spec.validate(d);
    const std::size_t n = spec.sources.size();
    if (n < 2) throw WrongArity("complement family needs at least two sources");
    const JointDistribution sys = reduce_to_system(d, spec);
    std::vector<Segment> segments;
    for (std::size_t k = 0; k < n; ++k) {
        Segment seg;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != k) seg.names.push_back(spec.sources[j]);
        }
        segments.push_back(std::move(seg));
    }
    return make_decoupled(sys, spec, segments, cell_cap);
}

DecoupledSystem decouple_k_subsets(const JointDistribution& d, const SystemSpec& spec,
                                   int k, std::size_t cell_cap) {
    spec.validate(d);
    const int n = static_cast<int>(spec.sources.size());
    if (k < 1 || k > n) {
        throw KOutOfRange("subset size " + std::to_string(k) + " not in [1, " +
                          std::to_string(n) + "]");
    }
    const JointDistribution sys = reduce_to_system(d, spec);

    // All k-subsets of {0..n-1} in lexicographic order.
    std::vector<Segment> segments;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        Segment seg;
        for (int j : idx) seg.names.push_back(spec.sources[static_cast<std::size_t>(j)]);
        segments.push_back(std::move(seg));

        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return make_decoupled(sys, spec, segments, cell_cap);
}

}  // namespace pidlab
