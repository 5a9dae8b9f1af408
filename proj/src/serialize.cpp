#include "pidlab/serialize.hpp"

#include <istream>
#include <ostream>
#include <vector>

namespace pidlab {

nlohmann::json to_document(const JointDistribution& d, const SystemSpec* spec) {
    nlohmann::json doc;
    doc["variables"] = nlohmann::json::array();
    for (const auto& v : d.variables()) {
        nlohmann::json jv{{"name", v.name}, {"cardinality", v.alphabet.cardinality()}};
        if (!v.alphabet.labels().empty()) jv["labels"] = v.alphabet.labels();
        doc["variables"].push_back(std::move(jv));
    }

    doc["cells"] = nlohmann::json::array();
    std::vector<int> assignment(d.variable_count());
    for (std::size_t flat = 0; flat < d.cell_count(); ++flat) {
        if (d.cell(flat) != 0.0) {
            d.unflatten(flat, assignment);
            doc["cells"].push_back({{"assignment", assignment}, {"p", d.cell(flat)}});
        }
    }

    if (spec != nullptr) {
        doc["sources"] = spec->sources;
        doc["target"] = spec->target;
    }
    return doc;
}

JointDistribution distribution_from_document(const nlohmann::json& doc,
                                             std::size_t cell_cap) {
    try {
        if (!doc.contains("variables") || !doc["variables"].is_array() ||
            doc["variables"].empty()) {
            throw ParseError("document needs a non-empty 'variables' array");
        }
        std::vector<Variable> vars;
        for (const auto& jv : doc["variables"]) {
            const auto name = jv.at("name").get<std::string>();
            const auto card = jv.at("cardinality").get<int>();
            if (jv.contains("labels")) {
                vars.push_back({name, Alphabet(card, jv["labels"].get<std::vector<std::string>>())});
            } else {
                vars.push_back({name, Alphabet(card)});
            }
        }

        std::vector<CellEntry> cells;
        if (doc.contains("cells")) {
            for (const auto& jc : doc["cells"]) {
                cells.push_back({jc.at("assignment").get<std::vector<int>>(),
                                 jc.at("p").get<double>()});
            }
        }
        return build(std::move(vars), cells, /*renormalize=*/false, cell_cap);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed distribution document: ") + e.what());
    }
}

std::optional<SystemSpec> spec_from_document(const nlohmann::json& doc) {
    if (!doc.contains("sources") && !doc.contains("target")) return std::nullopt;
    try {
        SystemSpec spec;
        spec.sources = doc.at("sources").get<std::vector<std::string>>();
        spec.target = doc.at("target").get<std::string>();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed system spec: ") + e.what());
    }
}

void write_document(std::ostream& os, const nlohmann::json& doc) {
    os << doc.dump(2) << '\n';
}

nlohmann::json read_document(std::istream& is) {
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid document: ") + e.what());
    }
}

}  // namespace pidlab
