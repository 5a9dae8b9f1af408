#ifndef PIDLAB_SERIALIZE_HPP
#define PIDLAB_SERIALIZE_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "pidlab/distribution.hpp"

namespace pidlab {

// Canonical text form of a distribution:
//
//   {
//     "variables": [{"name": "S1", "cardinality": 2, "labels": ["a","b"]}, ...],
//     "cells":     [{"assignment": [0,0,0], "p": 0.5}, ...],
//     "sources":   ["S1", "S2"],       // optional
//     "target":    "T"                 // optional
//   }
//
// Cells not listed are zero. "labels" may be omitted per variable;
// "sources"/"target" carry an optional SystemSpec.

nlohmann::json to_document(const JointDistribution& d,
                           const SystemSpec* spec = nullptr);

JointDistribution distribution_from_document(
    const nlohmann::json& doc,
    std::size_t cell_cap = JointDistribution::kDefaultCellCap);

std::optional<SystemSpec> spec_from_document(const nlohmann::json& doc);

void write_document(std::ostream& os, const nlohmann::json& doc);
nlohmann::json read_document(std::istream& is);

}  // namespace pidlab

#endif  // PIDLAB_SERIALIZE_HPP
