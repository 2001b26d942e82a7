// JSON persistence for sampled functions.
//
// Schema:
//   {"start": float, "step": float, "components": int,
//    "range": "unit"|"symmetric", "values": [[float,...],...]}
//
// Readers ignore unknown keys, so writers are free to attach a "config"
// echo alongside the required fields.  Doubles round-trip exactly
// (shortest-representation serialization).

#pragma once

#include <string>

#include "json.hpp"

#include "flowcube/funcspace.hpp"

namespace flowcube::io {

nlohmann::json sampled_function_to_json(const funcspace::SampledFunction& f);
funcspace::SampledFunction sampled_function_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

funcspace::SampledFunction load_sampled_function(const std::string& path);
void save_sampled_function(const std::string& path, const funcspace::SampledFunction& f,
                           const nlohmann::json& config_echo);

}  // namespace flowcube::io
