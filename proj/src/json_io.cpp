#include "flowcube/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace flowcube::io {

using funcspace::RangeTag;
using funcspace::SampledFunction;
using nlohmann::json;

json sampled_function_to_json(const SampledFunction& f) {
    json values = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < f.components(); ++c) row.push_back(f.value_at(i, c));
        values.push_back(std::move(row));
    }
    return json{{"start", f.start()},
                {"step", f.step()},
                {"components", f.components()},
                {"range", funcspace::to_string(f.range())},
                {"values", std::move(values)}};
}

SampledFunction sampled_function_from_json(const json& j) {
    for (const char* key : {"start", "step", "components", "range", "values"}) {
        if (!j.contains(key))
            throw std::invalid_argument(std::string("sampled function JSON missing key: ") + key);
    }
    const auto m = j.at("components").get<std::size_t>();
    const auto range = funcspace::range_tag_from_string(j.at("range").get<std::string>());
    const auto& rows = j.at("values");
    if (!rows.is_array()) throw std::invalid_argument("sampled function JSON: values must be an array");

    std::vector<double> flat;
    flat.reserve(rows.size() * m);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != m)
            throw std::invalid_argument("sampled function JSON: each row needs `components` entries");
        for (const auto& v : row) flat.push_back(v.get<double>());
    }
    return SampledFunction(j.at("start").get<double>(), j.at("step").get<double>(), m,
                           std::move(flat), range);
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    json j;
    in >> j;
    return j;
}

SampledFunction load_sampled_function(const std::string& path) {
    return sampled_function_from_json(read_json_file(path));
}

void save_sampled_function(const std::string& path, const SampledFunction& f,
                           const json& config_echo) {
    json j = sampled_function_to_json(f);
    if (!config_echo.is_null()) j["config"] = config_echo;
    write_json_file(path, j);
}

}  // namespace flowcube::io
