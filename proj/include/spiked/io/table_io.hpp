#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiked/distributions/table.hpp"
#include "spiked/error.hpp"

namespace spiked::io {

inline constexpr const char* kTableSchema = "spiked.table.v1";

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline nlohmann::json model_to_json(const SpikedModel& m) {
    return {{"M", m.M}, {"N", m.N}, {"spikes", m.spikes}};
}

inline SpikedModel model_from_json(const nlohmann::json& j) {
    SpikedModel m;
    m.M = j.at("M").get<int>();
    m.N = j.at("N").get<int>();
    m.spikes = j.at("spikes").get<std::vector<double>>();
    return m;
}

inline nlohmann::json law_to_json(const LawSpec& law) {
    nlohmann::json params = nlohmann::json::object();
    switch (law.kind) {
        case LawKind::Fk:
        case LawKind::Gk: params["k"] = law.k; break;
        case LawKind::FkInterp:
            params["k"] = law.k;
            params["w"] = law.w;
            break;
        case LawKind::FiniteMN: params["model"] = model_to_json(law.model); break;
        default: break;
    }
    return {{"name", law_kind_name(law.kind)}, {"label", law.label()}, {"parameters", params}};
}

inline LawSpec law_from_json(const nlohmann::json& j) {
    LawSpec law;
    law.kind = parse_law_kind(j.at("name").get<std::string>());
    const auto& p = j.at("parameters");
    if (law.kind == LawKind::F1) law.k = 1;
    if (p.contains("k")) law.k = p.at("k").get<int>();
    if (p.contains("w")) law.w = p.at("w").get<std::vector<double>>();
    if (p.contains("model")) law.model = model_from_json(p.at("model"));
    return law;
}

/// Metadata written next to a table.
inline nlohmann::json table_sidecar(const DistributionTable& t) {
    return {{"schema", kTableSchema},
            {"columns", {"x", "value"}},
            {"law", law_to_json(t.law())},
            {"accuracy", t.accuracy()},
            {"grid_size", t.grid_size()},
            {"grid_size_check", 2 * t.grid_size()},
            {"points", t.xs().size()},
            {"x_min", t.xs().front()},
            {"x_max", t.xs().back()}};
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    std::filesystem::path p = csv;
    return p.replace_extension(".json");
}

inline void write_table_csv(const DistributionTable& t, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "x,value\n";
    for (std::size_t i = 0; i < t.xs().size(); ++i)
        out << format_double(t.xs()[i]) << ',' << format_double(t.values()[i]) << '\n';
    std::ofstream side(sidecar_path(path));
    if (!side) throw std::runtime_error("cannot open " + sidecar_path(path).string() + " for writing");
    side << table_sidecar(t).dump(2) << '\n';
}

/// Single JSON document holding metadata and rows.
inline void write_table_json(const DistributionTable& t, const std::filesystem::path& path) {
    nlohmann::json doc = table_sidecar(t);
    doc["x"] = t.xs();
    doc["value"] = t.values();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
}

inline DistributionTable read_table_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "x,value") throw precondition_error(path.string() + ": expected header 'x,value'");
    std::vector<double> xs, values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw precondition_error(path.string() + ": malformed row '" + line + "'");
        xs.push_back(std::stod(line.substr(0, comma)));
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    std::ifstream side(sidecar_path(path));
    if (!side) throw std::runtime_error("missing sidecar " + sidecar_path(path).string());
    const nlohmann::json meta = nlohmann::json::parse(side);
    if (meta.at("schema").get<std::string>() != kTableSchema)
        throw precondition_error("unsupported table schema " + meta.at("schema").get<std::string>());
    return DistributionTable(law_from_json(meta.at("law")), std::move(xs), std::move(values),
                             meta.at("accuracy").get<double>(), meta.at("grid_size").get<int>());
}

}  // namespace spiked::io
