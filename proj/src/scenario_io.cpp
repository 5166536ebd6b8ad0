#include "nearopt/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "nearopt/error.hpp"

namespace nearopt::cep {
namespace {

using nlohmann::json;

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

double parse_number(const std::string& text, const std::string& where) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) throw Error(ErrorCode::ParseError, where + ": '" + text + "' is not a number");
    return value;
}

double number_or_inf(const json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    const json& v = doc.at(key);
    if (v.is_null()) return kInf;
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "Infinity")) return kInf;
    return v.get<double>();
}

std::vector<double> series(const json& value, const std::filesystem::path& base_dir) {
    if (value.is_string()) {
        std::filesystem::path p = value.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        return read_series_csv(p);
    }
    return value.get<std::vector<double>>();
}

GeneratorKind generator_kind(const std::string& text) {
    if (text == "dispatchable") return GeneratorKind::Dispatchable;
    if (text == "renewable") return GeneratorKind::Renewable;
    if (text == "fixed") return GeneratorKind::Fixed;
    throw Error(ErrorCode::ParseError, "unknown generator kind '" + text + "'");
}

LineKind line_kind(const std::string& text) {
    if (text == "AC" || text == "ac") return LineKind::AC;
    if (text == "DC" || text == "dc") return LineKind::DC;
    throw Error(ErrorCode::ParseError, "unknown line kind '" + text + "'");
}

}  // namespace

std::vector<double> read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read time series file " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "timestep,value") {
        throw Error(ErrorCode::ParseError, path.string() + ": expected header 'timestep,value'");
    }
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (comma == std::string::npos) throw Error(ErrorCode::ParseError, where + ": expected two columns");
        const double step = parse_number(trim(std::string_view(line).substr(0, comma)), where);
        if (step != static_cast<double>(values.size())) {
            throw Error(ErrorCode::ParseError, where + ": timestep " + std::to_string(values.size()) + " expected");
        }
        values.push_back(parse_number(trim(std::string_view(line).substr(comma + 1)), where));
    }
    return values;
}

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
    try {
        ScenarioConfig config;
        config.horizon = doc.at("horizon").get<std::size_t>();
        config.step_hours = doc.value("step_hours", config.step_hours);
        config.voll = doc.value("voll", config.voll);
        config.co2_cap = number_or_inf(doc, "co2_cap", kInf);

        for (const json& n : doc.at("nodes")) {
            config.nodes.push_back(Node{n.at("id").get<std::string>(), series(n.at("load"), base_dir)});
        }
        for (const json& l : doc.value("lines", json::array())) {
            Line line;
            line.id = l.at("id").get<std::string>();
            line.from = l.at("from").get<std::string>();
            line.to = l.at("to").get<std::string>();
            line.kind = line_kind(l.value("kind", std::string("AC")));
            line.length_km = l.at("length_km").get<double>();
            line.initial_capacity = l.value("initial_capacity", 0.0);
            line.max_capacity = number_or_inf(l, "max_capacity", line.initial_capacity);
            line.capex = l.value("capex", 0.0);
            line.flow_limit_factor = l.value("flow_limit_factor", line.flow_limit_factor);
            config.lines.push_back(std::move(line));
        }
        for (const json& g : doc.value("generators", json::array())) {
            GeneratorTech gen;
            gen.id = g.at("id").get<std::string>();
            gen.node = g.at("node").get<std::string>();
            gen.technology = g.value("technology", std::string());
            gen.kind = generator_kind(g.at("kind").get<std::string>());
            gen.capex = g.value("capex", 0.0);
            gen.opex = g.value("opex", 0.0);
            gen.co2_rate = g.value("co2_rate", 0.0);
            if (g.contains("capacity_factor")) gen.capacity_factor = series(g.at("capacity_factor"), base_dir);
            gen.initial_capacity = g.value("initial_capacity", 0.0);
            gen.max_capacity = number_or_inf(g, "max_capacity", kInf);
            config.generators.push_back(std::move(gen));
        }
        for (const json& s : doc.value("storage", json::array())) {
            StorageTech sto;
            sto.id = s.at("id").get<std::string>();
            sto.node = s.at("node").get<std::string>();
            sto.power_capex = s.value("power_capex", 0.0);
            sto.duration_hours = s.value("duration_hours", sto.duration_hours);
            sto.charge_efficiency = s.value("charge_efficiency", sto.charge_efficiency);
            sto.discharge_efficiency = s.value("discharge_efficiency", sto.discharge_efficiency);
            sto.initial_power = s.value("initial_power", 0.0);
            config.storage.push_back(std::move(sto));
        }
        return config;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("scenario: ") + e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_json_file(path), path.parent_path());
}

}  // namespace nearopt::cep
