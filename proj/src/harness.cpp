#include "nearopt/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nearopt/error.hpp"
#include "nearopt/scenario_io.hpp"

namespace nearopt::harness {
namespace {

using nlohmann::json;

DirectionKind kind_from_string(const std::string& text) {
    if (text == "all_lines") return DirectionKind::AllLines;
    if (text == "country") return DirectionKind::Country;
    if (text == "line") return DirectionKind::Line;
    if (text == "storage") return DirectionKind::Storage;
    if (text == "res") return DirectionKind::Res;
    throw Error(ErrorCode::ParseError, "unknown direction kind '" + text + "'");
}

std::string format_g(double value, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string code_name(ErrorCode code) { return std::string(to_string(code)); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace

RunManifest parse_manifest(const json& doc, const std::filesystem::path& base_dir) {
    try {
        RunManifest m;
        std::filesystem::path scenario = doc.at("scenario").get<std::string>();
        m.scenario = scenario.is_relative() ? base_dir / scenario : scenario;
        if (doc.contains("epsilons")) m.epsilon_grid = doc.at("epsilons").get<std::vector<double>>();
        for (const json& d : doc.at("directions")) {
            DirectionSpec spec;
            spec.kind = kind_from_string(d.at("kind").get<std::string>());
            spec.label = d.value("label", std::string());
            if (spec.kind == DirectionKind::Country) spec.target = d.at("node").get<std::string>();
            if (spec.kind == DirectionKind::Line) spec.target = d.at("line").get<std::string>();
            if (spec.kind == DirectionKind::Res) spec.techs = d.at("techs").get<std::vector<std::string>>();
            m.directions.push_back(std::move(spec));
        }
        if (doc.contains("output_dir")) {
            std::filesystem::path out = doc.at("output_dir").get<std::string>();
            m.output_dir = out.is_relative() ? base_dir / out : out;
        }
        if (doc.contains("tolerances")) {
            const json& t = doc.at("tolerances");
            m.solver.feasibility_tol = t.value("feas", m.solver.feasibility_tol);
            m.solver.pivot_tol = t.value("piv", m.solver.pivot_tol);
            m.solver.optimality_tol = t.value("opt", m.solver.optimality_tol);
            m.solver.dual_tol = t.value("dual", m.solver.dual_tol);
        }
        m.threads = doc.value("threads", std::size_t{0});
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
    }
}

RunManifest load_manifest(const std::filesystem::path& path) {
    return parse_manifest(cep::read_json_file(path), path.parent_path());
}

std::string direction_label(const DirectionSpec& spec) {
    if (!spec.label.empty()) return spec.label;
    switch (spec.kind) {
        case DirectionKind::AllLines: return "all_lines";
        case DirectionKind::Country: return "country:" + spec.target;
        case DirectionKind::Line: return "line:" + spec.target;
        case DirectionKind::Storage: return "storage";
        case DirectionKind::Res: {
            std::string joined;
            for (const auto& t : spec.techs) joined += (joined.empty() ? "" : "+") + t;
            return "res:" + joined;
        }
    }
    return "direction";
}

std::string curve_file_stem(const std::string& label) {
    std::string stem;
    for (char c : label) {
        const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
        stem += safe ? c : '_';
    }
    return stem;
}

std::vector<Direction> resolve_directions(const std::vector<DirectionSpec>& specs, const cep::ScenarioConfig& config,
                                          const cep::InvestmentIndexMap& investments) {
    std::vector<Direction> out;
    for (const auto& spec : specs) {
        const std::string label = direction_label(spec);
        switch (spec.kind) {
            case DirectionKind::AllLines: out.push_back(cep::direction_all_lines(investments, config, label)); break;
            case DirectionKind::Country:
                out.push_back(cep::direction_country_lines(investments, config, spec.target, label));
                break;
            case DirectionKind::Line:
                out.push_back(cep::direction_single_line(investments, config, spec.target, label));
                break;
            case DirectionKind::Storage: out.push_back(cep::direction_storage(investments, label)); break;
            case DirectionKind::Res: out.push_back(cep::direction_res(investments, config, spec.techs, label)); break;
        }
    }
    return out;
}

std::vector<Diagnostic> validate(const RunManifest& manifest) {
    std::vector<Diagnostic> diags;
    auto add = [&](std::string code, std::string message) { diags.push_back({std::move(code), std::move(message)}); };

    if (manifest.epsilon_grid.empty()) add("EmptyGrid", "the epsilon grid is empty");
    for (std::size_t i = 0; i < manifest.epsilon_grid.size(); ++i) {
        const double eps = manifest.epsilon_grid[i];
        if (std::isnan(eps) || eps < 0.0) add("NegativeEpsilon", "epsilon " + format_g(eps, 9) + " is negative");
        if (i > 0 && !(eps > manifest.epsilon_grid[i - 1])) add("InvalidGrid", "the epsilon grid must be strictly increasing");
    }
    const auto& s = manifest.solver;
    for (double tol : {s.feasibility_tol, s.pivot_tol, s.optimality_tol, s.dual_tol}) {
        if (!(tol > 0.0) || !std::isfinite(tol)) add("InvalidTolerance", "tolerances must be positive and finite");
    }

    if (manifest.directions.empty()) add("EmptyDirections", "at least one direction is required");
    std::set<std::string> labels;
    std::set<std::string> stems;
    for (const auto& spec : manifest.directions) {
        const std::string label = direction_label(spec);
        if (label.find_first_of(",\n\r\"") != std::string::npos) {
            add("InvalidLabel", "label '" + label + "' contains a CSV delimiter");
        }
        if (!labels.insert(label).second) {
            add("DuplicateLabel", "direction label '" + label + "' is used twice");
        } else if (!stems.insert(curve_file_stem(label)).second) {
            add("DuplicateLabel", "direction label '" + label + "' collides with another curve file name");
        }
    }

    if (!std::filesystem::is_regular_file(manifest.scenario)) {
        add("MissingFile", "scenario file " + manifest.scenario.string() + " does not exist");
        return diags;
    }
    cep::ScenarioConfig config;
    try {
        config = cep::load_scenario(manifest.scenario);
        cep::validate(config);
    } catch (const Error& e) {
        add(e.code() == ErrorCode::IoError ? "MissingFile" : "InvalidScenario", e.what());
        return diags;
    }
    // Resolution only needs the investment index, which the compiler builds first.
    const auto model = cep::compile(config);
    for (const auto& spec : manifest.directions) {
        try {
            (void)resolve_directions({spec}, config, model.investments);
        } catch (const Error& e) {
            add(code_name(e.code()), e.what());
        }
    }
    return diags;
}

json solution_to_json(const cep::CompiledModel& model, const Solution& solution) {
    json doc;
    doc["status"] = std::string(to_string(solution.status));
    doc["objective"] = solution.objective_value;
    json variables = json::object();
    for (std::size_t j = 0; j < model.lp.num_variables(); ++j) variables[model.lp.variables()[j].name] = solution.primal[j];
    doc["variables"] = std::move(variables);
    json inv;
    auto group = [&](const std::map<std::string, VariableId>& ids) {
        json g = json::object();
        for (const auto& [id, var] : ids) g[id] = solution.primal[var.index];
        return g;
    };
    inv["lines"] = group(model.investments.line_capacity);
    inv["generators"] = group(model.investments.generator_capacity);
    inv["storage"] = group(model.investments.storage_power);
    doc["investments"] = std::move(inv);
    return doc;
}

Solution solution_from_json(const json& doc, const LinearProgram& lp) {
    try {
        Solution sol;
        if (doc.at("status").get<std::string>() != "optimal") {
            throw Error(ErrorCode::NotOptimal, "stored solution is not optimal");
        }
        sol.status = SolveStatus::Optimal;
        sol.objective_value = doc.at("objective").get<double>();
        sol.primal.assign(lp.num_variables(), std::nan(""));
        for (const auto& [name, value] : doc.at("variables").items()) {
            sol.primal[lp.variable_id(name).index] = value.get<double>();
        }
        return sol;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("solution: ") + e.what());
    }
}

std::string render_curve_svg(const std::string& label, const std::vector<const NecessaryConditionResult*>& rows) {
    constexpr double kWidth = 800.0, kHeight = 500.0;
    constexpr double kLeft = 80.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;
    std::vector<std::pair<double, double>> points;
    std::vector<double> grid;
    for (const auto* row : rows) {
        grid.push_back(row->epsilon);
        if (row->status == RowStatus::Found) points.emplace_back(row->epsilon, row->c_star);
    }
    std::sort(points.begin(), points.end());
    std::sort(grid.begin(), grid.end());

    double x_min = grid.empty() ? 0.0 : grid.front();
    double x_max = grid.empty() ? 1.0 : grid.back();
    if (x_max <= x_min) x_max = x_min + 1.0;
    double y_min = 0.0, y_max = 0.0;
    for (const auto& [x, y] : points) {
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    if (y_max - y_min <= 1e-12 * std::max(1.0, std::abs(y_max))) y_max = y_min + 1.0;
    y_max += 0.05 * (y_max - y_min);

    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight); };
    auto py = [&](double y) { return kHeight - kBottom - (y - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom); };
    auto fixed = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
    svg << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    svg << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << xml_escape(label) << "</text>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\"/>\n";
    for (double eps : grid) {
        const double x = px(eps);
        svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << fixed(x) << "\" y2=\""
            << kHeight - kBottom + 6 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fixed(x) << "\" y=\"" << kHeight - kBottom + 22
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_g(100.0 * eps, 4)
            << "%</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double v = y_min + (y_max - y_min) * k / 4.0;
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(py(v) + 4) << "\" text-anchor=\"end\" "
            << "font-family=\"sans-serif\" font-size=\"11\">" << format_g(v, 4) << "</text>\n";
    }
    svg << "<text x=\"400\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">suboptimality epsilon</text>\n";
    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        svg << (i ? " " : "") << fixed(px(points[i].first)) << ',' << fixed(py(points[i].second));
    }
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

int solve_scenario(const std::filesystem::path& scenario, const std::filesystem::path& output_dir,
                   const SolverOptions& solver, std::ostream& log) {
    try {
        const auto model = cep::compile(cep::load_scenario(scenario));
        const auto sol = solve(model.lp, solver);
        if (sol.status != SolveStatus::Optimal) {
            log << "error: scenario " << scenario.string() << " is " << to_string(sol.status) << '\n';
            return kFatal;
        }
        std::filesystem::create_directories(output_dir);
        write_text(output_dir / "optimal_solution.json", solution_to_json(model, sol).dump(2) + "\n");
        log << "optimal objective " << format_g(sol.objective_value, 12) << " (" << model.lp.num_variables()
            << " variables, " << model.lp.num_constraints() << " constraints)\n";
        return kSuccess;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kFatal;
    }
}

int run(const RunManifest& manifest, std::ostream& log) {
    const auto diags = validate(manifest);
    if (!diags.empty()) {
        for (const auto& d : diags) log << "error [" << d.code << "] " << d.message << '\n';
        return kFatal;
    }
    try {
        const auto config = cep::load_scenario(manifest.scenario);
        const auto model = cep::compile(config);
        const auto sol = solve(model.lp, manifest.solver);
        if (sol.status != SolveStatus::Optimal) {
            log << "error: base program is " << to_string(sol.status) << '\n';
            return kFatal;
        }
        log << "optimal objective " << format_g(sol.objective_value, 12) << '\n';

        const auto directions = resolve_directions(manifest.directions, config, model.investments);
        SweepOptions options;
        options.solver = manifest.solver;
        options.threads = manifest.threads;
        const auto table = sweep(model.lp, sol, manifest.epsilon_grid, directions, options);

        std::filesystem::create_directories(manifest.output_dir / "curves");
        write_text(manifest.output_dir / "optimal_solution.json", solution_to_json(model, sol).dump(2) + "\n");
        std::ostringstream csv;
        write_sweep_csv(csv, table);
        write_text(manifest.output_dir / "sweep.csv", csv.str());
        for (const auto& d : directions) {
            write_text(manifest.output_dir / "curves" / (curve_file_stem(d.label()) + ".svg"),
                       render_curve_svg(d.label(), table.rows_for(d.label())));
        }
        for (const auto& row : table.rows) {
            if (row.status != RowStatus::Found) log << "row failed: " << row.message << '\n';
        }
        log << table.rows.size() << " rows written to " << (manifest.output_dir / "sweep.csv").string() << '\n';
        return table.failed_rows() == 0 ? kSuccess : kPartial;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return kFatal;
    }
}

}  // namespace nearopt::harness
