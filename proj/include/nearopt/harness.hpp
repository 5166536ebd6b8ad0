#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nearopt/cep_model.hpp"
#include "nearopt/necessary_conditions.hpp"
#include "nearopt/simplex.hpp"

namespace nearopt::harness {

enum class DirectionKind { AllLines, Country, Line, Storage, Res };

struct DirectionSpec {
    DirectionKind kind = DirectionKind::AllLines;
    std::string target;              // node id for Country, line id for Line
    std::vector<std::string> techs;  // Res only
    std::string label;               // empty selects the default label for the kind
};

/// One necessary-condition study: scenario, epsilon grid and directions.
struct RunManifest {
    std::filesystem::path scenario;
    std::vector<double> epsilon_grid = default_epsilon_grid();
    std::vector<DirectionSpec> directions;
    std::filesystem::path output_dir = "nearopt_out";
    SolverOptions solver;
    std::size_t threads = 0;
};

struct Diagnostic {
    std::string code;
    std::string message;
};

/// Paths in the document are resolved against base_dir. ParseError on malformed input.
RunManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);

/// Label used in sweep.csv and for the curve file name.
std::string direction_label(const DirectionSpec& spec);

/// Empty iff run() can proceed to solving. Codes: MissingFile, InvalidScenario,
/// EmptyGrid, NegativeEpsilon, InvalidGrid, EmptyDirections, DuplicateLabel,
/// InvalidLabel, UnknownNode, UnknownLine, UnknownTech, EmptySubset,
/// InvalidDirection, InvalidTolerance.
std::vector<Diagnostic> validate(const RunManifest& manifest);

std::vector<Direction> resolve_directions(const std::vector<DirectionSpec>& specs, const cep::ScenarioConfig& config,
                                          const cep::InvestmentIndexMap& investments);

enum ExitCode : int { kSuccess = 0, kFatal = 1, kPartial = 2 };

/// optimize -> epsilon spaces -> sweep. Writes optimal_solution.json, sweep.csv and
/// curves/<label>.svg under output_dir. Returns 0, 2 on row failures, 1 on fatal errors.
int run(const RunManifest& manifest, std::ostream& log);

/// Solves a scenario and writes optimal_solution.json into output_dir. Returns 0 or 1.
int solve_scenario(const std::filesystem::path& scenario, const std::filesystem::path& output_dir,
                   const SolverOptions& solver, std::ostream& log);

nlohmann::json solution_to_json(const cep::CompiledModel& model, const Solution& solution);

/// Rebuilds primal values (by variable name) and the objective from optimal_solution.json.
Solution solution_from_json(const nlohmann::json& doc, const LinearProgram& lp);

/// 800x500 SVG with one polyline of c* against epsilon; failed rows are skipped.
std::string render_curve_svg(const std::string& label, const std::vector<const NecessaryConditionResult*>& rows);

/// File-system-safe version of a direction label.
std::string curve_file_stem(const std::string& label);

}  // namespace nearopt::harness
