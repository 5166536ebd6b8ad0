// nearopt: solve capacity-expansion scenarios and sweep necessary conditions
// over a grid of suboptimality levels.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nearopt/error.hpp"
#include "nearopt/harness.hpp"

namespace {

using nearopt::harness::RunManifest;

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> grid;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        const double value = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad epsilon '" + item + "'");
        grid.push_back(value);
    }
    return grid;
}

struct Overrides {
    std::string out;
    std::string eps;
    double tol_feas = 0.0;
};

void apply(const Overrides& o, RunManifest& m) {
    if (!o.out.empty()) m.output_dir = o.out;
    if (!o.eps.empty()) m.epsilon_grid = parse_eps_list(o.eps);
    if (o.tol_feas != 0.0) m.solver.feasibility_tol = o.tol_feas;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Necessary conditions for near-optimal capacity expansion plans"};
    app.require_subcommand(1);

    Overrides o;
    std::string input;

    auto* solve_cmd = app.add_subcommand("solve", "Solve a scenario and write optimal_solution.json");
    solve_cmd->add_option("scenario", input, "Scenario JSON")->required();
    std::string solve_out = "nearopt_out";
    solve_cmd->add_option("--out", solve_out, "Output directory")->capture_default_str();
    solve_cmd->add_option("--tol-feas", o.tol_feas, "Primal feasibility tolerance");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run the epsilon sweep described by a manifest");
    sweep_cmd->add_option("manifest", input, "Manifest JSON")->required();
    sweep_cmd->add_option("--out", o.out, "Output directory (overrides the manifest)");
    sweep_cmd->add_option("--eps", o.eps, "Comma-separated epsilon grid, e.g. 0,0.05,0.1");
    sweep_cmd->add_option("--tol-feas", o.tol_feas, "Primal feasibility tolerance");

    auto* validate_cmd = app.add_subcommand("validate", "Check a manifest without solving");
    validate_cmd->add_option("manifest", input, "Manifest JSON")->required();
    validate_cmd->add_option("--eps", o.eps, "Comma-separated epsilon grid");
    validate_cmd->add_option("--tol-feas", o.tol_feas, "Primal feasibility tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            nearopt::SolverOptions solver;
            if (o.tol_feas != 0.0) solver.feasibility_tol = o.tol_feas;
            return nearopt::harness::solve_scenario(input, solve_out, solver, std::cout);
        }
        RunManifest manifest = nearopt::harness::load_manifest(input);
        apply(o, manifest);
        if (validate_cmd->parsed()) {
            const auto diags = nearopt::harness::validate(manifest);
            for (const auto& d : diags) std::cout << d.code << ": " << d.message << '\n';
            if (diags.empty()) std::cout << "ok\n";
            return diags.empty() ? nearopt::harness::kSuccess : nearopt::harness::kFatal;
        }
        return nearopt::harness::run(manifest, std::cerr);
    } catch (const nearopt::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return nearopt::harness::kFatal;
}
