#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "nearopt/linear_program.hpp"
#include "nearopt/necessary_conditions.hpp"

namespace nearopt::cep {

/// A demand zone. Load in GW per timestep.
struct Node {
    std::string id;
    std::vector<double> load;
};

enum class LineKind { AC, DC };

/// Bi-directional transportation-model link.
struct Line {
    std::string id;
    std::string from;
    std::string to;
    LineKind kind = LineKind::AC;
    double length_km = 0.0;
    double initial_capacity = 0.0;  // GW
    double max_capacity = 0.0;      // GW
    double capex = 0.0;             // per GW per km per year
    double flow_limit_factor = 0.7;
};

enum class GeneratorKind { Dispatchable, Renewable, Fixed };

struct GeneratorTech {
    std::string id;
    std::string node;
    std::string technology;  // shared across nodes, e.g. "onshore"; defaults to id
    GeneratorKind kind = GeneratorKind::Dispatchable;
    double capex = 0.0;     // per GW per year
    double opex = 0.0;      // per GWh
    double co2_rate = 0.0;  // tCO2 per GWh
    std::vector<double> capacity_factor;  // required for renewables, optional for fixed
    double initial_capacity = 0.0;
    double max_capacity = kInf;
};

struct StorageTech {
    std::string id;
    std::string node;
    double power_capex = 0.0;  // per GW per year
    double duration_hours = 4.0;
    double charge_efficiency = 0.95;
    double discharge_efficiency = 0.95;
    double initial_power = 0.0;
};

/// Costs are in one currency per GW (capacity) and per GWh (energy); voll uses
/// the same energy unit as opex.
struct ScenarioConfig {
    std::size_t horizon = 1;
    double step_hours = 2.0;
    double voll = 3000.0;
    double co2_cap = kInf;
    std::vector<Node> nodes;
    std::vector<Line> lines;
    std::vector<GeneratorTech> generators;
    std::vector<StorageTech> storage;
};

/// The investment variables x_I of a compiled program.
struct InvestmentIndexMap {
    std::map<std::string, VariableId> line_capacity;
    std::map<std::string, VariableId> generator_capacity;
    std::map<std::string, VariableId> storage_power;
};

/// Operational variables, indexed [element][timestep] in config order.
struct OperationIndex {
    std::vector<std::vector<VariableId>> generator_output;
    std::vector<std::vector<VariableId>> storage_charge;
    std::vector<std::vector<VariableId>> storage_discharge;
    std::vector<std::vector<VariableId>> storage_soc;
    std::vector<std::vector<VariableId>> line_forward;
    std::vector<std::vector<VariableId>> line_backward;
    std::vector<std::vector<VariableId>> node_shed;
};

struct CompiledModel {
    LinearProgram lp;
    InvestmentIndexMap investments;
    OperationIndex operations;
};

/// Throws InvalidConfig naming the first violated rule.
void validate(const ScenarioConfig& config);

/// Builds the capacity-expansion LP: per-node energy balance with shedding,
/// flow limits at flow_limit_factor of installed line capacity, renewable
/// availability, cyclic storage, a global CO2 cap, and annualised investment
/// plus operating cost. Investment variables come first, then operations by
/// element and timestep.
CompiledModel compile(const ScenarioConfig& config);

/// TWkm over every line: weight length/1000 on each line-capacity variable.
Direction direction_all_lines(const InvestmentIndexMap& map, const ScenarioConfig& config,
                              std::string label = "all_lines");

/// TWkm over lines incident to node_id. UnknownNode if the node does not exist.
Direction direction_country_lines(const InvestmentIndexMap& map, const ScenarioConfig& config,
                                  const std::string& node_id, std::string label = {});

/// TWkm of a single line. UnknownLine if absent.
Direction direction_single_line(const InvestmentIndexMap& map, const ScenarioConfig& config,
                                const std::string& line_id, std::string label = {});

/// Total new storage power (GW).
Direction direction_storage(const InvestmentIndexMap& map, std::string label = "storage");

/// Total new capacity (GW) of the named renewable technologies. Each entry matches
/// generators by technology or by id. EmptySubset for an empty list, UnknownTech
/// for entries that match nothing or match a non-renewable generator.
Direction direction_res(const InvestmentIndexMap& map, const ScenarioConfig& config,
                        const std::vector<std::string>& tech_subset, std::string label = {});

}  // namespace nearopt::cep
