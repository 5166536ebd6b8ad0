#include "nearopt/cep_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nearopt/error.hpp"

namespace nearopt::cep {
namespace {

[[noreturn]] void reject(const std::string& rule) { throw Error(ErrorCode::InvalidConfig, rule); }

void check_series(const std::vector<double>& series, std::size_t horizon, double upper, const std::string& what) {
    if (series.size() != horizon) {
        reject(what + " has " + std::to_string(series.size()) + " values, horizon is " + std::to_string(horizon));
    }
    for (double v : series) {
        if (!std::isfinite(v) || v < 0.0 || v > upper) reject(what + " contains out-of-range value " + std::to_string(v));
    }
}

std::string indexed(const std::string& prefix, const std::string& id, std::size_t t) {
    return prefix + "[" + id + "][" + std::to_string(t) + "]";
}

std::string technology_of(const GeneratorTech& g) { return g.technology.empty() ? g.id : g.technology; }

}  // namespace

void validate(const ScenarioConfig& config) {
    const std::size_t horizon = config.horizon;
    if (horizon < 1) reject("horizon must be at least one timestep");
    if (!(config.step_hours > 0.0) || !std::isfinite(config.step_hours)) reject("step_hours must be positive");
    if (!(config.co2_cap >= 0.0)) reject("co2_cap must be >= 0");
    if (!std::isfinite(config.voll) || config.voll <= 0.0) reject("voll must be positive and finite");

    std::set<std::string> nodes;
    std::set<std::string> element_ids;
    for (const Node& n : config.nodes) {
        if (n.id.empty()) reject("node ids must be non-empty");
        if (!nodes.insert(n.id).second) reject("duplicate node id '" + n.id + "'");
        check_series(n.load, horizon, kInf, "load of node '" + n.id + "'");
    }
    if (nodes.empty()) reject("at least one node is required");
    auto unique_element = [&](const std::string& id, const char* what) {
        if (id.empty()) reject(std::string(what) + " ids must be non-empty");
        if (!element_ids.insert(id).second) reject("duplicate element id '" + id + "'");
    };

    for (const Line& l : config.lines) {
        unique_element(l.id, "line");
        if (!nodes.count(l.from) || !nodes.count(l.to)) reject("line '" + l.id + "' connects an unknown node");
        if (l.from == l.to) reject("line '" + l.id + "' must connect two different nodes");
        if (!(l.length_km > 0.0) || !std::isfinite(l.length_km)) reject("line '" + l.id + "' length must be > 0");
        if (!(l.initial_capacity >= 0.0) || !(l.max_capacity >= l.initial_capacity)) {
            reject("line '" + l.id + "' needs max_capacity >= initial_capacity >= 0");
        }
        if (!(l.capex >= 0.0) || !std::isfinite(l.capex)) reject("line '" + l.id + "' capex must be >= 0");
        if (!(l.flow_limit_factor > 0.0 && l.flow_limit_factor <= 1.0)) {
            reject("line '" + l.id + "' flow_limit_factor must lie in (0, 1]");
        }
    }

    for (const GeneratorTech& g : config.generators) {
        unique_element(g.id, "generator");
        if (!nodes.count(g.node)) reject("generator '" + g.id + "' sits at unknown node '" + g.node + "'");
        if (!(g.capex >= 0.0) || !std::isfinite(g.capex)) reject("generator '" + g.id + "' capex must be >= 0");
        if (!(g.opex >= 0.0) || !std::isfinite(g.opex)) reject("generator '" + g.id + "' opex must be >= 0");
        if (!(g.opex < config.voll)) reject("voll must exceed the opex of generator '" + g.id + "'");
        if (!(g.co2_rate >= 0.0) || !std::isfinite(g.co2_rate)) reject("generator '" + g.id + "' co2_rate must be >= 0");
        if (!(g.initial_capacity >= 0.0) || !std::isfinite(g.initial_capacity) ||
            !(g.max_capacity >= g.initial_capacity)) {
            reject("generator '" + g.id + "' needs max_capacity >= initial_capacity >= 0");
        }
        if (g.kind == GeneratorKind::Renewable || !g.capacity_factor.empty()) {
            check_series(g.capacity_factor, horizon, 1.0, "capacity_factor of generator '" + g.id + "'");
        }
    }

    for (const StorageTech& s : config.storage) {
        unique_element(s.id, "storage");
        if (!nodes.count(s.node)) reject("storage '" + s.id + "' sits at unknown node '" + s.node + "'");
        if (!(s.duration_hours > 0.0) || !std::isfinite(s.duration_hours)) reject("storage '" + s.id + "' duration must be > 0");
        if (!(s.charge_efficiency > 0.0 && s.charge_efficiency <= 1.0) ||
            !(s.discharge_efficiency > 0.0 && s.discharge_efficiency <= 1.0)) {
            reject("storage '" + s.id + "' efficiencies must lie in (0, 1]");
        }
        if (!(s.power_capex >= 0.0) || !std::isfinite(s.power_capex)) reject("storage '" + s.id + "' power_capex must be >= 0");
        if (!(s.initial_power >= 0.0) || !std::isfinite(s.initial_power)) reject("storage '" + s.id + "' initial_power must be >= 0");
    }
}

CompiledModel compile(const ScenarioConfig& config) {
    validate(config);
    const std::size_t horizon = config.horizon;
    const double dt = config.step_hours;

    LpBuilder b;
    InvestmentIndexMap inv;
    OperationIndex ops;
    LinearExpr cost;

    for (const Line& l : config.lines) {
        const VariableId v = b.add_variable("line_new[" + l.id + "]", 0.0, l.max_capacity - l.initial_capacity);
        inv.line_capacity.emplace(l.id, v);
        cost.add(v, l.capex * l.length_km);
    }
    for (const GeneratorTech& g : config.generators) {
        if (g.kind == GeneratorKind::Fixed) continue;
        const VariableId v = b.add_variable("gen_new[" + g.id + "]", 0.0, g.max_capacity - g.initial_capacity);
        inv.generator_capacity.emplace(g.id, v);
        cost.add(v, g.capex);
    }
    for (const StorageTech& s : config.storage) {
        const VariableId v = b.add_variable("sto_new[" + s.id + "]", 0.0, kInf);
        inv.storage_power.emplace(s.id, v);
        cost.add(v, s.power_capex);
    }

    for (const GeneratorTech& g : config.generators) {
        auto& series = ops.generator_output.emplace_back();
        for (std::size_t t = 0; t < horizon; ++t) {
            double upper = kInf;
            if (g.kind == GeneratorKind::Fixed) {
                upper = g.initial_capacity * (g.capacity_factor.empty() ? 1.0 : g.capacity_factor[t]);
            }
            series.push_back(b.add_variable(indexed("gen", g.id, t), 0.0, upper));
            cost.add(series.back(), dt * g.opex);
        }
    }
    for (const StorageTech& s : config.storage) {
        auto& charge = ops.storage_charge.emplace_back();
        auto& discharge = ops.storage_discharge.emplace_back();
        auto& soc = ops.storage_soc.emplace_back();
        for (std::size_t t = 0; t < horizon; ++t) {
            charge.push_back(b.add_variable(indexed("sto_ch", s.id, t)));
            discharge.push_back(b.add_variable(indexed("sto_dis", s.id, t)));
            soc.push_back(b.add_variable(indexed("soc", s.id, t)));
        }
    }
    for (const Line& l : config.lines) {
        auto& fwd = ops.line_forward.emplace_back();
        auto& bwd = ops.line_backward.emplace_back();
        for (std::size_t t = 0; t < horizon; ++t) {
            fwd.push_back(b.add_variable(indexed("flow_fwd", l.id, t)));
            bwd.push_back(b.add_variable(indexed("flow_bwd", l.id, t)));
        }
    }
    for (const Node& n : config.nodes) {
        auto& shed = ops.node_shed.emplace_back();
        for (std::size_t t = 0; t < horizon; ++t) {
            shed.push_back(b.add_variable(indexed("shed", n.id, t), 0.0, n.load[t]));
            cost.add(shed.back(), dt * config.voll);
        }
    }

    // Energy balance per node and timestep.
    for (std::size_t ni = 0; ni < config.nodes.size(); ++ni) {
        const Node& n = config.nodes[ni];
        for (std::size_t t = 0; t < horizon; ++t) {
            LinearExpr balance;
            for (std::size_t gi = 0; gi < config.generators.size(); ++gi) {
                if (config.generators[gi].node == n.id) balance.add(ops.generator_output[gi][t], 1.0);
            }
            for (std::size_t si = 0; si < config.storage.size(); ++si) {
                if (config.storage[si].node != n.id) continue;
                balance.add(ops.storage_discharge[si][t], 1.0);
                balance.add(ops.storage_charge[si][t], -1.0);
            }
            for (std::size_t li = 0; li < config.lines.size(); ++li) {
                const Line& l = config.lines[li];
                if (l.to == n.id) {
                    balance.add(ops.line_forward[li][t], 1.0);
                    balance.add(ops.line_backward[li][t], -1.0);
                }
                if (l.from == n.id) {
                    balance.add(ops.line_forward[li][t], -1.0);
                    balance.add(ops.line_backward[li][t], 1.0);
                }
            }
            balance.add(ops.node_shed[ni][t], 1.0);
            b.add_constraint(std::move(balance), Sense::Equal, n.load[t], indexed("balance", n.id, t));
        }
    }

    // Flow limits: each direction within factor * (initial + new).
    for (std::size_t li = 0; li < config.lines.size(); ++li) {
        const Line& l = config.lines[li];
        const VariableId added = inv.line_capacity.at(l.id);
        const double k = l.flow_limit_factor;
        for (std::size_t t = 0; t < horizon; ++t) {
            b.add_constraint(LinearExpr{{ops.line_forward[li][t], 1.0}, {added, -k}}, Sense::LessEqual,
                             k * l.initial_capacity, indexed("flow_fwd_cap", l.id, t));
            b.add_constraint(LinearExpr{{ops.line_backward[li][t], 1.0}, {added, -k}}, Sense::LessEqual,
                             k * l.initial_capacity, indexed("flow_bwd_cap", l.id, t));
        }
    }

    // Generator availability; renewables are curtailable at no cost.
    for (std::size_t gi = 0; gi < config.generators.size(); ++gi) {
        const GeneratorTech& g = config.generators[gi];
        if (g.kind == GeneratorKind::Fixed) continue;
        const VariableId added = inv.generator_capacity.at(g.id);
        for (std::size_t t = 0; t < horizon; ++t) {
            const double cf = g.kind == GeneratorKind::Renewable
                                  ? g.capacity_factor[t]
                                  : (g.capacity_factor.empty() ? 1.0 : g.capacity_factor[t]);
            b.add_constraint(LinearExpr{{ops.generator_output[gi][t], 1.0}, {added, -cf}}, Sense::LessEqual,
                             cf * g.initial_capacity, indexed("gen_cap", g.id, t));
        }
    }

    // Storage: power limits, energy limit power * duration, cyclic state of charge.
    for (std::size_t si = 0; si < config.storage.size(); ++si) {
        const StorageTech& s = config.storage[si];
        const VariableId power = inv.storage_power.at(s.id);
        for (std::size_t t = 0; t < horizon; ++t) {
            b.add_constraint(LinearExpr{{ops.storage_charge[si][t], 1.0}, {power, -1.0}}, Sense::LessEqual,
                             s.initial_power, indexed("sto_ch_cap", s.id, t));
            b.add_constraint(LinearExpr{{ops.storage_discharge[si][t], 1.0}, {power, -1.0}}, Sense::LessEqual,
                             s.initial_power, indexed("sto_dis_cap", s.id, t));
            b.add_constraint(LinearExpr{{ops.storage_soc[si][t], 1.0}, {power, -s.duration_hours}}, Sense::LessEqual,
                             s.duration_hours * s.initial_power, indexed("soc_cap", s.id, t));
            const std::size_t prev = t == 0 ? horizon - 1 : t - 1;
            LinearExpr recursion;
            recursion.add(ops.storage_soc[si][t], 1.0);
            recursion.add(ops.storage_soc[si][prev], -1.0);
            recursion.add(ops.storage_charge[si][t], -dt * s.charge_efficiency);
            recursion.add(ops.storage_discharge[si][t], dt / s.discharge_efficiency);
            b.add_constraint(std::move(recursion), Sense::Equal, 0.0, indexed("soc_balance", s.id, t));
        }
    }

    if (std::isfinite(config.co2_cap)) {
        LinearExpr emissions;
        for (std::size_t gi = 0; gi < config.generators.size(); ++gi) {
            const double rate = config.generators[gi].co2_rate;
            if (rate == 0.0) continue;
            for (std::size_t t = 0; t < horizon; ++t) emissions.add(ops.generator_output[gi][t], dt * rate);
        }
        if (!emissions.terms().empty()) b.add_constraint(std::move(emissions), Sense::LessEqual, config.co2_cap, "co2_cap");
    }

    b.set_objective(std::move(cost));
    return CompiledModel{std::move(b).build(), std::move(inv), std::move(ops)};
}

Direction direction_all_lines(const InvestmentIndexMap& map, const ScenarioConfig& config, std::string label) {
    std::map<VariableId, double> weights;
    for (const Line& l : config.lines) weights[map.line_capacity.at(l.id)] = l.length_km / 1000.0;
    return Direction(std::move(weights), std::move(label));
}

Direction direction_country_lines(const InvestmentIndexMap& map, const ScenarioConfig& config,
                                  const std::string& node_id, std::string label) {
    const bool known = std::any_of(config.nodes.begin(), config.nodes.end(), [&](const Node& n) { return n.id == node_id; });
    if (!known) throw Error(ErrorCode::UnknownNode, "no node named '" + node_id + "'");
    std::map<VariableId, double> weights;
    for (const Line& l : config.lines) {
        if (l.from == node_id || l.to == node_id) weights[map.line_capacity.at(l.id)] = l.length_km / 1000.0;
    }
    return Direction(std::move(weights), label.empty() ? "country:" + node_id : std::move(label));
}

Direction direction_single_line(const InvestmentIndexMap& map, const ScenarioConfig& config,
                                const std::string& line_id, std::string label) {
    for (const Line& l : config.lines) {
        if (l.id != line_id) continue;
        return Direction({{map.line_capacity.at(l.id), l.length_km / 1000.0}},
                         label.empty() ? "line:" + line_id : std::move(label));
    }
    throw Error(ErrorCode::UnknownLine, "no line named '" + line_id + "'");
}

Direction direction_storage(const InvestmentIndexMap& map, std::string label) {
    std::map<VariableId, double> weights;
    for (const auto& [id, var] : map.storage_power) weights[var] = 1.0;
    return Direction(std::move(weights), std::move(label));
}

Direction direction_res(const InvestmentIndexMap& map, const ScenarioConfig& config,
                        const std::vector<std::string>& tech_subset, std::string label) {
    if (tech_subset.empty()) throw Error(ErrorCode::EmptySubset, "a renewable direction needs at least one technology");
    std::map<VariableId, double> weights;
    std::string joined;
    for (const std::string& tech : tech_subset) {
        bool matched = false;
        for (const GeneratorTech& g : config.generators) {
            if (g.id != tech && technology_of(g) != tech) continue;
            if (g.kind != GeneratorKind::Renewable) {
                throw Error(ErrorCode::UnknownTech, "'" + tech + "' matches non-renewable generator '" + g.id + "'");
            }
            weights[map.generator_capacity.at(g.id)] = 1.0;
            matched = true;
        }
        if (!matched) throw Error(ErrorCode::UnknownTech, "no renewable technology named '" + tech + "'");
        joined += (joined.empty() ? "" : "+") + tech;
    }
    return Direction(std::move(weights), label.empty() ? "res:" + joined : std::move(label));
}

}  // namespace nearopt::cep
