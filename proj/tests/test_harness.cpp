#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "nearopt/epsilon_space.hpp"
#include "nearopt/error.hpp"
#include "nearopt/harness.hpp"
#include "nearopt/scenario_io.hpp"

using namespace nearopt;
using namespace nearopt::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(NEAROPT_SOURCE_DIR) / "scenarios";

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nearopt_harness_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

RunManifest toy_manifest(const fs::path& out) {
    RunManifest m = load_manifest(kScenarios / "toy" / "manifest.json");
    m.output_dir = out;
    return m;
}

std::vector<std::string> codes(const std::vector<Diagnostic>& diags) {
    std::vector<std::string> out;
    for (const auto& d : diags) out.push_back(d.code);
    return out;
}

// Polyline points in SVG coordinates (y grows downwards).
std::vector<std::pair<double, double>> polyline(const std::string& svg) {
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, std::regex("points=\"([^\"]*)\"")));
    std::vector<std::pair<double, double>> pts;
    std::istringstream in(m[1].str());
    std::string pair;
    while (in >> pair) {
        const auto comma = pair.find(',');
        pts.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    return pts;
}

}  // namespace

TEST_CASE("manifest parsing resolves paths against the manifest directory") {
    const auto m = load_manifest(kScenarios / "toy" / "manifest.json");
    CHECK(m.scenario == kScenarios / "toy" / "scenario_storage.json");
    CHECK(m.epsilon_grid == std::vector<double>{0.0, 0.1});
    REQUIRE(m.directions.size() == 1);
    CHECK(m.directions[0].kind == DirectionKind::Storage);

    const auto doc = nlohmann::json::parse(R"({"scenario": "/abs/s.json", "directions": [{"kind": "res", "techs": ["pv"]}],
        "tolerances": {"feas": 1e-6}})");
    const auto parsed = parse_manifest(doc, "/elsewhere");
    CHECK(parsed.scenario == fs::path("/abs/s.json"));
    CHECK(parsed.epsilon_grid == default_epsilon_grid());
    CHECK(parsed.solver.feasibility_tol == 1e-6);
    CHECK(direction_label(parsed.directions[0]) == "res:pv");

    CHECK_THROWS_AS(parse_manifest(nlohmann::json::parse(R"({"directions": []})"), "."), Error);
    CHECK_THROWS_AS(parse_manifest(nlohmann::json::parse(R"({"scenario": "s", "directions": [{"kind": "wind"}]})"), "."),
                    Error);
}

TEST_CASE("default labels and curve file stems") {
    CHECK(direction_label({DirectionKind::Country, "DE", {}, ""}) == "country:DE");
    CHECK(direction_label({DirectionKind::Line, "N-S", {}, ""}) == "line:N-S");
    CHECK(direction_label({DirectionKind::Res, "", {"onshore", "pv"}, ""}) == "res:onshore+pv");
    CHECK(direction_label({DirectionKind::Storage, "", {}, "bat"}) == "bat");
    CHECK(curve_file_stem("country:DE") == "country_DE");
    CHECK(curve_file_stem("res:a+b/c") == "res_a_b_c");
}

TEST_CASE("validate reports machine-readable codes") {
    const fs::path out = scratch("validate");
    SUBCASE("valid manifest") { CHECK(validate(toy_manifest(out)).empty()); }
    SUBCASE("unknown country") {
        RunManifest m = load_manifest(kScenarios / "four_node" / "manifest.json");
        m.directions = {{DirectionKind::Country, "ATLANTIS", {}, ""}};
        CHECK(codes(validate(m)) == std::vector<std::string>{"UnknownNode"});
    }
    SUBCASE("duplicate labels") {
        RunManifest m = toy_manifest(out);
        m.directions.push_back({DirectionKind::Storage, "", {}, ""});
        CHECK(codes(validate(m)) == std::vector<std::string>{"DuplicateLabel"});
    }
    SUBCASE("labels that collide after sanitising") {
        RunManifest m = toy_manifest(out);
        m.directions = {{DirectionKind::Storage, "", {}, "a:b"}, {DirectionKind::Storage, "", {}, "a/b"}};
        CHECK(codes(validate(m)) == std::vector<std::string>{"DuplicateLabel"});
    }
    SUBCASE("grid problems") {
        RunManifest m = toy_manifest(out);
        m.epsilon_grid = {};
        CHECK(codes(validate(m)) == std::vector<std::string>{"EmptyGrid"});
        m.epsilon_grid = {0.1, 0.1};
        CHECK(codes(validate(m)) == std::vector<std::string>{"InvalidGrid"});
        m.epsilon_grid = {-0.1, 0.0};
        CHECK(codes(validate(m)) == std::vector<std::string>{"NegativeEpsilon"});
    }
    SUBCASE("direction problems") {
        RunManifest m = toy_manifest(out);
        m.directions = {};
        CHECK(codes(validate(m)) == std::vector<std::string>{"EmptyDirections"});
        m.directions = {{DirectionKind::Line, "XY", {}, ""}};
        CHECK(codes(validate(m)) == std::vector<std::string>{"UnknownLine"});
        m.directions = {{DirectionKind::Res, "", {}, "res"}};
        CHECK(codes(validate(m)) == std::vector<std::string>{"EmptySubset"});
        m.directions = {{DirectionKind::Res, "", {"gas"}, ""}};
        CHECK(codes(validate(m)) == std::vector<std::string>{"UnknownTech"});
        m.directions = {{DirectionKind::Storage, "", {}, "a,b"}};
        CHECK(codes(validate(m)) == std::vector<std::string>{"InvalidLabel"});
    }
    SUBCASE("tolerances and files") {
        RunManifest m = toy_manifest(out);
        m.solver.pivot_tol = 0.0;
        CHECK(codes(validate(m)) == std::vector<std::string>{"InvalidTolerance"});
        m = toy_manifest(out);
        m.scenario = out / "absent.json";
        CHECK(codes(validate(m)) == std::vector<std::string>{"MissingFile"});
    }
}

TEST_CASE("toy run writes one row per grid point and direction") {
    const fs::path out = scratch("toy");
    std::ostringstream log;
    REQUIRE(run(toy_manifest(out), log) == kSuccess);

    const std::string csv = slurp(out / "sweep.csv");
    std::istringstream lines(csv);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "direction,epsilon,c_star,status");
    CHECK(rows[1].starts_with("storage,0,"));
    CHECK(rows[2].starts_with("storage,0.1,"));
    CHECK(fs::is_regular_file(out / "optimal_solution.json"));
    CHECK(fs::is_regular_file(out / "curves" / "storage.svg"));
}

TEST_CASE("missing time-series CSV is fatal and names the path") {
    const fs::path dir = scratch("missing_csv");
    std::ofstream(dir / "scenario.json") << R"({"horizon": 2, "step_hours": 1,
        "nodes": [{"id": "N", "load": "nowhere.csv"}],
        "generators": [{"id": "gas", "node": "N", "kind": "dispatchable", "capex": 1, "opex": 1}],
        "storage": [{"id": "b", "node": "N", "power_capex": 1}]})";
    std::ofstream(dir / "manifest.json") << R"({"scenario": "scenario.json", "epsilons": [0],
        "directions": [{"kind": "storage"}], "output_dir": "out"})";
    std::ostringstream log;
    CHECK(run(load_manifest(dir / "manifest.json"), log) == kFatal);
    CHECK(log.str().find((dir / "nowhere.csv").string()) != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("a negative epsilon stops the run before any solve") {
    const fs::path out = scratch("negative");
    RunManifest m = toy_manifest(out / "result");
    m.epsilon_grid = {-0.05, 0.0};
    std::ostringstream log;
    CHECK(run(m, log) == kFatal);
    CHECK(log.str().find("NegativeEpsilon") != std::string::npos);
    CHECK(log.str().find("optimal objective") == std::string::npos);
    CHECK_FALSE(fs::exists(out / "result"));
}

TEST_CASE("sweep.csv is byte-identical across runs") {
    const fs::path a = scratch("repro_a"), b = scratch("repro_b");
    std::ostringstream log;
    REQUIRE(run(toy_manifest(a), log) == kSuccess);
    RunManifest m = toy_manifest(b);
    m.threads = 3;
    REQUIRE(run(m, log) == kSuccess);
    CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
    CHECK(slurp(a / "curves" / "storage.svg") == slurp(b / "curves" / "storage.svg"));
}

TEST_CASE("the persisted solution lies in the epsilon-zero space") {
    const fs::path out = scratch("reload");
    std::ostringstream log;
    REQUIRE(run(toy_manifest(out), log) == kSuccess);
    const auto model = cep::compile(cep::load_scenario(kScenarios / "toy" / "scenario_storage.json"));
    const auto doc = cep::read_json_file(out / "optimal_solution.json");
    const Solution stored = solution_from_json(doc, model.lp);
    const auto space = build_epsilon_space(model.lp, stored, 0.0);
    CHECK(space.contains(stored.primal));
    CHECK(doc.at("investments").at("storage").contains("battery"));
}

TEST_CASE("solve_scenario writes the optimum of the toy") {
    const fs::path out = scratch("solve");
    std::ostringstream log;
    REQUIRE(solve_scenario(kScenarios / "toy" / "scenario.json", out, {}, log) == kSuccess);
    const auto doc = cep::read_json_file(out / "optimal_solution.json");
    CHECK(doc.at("objective").get<double>() == doctest::Approx(23.0).epsilon(1e-12));
    CHECK(doc.at("investments").at("generators").at("gas").get<double>() == doctest::Approx(2.0));
    CHECK(solve_scenario(out / "absent.json", out, {}, log) == kFatal);
}

TEST_CASE("curve polylines are non-increasing") {
    const fs::path out = scratch("curves");
    RunManifest m = load_manifest(kScenarios / "four_node" / "manifest.json");
    m.output_dir = out;
    m.epsilon_grid = {0.0, 0.05, 0.2};
    m.directions = {{DirectionKind::AllLines, "", {}, ""}, {DirectionKind::Storage, "", {}, ""}};
    std::ostringstream log;
    REQUIRE(run(m, log) == kSuccess);
    for (const char* stem : {"all_lines", "storage"}) {
        const auto pts = polyline(slurp(out / "curves" / (std::string(stem) + ".svg")));
        REQUIRE(pts.size() == 3);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            CHECK(pts[i].first > pts[i - 1].first);
            CHECK(pts[i].second >= pts[i - 1].second - 1e-3);
        }
    }
}

TEST_CASE("render_curve_svg skips failed rows and escapes the title") {
    NecessaryConditionResult ok{0.0, "a<b", 2.0, {}, RowStatus::Found, ""};
    NecessaryConditionResult bad{0.1, "a<b", std::nan(""), {}, RowStatus::UnboundedDirection, "x"};
    NecessaryConditionResult tail{0.2, "a<b", 1.0, {}, RowStatus::Found, ""};
    const std::string svg = render_curve_svg("a<b", {&ok, &bad, &tail});
    CHECK(svg.find("a&lt;b") != std::string::npos);
    CHECK(svg.find("width=\"800\" height=\"500\"") != std::string::npos);
    CHECK(polyline(svg).size() == 2);
    CHECK(svg.find("10%") != std::string::npos);  // tick at the failed grid point is still drawn
}
