// thermograph: mesh generation, simulation, analysis and entropy reports for
// heat conduction on thermodynamic graphs.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 graph validation failure,
// 3 simulation diverged (non-finite temperature).

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "thermograph/analysis.hpp"
#include "thermograph/dynamics.hpp"
#include "thermograph/entropy.hpp"
#include "thermograph/error.hpp"
#include "thermograph/io.hpp"
#include "thermograph/mesh.hpp"

#ifndef THERMOGRAPH_VERSION
#define THERMOGRAPH_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace thermograph;

constexpr int kExitIo = 1;
constexpr int kExitInvalidGraph = 2;
constexpr int kExitDiverged = 3;

struct ExitRequest {
  int code;
  std::string message;
};

unsigned thread_cap() {
  if (const char* env = std::getenv("THERMOGRAPH_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring THERMOGRAPH_THREADS=" << env << "\n";
  }
  return 1;
}

BBox parse_bbox(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 4 || !(v[2] > v[0]) || !(v[3] > v[1])) {
    throw ExitRequest{kExitIo, "--bbox expects x0,y0,x1,y1 with x1 > x0 and y1 > y0"};
  }
  return BBox{v[0], v[1], v[2], v[3]};
}

std::pair<double, double> parse_range(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ExitRequest{kExitIo, "range expects lo,hi"};
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    io::write_file_atomic(path, contents);
  }
}

ThermoGraph load_valid_graph(const std::string& path) {
  ThermoGraph graph = io::read_graph(path);
  const auto report = validate(graph);
  if (!report.ok()) throw ExitRequest{kExitInvalidGraph, path + " is not a valid thermodynamic graph:\n" + report.summary()};
  return graph;
}

/// Resolves --dt: a number, "auto" (safety factor times the bound) or
/// "critical" (exactly the bound).
double resolve_dt(const std::string& text, const ThermoGraph& graph, double safety) {
  if (text == "auto") return auto_dt(graph, safety);
  if (text == "critical") return max_stable_dt(graph);
  std::size_t used = 0;
  double dt = 0.0;
  try {
    dt = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(dt > 0.0)) throw ExitRequest{kExitIo, "--dt must be a positive number, auto or critical"};
  return dt;
}

json json_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct Manifest {
  json doc;
  std::string path;
};

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int run(const std::vector<std::string>& argv);

int run(const std::vector<std::string>& argv) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"Heat conduction on thermodynamic graphs", "thermograph"};
  app.set_version_flag("--version", THERMOGRAPH_VERSION);
  app.require_subcommand(1);

  // Shared
  std::string out_path = "-";
  std::string manifest_path;
  bool no_manifest = false;
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--out", out_path, "Output file ('-' for stdout)");
    cmd->add_option("--manifest", manifest_path, "Run manifest path (default: <out>.manifest.json)");
    cmd->add_flag("--no-manifest", no_manifest, "Do not write a run manifest");
  };

  // mesh
  auto* mesh = app.add_subcommand("mesh", "Build a graph from a grid, a sites CSV or random sites");
  std::string grid, sites_path, bbox_text = "0,0,1,1", materials_path;
  std::size_t random_n = 0;
  std::uint64_t seed = 0;
  double grid_dx = 1.0, grid_dy = 1.0;
  bool boundary_ring = false;
  Material material;
  auto* grid_opt = mesh->add_option("--grid", grid, "Regular grid NXxNY");
  auto* sites_opt = mesh->add_option("--sites", sites_path, "Sites CSV x,y[,material-id]");
  auto* random_opt = mesh->add_option("--random", random_n, "Number of uniform random sites");
  grid_opt->excludes(sites_opt)->excludes(random_opt);
  sites_opt->excludes(random_opt);
  mesh->add_option("--seed", seed, "Seed for --random");
  mesh->add_option("--bbox", bbox_text, "Bounding box x0,y0,x1,y1");
  mesh->add_option("--dx", grid_dx, "Grid spacing in x");
  mesh->add_option("--dy", grid_dy, "Grid spacing in y");
  mesh->add_flag("--boundary-ring", boundary_ring, "Flag the grid perimeter as boundary");
  mesh->add_option("--materials", materials_path, "Materials JSON (indexed by the sites CSV material id)");
  mesh->add_option("--rho", material.rho, "Density");
  mesh->add_option("--c", material.c, "Specific heat capacity");
  mesh->add_option("--k", material.k, "Thermal conductivity");
  mesh->add_option("--mu", material.mu, "Latent heat");
  mesh->add_option("--melting", material.melting, "Melting temperature");
  add_output(mesh);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run the explicit update and write a trajectory CSV");
  std::string graph_path, field_path, dt_text = "auto", init_range = "0,100", final_field_path;
  std::optional<double> init_uniform;
  std::optional<std::uint64_t> init_random;
  SimulationConfig config;
  bool per_vertex = false;
  sim->add_option("-g,--graph", graph_path, "Graph JSON")->required();
  auto* field_opt = sim->add_option("-f,--field", field_path, "Initial field CSV");
  auto* uniform_opt = sim->add_option("--init-uniform", init_uniform, "Constant initial temperature");
  auto* rinit_opt = sim->add_option("--init-random", init_random, "Seed for a uniform random initial field");
  field_opt->excludes(uniform_opt)->excludes(rinit_opt);
  uniform_opt->excludes(rinit_opt);
  sim->add_option("--init-range", init_range, "lo,hi for --init-random");
  sim->add_option("--dt", dt_text, "Time step: number, auto or critical");
  sim->add_option("--safety-factor", config.safety_factor, "Fraction of the stability bound for --dt auto");
  sim->add_option("--steps", config.steps, "Maximum number of steps");
  sim->add_option("--tol", config.convergence_tol, "Sup-norm convergence threshold");
  sim->add_option("--record-every", config.record_every, "Record stride");
  sim->add_flag("--phase", config.phase_tracking, "Track latent heat and phase");
  sim->add_flag("--per-vertex", per_vertex, "Append per-vertex temperature columns");
  sim->add_option("--final-field", final_field_path, "Write the final field CSV here");
  add_output(sim);

  // analyze
  auto* ana = app.add_subcommand("analyze", "Stability and operator diagnostics as JSON");
  std::optional<std::size_t> tau;
  bool limit = false;
  ana->add_option("-g,--graph", graph_path, "Graph JSON")->required();
  ana->add_option("--dt", dt_text, "Time step: number, auto or critical");
  ana->add_option("--safety-factor", config.safety_factor, "Fraction of the stability bound for --dt auto");
  ana->add_option("--tau", tau, "Power for the contraction factor (default n-1)");
  ana->add_flag("--limit", limit, "Include the operator limit (graphs without boundary)");
  ana->add_option("-f,--field", field_path, "Field CSV supplying boundary temperatures");
  add_output(ana);

  // entropy
  auto* ent = app.add_subcommand("entropy", "Entropy report of a field as JSON");
  std::optional<std::string> ent_dt;
  ent->add_option("-g,--graph", graph_path, "Graph JSON")->required();
  ent->add_option("-f,--field", field_path, "Field CSV")->required();
  ent->add_option("--dt", ent_dt, "Also report the one-step entropy increment");
  add_output(ent);

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  std::string replay_path;
  replay->add_option("manifest", replay_path, "Manifest JSON")->required();

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitIo;
  }

  if (replay->parsed()) {
    const json doc = json::parse(io::read_file(replay_path));
    return run(doc.at("argv").get<std::vector<std::string>>());
  }

  config.threads = thread_cap();
  json config_echo;
  json inputs = json::array();
  json outputs = json::array();
  if (out_path != "-") outputs.push_back(out_path);
  std::optional<std::uint64_t> manifest_seed;
  int exit_code = 0;

  if (mesh->parsed()) {
    ThermoGraph graph;
    if (!grid.empty()) {
      auto x = grid.find('x');
      if (x == std::string::npos) throw ExitRequest{kExitIo, "--grid expects NXxNY"};
      const std::size_t nx = std::stoul(grid.substr(0, x)), ny = std::stoul(grid.substr(x + 1));
      graph = build_grid_graph(nx, ny, grid_dx, grid_dy, material, boundary_ring);
      config_echo = {{"grid", grid}, {"dx", grid_dx}, {"dy", grid_dy}, {"boundary_ring", boundary_ring}};
    } else {
      SiteSet sites;
      const BBox bbox = parse_bbox(bbox_text);
      if (!sites_path.empty()) {
        std::istringstream in(io::read_file(sites_path));
        auto rows = io::read_sites(in);
        sites.points = std::move(rows.points);
        sites.material_of = std::move(rows.material_of);
        sites.bbox = bbox;
        inputs.push_back(sites_path);
        config_echo = {{"sites", sites_path}};
      } else if (random_n > 0) {
        sites = random_sites(random_n, bbox, seed, material);
        manifest_seed = seed;
        config_echo = {{"random", random_n}, {"seed", seed}};
      } else {
        throw ExitRequest{kExitIo, "mesh needs one of --grid, --sites or --random"};
      }
      sites.materials = {material};
      if (!materials_path.empty()) {
        auto table = io::materials_from_json(json::parse(io::read_file(materials_path)));
        sites.materials = table.materials;
        inputs.push_back(materials_path);
        std::vector<bool> flags(sites.size(), false);
        for (std::size_t s = 0; s < sites.size(); ++s) {
          const std::size_t m = sites.material_of.empty() ? 0 : sites.material_of[s];
          if (m >= table.materials.size()) throw ExitRequest{kExitIo, "site " + std::to_string(s) + " uses an unknown material"};
          flags[s] = table.boundary[m];
        }
        sites.boundary = std::move(flags);
      } else if (!sites.material_of.empty()) {
        throw ExitRequest{kExitIo, "the sites CSV names material ids but no --materials file was given"};
      }
      config_echo["bbox"] = bbox_text;
      graph = build_voronoi_graph(sites);
    }
    config_echo["material"] = {{"rho", material.rho}, {"c", material.c}, {"k", material.k}, {"mu", material.mu},
                               {"melting", material.melting}};
    const auto report = validate(graph);
    if (!report.ok()) throw ExitRequest{kExitInvalidGraph, "generated graph failed validation:\n" + report.summary()};
    emit(out_path, io::graph_to_json(graph).dump(1) + "\n");
    std::cerr << "mesh: " << graph.size() << " vertices, " << graph.edges().size() << " edges\n";
  } else if (sim->parsed()) {
    const ThermoGraph graph = load_valid_graph(graph_path);
    inputs.push_back(graph_path);
    TemperatureField field0;
    if (!field_path.empty()) {
      field0 = io::read_field(field_path);
      inputs.push_back(field_path);
    } else if (init_uniform) {
      field0 = TemperatureField::uniform(graph.size(), *init_uniform);
    } else if (init_random) {
      const auto [lo, hi] = parse_range(init_range);
      std::mt19937_64 rng(*init_random);
      std::vector<double> u(graph.size());
      for (auto& x : u) x = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      field0 = TemperatureField::from_temperatures(std::move(u));
      manifest_seed = *init_random;
    } else {
      throw ExitRequest{kExitIo, "simulate needs --field, --init-uniform or --init-random"};
    }
    check_field(graph, field0);
    config.dt = resolve_dt(dt_text, graph, config.safety_factor);
    config.keep_fields = per_vertex;
    config_echo = {{"dt", config.dt},
                   {"dt_mode", dt_text},
                   {"max_stable_dt", json_or_null(max_stable_dt(graph))},
                   {"steps", config.steps},
                   {"convergence_tol", config.convergence_tol},
                   {"record_every", config.record_every},
                   {"safety_factor", config.safety_factor},
                   {"phase_tracking", config.phase_tracking},
                   {"per_vertex", per_vertex}};
    Trajectory traj;
    try {
      traj = simulate(graph, field0, config);
    } catch (const NonFiniteFieldError& e) {
      throw ExitRequest{kExitDiverged, std::string("simulation diverged: ") + e.what()};
    }
    std::ostringstream csv;
    io::write_trajectory(csv, traj, per_vertex);
    emit(out_path, csv.str());
    if (!final_field_path.empty()) {
      std::ostringstream f;
      io::write_field(f, traj.final_field);
      io::write_file_atomic(final_field_path, f.str());
      outputs.push_back(final_field_path);
    }
    config_echo["converged"] = traj.converged;
    config_echo["steps_taken"] = traj.steps_taken;
    config_echo["final_t"] = traj.final_t;
    std::cerr << "simulate: dt=" << io::format_double(config.dt) << " steps=" << traj.steps_taken
              << " converged=" << (traj.converged ? "true" : "false") << " final_t=" << io::format_double(traj.final_t)
              << "\n";
  } else if (ana->parsed()) {
    const ThermoGraph graph = load_valid_graph(graph_path);
    inputs.push_back(graph_path);
    AnalysisOptions options;
    options.dt = resolve_dt(dt_text, graph, config.safety_factor);
    options.tau = tau;
    options.limit_matrix = limit;
    if (!field_path.empty()) {
      auto field = io::read_field(field_path);
      check_field(graph, field);
      options.boundary_values = field.u;
      inputs.push_back(field_path);
    }
    const auto report = analyze(graph, options);
    json doc = {{"dt", report.dt},
                {"max_stable_dt", json_or_null(report.max_stable_dt)},
                {"is_stochastic", report.is_stochastic},
                {"positive_diagonal", report.positive_diagonal},
                {"diagonally_dominant", report.diagonally_dominant},
                {"tau", report.tau ? json(*report.tau) : json(nullptr)},
                {"lambda_tau", report.lambda_tau ? json(*report.lambda_tau) : json(nullptr)},
                {"steady_state", report.steady_state ? json(*report.steady_state) : json(nullptr)},
                {"notes", report.notes}};
    if (report.limit_matrix) {
      json rows = json::array();
      for (Eigen::Index i = 0; i < report.limit_matrix->rows(); ++i) {
        std::vector<double> row(report.limit_matrix->cols());
        for (Eigen::Index j = 0; j < report.limit_matrix->cols(); ++j) row[j] = (*report.limit_matrix)(i, j);
        rows.push_back(row);
      }
      doc["limit_matrix"] = rows;
    }
    config_echo = {{"dt", options.dt}, {"dt_mode", dt_text}, {"limit", limit}};
    emit(out_path, doc.dump(1) + "\n");
  } else if (ent->parsed()) {
    const ThermoGraph graph = load_valid_graph(graph_path);
    const auto field = io::read_field(field_path);
    inputs.push_back(graph_path);
    inputs.push_back(field_path);
    check_field(graph, field);
    const auto r = entropy_report(graph, field);
    json doc = {{"Phi", r.Phi}, {"M", r.M}, {"D", r.D}, {"N", r.N}, {"S", r.S}};
    if (ent_dt) {
      const double dt = resolve_dt(*ent_dt, graph, config.safety_factor);
      doc["dt"] = dt;
      doc["delta_S"] = entropy_delta(graph, field, dt);
    }
    config_echo = {{"dt", ent_dt ? json(*ent_dt) : json(nullptr)}};
    emit(out_path, doc.dump(1) + "\n");
  }

  if (!no_manifest && (out_path != "-" || !manifest_path.empty())) {
    const std::string path = manifest_path.empty() ? out_path + ".manifest.json" : manifest_path;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json doc = {{"tool", "thermograph"},
                {"version", THERMOGRAPH_VERSION},
                {"command", app.get_subcommands().front()->get_name()},
                {"argv", argv},
                {"config", config_echo},
                {"seed", manifest_seed ? json(*manifest_seed) : json(nullptr)},
                {"inputs", inputs},
                {"outputs", outputs},
                {"started_utc", utc_now()},
                {"wall_clock_seconds", seconds}};
    io::write_file_atomic(path, doc.dump(1) + "\n");
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const ExitRequest& e) {
    std::cerr << "thermograph: " << e.message << "\n";
    return e.code;
  } catch (const thermograph::Error& e) {
    std::cerr << "thermograph: " << thermograph::errc_name(e.code()) << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "thermograph: " << e.what() << "\n";
    return kExitIo;
  }
}
