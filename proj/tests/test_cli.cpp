#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "thermograph/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Workdir {
  fs::path path;
  Workdir() {
    path = fs::temp_directory_path() / ("thermograph_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Workdir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

/// Runs the CLI with `args`; stdout and stderr are discarded.
int cli(const std::string& args) {
  const std::string command = std::string("\"") + THERMOGRAPH_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) { return thermograph::io::read_file(path); }

json load(const std::string& path) { return json::parse(slurp(path)); }

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::vector<std::vector<double>> csv_rows(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const char* kPair = R"({"vertices": [{"id": 0, "rho": 1, "c": 1, "d": 1}, {"id": 1, "rho": 1, "c": 1, "d": 1}],
  "edges": [{"v": 0, "w": 1, "S": 1, "k": 1, "dx": 1}]})";

const char* kBoundaryPath = R"({"vertices": [{"id": 0, "rho": 1, "d": 1, "boundary": true},
  {"id": 1, "rho": 1, "c": 1, "d": 1}, {"id": 2, "rho": 1, "d": 1, "boundary": true}],
  "edges": [{"v": 0, "w": 1, "S": 1, "k": 1, "dx": 1}, {"v": 1, "w": 2, "S": 1, "k": 1, "dx": 1}]})";

}  // namespace

TEST_CASE("cli mesh") {
  Workdir dir;
  REQUIRE(cli("mesh --grid 3x3 --dx 1 --dy 1 -o " + dir / "grid.json") == 0);
  const auto grid = load(dir / "grid.json");
  CHECK(grid["vertices"].size() == 9);
  int center_degree = 0;
  for (const auto& e : grid["edges"]) center_degree += (e["v"] == 4) + (e["w"] == 4);
  CHECK(center_degree == 4);
  CHECK(fs::exists(dir / "grid.json.manifest.json"));

  write(dir / "sites.csv", "x,y\n0.2,0.3\n0.7,0.2\n0.5,0.8\n0.9,0.9\n0.1,0.9\n");
  REQUIRE(cli("mesh --sites " + dir / "sites.csv" + " --bbox 0,0,1,1 -o " + dir / "sites.json") == 0);
  const auto voronoi = load(dir / "sites.json");
  double area = 0.0;
  for (const auto& v : voronoi["vertices"]) area += v["d"].get<double>();
  CHECK(std::abs(area - 1.0) <= 1e-9);

  REQUIRE(cli("mesh --random 50 --seed 7 -o " + dir / "r1.json") == 0);
  REQUIRE(cli("mesh --random 50 --seed 7 -o " + dir / "r2.json") == 0);
  CHECK(slurp(dir / "r1.json") == slurp(dir / "r2.json"));
  REQUIRE(cli("mesh --random 50 --seed 8 -o " + dir / "r3.json") == 0);
  CHECK(slurp(dir / "r1.json") != slurp(dir / "r3.json"));

  CHECK(cli("mesh --sites " + dir / "missing.csv" + " -o " + dir / "x.json") == 1);
  CHECK(cli("mesh --grid 3x3 --k -1 -o " + dir / "bad.json") == 2);
}

TEST_CASE("cli simulate") {
  Workdir dir;
  REQUIRE(cli("mesh --grid 6x5 --dx 0.1 --dy 0.1 -o " + dir / "g.json") == 0);
  REQUIRE(cli("simulate -g " + dir / "g.json" + " --init-random 3 --init-range 280,320 --dt auto --steps 100000 " +
              "--record-every 50 -o " + dir / "traj.csv") == 0);
  const auto rows = csv_rows(dir / "traj.csv");
  REQUIRE(rows.size() > 2);
  const double n0 = rows.front()[4];
  CHECK(n0 > 0.0);
  CHECK(rows.back()[4] < 1e-6 * n0);
  for (const auto& r : rows) CHECK(std::abs(r[1] - rows.front()[1]) <= 1e-10 * std::abs(rows.front()[1]));
  const auto manifest = load(dir / "traj.csv.manifest.json");
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["config"]["converged"] == true);
  CHECK(manifest["config"]["dt"].get<double>() == doctest::Approx(0.9 * manifest["config"]["max_stable_dt"].get<double>()));

  write(dir / "pair.json", kPair);
  write(dir / "pair.csv", "vertex,u\n0,0\n1,2\n");
  REQUIRE(cli("simulate -g " + dir / "pair.json" + " -f " + dir / "pair.csv" +
              " --dt critical --steps 100 --per-vertex -o " + dir / "crit.csv") == 0);
  const auto crit = csv_rows(dir / "crit.csv");
  CHECK(crit.size() == 101);
  for (std::size_t i = 0; i < crit.size(); ++i) {
    CHECK(crit[i][4] == 2.0);
    CHECK(crit[i][6] == (i % 2 == 0 ? 0.0 : 2.0));
  }
  CHECK(load(dir / "crit.csv.manifest.json")["config"]["converged"] == false);

  REQUIRE(cli("mesh --grid 10x10 -o " + dir / "ten.json") == 0);
  CHECK(cli("simulate -g " + dir / "ten.json" + " --init-random 1 --dt 0.5 --steps 100000 -o " + dir / "div.csv") == 3);

  CHECK(cli("simulate -g " + dir / "pair.json" + " -o " + dir / "none.csv") == 1);
}

TEST_CASE("cli analyze and entropy") {
  Workdir dir;
  write(dir / "pair.json", kPair);
  REQUIRE(cli("analyze -g " + dir / "pair.json" + " --dt 0.5 --limit -o " + dir / "a.json") == 0);
  const auto a = load(dir / "a.json");
  CHECK(a["max_stable_dt"] == 1.0);
  CHECK(a["is_stochastic"] == true);
  CHECK(a["limit_matrix"][0][1].get<double>() == doctest::Approx(0.5));

  REQUIRE(cli("analyze -g " + dir / "pair.json" + " --dt 1.5 -o " + dir / "over.json") == 0);
  CHECK(load(dir / "over.json")["is_stochastic"] == false);

  write(dir / "path.json", kBoundaryPath);
  write(dir / "bc.csv", "vertex,u\n0,0\n1,7\n2,100\n");
  REQUIRE(cli("analyze -g " + dir / "path.json" + " --dt auto -f " + dir / "bc.csv" + " -o " + dir / "b.json") == 0);
  const auto b = load(dir / "b.json");
  CHECK(b["steady_state"][1].get<double>() == doctest::Approx(50.0));
  CHECK(b["lambda_tau"].get<double>() < 1.0);

  write(dir / "f.csv", "vertex,u\n0,0\n1,2\n");
  REQUIRE(cli("entropy -g " + dir / "pair.json" + " -f " + dir / "f.csv" + " --dt 0.5 -o " + dir / "e.json") == 0);
  const auto e = load(dir / "e.json");
  CHECK(e["N"] == 2.0);
  CHECK(e["S"] == 2.0);
  CHECK(e["delta_S"] == 2.0);

  write(dir / "asym.json", R"({"vertices": [{"id": 0, "rho": 1, "c": 1, "d": 1}, {"id": 1, "rho": 1, "c": 1, "d": 1}],
    "edges": [{"v": 0, "w": 1, "S": 1, "k": 1, "dx": 1, "directed": true}]})");
  CHECK(cli("analyze -g " + dir / "asym.json" + " --dt 0.5 -o " + dir / "x.json") == 2);
}

TEST_CASE("cli manifest replay is byte-identical") {
  Workdir dir;
  REQUIRE(cli("mesh --random 30 --seed 11 -o " + dir / "m.json") == 0);
  REQUIRE(cli("simulate -g " + dir / "m.json" + " --init-random 5 --dt auto --steps 400 --per-vertex -o " +
              dir / "t.csv" + " --final-field " + dir / "final.csv") == 0);
  REQUIRE(cli("analyze -g " + dir / "m.json" + " --dt auto --limit -o " + dir / "a.json") == 0);
  const std::string mesh = slurp(dir / "m.json");
  const std::string traj = slurp(dir / "t.csv");
  const std::string final_field = slurp(dir / "final.csv");
  const std::string analysis = slurp(dir / "a.json");

  fs::remove(dir / "m.json");
  fs::remove(dir / "t.csv");
  fs::remove(dir / "final.csv");
  fs::remove(dir / "a.json");
  REQUIRE(cli("replay " + dir / "m.json.manifest.json") == 0);
  REQUIRE(cli("replay " + dir / "t.csv.manifest.json") == 0);
  REQUIRE(cli("replay " + dir / "a.json.manifest.json") == 0);
  CHECK(slurp(dir / "m.json") == mesh);
  CHECK(slurp(dir / "t.csv") == traj);
  CHECK(slurp(dir / "final.csv") == final_field);
  CHECK(slurp(dir / "a.json") == analysis);
}
