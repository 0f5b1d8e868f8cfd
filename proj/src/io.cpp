#include "thermograph/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "thermograph/error.hpp"

namespace thermograph::io {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& message) { throw Error(Errc::parse_error, message); }

double number_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) parse_fail(where + ": missing numeric field \"" + key + "\"");
  return it->get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_number()) parse_fail(where + ": field \"" + key + "\" must be a number");
  return it->get<double>();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& cell : out) {
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_index(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  (void)ec;
  return {buf, ptr};
}

nlohmann::ordered_json graph_to_json(const ThermoGraph& graph) {
  using ojson = nlohmann::ordered_json;
  ojson vertices = ojson::array();
  for (VertexId v = 0; v < graph.size(); ++v) {
    const auto& vp = graph.vertex(v);
    ojson item = {{"id", v}};
    if (vp.position) {
      item["x"] = vp.position->x;
      item["y"] = vp.position->y;
    }
    item["rho"] = vp.rho;
    item["c"] = vp.boundary ? ojson(nullptr) : ojson(vp.c);
    item["d"] = vp.d;
    item["mu"] = vp.mu;
    item["melting"] = vp.melting;
    item["boundary"] = vp.boundary;
    vertices.push_back(std::move(item));
  }
  ojson edges = ojson::array();
  for (VertexId v = 0; v < graph.size(); ++v) {
    for (const auto& a : graph.neighbors(v)) {
      const Arc* back = graph.find_arc(a.target, v);
      const bool mirrored = back != nullptr && back->S == a.S && back->k == a.k && back->dx == a.dx;
      if (mirrored && v > a.target) continue;
      ojson item = {{"v", v}, {"w", a.target}, {"S", a.S}, {"k", a.k}, {"dx", a.dx}};
      if (!mirrored || v == a.target) item["directed"] = true;
      edges.push_back(std::move(item));
    }
  }
  return ojson{{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

ThermoGraph graph_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    parse_fail("graph JSON needs a \"vertices\" array");
  }
  const auto& jv = doc["vertices"];
  const std::size_t n = jv.size();
  std::vector<VertexProps> vertices(n);
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& item = jv[i];
    const std::string where = "vertices[" + std::to_string(i) + "]";
    if (!item.is_object()) parse_fail(where + " must be an object");
    if (!item.contains("id") || !item["id"].is_number_unsigned()) parse_fail(where + ": missing integer \"id\"");
    const auto id = item["id"].get<std::size_t>();
    if (id >= n || seen[id]) parse_fail(where + ": ids must be 0..n-1, each used once");
    seen[id] = 1;
    VertexProps vp;
    vp.rho = number_field(item, "rho", where);
    vp.d = number_field(item, "d", where);
    vp.c = number_or(item, "c", std::numeric_limits<double>::infinity(), where);
    vp.mu = number_or(item, "mu", 0.0, where);
    vp.melting = number_or(item, "melting", 0.0, where);
    if (auto it = item.find("boundary"); it != item.end()) {
      if (!it->is_boolean()) parse_fail(where + ": \"boundary\" must be a boolean");
      vp.boundary = it->get<bool>();
    }
    if (item.contains("x") && item.contains("y")) vp.position = Point2{number_field(item, "x", where), number_field(item, "y", where)};
    vertices[id] = vp;
  }
  std::vector<EdgeProps> arcs;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) parse_fail("\"edges\" must be an array");
    std::size_t i = 0;
    for (const auto& item : doc["edges"]) {
      const std::string where = "edges[" + std::to_string(i++) + "]";
      if (!item.is_object() || !item.contains("v") || !item.contains("w") || !item["v"].is_number_unsigned() ||
          !item["w"].is_number_unsigned()) {
        parse_fail(where + ": needs integer \"v\" and \"w\"");
      }
      EdgeProps e{item["v"].get<std::size_t>(), item["w"].get<std::size_t>(), number_field(item, "S", where),
                  number_field(item, "k", where), number_field(item, "dx", where)};
      if (e.v >= n || e.w >= n) parse_fail(where + ": vertex id out of range");
      const bool directed = item.value("directed", false);
      arcs.push_back(e);
      if (!directed) arcs.push_back(EdgeProps{e.w, e.v, e.S, e.k, e.dx});
    }
  }
  return ThermoGraph(std::move(vertices), arcs);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::invalid_argument, "cannot write " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::invalid_argument, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::invalid_argument, "cannot move " + tmp + " to " + path + ": " + ec.message());
}

ThermoGraph read_graph(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    parse_fail(path + ": " + e.what());
  }
  return graph_from_json(doc);
}

void write_graph(const std::string& path, const ThermoGraph& graph) {
  write_file_atomic(path, graph_to_json(graph).dump(1) + "\n");
}

void write_field(std::ostream& os, const TemperatureField& field) {
  os << "vertex,u,f,latent\n";
  for (std::size_t v = 0; v < field.size(); ++v) {
    os << v << ',' << format_double(field.u[v]) << ',' << static_cast<int>(field.phase[v]) << ','
       << format_double(field.latent[v]) << '\n';
  }
}

TemperatureField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) parse_fail("field CSV is empty");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "vertex" || header[1] != "u") {
    parse_fail("field CSV header must start with \"vertex,u\"");
  }
  std::vector<std::pair<std::size_t, std::tuple<double, Phase, double>>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (split(line).size() == 1 && split(line)[0].empty()) continue;
    const auto cells = split(line);
    const std::string where = "field CSV line " + std::to_string(lineno);
    std::size_t id = 0;
    double u = 0.0, latent = 0.0, f = 0.0;
    if (cells.size() < 2 || !parse_index(cells[0], id) || !parse_double(cells[1], u)) parse_fail(where + ": bad row");
    if (cells.size() > 2 && !cells[2].empty() && (!parse_double(cells[2], f) || (f != 0.0 && f != 1.0))) {
      parse_fail(where + ": f must be 0 or 1");
    }
    if (cells.size() > 3 && !cells[3].empty() && !parse_double(cells[3], latent)) parse_fail(where + ": bad latent");
    rows.emplace_back(id, std::tuple{u, f == 1.0 ? Phase::liquid : Phase::solid, latent});
  }
  TemperatureField field;
  field.u.assign(rows.size(), 0.0);
  field.phase.assign(rows.size(), Phase::solid);
  field.latent.assign(rows.size(), 0.0);
  std::vector<char> seen(rows.size(), 0);
  for (const auto& [id, values] : rows) {
    if (id >= rows.size() || seen[id]) parse_fail("field CSV vertex ids must be 0..n-1, each used once");
    seen[id] = 1;
    std::tie(field.u[id], field.phase[id], field.latent[id]) = values;
  }
  return field;
}

TemperatureField read_field(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_field(in);
}

SiteRows read_sites(std::istream& is) {
  SiteRows rows;
  std::string line;
  std::size_t lineno = 0;
  bool any_material = false;
  std::vector<std::size_t> materials;
  while (std::getline(is, line)) {
    ++lineno;
    const auto cells = split(line);
    if (cells.size() == 1 && cells[0].empty()) continue;
    Point2 p;
    if (cells.size() < 2 || !parse_double(cells[0], p.x) || !parse_double(cells[1], p.y)) {
      if (rows.points.empty() && lineno == 1) continue;  // header
      parse_fail("sites CSV line " + std::to_string(lineno) + ": expected x,y[,material-id]");
    }
    std::size_t mat = 0;
    if (cells.size() > 2 && !cells[2].empty()) {
      if (!parse_index(cells[2], mat)) parse_fail("sites CSV line " + std::to_string(lineno) + ": bad material id");
      any_material = true;
    }
    rows.points.push_back(p);
    materials.push_back(mat);
  }
  if (any_material) rows.material_of = std::move(materials);
  return rows;
}

void write_trajectory(std::ostream& os, const Trajectory& trajectory, bool per_vertex) {
  const bool wide = per_vertex && !trajectory.records.empty() && !trajectory.records.front().field.u.empty();
  const std::size_t n = wide ? trajectory.records.front().field.size() : 0;
  os << "t,Q_total,M,D,N,S";
  for (std::size_t v = 0; v < n; ++v) os << ",u" << v;
  os << '\n';
  for (const auto& r : trajectory.records) {
    os << format_double(r.t) << ',' << format_double(r.Q_total) << ',' << format_double(r.entropy.M) << ','
       << format_double(r.entropy.D) << ',' << format_double(r.entropy.N) << ',' << format_double(r.entropy.S);
    for (std::size_t v = 0; v < n; ++v) os << ',' << format_double(r.field.u[v]);
    os << '\n';
  }
}

MaterialTable materials_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty()) parse_fail("materials JSON must be a non-empty array");
  MaterialTable table;
  std::size_t i = 0;
  for (const auto& item : doc) {
    const std::string where = "materials[" + std::to_string(i++) + "]";
    if (!item.is_object()) parse_fail(where + " must be an object");
    Material m;
    m.rho = number_field(item, "rho", where);
    m.c = number_field(item, "c", where);
    m.k = number_field(item, "k", where);
    m.mu = number_or(item, "mu", 0.0, where);
    m.melting = number_or(item, "melting", 0.0, where);
    table.materials.push_back(m);
    table.boundary.push_back(item.value("boundary", false));
  }
  return table;
}

}  // namespace thermograph::io
