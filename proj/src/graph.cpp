#include "thermograph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "thermograph/error.hpp"

namespace thermograph {

namespace {

std::string arc_name(VertexId v, VertexId w) {
  return "(" + std::to_string(v) + "," + std::to_string(w) + ")";
}

std::string vertex_name(VertexId v) { return "vertex " + std::to_string(v); }

}  // namespace

ThermoGraph::ThermoGraph(std::vector<VertexProps> vertices, const std::vector<EdgeProps>& arcs)
    : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  for (const auto& e : arcs) {
    if (e.v >= n || e.w >= n) {
      throw Error(Errc::invalid_argument, "arc " + arc_name(e.v, e.w) + " references a vertex outside 0.." +
                                              std::to_string(n == 0 ? 0 : n - 1));
    }
  }
  for (auto& vp : vertices_) {
    // Boundary vertices stand in for c = infinity; keep the stored value finite.
    if (vp.boundary && !std::isfinite(vp.c)) vp.c = 1.0;
  }

  std::vector<EdgeProps> sorted(arcs);
  std::stable_sort(sorted.begin(), sorted.end(), [](const EdgeProps& a, const EdgeProps& b) {
    return a.v != b.v ? a.v < b.v : a.w < b.w;
  });
  offsets_.assign(n + 1, 0);
  arcs_.reserve(sorted.size());
  for (const auto& e : sorted) {
    ++offsets_[e.v + 1];
    arcs_.push_back(Arc{e.w, e.S, e.k, e.dx});
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());

  for (VertexId v = 0; v < n; ++v) (vertices_[v].boundary ? boundary_ : interior_).push_back(v);
}

ThermoGraph ThermoGraph::from_edges(std::vector<VertexProps> vertices, const std::vector<EdgeProps>& edges) {
  std::vector<EdgeProps> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& e : edges) {
    arcs.push_back(e);
    arcs.push_back(EdgeProps{e.w, e.v, e.S, e.k, e.dx});
  }
  return ThermoGraph(std::move(vertices), arcs);
}

const Arc* ThermoGraph::find_arc(VertexId v, VertexId w) const {
  auto row = neighbors(v);
  auto it = std::lower_bound(row.begin(), row.end(), w, [](const Arc& a, VertexId id) { return a.target < id; });
  return (it != row.end() && it->target == w) ? &*it : nullptr;
}

std::vector<EdgeProps> ThermoGraph::edges() const {
  std::vector<EdgeProps> out;
  for (VertexId v = 0; v < size(); ++v) {
    for (const auto& a : neighbors(v)) {
      if (v < a.target) out.push_back(EdgeProps{v, a.target, a.S, a.k, a.dx});
    }
  }
  return out;
}

ThermoGraph induced_subgraph(const ThermoGraph& graph, std::span<const VertexId> keep) {
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> new_id(graph.size(), npos);
  std::vector<VertexProps> vertices;
  vertices.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= graph.size() || new_id[keep[i]] != npos) {
      throw Error(Errc::invalid_argument, "induced_subgraph: invalid or repeated vertex id");
    }
    new_id[keep[i]] = i;
    vertices.push_back(graph.vertex(keep[i]));
  }
  std::vector<EdgeProps> arcs;
  for (VertexId v : keep) {
    for (const auto& a : graph.neighbors(v)) {
      if (new_id[a.target] != npos) arcs.push_back(EdgeProps{new_id[v], new_id[a.target], a.S, a.k, a.dx});
    }
  }
  return ThermoGraph(std::move(vertices), arcs);
}

TemperatureField TemperatureField::from_temperatures(std::vector<double> u) {
  TemperatureField f;
  f.phase.assign(u.size(), Phase::solid);
  f.latent.assign(u.size(), 0.0);
  f.u = std::move(u);
  return f;
}

TemperatureField TemperatureField::uniform(std::size_t n, double value) {
  return from_temperatures(std::vector<double>(n, value));
}

TemperatureField restrict_field(const TemperatureField& field, std::span<const VertexId> keep) {
  TemperatureField out;
  for (VertexId v : keep) {
    out.u.push_back(field.u.at(v));
    out.phase.push_back(field.phase.at(v));
    out.latent.push_back(field.latent.at(v));
  }
  return out;
}

void check_field(const ThermoGraph& graph, const TemperatureField& field) {
  const std::size_t n = graph.size();
  if (field.u.size() != n || field.phase.size() != n || field.latent.size() != n) {
    throw Error(Errc::invalid_argument, "field has " + std::to_string(field.u.size()) +
                                            " entries but the graph has " + std::to_string(n) + " vertices");
  }
}

bool ValidationReport::has(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) os << v.rule << " [" << v.element << "]: " << v.message << "\n";
  return os.str();
}

ValidationReport validate(const ThermoGraph& graph) {
  ValidationReport report;
  auto add = [&](std::string rule, std::string element, std::string message) {
    report.violations.push_back({std::move(rule), std::move(element), std::move(message)});
  };
  const std::size_t n = graph.size();
  if (n == 0) {
    add("empty_graph", "graph", "graph has no vertices");
    return report;
  }

  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  for (VertexId v = 0; v < n; ++v) {
    const auto& vp = graph.vertex(v);
    if (!positive(vp.rho)) add("nonpositive_parameter", vertex_name(v), "rho must be finite and > 0");
    if (!positive(vp.d)) add("nonpositive_parameter", vertex_name(v), "d must be finite and > 0");
    if (!vp.boundary) {
      if (std::isinf(vp.c) && vp.c > 0) {
        add("boundary_inconsistent", vertex_name(v), "infinite heat capacity on a vertex not flagged boundary");
      } else if (!positive(vp.c)) {
        add("nonpositive_parameter", vertex_name(v), "c must be finite and > 0");
      }
    }
    if (!std::isfinite(vp.mu) || vp.mu < 0.0) add("nonpositive_parameter", vertex_name(v), "mu must be finite and >= 0");
    if (!std::isfinite(vp.melting)) add("nonfinite_parameter", vertex_name(v), "melting temperature must be finite");
  }

  for (VertexId v = 0; v < n; ++v) {
    auto row = graph.neighbors(v);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& a = row[i];
      const std::string name = arc_name(v, a.target);
      if (a.target == v) add("self_loop", name, "self-loops are not allowed");
      if (i > 0 && row[i - 1].target == a.target) add("duplicate_edge", name, "arc listed more than once");
      if (!positive(a.S)) add("nonpositive_parameter", name, "S must be finite and > 0");
      if (!positive(a.k)) add("nonpositive_parameter", name, "k must be finite and > 0");
      if (!positive(a.dx)) add("nonpositive_parameter", name, "dx must be finite and > 0");
      if (a.target == v) continue;
      const Arc* back = graph.find_arc(a.target, v);
      if (back == nullptr) {
        add("asymmetric_edge", name, "reverse arc " + arc_name(a.target, v) + " is missing");
      } else if (v < a.target && (back->S != a.S || back->k != a.k || back->dx != a.dx)) {
        add("asymmetric_edge", name, "S, k or dx differ from the reverse arc");
      }
    }
  }

  // Connectivity over the undirected closure of the arc relation.
  std::vector<std::vector<VertexId>> undirected(n);
  for (VertexId v = 0; v < n; ++v) {
    for (const auto& a : graph.neighbors(v)) {
      undirected[v].push_back(a.target);
      undirected[a.target].push_back(v);
    }
  }
  std::vector<bool> seen(n, false);
  std::queue<VertexId> queue;
  queue.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop();
    for (VertexId w : undirected[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        queue.push(w);
      }
    }
  }
  if (reached != n) {
    add("not_connected", "graph",
        std::to_string(n - reached) + " of " + std::to_string(n) + " vertices unreachable from vertex 0");
  }

  std::size_t flagged = 0;
  for (VertexId v = 0; v < n; ++v) flagged += graph.is_boundary(v) ? 1 : 0;
  if (flagged != graph.boundary().size()) add("boundary_inconsistent", "graph", "boundary set does not match flags");
  return report;
}

HeatCapacityWeights heat_capacity_weights(const ThermoGraph& graph) {
  if (graph.interior().empty()) {
    throw Error(Errc::all_boundary, "graph heat capacity is undefined: every vertex is a boundary vertex");
  }
  HeatCapacityWeights w;
  w.p.assign(graph.size(), 0.0);
  for (VertexId v : graph.interior()) w.Phi += graph.vertex(v).heat_capacity();
  for (VertexId v : graph.interior()) w.p[v] = graph.vertex(v).heat_capacity() / w.Phi;
  return w;
}

ThermalEnergy thermal_energy(const ThermoGraph& graph, const TemperatureField& field) {
  check_field(graph, field);
  ThermalEnergy q;
  q.per_vertex.resize(graph.size());
  for (VertexId v = 0; v < graph.size(); ++v) {
    const auto& vp = graph.vertex(v);
    const double liquid = field.phase[v] == Phase::liquid ? 1.0 : 0.0;
    q.per_vertex[v] = vp.c * vp.mass() * field.u[v] + liquid * vp.mass() * vp.mu;
  }
  for (VertexId v : graph.interior()) q.total += q.per_vertex[v];
  return q;
}

double enthalpy(const ThermoGraph& graph, const TemperatureField& field) {
  check_field(graph, field);
  double total = 0.0;
  for (VertexId v : graph.interior()) {
    const auto& vp = graph.vertex(v);
    total += vp.c * vp.mass() * field.u[v] + field.latent[v];
  }
  return total;
}

}  // namespace thermograph
