#include "thermograph/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "thermograph/error.hpp"

namespace thermograph {

namespace {

constexpr std::size_t kMinVerticesPerThread = 2048;

template <class Fn>
void for_each_vertex(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(threads, n / kMinVerticesPerThread);
  if (workers <= 1) {
    for (std::size_t v = 0; v < n; ++v) fn(v);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t v = begin; v < end; ++v) fn(v);
    });
  }
}

void check_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::invalid_argument, "dt must be finite and > 0");
}

/// Post-flux temperature of one vertex; boundary vertices are unchanged.
double exchanged(const ThermoGraph& graph, const std::vector<double>& u, VertexId v, double dt) {
  if (graph.is_boundary(v)) return u[v];
  double flux = 0.0;
  for (const auto& a : graph.neighbors(v)) flux += (u[a.target] - u[v]) * a.conductance();
  const auto& vp = graph.vertex(v);
  return u[v] + dt / (vp.c * vp.mass()) * flux;
}

}  // namespace

std::vector<double> HeatMatrix::apply(const std::vector<double>& u) const {
  if (u.size() != size()) throw Error(Errc::invalid_argument, "vector length does not match the heat matrix");
  Eigen::Map<const Eigen::VectorXd> x(u.data(), static_cast<Eigen::Index>(u.size()));
  Eigen::VectorXd y = A * x;
  return {y.data(), y.data() + y.size()};
}

double max_stable_dt(const ThermoGraph& graph) {
  if (graph.interior().empty()) {
    throw Error(Errc::all_boundary, "stability bound is undefined: every vertex is a boundary vertex");
  }
  double bound = std::numeric_limits<double>::infinity();
  for (VertexId v : graph.interior()) {
    double total = 0.0;
    for (const auto& a : graph.neighbors(v)) total += a.conductance();
    if (total > 0.0) bound = std::min(bound, graph.vertex(v).c * graph.vertex(v).mass() / total);
  }
  return bound;
}

HeatMatrix assemble_heat_matrix(const ThermoGraph& graph, double dt) {
  check_dt(dt);
  const std::size_t n = graph.size();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(n + graph.arc_count());
  for (VertexId i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (graph.is_boundary(i)) {
      entries.emplace_back(row, row, 1.0);
      continue;
    }
    const auto& vp = graph.vertex(i);
    const double scale = dt / (vp.c * vp.mass());
    double off = 0.0;
    for (const auto& a : graph.neighbors(i)) {
      const double alpha = a.conductance() * scale;
      off += alpha;
      entries.emplace_back(row, static_cast<Eigen::Index>(a.target), alpha);
    }
    entries.emplace_back(row, row, 1.0 - off);
  }
  HeatMatrix m;
  m.dt = dt;
  m.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.A.setFromTriplets(entries.begin(), entries.end());
  m.A.makeCompressed();
  return m;
}

TemperatureField step(const ThermoGraph& graph, const TemperatureField& field, double dt, unsigned threads) {
  check_field(graph, field);
  check_dt(dt);
  TemperatureField next = field;
  for_each_vertex(graph.size(), threads, [&](VertexId v) { next.u[v] = exchanged(graph, field.u, v, dt); });
  return next;
}

TemperatureField step_with_phase(const ThermoGraph& graph, const TemperatureField& field, double dt,
                                 unsigned threads) {
  check_field(graph, field);
  check_dt(dt);
  TemperatureField next = field;
  for_each_vertex(graph.size(), threads, [&](VertexId v) {
    const double tentative = exchanged(graph, field.u, v, dt);
    next.u[v] = tentative;
    const auto& vp = graph.vertex(v);
    // Without latent heat the phase flag carries no energy and is left as is.
    if (graph.is_boundary(v) || vp.mu <= 0.0) return;
    const double capacity = vp.c * vp.mass();
    const double full = vp.mass() * vp.mu;
    const double latent = field.latent[v];
    const bool liquid = field.phase[v] == Phase::liquid;
    const bool settled_solid = !liquid && latent == 0.0 && tentative <= vp.melting;
    const bool settled_liquid = liquid && latent == full && tentative >= vp.melting;
    if (settled_solid || settled_liquid) return;

    const double energy = capacity * (tentative - vp.melting) + latent;
    if (energy <= 0.0) {
      next.u[v] = vp.melting + energy / capacity;
      next.latent[v] = 0.0;
      next.phase[v] = Phase::solid;
    } else if (energy >= full) {
      next.u[v] = vp.melting + (energy - full) / capacity;
      next.latent[v] = full;
      next.phase[v] = Phase::liquid;
    } else {
      next.u[v] = vp.melting;
      next.latent[v] = energy;
    }
  });
  return next;
}

double net_flux(const ThermoGraph& graph, const TemperatureField& field) {
  check_field(graph, field);
  double total = 0.0;
  for (VertexId v = 0; v < graph.size(); ++v) {
    for (const auto& a : graph.neighbors(v)) total += (field.u[a.target] - field.u[v]) * a.conductance();
  }
  return total;
}

double auto_dt(const ThermoGraph& graph, double safety_factor) {
  if (!(safety_factor > 0.0 && safety_factor < 1.0)) {
    throw Error(Errc::invalid_argument, "safety factor must lie strictly between 0 and 1");
  }
  const double bound = max_stable_dt(graph);
  if (!std::isfinite(bound)) throw Error(Errc::invalid_argument, "graph has no edges at non-boundary vertices");
  return safety_factor * bound;
}

Trajectory simulate(const ThermoGraph& graph, const TemperatureField& field0, const SimulationConfig& config) {
  check_field(graph, field0);
  check_dt(config.dt);
  if (config.record_every == 0) throw Error(Errc::invalid_argument, "record_every must be >= 1");

  bool use_phase = false;
  if (config.phase_tracking) {
    for (VertexId v : graph.interior()) use_phase = use_phase || graph.vertex(v).mu > 0.0;
  }

  Trajectory traj;
  auto record = [&](std::size_t s, const TemperatureField& f) {
    TrajectoryRecord r;
    r.step = s;
    r.t = static_cast<double>(s) * config.dt;
    if (config.keep_fields) r.field = f;
    r.Q_total = thermal_energy(graph, f).total;
    r.enthalpy = enthalpy(graph, f);
    if (!graph.interior().empty()) r.entropy = entropy_report_lenient(graph, f);
    traj.records.push_back(std::move(r));
  };

  TemperatureField field = field0;
  record(0, field);
  for (std::size_t s = 1; s <= config.steps; ++s) {
    TemperatureField next = use_phase ? step_with_phase(graph, field, config.dt, config.threads)
                                      : step(graph, field, config.dt, config.threads);
    double change = 0.0;
    for (VertexId v = 0; v < graph.size(); ++v) {
      if (!std::isfinite(next.u[v])) {
        throw NonFiniteFieldError(s, "temperature at vertex " + std::to_string(v) + " became non-finite at step " +
                                         std::to_string(s) + " (t = " + std::to_string(s * config.dt) + ")");
      }
      change = std::max(change, std::abs(next.u[v] - field.u[v]));
      if (use_phase && !graph.is_boundary(v)) {
        const auto& vp = graph.vertex(v);
        change = std::max(change, std::abs(next.latent[v] - field.latent[v]) / (vp.c * vp.mass()));
      }
    }
    field = std::move(next);
    traj.steps_taken = s;
    traj.converged = change < config.convergence_tol;
    if (traj.converged || s % config.record_every == 0 || s == config.steps) record(s, field);
    if (traj.converged) break;
  }
  traj.final_t = static_cast<double>(traj.steps_taken) * config.dt;
  traj.final_field = std::move(field);
  return traj;
}

}  // namespace thermograph
