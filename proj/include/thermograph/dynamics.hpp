#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "thermograph/entropy.hpp"
#include "thermograph/graph.hpp"

namespace thermograph {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One-step heat-exchange operator: U(t + dt) = A U(t).
struct HeatMatrix {
  SparseRowMatrix A;
  double dt = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(A.rows()); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(A); }
  std::vector<double> apply(const std::vector<double>& u) const;
};

/// Largest dt for which every explicit update stays a convex combination:
/// min over non-boundary v of c(v) m(v) / sum_w k S / dx. Vertices without
/// neighbours impose no limit (the result may be +inf).
/// Throws Errc::all_boundary.
double max_stable_dt(const ThermoGraph& graph);

/// alpha_ij = k S dt / (c_i m_i dx) on arcs, alpha_ii = 1 - sum_j alpha_ij,
/// identity rows for boundary vertices. Any dt > 0 is accepted; above
/// max_stable_dt the diagonal turns negative.
HeatMatrix assemble_heat_matrix(const ThermoGraph& graph, double dt);

/// Explicit update without phase change. Boundary vertices keep their
/// temperature; phase and latent state are copied through. Neighbour sums
/// run in ascending id order, so results do not depend on `threads`.
TemperatureField step(const ThermoGraph& graph, const TemperatureField& field, double dt, unsigned threads = 1);

/// Explicit update with latent-heat bookkeeping.
///
/// After the flux exchange, each vertex with mu > 0 whose tentative
/// temperature leaves its phase's side of the melting point (or that is
/// mid-transition) has its energy c m (u - melting) + latent re-split:
/// below zero it is solid at u < melting with an empty reservoir, between 0
/// and m mu it sits at the melting point with a partially filled reservoir,
/// above m mu it is liquid with a full reservoir. The phase flag flips only
/// when the reservoir becomes full (solid to liquid) or empty (liquid to
/// solid). Vertices that stay on their side take the plain `step` value.
TemperatureField step_with_phase(const ThermoGraph& graph, const TemperatureField& field, double dt,
                                 unsigned threads = 1);

/// sum_v sum_{w in E(v)} (u_w - u_v) k S / dx over all vertices.
double net_flux(const ThermoGraph& graph, const TemperatureField& field);

struct SimulationConfig {
  double dt = 0.0;
  std::size_t steps = 10000;
  /// Stop once successive fields differ by less than this in sup norm.
  double convergence_tol = 1e-12;
  std::size_t record_every = 1;
  /// Fraction of max_stable_dt used by auto_dt.
  double safety_factor = 0.9;
  bool phase_tracking = false;
  bool keep_fields = true;
  unsigned threads = 1;
};

/// safety_factor * max_stable_dt(graph); requires 0 < safety_factor < 1.
double auto_dt(const ThermoGraph& graph, double safety_factor);

struct TrajectoryRecord {
  std::size_t step = 0;
  double t = 0.0;
  TemperatureField field;  // empty unless SimulationConfig::keep_fields
  double Q_total = 0.0;    // thermal_energy(...).total
  double enthalpy = 0.0;
  EntropyReport entropy;   // N and S are NaN for fields with u < 0
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  bool converged = false;
  std::size_t steps_taken = 0;
  double final_t = 0.0;
  TemperatureField final_field;
};

/// Iterate `step` (or `step_with_phase` when phase tracking is on and some
/// vertex has mu > 0). Records the initial state, every record_every-th
/// step and the final step. Throws NonFiniteFieldError at the first step
/// that produces a non-finite temperature.
Trajectory simulate(const ThermoGraph& graph, const TemperatureField& field0, const SimulationConfig& config);

}  // namespace thermograph
