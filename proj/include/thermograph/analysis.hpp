#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "thermograph/dynamics.hpp"
#include "thermograph/graph.hpp"

namespace thermograph {

/// Row sums must match 1 this closely for a matrix to count as stochastic.
inline constexpr double kRowSumTolerance = 1e-12;

/// All entries >= 0 and every row sums to 1 within kRowSumTolerance.
bool is_stochastic(const HeatMatrix& A);

/// Every diagonal entry > 0. A stochastic matrix from dt below
/// max_stable_dt has this; the two-vertex critical instance does not.
bool has_positive_diagonal(const HeatMatrix& A);

/// |a_ii| > sum_{j != i} |a_ij| for every row.
bool is_strictly_diagonally_dominant(const HeatMatrix& A);

/// Largest dense size accepted by power_limit and contraction_factor.
inline constexpr std::size_t kMaxDenseSize = 2000;

/// lim A^tau for the heat matrix of a graph without boundary vertices.
///
/// `p` must be the stationary weight vector (p^T A = p^T); the rows of the
/// limit equal p. Powers are formed by repeated squaring until B A and B
/// agree within `tol` in max norm. Throws Errc::no_convergence when that
/// does not happen within `max_squarings` (periodic or non-stochastic
/// operators), Errc::invalid_argument for a mismatched p or n too large.
Eigen::MatrixXd power_limit(const HeatMatrix& A, std::span<const double> p, double tol,
                            std::size_t max_squarings = 128);

/// Dense A^tau by binary exponentiation.
Eigen::MatrixXd matrix_power(const HeatMatrix& A, std::size_t tau);

/// max over interior rows i of sum over interior columns j of (A^tau)_ij.
///
/// Requires a nonempty boundary, a stochastic A, tau >= n - 1 and a
/// connected interior (Errc::interior_disconnected otherwise). The result
/// bounds the sup-norm decay of fields that vanish on the boundary.
double contraction_factor(const HeatMatrix& A, std::span<const VertexId> boundary, std::size_t tau);

/// Fixed point of `step` for the boundary temperatures in `boundary_values`
/// (a full-length field; only the boundary entries are read). Solves the
/// interior balance equations sum_w (u_w - u_v) k S / dx = 0 directly.
/// Throws Errc::singular_system if some interior component has no
/// boundary neighbour, Errc::invalid_argument if the boundary is empty.
std::vector<double> steady_state(const ThermoGraph& graph, std::span<const double> boundary_values);

struct AnalysisOptions {
  double dt = 0.0;
  std::optional<std::size_t> tau;          // defaults to n - 1
  bool limit_matrix = false;
  std::optional<std::vector<double>> boundary_values;
  double limit_tol = 1e-12;
};

struct AnalysisReport {
  double dt = 0.0;
  double max_stable_dt = 0.0;
  bool is_stochastic = false;
  bool positive_diagonal = false;
  bool diagonally_dominant = false;
  std::optional<Eigen::MatrixXd> limit_matrix;
  std::optional<std::size_t> tau;
  std::optional<double> lambda_tau;
  std::optional<std::vector<double>> steady_state;
  std::vector<std::string> notes;
};

/// Runs every diagnostic that applies to the graph and records the reason
/// for each one skipped in `notes`.
AnalysisReport analyze(const ThermoGraph& graph, const AnalysisOptions& options);

}  // namespace thermograph
