#include "thermograph/analysis.hpp"

#include <cmath>
#include <queue>
#include <string>

#include <Eigen/SparseCholesky>

#include "thermograph/error.hpp"

namespace thermograph {

namespace {

void require_dense_size(std::size_t n, const char* what) {
  if (n > kMaxDenseSize) {
    throw Error(Errc::invalid_argument, std::string(what) + " works on dense matrices up to n = " +
                                            std::to_string(kMaxDenseSize) + ", got n = " + std::to_string(n));
  }
}

/// Interior vertices reachable from `start` through off-diagonal nonzeros.
std::size_t reach_interior(const HeatMatrix& A, const std::vector<char>& is_boundary, std::size_t start) {
  const std::size_t n = A.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (Eigen::Index i = 0; i < A.A.outerSize(); ++i) {
    for (SparseRowMatrix::InnerIterator it(A.A, i); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row()), c = static_cast<std::size_t>(it.col());
      if (r == c || it.value() == 0.0 || is_boundary[r] || is_boundary[c]) continue;
      adj[r].push_back(c);
      adj[c].push_back(r);
    }
  }
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> queue;
  queue.push(start);
  seen[start] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop();
    for (auto w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        queue.push(w);
      }
    }
  }
  return count;
}

}  // namespace

bool is_stochastic(const HeatMatrix& A) {
  for (Eigen::Index i = 0; i < A.A.outerSize(); ++i) {
    double sum = 0.0;
    for (SparseRowMatrix::InnerIterator it(A.A, i); it; ++it) {
      if (!(it.value() >= 0.0)) return false;
      sum += it.value();
    }
    if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) return false;
  }
  return true;
}

bool has_positive_diagonal(const HeatMatrix& A) {
  for (Eigen::Index i = 0; i < A.A.rows(); ++i) {
    if (!(A.A.coeff(i, i) > 0.0)) return false;
  }
  return true;
}

bool is_strictly_diagonally_dominant(const HeatMatrix& A) {
  for (Eigen::Index i = 0; i < A.A.outerSize(); ++i) {
    double diag = 0.0, off = 0.0;
    for (SparseRowMatrix::InnerIterator it(A.A, i); it; ++it) {
      (it.col() == i ? diag : off) += std::abs(it.value());
    }
    if (!(diag > off)) return false;
  }
  return true;
}

Eigen::MatrixXd matrix_power(const HeatMatrix& A, std::size_t tau) {
  const std::size_t n = A.size();
  require_dense_size(n, "matrix_power");
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd base = A.dense();
  while (tau > 0) {
    if (tau & 1U) result = result * base;
    tau >>= 1U;
    if (tau > 0) base = base * base;
  }
  return result;
}

Eigen::MatrixXd power_limit(const HeatMatrix& A, std::span<const double> p, double tol, std::size_t max_squarings) {
  const std::size_t n = A.size();
  require_dense_size(n, "power_limit");
  if (p.size() != n) throw Error(Errc::invalid_argument, "weight vector length does not match the matrix");
  if (!(tol > 0.0)) throw Error(Errc::invalid_argument, "tolerance must be > 0");

  const Eigen::MatrixXd dense = A.dense();
  Eigen::Map<const Eigen::VectorXd> weights(p.data(), static_cast<Eigen::Index>(n));
  const double drift = (dense.transpose() * weights - weights).cwiseAbs().maxCoeff();
  if (!(drift <= 1e-10)) {
    throw Error(Errc::invalid_argument, "weights are not stationary for this matrix (|p A - p| = " +
                                            std::to_string(drift) + ")");
  }

  Eigen::MatrixXd power = dense;
  for (std::size_t k = 0; k <= max_squarings; ++k) {
    const Eigen::MatrixXd next = power * dense;
    if ((next - power).cwiseAbs().maxCoeff() < tol) return next;
    power = power * power;
  }
  throw Error(Errc::no_convergence, "powers of the heat matrix did not settle after " +
                                        std::to_string(max_squarings) + " squarings");
}

double contraction_factor(const HeatMatrix& A, std::span<const VertexId> boundary, std::size_t tau) {
  const std::size_t n = A.size();
  require_dense_size(n, "contraction_factor");
  if (boundary.empty()) throw Error(Errc::invalid_argument, "contraction factor needs at least one boundary vertex");
  if (tau + 1 < n) {
    throw Error(Errc::invalid_argument,
                "tau must be at least n - 1 = " + std::to_string(n - 1) + ", got " + std::to_string(tau));
  }
  if (!is_stochastic(A)) throw Error(Errc::invalid_argument, "contraction factor needs a stochastic matrix");

  std::vector<char> is_boundary(n, 0);
  for (VertexId b : boundary) {
    if (b >= n) throw Error(Errc::invalid_argument, "boundary vertex id out of range");
    is_boundary[b] = 1;
  }
  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_boundary[i]) interior.push_back(i);
  }
  if (interior.empty()) throw Error(Errc::invalid_argument, "contraction factor needs an interior vertex");
  if (reach_interior(A, is_boundary, interior.front()) != interior.size()) {
    throw Error(Errc::interior_disconnected,
                "interior subgraph is disconnected; treat each component separately");
  }

  const Eigen::MatrixXd power = matrix_power(A, tau);
  double lambda = 0.0;
  for (std::size_t i : interior) {
    double row = 0.0;
    for (std::size_t j : interior) row += power(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    lambda = std::max(lambda, std::abs(row));
  }
  return lambda;
}

std::vector<double> steady_state(const ThermoGraph& graph, std::span<const double> boundary_values) {
  const std::size_t n = graph.size();
  if (boundary_values.size() != n) {
    throw Error(Errc::invalid_argument, "boundary values must be a full-length field");
  }
  if (graph.boundary().empty()) throw Error(Errc::invalid_argument, "steady state needs boundary vertices");

  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, npos);
  const auto& interior = graph.interior();
  for (std::size_t i = 0; i < interior.size(); ++i) index[interior[i]] = i;

  // Every interior vertex must be reachable from the boundary.
  std::vector<char> seen(n, 0);
  std::queue<VertexId> queue;
  for (VertexId b : graph.boundary()) {
    seen[b] = 1;
    queue.push(b);
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop();
    for (const auto& a : graph.neighbors(v)) {
      if (!seen[a.target]) {
        seen[a.target] = 1;
        queue.push(a.target);
      }
    }
  }
  for (VertexId v : interior) {
    if (!seen[v]) {
      throw Error(Errc::singular_system,
                  "vertex " + std::to_string(v) + " lies in an interior component with no boundary vertex");
    }
  }

  std::vector<double> result(boundary_values.begin(), boundary_values.end());
  if (interior.empty()) return result;

  const auto m = static_cast<Eigen::Index>(interior.size());
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const VertexId v = interior[i];
    const auto row = static_cast<Eigen::Index>(i);
    double diag = 0.0;
    for (const auto& a : graph.neighbors(v)) {
      const double g = a.conductance();
      diag += g;
      if (graph.is_boundary(a.target)) {
        rhs[row] += g * boundary_values[a.target];
      } else {
        entries.emplace_back(row, static_cast<Eigen::Index>(index[a.target]), -g);
      }
    }
    entries.emplace_back(row, row, diag);
  }
  Eigen::SparseMatrix<double> system(m, m);
  system.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(system);
  if (solver.info() != Eigen::Success) throw Error(Errc::singular_system, "balance system factorization failed");
  const Eigen::VectorXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw Error(Errc::singular_system, "balance system solve failed");
  for (std::size_t i = 0; i < interior.size(); ++i) result[interior[i]] = x[static_cast<Eigen::Index>(i)];
  return result;
}

AnalysisReport analyze(const ThermoGraph& graph, const AnalysisOptions& options) {
  AnalysisReport report;
  report.dt = options.dt;
  report.max_stable_dt = max_stable_dt(graph);
  const HeatMatrix A = assemble_heat_matrix(graph, options.dt);
  report.is_stochastic = is_stochastic(A);
  report.positive_diagonal = has_positive_diagonal(A);
  report.diagonally_dominant = is_strictly_diagonally_dominant(A);

  const std::size_t n = graph.size();
  const bool dense_ok = n <= kMaxDenseSize;
  if (!graph.boundary().empty()) {
    const std::size_t tau = options.tau.value_or(n > 1 ? n - 1 : 1);
    if (!dense_ok) {
      report.notes.push_back("lambda_tau skipped: graph exceeds the dense size limit");
    } else if (!report.is_stochastic) {
      report.notes.push_back("lambda_tau skipped: heat matrix is not stochastic at this dt");
    } else {
      try {
        report.lambda_tau = contraction_factor(A, graph.boundary(), tau);
        report.tau = tau;
      } catch (const Error& e) {
        report.notes.push_back(std::string("lambda_tau skipped: ") + e.what());
      }
    }
    if (options.boundary_values) {
      report.steady_state = steady_state(graph, *options.boundary_values);
    } else {
      report.notes.push_back("steady_state skipped: no boundary temperatures given");
    }
  } else if (options.limit_matrix) {
    if (!dense_ok) {
      report.notes.push_back("limit_matrix skipped: graph exceeds the dense size limit");
    } else {
      try {
        report.limit_matrix = power_limit(A, heat_capacity_weights(graph).p, options.limit_tol);
      } catch (const Error& e) {
        report.notes.push_back(std::string("limit_matrix skipped: ") + e.what());
      }
    }
  }
  return report;
}

}  // namespace thermograph
