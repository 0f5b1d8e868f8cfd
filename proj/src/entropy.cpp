#include "thermograph/entropy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "thermograph/dynamics.hpp"
#include "thermograph/error.hpp"

namespace thermograph {

namespace {

void require_nonnegative(const ThermoGraph& graph, const TemperatureField& field) {
  for (VertexId v : graph.interior()) {
    if (!(field.u[v] >= 0.0)) {
      throw Error(Errc::negative_temperature,
                  "entropy needs u >= 0 K; vertex " + std::to_string(v) + " has u = " + std::to_string(field.u[v]));
    }
  }
}

double deviation(const ThermoGraph& graph, const TemperatureField& field, const HeatCapacityWeights& w, double mean) {
  if (is_constant_on_interior(graph, field)) return 0.0;
  double d = 0.0;
  for (VertexId v : graph.interior()) d += std::abs(field.u[v] - mean) * w.p[v];
  return d;
}

double mean_with(const ThermoGraph& graph, const TemperatureField& field, const HeatCapacityWeights& w) {
  if (is_constant_on_interior(graph, field)) return field.u[graph.interior().front()];
  double m = 0.0;
  for (VertexId v : graph.interior()) m += field.u[v] * w.p[v];
  return m;
}

EntropyReport report_with(const ThermoGraph& graph, const TemperatureField& field, const HeatCapacityWeights& w) {
  EntropyReport r;
  r.Phi = w.Phi;
  r.M = mean_with(graph, field, w);
  r.D = deviation(graph, field, w, r.M);
  r.N = (r.D == 0.0 || r.M == 0.0) ? 0.0 : r.D / r.M * w.Phi;
  r.S = 2.0 * w.Phi - r.N;
  return r;
}

}  // namespace

bool is_constant_on_interior(const ThermoGraph& graph, const TemperatureField& field) {
  check_field(graph, field);
  const auto& inner = graph.interior();
  for (VertexId v : inner) {
    if (field.u[v] != field.u[inner.front()]) return false;
  }
  return true;
}

double mean_temperature(const ThermoGraph& graph, const TemperatureField& field) {
  check_field(graph, field);
  return mean_with(graph, field, heat_capacity_weights(graph));
}

double mean_abs_deviation(const ThermoGraph& graph, const TemperatureField& field) {
  check_field(graph, field);
  const auto w = heat_capacity_weights(graph);
  return deviation(graph, field, w, mean_with(graph, field, w));
}

double negentropy(const ThermoGraph& graph, const TemperatureField& field) {
  return entropy_report(graph, field).N;
}

double entropy(const ThermoGraph& graph, const TemperatureField& field) {
  return entropy_report(graph, field).S;
}

double entropy_delta(const ThermoGraph& graph, const TemperatureField& field, double dt) {
  const double before = negentropy(graph, field);
  return before - negentropy(graph, step(graph, field, dt));
}

EntropyReport entropy_report(const ThermoGraph& graph, const TemperatureField& field) {
  check_field(graph, field);
  const auto w = heat_capacity_weights(graph);
  require_nonnegative(graph, field);
  return report_with(graph, field, w);
}

EntropyReport entropy_report_lenient(const ThermoGraph& graph, const TemperatureField& field) {
  check_field(graph, field);
  const auto w = heat_capacity_weights(graph);
  EntropyReport r = report_with(graph, field, w);
  for (VertexId v : graph.interior()) {
    if (!(field.u[v] >= 0.0)) {
      r.N = r.S = std::numeric_limits<double>::quiet_NaN();
      break;
    }
  }
  return r;
}

}  // namespace thermograph
