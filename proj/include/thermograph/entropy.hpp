#pragma once

#include "thermograph/graph.hpp"

namespace thermograph {

/// Entropy functionals of a temperature field on a thermodynamic graph.
/// Every sum runs over the non-boundary vertices only.
struct EntropyReport {
  double Phi = 0.0;  // graph heat capacity [J/K]
  double M = 0.0;    // weighted mean temperature [K]
  double D = 0.0;    // weighted mean absolute deviation [K]
  double N = 0.0;    // negentropy (D / M) * Phi [J/K]
  double S = 0.0;    // entropy 2 Phi - N [J/K]
};

/// True when u takes a single value on every non-boundary vertex.
bool is_constant_on_interior(const ThermoGraph& graph, const TemperatureField& field);

double mean_temperature(const ThermoGraph& graph, const TemperatureField& field);

/// Zero exactly when the field is constant on the non-boundary vertices.
double mean_abs_deviation(const ThermoGraph& graph, const TemperatureField& field);

/// (D / M) * Phi. Requires u >= 0 on non-boundary vertices
/// (Errc::negative_temperature otherwise). A constant field, including the
/// all-zero field, has negentropy 0.
double negentropy(const ThermoGraph& graph, const TemperatureField& field);

/// 2 Phi - negentropy.
double entropy(const ThermoGraph& graph, const TemperatureField& field);

/// N(field) - N(step(field, dt)); nonnegative whenever the step is
/// stochastic on a graph without boundary vertices.
double entropy_delta(const ThermoGraph& graph, const TemperatureField& field, double dt);

/// All functionals at once. Throws like `negentropy`.
EntropyReport entropy_report(const ThermoGraph& graph, const TemperatureField& field);

/// Like entropy_report, but reports N and S as NaN instead of throwing when
/// the field has negative temperatures.
EntropyReport entropy_report_lenient(const ThermoGraph& graph, const TemperatureField& field);

}  // namespace thermograph
