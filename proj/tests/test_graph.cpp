#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "thermograph/error.hpp"
#include "thermograph/graph.hpp"

using namespace thermograph;

namespace {

ThermoGraph two_vertices() {
  return ThermoGraph::from_edges({VertexProps{}, VertexProps{}}, {EdgeProps{0, 1, 1.0, 1.0, 1.0}});
}

}  // namespace

TEST_CASE("validate accepts the minimal two-vertex graph") {
  const auto report = validate(two_vertices());
  CHECK(report.ok());
  CHECK(report.summary() == "ok");
}

TEST_CASE("validate reports a missing reverse arc") {
  ThermoGraph g({VertexProps{}, VertexProps{}}, {EdgeProps{0, 1, 1.0, 1.0, 1.0}});
  const auto report = validate(g);
  CHECK_FALSE(report.ok());
  CHECK(report.has("asymmetric_edge"));
}

TEST_CASE("validate reports reverse arcs with different coefficients") {
  ThermoGraph g({VertexProps{}, VertexProps{}}, {EdgeProps{0, 1, 1.0, 1.0, 1.0}, EdgeProps{1, 0, 2.0, 1.0, 1.0}});
  CHECK(validate(g).has("asymmetric_edge"));
}

TEST_CASE("validate reports disconnected vertices") {
  ThermoGraph g({VertexProps{}, VertexProps{}}, {});
  const auto report = validate(g);
  CHECK(report.has("not_connected"));
  CHECK_FALSE(report.has("asymmetric_edge"));
}

TEST_CASE("validate reports self-loops, duplicates and bad coefficients") {
  VertexProps bad;
  bad.rho = -1.0;
  ThermoGraph g({VertexProps{}, bad},
                {EdgeProps{0, 1, 1, 1, 1}, EdgeProps{1, 0, 1, 1, 1}, EdgeProps{0, 1, 1, 1, 1}, EdgeProps{1, 0, 1, 1, 1},
                 EdgeProps{0, 0, 1, 1, 1}});
  const auto report = validate(g);
  CHECK(report.has("self_loop"));
  CHECK(report.has("duplicate_edge"));
  CHECK(report.has("nonpositive_parameter"));

  ThermoGraph zero_dx = ThermoGraph::from_edges({VertexProps{}, VertexProps{}}, {EdgeProps{0, 1, 1.0, 1.0, 0.0}});
  CHECK(validate(zero_dx).has("nonpositive_parameter"));
}

TEST_CASE("infinite heat capacity must come with the boundary flag") {
  VertexProps hot;
  hot.c = INFINITY;
  ThermoGraph unflagged = ThermoGraph::from_edges({VertexProps{}, hot}, {EdgeProps{0, 1}});
  CHECK(validate(unflagged).has("boundary_inconsistent"));

  hot.boundary = true;
  ThermoGraph flagged = ThermoGraph::from_edges({VertexProps{}, hot}, {EdgeProps{0, 1}});
  CHECK(validate(flagged).ok());
  CHECK(std::isfinite(flagged.vertex(1).c));
  CHECK(flagged.boundary() == std::vector<VertexId>{1});
  CHECK(flagged.interior() == std::vector<VertexId>{0});
}

TEST_CASE("out-of-range arcs are rejected at construction") {
  CHECK_THROWS_AS(ThermoGraph({VertexProps{}}, {EdgeProps{0, 3}}), Error);
}

TEST_CASE("heat capacity weights") {
  SUBCASE("identical vertices split evenly") {
    const auto w = heat_capacity_weights(two_vertices());
    CHECK(w.Phi == 2.0);
    CHECK(w.p == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("phi*d = (1, 3)") {
    VertexProps heavy;
    heavy.c = 3.0;
    const auto g = ThermoGraph::from_edges({VertexProps{}, heavy}, {EdgeProps{0, 1}});
    const auto w = heat_capacity_weights(g);
    CHECK(w.Phi == 4.0);
    CHECK(w.p == std::vector<double>{0.25, 0.75});
  }
  SUBCASE("boundary vertices carry no weight") {
    VertexProps b;
    b.boundary = true;
    const auto g = ThermoGraph::from_edges({b, VertexProps{}, VertexProps{}}, {EdgeProps{0, 1}, EdgeProps{1, 2}});
    const auto w = heat_capacity_weights(g);
    CHECK(w.Phi == 2.0);
    CHECK(w.p == std::vector<double>{0.0, 0.5, 0.5});
  }
  SUBCASE("all boundary") {
    VertexProps b;
    b.boundary = true;
    const auto g = ThermoGraph::from_edges({b, b}, {EdgeProps{0, 1}});
    try {
      heat_capacity_weights(g);
      FAIL("expected AllBoundary");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::all_boundary);
    }
  }
}

TEST_CASE("weights sum to one on random graphs") {
  std::mt19937_64 rng(11);
  testing::RandomGraphOptions opt;
  opt.boundary_fraction = 0.2;
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_graph(rng, opt);
    const auto w = heat_capacity_weights(g);
    double sum = 0.0;
    for (double x : w.p) sum += x;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    for (VertexId v : g.interior()) CHECK(w.p[v] > 0.0);
  }
}

TEST_CASE("thermal energy of a single vertex") {
  VertexProps v;
  v.mu = 10.0;
  const auto g = ThermoGraph::from_edges({v, VertexProps{}}, {EdgeProps{0, 1}});
  auto field = TemperatureField::from_temperatures({5.0, 0.0});
  CHECK(thermal_energy(g, field).per_vertex[0] == 5.0);
  field.phase[0] = Phase::liquid;
  field.latent[0] = 10.0;
  CHECK(thermal_energy(g, field).per_vertex[0] == 15.0);
  CHECK(enthalpy(g, field) == 15.0);

  CHECK(thermal_energy(g, TemperatureField::uniform(2, 0.0)).total == 0.0);
}

TEST_CASE("thermal energy excludes boundary vertices and is linear in u") {
  std::mt19937_64 rng(5);
  testing::RandomGraphOptions opt;
  opt.boundary_fraction = 0.3;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_graph(rng, opt);
    const auto u1 = testing::random_field(rng, g.size(), -5, 5);
    const auto u2 = testing::random_field(rng, g.size(), -5, 5);
    const double a = testing::uniform(rng, -2, 2), b = testing::uniform(rng, -2, 2);
    std::vector<double> mix(g.size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * u1[i] + b * u2[i];
    const double q1 = thermal_energy(g, TemperatureField::from_temperatures(u1)).total;
    const double q2 = thermal_energy(g, TemperatureField::from_temperatures(u2)).total;
    const double qm = thermal_energy(g, TemperatureField::from_temperatures(mix)).total;
    CHECK(qm == doctest::Approx(a * q1 + b * q2).epsilon(1e-12).scale(10.0));

    double expected = 0.0;
    for (VertexId v = 0; v < g.size(); ++v) {
      if (!g.vertex(v).boundary) expected += g.vertex(v).c * g.vertex(v).rho * g.vertex(v).d * u1[v];
    }
    CHECK(q1 == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("builders keep edge attributes symmetric") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_graph(rng);
    CHECK(validate(g).ok());
    for (VertexId v = 0; v < g.size(); ++v) {
      for (const auto& a : g.neighbors(v)) {
        const Arc* back = g.find_arc(a.target, v);
        REQUIRE(back != nullptr);
        CHECK(back->S == a.S);
        CHECK(back->k == a.k);
        CHECK(back->dx == a.dx);
      }
    }
  }
}

TEST_CASE("neighbours are visited in ascending id order") {
  const auto g = ThermoGraph::from_edges(std::vector<VertexProps>(4),
                                         {EdgeProps{0, 3}, EdgeProps{0, 1}, EdgeProps{2, 0}});
  std::vector<VertexId> order;
  for (const auto& a : g.neighbors(0)) order.push_back(a.target);
  CHECK(order == std::vector<VertexId>{1, 2, 3});
}

TEST_CASE("induced subgraph renumbers and keeps internal edges") {
  const auto g = ThermoGraph::from_edges(std::vector<VertexProps>(4),
                                         {EdgeProps{0, 1}, EdgeProps{1, 2}, EdgeProps{2, 3, 2.0}});
  const std::vector<VertexId> keep{3, 2};
  const auto sub = induced_subgraph(g, keep);
  REQUIRE(sub.size() == 2);
  REQUIRE(sub.find_arc(0, 1) != nullptr);
  CHECK(sub.find_arc(0, 1)->S == 2.0);
  CHECK(sub.edges().size() == 1);
}

TEST_CASE("field length mismatch is rejected") {
  CHECK_THROWS_AS(thermal_energy(two_vertices(), TemperatureField::uniform(3, 1.0)), Error);
}
