#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "dergm/estimation.hpp"
#include "dergm/model.hpp"
#include "dergm/oracle.hpp"
#include "test_util.hpp"

using namespace dergm;

TEST_CASE("enumeration yields every graph exactly once") {
  CHECK(oracle::graph_count(2, false) == 2);
  CHECK(oracle::graph_count(3, false) == 8);
  CHECK(oracle::graph_count(3, true) == 64);

  auto graphs = oracle::enumerate_graphs(3, true);
  CHECK(graphs.size() == 64);
  std::set<std::vector<std::pair<std::size_t, std::size_t>>> seen;
  for (const Graph& g : graphs) seen.insert(g.edges());
  CHECK(seen.size() == 64);

  CHECK_THROWS_AS(oracle::graph_count(7, false), std::invalid_argument);
  CHECK_THROWS_AS(oracle::enumerate_graphs(5, true), std::invalid_argument);
}

TEST_CASE("brute log partition on known values") {
  CHECK(oracle::brute_log_partition(ModelSpec(ErdosRenyi{0.0}), 3) ==
        doctest::Approx(3 * std::log(2)).epsilon(1e-14));
  const double half_log3 = std::log(3.0) / 2.0;
  CHECK(oracle::brute_log_partition(ModelSpec(Beta{{half_log3, half_log3}}), 2) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("brute vs closed form over random beta draws") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ModelSpec m(Beta{testutil::random_values(5, -2, 2, seed)});
    CHECK(std::abs(oracle::brute_log_partition(m, 5) - log_partition(m, 5)) <= 1e-10);
  }
}

TEST_CASE("brute expected stats on the uniform model") {
  SuffStats s = oracle::brute_expected_stats(ModelSpec(Beta{{0, 0, 0, 0}}), 4);
  for (double v : s.values) CHECK(v == doctest::Approx(1.5).epsilon(1e-12));

  // Strongly heterogeneous nodes: E[d_1] is dominated by the two cross dyads.
  ModelSpec skew(Beta{{5.0, -5.0, 0.0}});
  SuffStats b = oracle::brute_expected_stats(skew, 3);
  SuffStats c = expected_stats(skew, 3);
  for (std::size_t t = 0; t < 3; ++t) CHECK(std::abs(b.values[t] - c.values[t]) <= 1e-10);
  CHECK(b.values[1] == doctest::Approx(sigmoid(0.0) + sigmoid(-5.0)).epsilon(1e-9));
}

TEST_CASE("certify_mle accepts true fits and rejects perturbed ones") {
  Graph cyc = testutil::cycle_graph(4);
  FitResult fit = fit_beta(cyc);
  CHECK(oracle::certify_mle(cyc, fit.params, 2000, 42));

  std::vector<double> perturbed = fit.params.flat_params();
  perturbed[0] += 0.1;
  ModelSpec off = ModelSpec::from_flat(Family::beta, 4, false, nullptr, perturbed);
  CHECK_FALSE(oracle::certify_mle(cyc, off, 2000, 42));

  // Closed-form density fit on a half-dense graph.
  Graph half(4, false);
  half.set_edge(0, 1);
  half.set_edge(2, 3);
  half.set_edge(0, 2);
  FitResult er = fit_erdos_renyi(half);
  CHECK(er.converged);
  CHECK(er.params.as<ErdosRenyi>().theta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(oracle::certify_mle(half, er.params, 2000, 7));
}
