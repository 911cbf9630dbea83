#include <catch2/catch_amalgamated.hpp>

#include "obsnet/cyber_design.hpp"
#include "obsnet/estimation.hpp"
#include "obsnet/observability.hpp"
#include "oracles.hpp"

using Catch::Matchers::ContainsSubstring;
using namespace obsnet;

namespace {

// Designed communication structure for the eight-node benchmark.
CyberNetwork bench8_network() {
  auto cls = classify_agents(oracle::bench8(), MeasurementStructure(oracle::bench8_placement()));
  return build_consensus_weights(design_cyber_network(cls, 3));
}

}  // namespace

TEST_CASE("consensus weights average uniformly over prediction neighborhoods") {
  CyberNetwork ring;
  ring.num_agents = 3;
  ring.beta_edges = {{1, 2}, {2, 3}, {3, 1}};
  auto w = consensus_matrix(build_consensus_weights(ring));
  CHECK(w(0, 0) == 0.5);
  CHECK(w(0, 2) == 0.5);
  CHECK(w(1, 0) == 0.5);
  CHECK(w(1, 1) == 0.5);
  CHECK(w(0, 1) == 0.0);

  CyberNetwork solo;
  solo.num_agents = 1;
  CHECK(consensus_matrix(build_consensus_weights(solo)) == Eigen::MatrixXd::Ones(1, 1));

  CyberNetwork complete;
  complete.num_agents = 4;
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      if (i != j) complete.beta_edges.emplace_back(i, j);
  auto wc = consensus_matrix(build_consensus_weights(complete));
  CHECK(wc.isConstant(0.25));
}

TEST_CASE("consensus rows sum to one and respect the link pattern") {
  auto net = bench8_network();
  CHECK_NOTHROW(net.validate());  // validate() enforces both properties
  auto w = consensus_matrix(net);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(w.row(i).sum() - 1.0) < 1e-12);
  CHECK_THROWS_AS(consensus_matrix(CyberNetwork{2, {}, {}, {}}), ValidationError);
}

TEST_CASE("measurement aggregation blocks follow alpha neighborhoods") {
  CyberNetwork solo;
  solo.num_agents = 1;
  auto dh1 = build_dh(MeasurementStructure({2}), solo, 3);
  REQUIRE(dh1.num_agents() == 1);
  CHECK(dh1.blocks[0] == Eigen::Vector3d(0, 1, 0).asDiagonal().toDenseMatrix());

  CyberNetwork swap;
  swap.num_agents = 2;
  swap.alpha_edges = {{1, 2}, {2, 1}};
  auto dh2 = build_dh(MeasurementStructure({1, 2}), swap, 3);
  CHECK(dh2.blocks[0] == Eigen::Vector3d(1, 1, 0).asDiagonal().toDenseMatrix());
  CHECK(dh2.blocks[1] == dh2.blocks[0]);

  CyberNetwork silent;
  silent.num_agents = 2;
  auto dh3 = build_dh(MeasurementStructure({1, 2}), silent, 3);
  CHECK(dh3.blocks[0] == Eigen::Vector3d(1, 0, 0).asDiagonal().toDenseMatrix());
  CHECK(dh3.blocks[1] == Eigen::Vector3d(0, 1, 0).asDiagonal().toDenseMatrix());

  CHECK(dh2.assemble().rows() == 6);
  CHECK_THROWS_AS(build_dh(MeasurementStructure({1}), swap, 3), ValidationError);
}

TEST_CASE("numerical observability rank test") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd c(1, 2);
  c << 1, 0;
  CHECK_FALSE(numerical_observability(eye, c));

  Eigen::MatrixXd chain = Eigen::MatrixXd::Zero(3, 3);
  chain(1, 0) = 0.8;
  chain(2, 1) = 1.3;
  Eigen::MatrixXd tail(1, 3);
  tail << 0, 0, 1;
  CHECK(numerical_observability(chain, tail));
  Eigen::MatrixXd head(1, 3);
  head << 1, 0, 0;
  CHECK_FALSE(numerical_observability(chain, head));

  CHECK_THROWS_AS(numerical_observability(Eigen::MatrixXd::Zero(2, 3), c), ValidationError);
}

TEST_CASE("gain design stabilizes the benchmark configuration") {
  auto g = oracle::bench8();
  MeasurementStructure h(oracle::bench8_placement());
  auto net = bench8_network();
  auto a = realize_weights(g, 1.2, 1);
  REQUIRE(a.rho == Catch::Approx(1.2).epsilon(1e-9));

  auto w = consensus_matrix(net);
  auto dh = build_dh(h, net, g.n());
  CHECK(numerical_observability(detail::kron(w, a.matrix), dh.assemble()));

  auto gain = design_gain(w, a, dh);
  CHECK(gain.closed_loop_rho < 1.0);
  REQUIRE(gain.blocks.size() == 3);
  CHECK(gain.blocks[0].rows() == 8);

  // The reported radius is recomputed from the returned blocks.
  double rho = spectral_radius(detail::closed_loop(detail::kron(w, a.matrix), dh.blocks, gain.blocks));
  CHECK(gain.closed_loop_rho == Catch::Approx(rho).margin(1e-12));

  // The design-time aggregation structure rides along with the gain.
  REQUIRE(gain.dh.num_agents() == 3);
  CHECK(gain.dh.blocks[0] == dh.blocks[0]);
}

TEST_CASE("gain design refuses an unobservable pair") {
  auto g = oracle::bench8();
  MeasurementStructure h(oracle::bench8_placement());
  auto net = bench8_network();
  auto a = realize_weights(g, 1.2, 1);
  auto w = consensus_matrix(net);

  // Cutting one broadcast link leaves the third agent without the second
  // contraction's measurement; a kernel direction of A seen by nobody at that
  // agent makes the stacked pair rank-deficient.
  CyberNetwork cut = net;
  std::erase(cut.alpha_edges, std::make_pair(2, 3));
  auto dh_cut = build_dh(h, cut, g.n());
  CHECK_FALSE(numerical_observability(detail::kron(w, a.matrix), dh_cut.assemble()));

  try {
    design_gain(w, a, dh_cut);
    FAIL("expected the designer to refuse");
  } catch (const InstabilityError& e) {
    CHECK_FALSE(e.pair_observable);
    CHECK_THAT(e.what(), ContainsSubstring("unobservable"));
  }
}

TEST_CASE("stable open loop is accepted without correction") {
  SocialDigraph g(2, {{1, 2}, {2, 1}});
  auto a = realize_weights(g, 0.5, 3);
  CyberNetwork solo;
  solo.num_agents = 1;
  solo = build_consensus_weights(solo);
  auto dh = build_dh(MeasurementStructure({1}), solo, 2);
  auto gain = design_gain(consensus_matrix(solo), a, dh);
  CHECK(gain.closed_loop_rho < 1.0);
  CHECK(gain.closed_loop_rho <= 0.5 + 1e-9);  // zero gain already achieves the open-loop radius
}

TEST_CASE("gain design validates dimensions") {
  auto a = realize_weights(SocialDigraph(2, {{1, 2}, {2, 1}}), 0.5, 3);
  CyberNetwork solo;
  solo.num_agents = 1;
  auto dh = build_dh(MeasurementStructure({1}), solo, 2);
  CHECK_THROWS_AS(design_gain(Eigen::MatrixXd::Zero(1, 2), a, dh), ValidationError);
  CHECK_THROWS_AS(design_gain(Eigen::MatrixXd::Ones(2, 2) * 0.5, a, dh), ValidationError);
}
