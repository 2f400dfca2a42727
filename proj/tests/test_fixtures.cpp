#include <doctest.h>

#include <cmath>

#include "bls/error.hpp"
#include "bls/fixtures.hpp"
#include "bls/linalg.hpp"
#include "bls/metrics.hpp"
#include "test_util.hpp"

using namespace bls;

TEST_CASE("activation names") {
  CHECK(parse_activation("leaky_relu") == Activation::LeakyRelu);
  CHECK(parse_activation(activation_name(Activation::Tanh)) == Activation::Tanh);
  CHECK_THROWS_AS(parse_activation("relu"), ConfigError);
}

TEST_CASE("fixture config validation") {
  FixtureConfig cfg;
  cfg.dim = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.dim = 4;
  cfg.depth = 0;
  CHECK_THROWS_AS(gen_mapping_network(cfg), ConfigError);
  cfg.depth = 2;
  CHECK(cfg.hidden() == 4);
  cfg.hidden_dim = 7;
  CHECK(cfg.hidden() == 7);
}

TEST_CASE("mapping network layout") {
  FixtureConfig cfg;
  cfg.dim = 5;
  cfg.depth = 1;
  const auto single = gen_mapping_network(cfg);
  REQUIRE(single.network().layers().size() == 1);
  const auto& lin = std::get<layer::Linear>(single.network().layers()[0]);
  Rng rng(1);
  for (int t = 0; t < 5; ++t) CHECK(jacobian(single, rng.normal_vector(5)) == lin.weight);

  cfg.depth = 3;
  cfg.hidden_dim = 8;
  cfg.use_pixel_norm = true;
  const auto deep = gen_mapping_network(cfg);
  const auto& layers = deep.network().layers();
  REQUIRE(layers.size() == 6);  // PixelNorm, Linear, act, Linear, act, Linear
  CHECK(std::holds_alternative<layer::PixelNorm>(layers[0]));
  CHECK(std::holds_alternative<layer::LeakyRelu>(layers[2]));
  CHECK(std::holds_alternative<layer::Linear>(layers[5]));
  CHECK(std::get<layer::Linear>(layers[1]).weight.rows() == 8);
  CHECK(deep.dim() == 5);
}

TEST_CASE("weight scale follows the initialization rule") {
  FixtureConfig cfg;
  cfg.dim = 64;
  cfg.depth = 2;
  cfg.hidden_dim = 192;
  for (Activation act : {Activation::LeakyRelu, Activation::Tanh}) {
    cfg.activation = act;
    const auto net = gen_mapping_network(cfg);
    const auto& first = std::get<layer::Linear>(net.network().layers()[0]);
    const double var = first.weight.squaredNorm() / static_cast<double>(first.weight.size());
    const double expect = act == Activation::LeakyRelu ? 2.0 / 64.0 : 2.0 / (64.0 + 192.0);
    CHECK(var == doctest::Approx(expect).epsilon(0.05));
  }
}

TEST_CASE("fixtures are pure functions of the config") {
  FixtureConfig cfg;
  cfg.seed = 7;
  CHECK(network_to_json_text(gen_mapping_network(cfg)) == network_to_json_text(gen_mapping_network(cfg)));
  CHECK(network_to_json_text(gen_feature_extractor(cfg)) == network_to_json_text(gen_feature_extractor(cfg)));
  CHECK(network_to_json_text(gen_scorer(cfg)) == network_to_json_text(gen_scorer(cfg)));

  FixtureConfig other = cfg;
  other.seed = 8;
  CHECK(network_to_json_text(gen_mapping_network(other)) != network_to_json_text(gen_mapping_network(cfg)));
  // Mapping net, extractor and scorer draw from separate streams.
  CHECK(std::get<layer::Linear>(gen_mapping_network(cfg).network().layers()[0]).weight(0, 0) !=
        std::get<layer::Linear>(gen_feature_extractor(cfg).layers()[0]).weight(0, 0));

  Rng probe(3);
  const Matrix batch = bls::testing::random_matrix(probe, 16, 10);
  const Network ex = gen_feature_extractor(cfg, 5);
  const Network ex2 = gen_feature_extractor(cfg, 5);
  for (Eigen::Index c = 0; c < 10; ++c) CHECK(forward(ex, batch.col(c)) == forward(ex2, batch.col(c)));
  CHECK(ex.output_dim() == 5);
  CHECK(gen_scorer(cfg).output_dim() == 1);
}

TEST_CASE("default fixture Jacobians are full rank at the origin") {
  FixtureConfig cfg;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const auto net = gen_mapping_network(cfg);
    const SingularSystem s = svd(jacobian(net, Vector::Zero(16)));
    CHECK(s.sigma.allFinite());
    CHECK(s.sigma.minCoeff() > 0.0);
  }
}

TEST_CASE("scorer gradient matches central differences") {
  FixtureConfig cfg;
  cfg.dim = 6;
  Rng rng(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const Network scorer = gen_scorer(cfg);
    const Vector w = rng.normal_vector(6);
    CHECK(bls::testing::rel_err(jacobian(scorer, w), bls::testing::fd_jacobian(scorer, w)) <= 1e-5);
  }
}

TEST_CASE("identical populations through a linear extractor are at distance 0") {
  const Network lin(3, {layer::Linear{Matrix{{1.0, 2.0, 0.0}, {0.0, 1.0, -1.0}}, Vector::Zero(2)}});
  Rng rng(5);
  std::vector<Vector> feats;
  for (int i = 0; i < 50; ++i) feats.push_back(forward(lin, rng.normal_vector(3)));
  const FeaturePopulation p = fit_gaussian(feats);
  CHECK(std::abs(frechet_distance(p, p)) <= 1e-9);
}

TEST_CASE("latent and direction sampling") {
  FixtureConfig cfg;
  Rng a(11), b(11);
  CHECK(sample_z(cfg, a) == sample_z(cfg, b));
  for (int t = 0; t < 100; ++t) CHECK(std::abs(sample_direction(cfg, a).norm() - 1.0) <= 1e-12);

  Rng rng(12);
  Vector sum = Vector::Zero(16);
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += sample_z(cfg, rng);
  CHECK((sum / n).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a = Rng::stream(1, 0), b = Rng::stream(1, 0), c = Rng::stream(1, 1);
  const std::uint64_t x = a.next_u64();
  CHECK(x == b.next_u64());
  CHECK(x != c.next_u64());
  Rng u(2);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}
