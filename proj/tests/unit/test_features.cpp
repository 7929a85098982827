#include <doctest.h>

#include <numbers>

#include "support/support.hpp"
#include "topofeat/diagram_features.hpp"

using namespace topofeat;

#define GOLDEN_HEAT 1.0118142065894666
#define GOLDEN_LANDSCAPE 0.86598122219607321

namespace {

PersistenceDiagram bars(std::vector<PersistencePair> p) { return PersistenceDiagram{0, std::move(p)}; }

DescriptorParams with_p(double p) {
  DescriptorParams params;
  params.p = p;
  return params;
}

}  // namespace

TEST_SUITE("features") {

TEST_CASE("scaling") {
  CHECK(scale_diagram(bars({{0, 4}})).pairs == bars({{0, 2}}).pairs);
  CHECK(scale_factor(bars({{0, 4}})) == 2.0);
  CHECK(scale_diagram(bars({})).empty());
  CHECK(scale_diagram(bars({{1, 1}})).pairs == bars({{1, 1}}).pairs);
}

TEST_CASE("betti curve counts half-open bars") {
  const auto d = bars({{0, 2}, {1, 3}});
  CHECK(betti_value(d, 0.5) == 1);
  CHECK(betti_value(d, 1.5) == 2);
  CHECK(betti_value(d, 2.5) == 1);
  CHECK(betti_value(d, 3.0) == 0);
  CHECK(betti_value(bars({{0, 1}}), 1.0) == 0);

  const SampledCurve c = betti_curve(d, 7);
  REQUIRE(c.x.size() == 7);
  CHECK(c.x.front() == 0.0);
  CHECK(c.x.back() == 3.0);
  for (std::size_t i = 0; i < 7; ++i) CHECK(c.y[i] == support::count_alive(d, c.x[i]));
  for (double y : betti_curve(bars({}), 5).y) CHECK(y == 0.0);
}

TEST_CASE("betti amplitude examples and exact oracle") {
  CHECK(betti_amplitude(bars({{0, 2}}), 1) == 2.0);
  CHECK(betti_amplitude(bars({{0, 2}, {1, 3}}), 1) == 4.0);
  CHECK(betti_amplitude(bars({{0, 2}, {1, 3}}), 2) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  support::Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    const auto d = rng.diagram(6);
    const double p = 1.0 + rng.index(4);
    CHECK(betti_amplitude(d, p) == doctest::Approx(support::betti_norm_oracle(d, p)).epsilon(1e-12));
  }
}

TEST_CASE("bottleneck amplitude") {
  CHECK(bottleneck_amplitude(bars({})) == 0.0);
  CHECK(bottleneck_amplitude(bars({{1, 3}})) == 1.0);
  CHECK(bottleneck_amplitude(bars({{0, 2}, {1, 5}})) == 2.0);
}

TEST_CASE("bottleneck distance examples and brute-force agreement") {
  const auto d = bars({{0, 2}, {1, 3}});
  CHECK(bottleneck_distance(d, d) == 0.0);
  CHECK(bottleneck_distance(bars({{0, 2}}), bars({})) == 1.0);
  CHECK(bottleneck_distance(bars({}), bars({})) == 0.0);
  support::Rng rng(52);
  for (int i = 0; i < 150; ++i) {
    const auto a = rng.diagram(4), b = rng.diagram(4);
    const double dist = bottleneck_distance(a, b);
    CHECK(dist == support::brute_bottleneck(a, b));
    CHECK(dist == bottleneck_distance(b, a));
    CHECK(bottleneck_distance(a, bars({})) == bottleneck_amplitude(a));
  }
}

TEST_CASE("wasserstein amplitude") {
  CHECK(wasserstein_amplitude(bars({}), 2) == 0.0);
  CHECK(wasserstein_amplitude(bars({{0, 2}, {1, 3}}), 2) == std::sqrt(2.0));
  CHECK(wasserstein_amplitude(bars({{0, 2}, {1, 3}}), 1) == 2.0);
  CHECK(wasserstein_amplitude(bars({{0, 2}, {1, 3}}), 64) == doctest::Approx(1.0).epsilon(1e-2));
  support::Rng rng(53);
  for (int i = 0; i < 200; ++i) {
    const auto d = rng.real_diagram(0, 6);
    const double p = rng.real(1.0, 8.0);
    CHECK(bottleneck_amplitude(d) <= wasserstein_amplitude(d, p) * (1 + 1e-12));
    if (d.pairs.size() == 1)
      CHECK(wasserstein_amplitude(d, p) == doctest::Approx(bottleneck_amplitude(d)).epsilon(1e-12));
  }
}

TEST_CASE("landscape closed forms") {
  const DescriptorParams params;  // p = 2, n_bins = 100
  CHECK(landscape_amplitude(bars({}), params) == 0.0);
  CHECK(landscape_amplitude(bars({{0, 2}}), params) ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(5e-3));
  for (double w : {0.5, 1.0, 3.0}) {
    const double expect = std::sqrt(2.0 / 3.0) * std::pow(w, 1.5);
    CHECK(landscape_amplitude(bars({{1, 1 + 2 * w}}), params) == doctest::Approx(expect).epsilon(5e-3));
  }
  DescriptorParams fine = params;
  fine.n_bins = 2001;
  const double single = landscape_amplitude(bars({{0, 2}}), fine);
  CHECK(landscape_amplitude(bars({{0, 2}, {4, 6}}), fine) ==
        doctest::Approx(std::sqrt(2.0) * single).epsilon(1e-3));
}

TEST_CASE("landscape layers match the tent oracle at every sample") {
  support::Rng rng(54);
  for (int i = 0; i < 50; ++i) {
    const auto d = rng.real_diagram(1, 6);
    const auto layers = landscape_layers(d, 3, 40);
    REQUIRE(layers.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t s = 0; s < 40; ++s)
        CHECK(layers[k].y[s] == doctest::Approx(support::landscape_oracle(d, k + 1, layers[k].x[s])).epsilon(1e-12));
  }
}

TEST_CASE("heat amplitude closed forms") {
  DescriptorParams params;
  CHECK(heat_amplitude(bars({}), params) == 0.0);
  // ||g||_2 for g = exp(-r^2 / 4t) / (4 pi t) is 1 / sqrt(8 pi t).
  for (double t : {0.05, 0.1, 0.5}) {
    params.t = t;
    CHECK(heat_amplitude(bars({{0, 1}}), params) ==
          doctest::Approx(1.0 / std::sqrt(8 * std::numbers::pi * t)).epsilon(1e-2));
  }
  DescriptorParams l1 = with_p(1);
  l1.n_bins = 400;
  const double one = heat_amplitude(bars({{0, 1}}), l1);
  CHECK(one == doctest::Approx(1.0).epsilon(1e-3));  // unit mass
  CHECK(heat_amplitude(bars({{0, 1}, {10, 11}}), l1) == doctest::Approx(2 * one).epsilon(1e-3));
}

TEST_CASE("persistence entropy") {
  CHECK(persistence_entropy(bars({{0, 3}})) == 0.0);
  CHECK(persistence_entropy(bars({{0, 1}, {2, 3}})) == std::log(2.0));
  const double expect = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
  CHECK(persistence_entropy(bars({{0, 1}, {0, 3}})) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(expect == doctest::Approx(0.5623).epsilon(1e-4));
}

TEST_CASE("describe of the [0,2,1] diagram against independent values") {
  const auto set = describe(bars({{0, 2}, {1, 2}}), DescriptorParams{});
  CHECK(set.bottleneck_amplitude == 1.0);
  CHECK(set.wasserstein_amplitude == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
  CHECK(set.betti_amplitude == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  const double entropy = -(2.0 / 3 * std::log(2.0 / 3) + 1.0 / 3 * std::log(1.0 / 3));
  CHECK(set.persistence_entropy == doctest::Approx(entropy).epsilon(1e-15));
  // lambda_1 is the (0,2) tent, lambda_2 the (1,2) tent: 2/3 + 1/12.
  CHECK(set.landscape_amplitude == doctest::Approx(std::sqrt(0.75)).epsilon(2e-3));

  // Heat: direct midpoint integration of the two-Gaussian sum over a wide box.
  const double t = 0.1, h = 0.005;
  double sq = 0.0;
  for (double x = -3; x < 4; x += h)
    for (double y = -1.5; y < 3.5; y += h) {
      const double xm = x + h / 2, ym = y + h / 2;
      double g = 0.0;
      for (auto [b, d] : {std::pair{0.0, 2.0}, {1.0, 2.0}})
        g += std::exp(-((xm - b) * (xm - b) + (ym - d) * (ym - d)) / (4 * t)) / (4 * std::numbers::pi * t);
      sq += g * g * h * h;
    }
  CHECK(set.heat_amplitude == doctest::Approx(std::sqrt(sq)).epsilon(1e-2));
}

TEST_CASE("describe golden values stay frozen") {
  const auto set = describe(bars({{0, 2}, {1, 2}}), DescriptorParams{});
  CHECK(set.heat_amplitude == GOLDEN_HEAT);
  CHECK(set.landscape_amplitude == GOLDEN_LANDSCAPE);
}

TEST_CASE("describe invariances") {
  CHECK(describe(bars({}), DescriptorParams{}) == DescriptorSet{});
  support::Rng rng(55);
  const DescriptorParams params;
  for (int i = 0; i < 40; ++i) {
    const auto d = rng.real_diagram(1, 6);
    const auto base = describe(d, params);

    auto doubled = d;
    for (auto& p : doubled.pairs) p = {2 * p.birth, 2 * p.death};
    CHECK(describe(doubled, params) == base);

    auto with_diag = d;
    with_diag.pairs.insert(with_diag.pairs.begin() + long(rng.index(d.pairs.size() + 1)), {0.3, 0.3});
    CHECK(describe(with_diag, params) == base);

    auto shuffled = d;
    std::shuffle(shuffled.pairs.begin(), shuffled.pairs.end(), rng.engine());
    const auto a = describe(shuffled, params).values(), b = base.values();
    for (std::size_t k = 0; k < 6; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));

    auto moved = d;
    for (auto& p : moved.pairs) p = {p.birth + 5, p.death + 5};
    CHECK(persistence_entropy(moved) == doctest::Approx(persistence_entropy(d)).epsilon(1e-12));
  }
}

TEST_CASE("essential bars and bad parameters are rejected") {
  const auto d = bars({{0, support::kInf}});
  CHECK_THROWS_AS(describe(d, DescriptorParams{}), ParameterError);
  CHECK_THROWS_AS(bottleneck_amplitude(d), ParameterError);
  CHECK_THROWS_AS(with_p(0.5).validate(), ParameterError);
  DescriptorParams p;
  p.t = 0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.n_bins = 1;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.n_layers = 0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
}

}
