#include <doctest.h>

#include <cmath>

#include "pierscour/error.hpp"
#include "pierscour/init.hpp"
#include "pierscour/rng.hpp"

using namespace pierscour;

namespace {

struct Moments {
  double mean;
  double var;
};

Moments moments(std::span<const double> xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= double(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / double(xs.size() - 1)};
}

}  // namespace

TEST_CASE("xavier moments over 1e5 draws") {
  Rng rng(2024);
  std::vector<double> draws;
  while (draws.size() < 100000) {
    const Layer l = init_layer(InitScheme::xavier(), 100, 80, rng);
    draws.insert(draws.end(), l.weights.data().begin(), l.weights.data().end());
  }
  draws.resize(100000);

  const Moments m = moments(draws);
  const double expected = 2.0 / 180.0;
  CHECK(std::abs(m.mean) < 0.002);
  CHECK(std::abs(m.var - expected) / expected < 0.05);
}

TEST_CASE("xavier variance tracks the fans") {
  Rng rng(77);
  for (auto [fi, fo] : {std::pair<std::size_t, std::size_t>{7, 100}, {50, 1}, {400, 250}}) {
    std::vector<double> draws;
    while (draws.size() < 100000) {
      const Layer l = init_layer(InitScheme::xavier(), fi, fo, rng);
      draws.insert(draws.end(), l.weights.data().begin(), l.weights.data().end());
    }
    const Moments m = moments(draws);
    const double expected = 2.0 / double(fi + fo);
    CHECK(std::abs(m.mean) < 0.002 + 3 * std::sqrt(expected / draws.size()));
    CHECK(std::abs(m.var - expected) / expected < 0.05);
  }
}

TEST_CASE("determinism") {
  Rng a(99), b(99);
  const Layer la = init_layer(InitScheme::xavier(), 100, 80, a);
  const Layer lb = init_layer(InitScheme::xavier(), 100, 80, b);
  CHECK(la.weights == lb.weights);
  Rng c(100);
  CHECK_FALSE(init_layer(InitScheme::xavier(), 100, 80, c).weights == la.weights);
}

TEST_CASE("uniform bounds and biases") {
  Rng rng(3);
  for (double hw : {0.5, 1e-3, 2.0}) {
    const Layer l = init_layer(InitScheme::uniform(hw), 60, 70, rng);
    double lo = 0.0, hi = 0.0;
    for (double w : l.weights.data()) {
      CHECK(std::abs(w) < hw);
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    // Both signs and most of the range get used.
    CHECK(lo < -0.9 * hw);
    CHECK(hi > 0.9 * hw);
    for (double b : l.biases.data()) CHECK(b == 0.0);
  }
  const Layer x = init_layer(InitScheme::xavier(), 4, 9, rng);
  CHECK(x.weights.rows() == 9);
  CHECK(x.weights.cols() == 4);
  for (double b : x.biases.data()) CHECK(b == 0.0);
}

TEST_CASE("errors") {
  Rng rng(1);
  CHECK_THROWS_AS(init_layer(InitScheme::xavier(), 0, 3, rng), DomainError);
  CHECK_THROWS_AS(init_layer(InitScheme::xavier(), 3, 0, rng), DomainError);
  CHECK_THROWS(InitScheme::uniform(0.0).validate());
  CHECK_THROWS(InitScheme::uniform(-1.0).validate());
  CHECK(parse_init_kind(to_string(InitKind::uniform_random)) == InitKind::uniform_random);
  CHECK(parse_init_kind(to_string(InitKind::xavier_gaussian)) == InitKind::xavier_gaussian);
}

TEST_CASE("init_network follows the topology") {
  Rng rng(4);
  const std::vector<LayerSpec> spec = {{7, 8, Activation::sigmoid, 0.0},
                                       {8, 1, Activation::identity, 0.0}};
  const NetworkParams p = init_network(InitScheme::uniform(0.5), spec, rng);
  CHECK_NOTHROW(check_params(p, spec));
  CHECK(p.parameter_count() == 7 * 8 + 8 + 8 + 1);
}
