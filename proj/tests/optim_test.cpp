#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "pierscour/error.hpp"
#include "pierscour/optim.hpp"

using namespace pierscour;

namespace {

// Scalar reference written straight from the update rule.
struct AdamOracle {
  double alpha = 0.001, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double m = 0.0, v = 0.0, theta = 0.0;
  int t = 0;
  void step(double g) {
    ++t;
    m = beta1 * m + (1 - beta1) * g;
    v = beta2 * v + (1 - beta2) * g * g;
    const double mhat = m / (1 - std::pow(beta1, t));
    const double vhat = v / (1 - std::pow(beta2, t));
    theta -= alpha * mhat / (std::sqrt(vhat) + eps);
  }
};

struct Scalar {
  std::vector<double> value{0.0};
  std::vector<double> grad{0.0};
  std::vector<ParamBlock> blocks() { return {ParamBlock{value, grad, "theta"}}; }
};

}  // namespace

TEST_CASE("adam first step hand trace") {
  Scalar s;
  auto blocks = s.blocks();
  AdamState st = AdamState::for_blocks(blocks);
  s.grad[0] = 2.0;
  adam_step(blocks, st, AdamConfig{});
  CHECK(st.t == 1);
  CHECK(std::abs(st.m[0][0] - 0.2) < 1e-15);
  CHECK(std::abs(st.v[0][0] - 0.004) < 1e-15);
  CHECK(std::abs(s.value[0] - -9.99999995e-4) < 1e-12);
}

TEST_CASE("adam matches the scalar oracle over a prescribed sequence") {
  const std::array<double, 11> gs = {2.0, -1.0, 0.5, 3.0, 0.0, -2.5, 1e-3, 4.0, -0.25, 1.5, -3.0};
  Scalar s;
  auto blocks = s.blocks();
  AdamState st = AdamState::for_blocks(blocks);
  AdamOracle oracle;
  for (double g : gs) {
    s.grad[0] = g;
    adam_step(blocks, st, AdamConfig{});
    oracle.step(g);
    CHECK(std::abs(s.value[0] - oracle.theta) <= 1e-12);
  }
  CHECK(st.t == gs.size());
}

TEST_CASE("adam fixed point and sign following") {
  Scalar s;
  auto blocks = s.blocks();
  AdamState st = AdamState::for_blocks(blocks);
  adam_step(blocks, st, AdamConfig{});
  CHECK(s.value[0] == 0.0);
  CHECK(st.t == 1);

  Scalar c;
  auto cb = c.blocks();
  AdamState cs = AdamState::for_blocks(cb);
  c.grad[0] = 0.7;
  for (int i = 0; i < 1000; ++i) {
    const double before = c.value[0];
    adam_step(cb, cs, AdamConfig{});
    const double delta = before - c.value[0];
    CHECK(delta > 0.0);
    CHECK(std::abs(delta - 0.001) / 0.001 < 0.01);
  }
}

TEST_CASE("adam first step is scale robust") {
  for (double g : {0.05, 0.3, 1.0, -2.0, 17.0}) {
    double steps[2];
    for (int k = 0; k < 2; ++k) {
      Scalar s;
      auto blocks = s.blocks();
      AdamState st = AdamState::for_blocks(blocks);
      s.grad[0] = k == 0 ? g : 1000.0 * g;
      adam_step(blocks, st, AdamConfig{});
      steps[k] = std::abs(s.value[0]);
    }
    CHECK(std::abs(steps[0] - steps[1]) / steps[1] < 1e-6);
  }
}

TEST_CASE("momentum hand trace") {
  Scalar s;
  auto blocks = s.blocks();
  MomentumState st = MomentumState::for_blocks(blocks);
  const MomentumConfig cfg{0.2, 0.1};
  s.grad[0] = 1.0;
  momentum_step(blocks, st, cfg);
  CHECK(std::abs(s.value[0] - -0.2) <= 1e-12);
  CHECK(std::abs(st.velocity[0][0] - 0.2) <= 1e-12);
  momentum_step(blocks, st, cfg);
  CHECK(std::abs(st.velocity[0][0] - 0.22) <= 1e-12);
  CHECK(std::abs(s.value[0] - -0.42) <= 1e-12);
}

TEST_CASE("momentum fixed point and plain sgd limit") {
  Scalar s;
  s.value[0] = 1.5;
  auto blocks = s.blocks();
  MomentumState st = MomentumState::for_blocks(blocks);
  momentum_step(blocks, st, MomentumConfig{0.2, 0.1});
  CHECK(s.value[0] == 1.5);

  std::vector<double> theta = {1.0, -2.0, 0.125};
  std::vector<double> grad = {0.3, -7.0, 2.5};
  std::vector<ParamBlock> b = {{theta, grad, "w"}};
  MomentumState ms = MomentumState::for_blocks(b);
  const MomentumConfig sgd{0.05, 0.0};
  for (int step = 0; step < 3; ++step) {
    std::vector<double> expect = theta;
    for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = expect[i] - 0.05 * grad[i];
    momentum_step(b, ms, sgd);
    CHECK(theta == expect);
  }
}

TEST_CASE("errors leave parameters untouched") {
  std::vector<double> w = {1.0, 2.0}, gw = {0.1, 0.2};
  std::vector<double> bias = {3.0}, gb = {std::numeric_limits<double>::quiet_NaN()};
  std::vector<ParamBlock> blocks = {{w, gw, "layer 1 weights"}, {bias, gb, "layer 1 biases"}};

  AdamState as = AdamState::for_blocks(blocks);
  try {
    adam_step(blocks, as, AdamConfig{});
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("layer 1 biases") != std::string::npos);
  }
  CHECK(w == std::vector<double>{1.0, 2.0});
  CHECK(as.t == 0);

  MomentumState ms = MomentumState::for_blocks(blocks);
  CHECK_THROWS_AS(momentum_step(blocks, ms, MomentumConfig{}), NumericError);
  CHECK(w == std::vector<double>{1.0, 2.0});

  gb[0] = 0.0;
  std::vector<double> short_grad = {0.1};
  std::vector<ParamBlock> bad = {{w, short_grad, "w"}};
  AdamState bs = AdamState::for_blocks(blocks);
  CHECK_THROWS_AS(adam_step(bad, bs, AdamConfig{}), ShapeError);
  CHECK_THROWS_AS(momentum_step(bad, ms, MomentumConfig{}), ShapeError);
}

TEST_CASE("config validation") {
  CHECK_THROWS(AdamConfig{-1.0}.validate());
  CHECK_THROWS((AdamConfig{0.001, 1.0}.validate()));
  CHECK_THROWS((AdamConfig{0.001, 0.9, 0.999, 0.0}.validate()));
  CHECK_THROWS((MomentumConfig{-0.1, 0.1}.validate()));
  CHECK_THROWS((MomentumConfig{0.1, 1.0}.validate()));
  CHECK_NOTHROW((MomentumConfig{0.0, 0.5}.validate()));
}

TEST_CASE("updaters are deterministic") {
  auto run = [](bool adam) {
    std::vector<double> w = {0.5, -0.5, 0.25};
    std::vector<double> g(3);
    std::vector<ParamBlock> b = {{w, g, "w"}};
    AdamState as = AdamState::for_blocks(b);
    MomentumState ms = MomentumState::for_blocks(b);
    for (int i = 0; i < 50; ++i) {
      for (std::size_t k = 0; k < 3; ++k) g[k] = std::sin(0.3 * i + k) * (k + 1);
      if (adam)
        adam_step(b, as, AdamConfig{});
      else
        momentum_step(b, ms, MomentumConfig{});
    }
    return w;
  };
  CHECK(run(true) == run(true));
  CHECK(run(false) == run(false));
}

TEST_CASE("adam moments of idle parameters decay to exact zero") {
  Scalar s;
  auto blocks = s.blocks();
  AdamState st = AdamState::for_blocks(blocks);
  s.grad[0] = 1.0;
  adam_step(blocks, st, AdamConfig{});
  s.grad[0] = 0.0;
  for (int i = 0; i < 10000; ++i) {
    adam_step(blocks, st, AdamConfig{});
    REQUIRE(std::fpclassify(st.m[0][0]) != FP_SUBNORMAL);
  }
  CHECK(st.m[0][0] == 0.0);
}
