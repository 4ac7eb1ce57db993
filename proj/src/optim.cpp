#include "pierscour/optim.hpp"

#include <cmath>
#include <limits>

#include "pierscour/error.hpp"

namespace pierscour {

void MomentumConfig::validate() const {
  // A zero learning rate is accepted and freezes the parameters.
  if (!(learning_rate >= 0.0 && std::isfinite(learning_rate)))
    throw ConfigError("momentum learning rate must be a finite value >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw ConfigError("momentum must lie in [0, 1)");
}

void AdamConfig::validate() const {
  if (!(alpha > 0.0 && std::isfinite(alpha)))
    throw ConfigError("adam alpha must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0))
    throw ConfigError("adam beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("adam beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0 && std::isfinite(epsilon)))
    throw ConfigError("adam epsilon must be positive");
}

namespace {

std::vector<std::vector<double>> zeros_like(std::span<const ParamBlock> blocks) {
  std::vector<std::vector<double>> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.emplace_back(b.values.size(), 0.0);
  return out;
}

void check_shapes(std::span<const ParamBlock> blocks,
                  const std::vector<std::vector<double>>& state,
                  const char* what) {
  if (state.size() != blocks.size()) {
    throw ShapeError(std::string(what) + " state has " +
                     std::to_string(state.size()) + " blocks, parameters have " +
                     std::to_string(blocks.size()));
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.grads.size() != b.values.size() || state[i].size() != b.values.size()) {
      throw ShapeError(b.label + ": parameter/gradient/state sizes disagree (" +
                       std::to_string(b.values.size()) + "/" +
                       std::to_string(b.grads.size()) + "/" +
                       std::to_string(state[i].size()) + ")");
    }
  }
}

void check_finite(std::span<const ParamBlock> blocks) {
  for (const auto& b : blocks) {
    // g - g is NaN exactly when g is infinite or NaN; no early exit so the
    // loop vectorizes.
    double probe = 0.0;
    for (double g : b.grads) probe += g - g;
    if (probe != 0.0) throw NumericError(b.label + ": non-finite gradient");
  }
}

}  // namespace

MomentumState MomentumState::for_blocks(std::span<const ParamBlock> blocks) {
  return {zeros_like(blocks)};
}

AdamState AdamState::for_blocks(std::span<const ParamBlock> blocks) {
  return {zeros_like(blocks), zeros_like(blocks), 0};
}

void momentum_step(std::span<const ParamBlock> blocks, MomentumState& state,
                   const MomentumConfig& cfg) {
  check_shapes(blocks, state.velocity, "momentum");
  check_finite(blocks);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto theta = blocks[i].values;
    auto g = blocks[i].grads;
    auto& vel = state.velocity[i];
    for (std::size_t j = 0; j < theta.size(); ++j) {
      vel[j] = cfg.momentum * vel[j] + cfg.learning_rate * g[j];
      theta[j] -= vel[j];
    }
  }
}

// Moments of parameters whose gradient stays exactly zero (dead relu units)
// decay geometrically and would otherwise park at the smallest subnormal,
// where arithmetic is orders of magnitude slower on common hardware.
namespace {
double flush_subnormal(double x) {
  return std::abs(x) < std::numeric_limits<double>::min() ? 0.0 : x;
}
}  // namespace

void adam_step(std::span<const ParamBlock> blocks, AdamState& state,
               const AdamConfig& cfg) {
  check_shapes(blocks, state.m, "adam");
  check_shapes(blocks, state.v, "adam");
  check_finite(blocks);
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto theta = blocks[i].values;
    auto g = blocks[i].grads;
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t j = 0; j < theta.size(); ++j) {
      m[j] = flush_subnormal(cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j]);
      v[j] = flush_subnormal(cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j]);
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      theta[j] -= cfg.alpha * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace pierscour
