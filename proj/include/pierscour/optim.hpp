#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pierscour {

// One flat run of parameters with its gradient. The label names the block
// (e.g. "layer 2 weights") in error messages.
struct ParamBlock {
  std::span<double> values;
  std::span<const double> grads;
  std::string label;
};

struct MomentumConfig {
  double learning_rate = 0.2;
  double momentum = 0.1;

  void validate() const;
};

struct AdamConfig {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

struct MomentumState {
  std::vector<std::vector<double>> velocity;

  static MomentumState for_blocks(std::span<const ParamBlock> blocks);
};

struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::uint64_t t = 0;

  static AdamState for_blocks(std::span<const ParamBlock> blocks);
};

// v <- momentum * v + learning_rate * g;  theta <- theta - v.
// Shapes and gradients are checked before anything is modified.
void momentum_step(std::span<const ParamBlock> blocks, MomentumState& state,
                   const MomentumConfig& cfg);

// Bias-corrected Adam with epsilon added after the square root.
void adam_step(std::span<const ParamBlock> blocks, AdamState& state,
               const AdamConfig& cfg);

}  // namespace pierscour
