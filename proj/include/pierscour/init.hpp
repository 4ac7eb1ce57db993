#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "pierscour/nn.hpp"
#include "pierscour/rng.hpp"

namespace pierscour {

enum class InitKind { xavier_gaussian, uniform_random };

struct InitScheme {
  InitKind kind = InitKind::xavier_gaussian;
  // Only used by uniform_random; weights fall in (-halfwidth, +halfwidth).
  double uniform_halfwidth = 0.5;

  static InitScheme xavier() { return {InitKind::xavier_gaussian, 0.5}; }
  static InitScheme uniform(double halfwidth) {
    return {InitKind::uniform_random, halfwidth};
  }

  void validate() const;
};

std::string_view to_string(InitKind kind);
InitKind parse_init_kind(std::string_view name);

// Weights are drawn row by row (output unit major); biases start at zero.
// Xavier Gaussian uses variance 2 / (fan_in + fan_out).
Layer init_layer(const InitScheme& scheme, std::size_t fan_in,
                 std::size_t fan_out, Rng& rng);

NetworkParams init_network(const InitScheme& scheme,
                           std::span<const LayerSpec> layers, Rng& rng);

}  // namespace pierscour
