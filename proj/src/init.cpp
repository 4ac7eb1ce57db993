#include "pierscour/init.hpp"

#include <cmath>
#include <string>

#include "pierscour/error.hpp"

namespace pierscour {

void InitScheme::validate() const {
  if (kind == InitKind::uniform_random &&
      !(uniform_halfwidth > 0.0 && std::isfinite(uniform_halfwidth))) {
    throw ConfigError("uniform init halfwidth must be a positive number");
  }
}

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::xavier_gaussian: return "xavier";
    case InitKind::uniform_random: return "uniform";
  }
  return "unknown";
}

InitKind parse_init_kind(std::string_view name) {
  if (name == "xavier" || name == "xavier_gaussian")
    return InitKind::xavier_gaussian;
  if (name == "uniform" || name == "uniform_random")
    return InitKind::uniform_random;
  throw ConfigError("unknown init scheme '" + std::string(name) +
                    "' (expected xavier or uniform)");
}

Layer init_layer(const InitScheme& scheme, std::size_t fan_in,
                 std::size_t fan_out, Rng& rng) {
  if (fan_in == 0 || fan_out == 0)
    throw DomainError("init_layer: fan_in and fan_out must be >= 1");
  scheme.validate();

  Layer layer{Matrix(fan_out, fan_in), Vector(fan_out)};
  switch (scheme.kind) {
    case InitKind::xavier_gaussian: {
      const double stddev =
          std::sqrt(2.0 / static_cast<double>(fan_in + fan_out));
      for (double& w : layer.weights.data()) w = rng.normal(0.0, stddev);
      break;
    }
    case InitKind::uniform_random: {
      const double hw = scheme.uniform_halfwidth;
      for (double& w : layer.weights.data()) {
        // uniform() never returns 1, and the lower endpoint is excluded by
        // redrawing, so |w| < hw strictly.
        double x;
        do x = rng.uniform(-hw, hw); while (x == -hw);
        w = x;
      }
      break;
    }
  }
  return layer;
}

NetworkParams init_network(const InitScheme& scheme,
                           std::span<const LayerSpec> layers, Rng& rng) {
  NetworkParams params;
  params.layers.reserve(layers.size());
  for (const auto& l : layers)
    params.layers.push_back(init_layer(scheme, l.input_width, l.output_width, rng));
  return params;
}

}  // namespace pierscour
