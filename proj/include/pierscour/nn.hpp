#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pierscour/linalg.hpp"
#include "pierscour/rng.hpp"

namespace pierscour {

enum class Activation { relu, sigmoid, tanh, identity };

std::string_view to_string(Activation a);
// Accepts "relu", "sigmoid", "tanh", "identity"; throws ConfigError otherwise.
Activation parse_activation(std::string_view name);

double activate(Activation a, double x);
// relu'(0) is taken as 0.
double activate_derivative(Activation a, double net);

Matrix activate(Activation a, const Matrix& x);
Matrix activate_derivative(Activation a, const Matrix& net);

struct LayerSpec {
  std::size_t input_width = 0;
  std::size_t output_width = 0;
  Activation activation = Activation::identity;
  double dropout_rate = 0.0;

  bool operator==(const LayerSpec&) const = default;
};

// Checks widths, dropout range, chaining, and that the output layer has no
// dropout. Throws ConfigError.
void validate_topology(std::span<const LayerSpec> layers);

struct Layer {
  Matrix weights;  // output_width x input_width
  Vector biases;   // output_width
};

struct NetworkParams {
  std::vector<Layer> layers;

  std::size_t parameter_count() const;
};

// Throws ShapeError when params do not match the topology.
void check_params(const NetworkParams& params,
                  std::span<const LayerSpec> layers);

struct LayerTrace {
  Activation activation;
  Matrix net_inputs;
  Matrix outputs;  // activation(net_inputs), before dropout
  std::optional<Matrix> dropout_mask;
};

struct ForwardTrace {
  Matrix inputs;
  std::vector<LayerTrace> layers;

  const Matrix& output() const { return layers.back().outputs; }
};

struct LayerGradients {
  Matrix weights;
  Vector biases;
};

using Gradients = std::vector<LayerGradients>;

enum class Mode { train, infer };

// Row b, unit j: sum_i weights[j][i] * inputs[b][i] + bias[j].
Matrix net_input(const Matrix& weights, const Vector& bias,
                 const Matrix& inputs);

// In train mode, hidden layers with a positive dropout rate get an inverted
// dropout mask drawn from `rng` (which must then be non-null).
ForwardTrace forward(const NetworkParams& params,
                     std::span<const LayerSpec> layers, const Matrix& batch,
                     Mode mode, Rng* rng = nullptr);

// Infer-mode forward pass returning only the final outputs.
Matrix predict(const NetworkParams& params, std::span<const LayerSpec> layers,
               const Matrix& batch);

Gradients backward(const NetworkParams& params, const ForwardTrace& trace,
                   const Matrix& d_loss_d_output);

}  // namespace pierscour
