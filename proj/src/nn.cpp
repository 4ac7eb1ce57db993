#include "pierscour/nn.hpp"

#include <cmath>
#include <string>

#include "pierscour/error.hpp"

namespace pierscour {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw ConfigError("unknown activation '" + std::string(name) +
                    "' (expected relu, sigmoid, tanh or identity)");
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::tanh: return std::tanh(x);
    case Activation::identity: return x;
  }
  return x;
}

double activate_derivative(Activation a, double net) {
  switch (a) {
    case Activation::relu: return net > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-net));
      return s * (1.0 - s);
    }
    case Activation::tanh: {
      const double t = std::tanh(net);
      return 1.0 - t * t;
    }
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

Matrix activate(Activation a, const Matrix& x) {
  Matrix out = x;
  if (a == Activation::identity) return out;
  for (double& v : out.data()) v = activate(a, v);
  return out;
}

Matrix activate_derivative(Activation a, const Matrix& net) {
  Matrix out = net;
  for (double& v : out.data()) v = activate_derivative(a, v);
  return out;
}

void validate_topology(std::span<const LayerSpec> layers) {
  if (layers.empty()) throw ConfigError("network needs at least one layer");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& l = layers[k];
    const std::string where = "layer " + std::to_string(k);
    if (l.input_width == 0 || l.output_width == 0)
      throw ConfigError(where + ": widths must be >= 1");
    if (!(l.dropout_rate >= 0.0 && l.dropout_rate < 1.0))
      throw ConfigError(where + ": dropout rate must lie in [0, 1)");
    if (k + 1 < layers.size() && l.output_width != layers[k + 1].input_width)
      throw ConfigError(where + ": output width " +
                        std::to_string(l.output_width) +
                        " does not match next input width " +
                        std::to_string(layers[k + 1].input_width));
  }
  if (layers.back().dropout_rate != 0.0)
    throw ConfigError("output layer cannot use dropout");
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.biases.size();
  return n;
}

void check_params(const NetworkParams& params,
                  std::span<const LayerSpec> layers) {
  if (params.layers.size() != layers.size()) {
    throw ShapeError("network has " + std::to_string(params.layers.size()) +
                     " parameter layers but topology has " +
                     std::to_string(layers.size()));
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& p = params.layers[k];
    if (p.weights.rows() != layers[k].output_width ||
        p.weights.cols() != layers[k].input_width ||
        p.biases.size() != layers[k].output_width) {
      throw ShapeError("layer " + std::to_string(k) + " weights " +
                       shape_string(p.weights) + " do not match topology " +
                       std::to_string(layers[k].output_width) + "x" +
                       std::to_string(layers[k].input_width));
    }
  }
}

Matrix net_input(const Matrix& weights, const Vector& bias,
                 const Matrix& inputs) {
  if (bias.size() != weights.rows()) {
    throw ShapeError("bias length " + std::to_string(bias.size()) +
                     " does not match weights " + shape_string(weights));
  }
  if (weights.cols() != inputs.cols()) {
    throw ShapeError("net input shape mismatch: weights " +
                     shape_string(weights) + ", inputs " +
                     shape_string(inputs));
  }
  Matrix out = matmul_transposed(inputs, weights);
  for (std::size_t b = 0; b < out.rows(); ++b) {
    auto r = out.row(b);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += bias[j];
  }
  return out;
}

namespace {

// Input that layer k actually consumed: the previous layer's outputs with
// its dropout mask applied.
Matrix effective_output(const LayerTrace& t) {
  if (!t.dropout_mask) return t.outputs;
  return elementwise(ElementwiseOp::hadamard, t.outputs, *t.dropout_mask);
}

}  // namespace

ForwardTrace forward(const NetworkParams& params,
                     std::span<const LayerSpec> layers, const Matrix& batch,
                     Mode mode, Rng* rng) {
  check_params(params, layers);
  if (batch.cols() != layers.front().input_width) {
    throw ShapeError("batch " + shape_string(batch) + " does not match input width " +
                     std::to_string(layers.front().input_width));
  }
  ForwardTrace trace{batch, {}};
  trace.layers.reserve(layers.size());
  const Matrix* input = &trace.inputs;
  Matrix dropped(1, 1);
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& spec = layers[k];
    const auto& p = params.layers[k];
    Matrix net = net_input(p.weights, p.biases, *input);
    Matrix out = activate(spec.activation, net);
    LayerTrace lt{spec.activation, std::move(net), std::move(out), std::nullopt};

    const bool is_hidden = k + 1 < layers.size();
    if (mode == Mode::train && is_hidden && spec.dropout_rate > 0.0) {
      if (rng == nullptr)
        throw ConfigError("dropout in train mode requires a random generator");
      const double keep = 1.0 - spec.dropout_rate;
      Matrix mask(lt.outputs.rows(), lt.outputs.cols());
      for (double& m : mask.data()) m = rng->bernoulli(keep) ? 1.0 / keep : 0.0;
      lt.dropout_mask = std::move(mask);
    }
    trace.layers.push_back(std::move(lt));
    if (trace.layers.back().dropout_mask) {
      dropped = effective_output(trace.layers.back());
      input = &dropped;
    } else {
      input = &trace.layers.back().outputs;
    }
  }
  return trace;
}

Matrix predict(const NetworkParams& params, std::span<const LayerSpec> layers,
               const Matrix& batch) {
  return forward(params, layers, batch, Mode::infer).output();
}

Gradients backward(const NetworkParams& params, const ForwardTrace& trace,
                   const Matrix& d_loss_d_output) {
  const std::size_t n_layers = trace.layers.size();
  if (params.layers.size() != n_layers) {
    throw ShapeError("trace has " + std::to_string(n_layers) +
                     " layers but params have " +
                     std::to_string(params.layers.size()));
  }
  const Matrix& out = trace.output();
  if (d_loss_d_output.rows() != out.rows() ||
      d_loss_d_output.cols() != out.cols()) {
    throw ShapeError("output gradient " + shape_string(d_loss_d_output) +
                     " does not match network output " + shape_string(out));
  }

  Gradients grads;
  grads.reserve(n_layers);
  for (const auto& p : params.layers)
    grads.push_back({Matrix(p.weights.rows(), p.weights.cols()),
                     Vector(p.biases.size())});

  // upstream holds dL/d(effective output of layer k).
  Matrix upstream = d_loss_d_output;
  for (std::size_t k = n_layers; k-- > 0;) {
    const auto& lt = trace.layers[k];
    const auto& p = params.layers[k];
    if (lt.net_inputs.cols() != p.weights.rows()) {
      throw ShapeError("trace layer " + std::to_string(k) + " width " +
                       std::to_string(lt.net_inputs.cols()) +
                       " does not match weights " + shape_string(p.weights));
    }

    Matrix delta = upstream;
    auto d = delta.data();
    if (lt.dropout_mask) {
      auto m = lt.dropout_mask->data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] *= m[i];
    }
    if (lt.activation != Activation::identity) {
      auto net = lt.net_inputs.data();
      for (std::size_t i = 0; i < d.size(); ++i)
        d[i] *= activate_derivative(lt.activation, net[i]);
    }

    const Matrix layer_input =
        k == 0 ? trace.inputs : effective_output(trace.layers[k - 1]);
    grads[k].weights = transposed_matmul(delta, layer_input);
    grads[k].biases = column_sums(delta);
    if (k > 0) upstream = matmul(delta, p.weights);
  }
  return grads;
}

}  // namespace pierscour
