#include <algorithm>
#include <cmath>

#include "pierscour/error.hpp"
#include "pierscour/rng.hpp"
#include "pierscour/train.hpp"

namespace pierscour {

namespace {

long double reference_activation(Activation a, long double x) {
  switch (a) {
    case Activation::relu: return x > 0.0L ? x : 0.0L;
    case Activation::sigmoid: return 1.0L / (1.0L + std::exp(-x));
    case Activation::tanh: return std::tanh(x);
    case Activation::identity: return x;
  }
  return x;
}

// Batch MSE from a separate extended-precision forward pass, so the
// numerical side of the comparison shares no code with forward/backward and
// its rounding noise stays far below the step size.
long double reference_mse(const NetworkParams& params,
                          std::span<const LayerSpec> layers, const Matrix& x,
                          const Matrix& y) {
  long double total = 0.0L;
  std::vector<long double> in, out;
  for (std::size_t b = 0; b < x.rows(); ++b) {
    in.assign(x.row(b).begin(), x.row(b).end());
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const auto& w = params.layers[k].weights;
      const auto& bias = params.layers[k].biases;
      out.assign(w.rows(), 0.0L);
      for (std::size_t j = 0; j < w.rows(); ++j) {
        long double acc = bias[j];
        for (std::size_t i = 0; i < w.cols(); ++i)
          acc += static_cast<long double>(w(j, i)) * in[i];
        out[j] = reference_activation(layers[k].activation, acc);
      }
      in.swap(out);
    }
    for (std::size_t j = 0; j < in.size(); ++j) {
      const long double e = in[j] - y(b, j);
      total += e * e;
    }
  }
  return total / static_cast<long double>(y.size());
}

// Smallest |net input| over hidden relu units.
double kink_distance(const NetworkParams& params,
                     std::span<const LayerSpec> layers, const Matrix& x) {
  const ForwardTrace trace = forward(params, layers, x, Mode::infer);
  double closest = INFINITY;
  for (const auto& lt : trace.layers) {
    if (lt.activation != Activation::relu) continue;
    for (double n : lt.net_inputs.data()) closest = std::min(closest, std::abs(n));
  }
  return closest;
}

}  // namespace

GradientCheckReport gradient_check(const GradientCheckOptions& opts) {
  if (opts.widths.size() < 2) throw ConfigError("gradient check needs >= 2 widths");
  if (opts.batch == 0) throw ConfigError("gradient check batch must be >= 1");
  if (!(opts.step > 0.0)) throw ConfigError("gradient check step must be positive");

  std::vector<LayerSpec> layers;
  for (std::size_t k = 0; k + 1 < opts.widths.size(); ++k) {
    const bool last = k + 2 == opts.widths.size();
    layers.push_back({opts.widths[k], opts.widths[k + 1],
                      last ? Activation::identity : opts.hidden_activation, 0.0});
  }
  validate_topology(layers);

  const std::size_t inputs = opts.widths.front();
  const std::size_t outputs = opts.widths.back();
  const bool has_relu = std::any_of(layers.begin(), layers.end(), [](const auto& l) {
    return l.activation == Activation::relu;
  });

  // Redraw until the point sits away from every relu kink.
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(attempt);
    Rng rng(seed);
    Matrix x(opts.batch, inputs);
    Matrix y(opts.batch, outputs);
    for (double& v : x.data()) v = rng.normal();
    for (double& v : y.data()) v = rng.normal();
    NetworkParams params = init_network(InitScheme::xavier(), layers, rng);
    if (has_relu && kink_distance(params, layers, x) < opts.kink_margin) continue;

    const ForwardTrace trace = forward(params, layers, x, Mode::infer);
    Matrix d_out = elementwise(ElementwiseOp::sub, trace.output(), y);
    const double scale = 2.0 / static_cast<double>(d_out.size());
    for (double& g : d_out.data()) g *= scale;
    Gradients grads = backward(params, trace, d_out);
    if (opts.corrupt_backward) {
      double& g = grads.front().weights.data()[0];
      g = g * 1.01 + 1e-3;
    }

    GradientCheckReport rep;
    rep.seed_used = seed;
    rep.layer_max_relative_error.assign(layers.size(), 0.0);

    auto compare = [&](std::size_t k, double& theta, double analytic) {
      const double saved = theta;
      // The realized step (plus - minus) can differ from 2h by rounding.
      const double plus = saved + opts.step;
      const double minus = saved - opts.step;
      theta = plus;
      const long double up = reference_mse(params, layers, x, y);
      theta = minus;
      const long double down = reference_mse(params, layers, x, y);
      theta = saved;
      const double numeric = static_cast<double>(
          (up - down) / (static_cast<long double>(plus) - minus));
      const double diff = std::abs(analytic - numeric);
      const double mag = std::max(std::abs(analytic), std::abs(numeric));
      if (mag < 1e-6) {
        rep.max_small_abs_error = std::max(rep.max_small_abs_error, diff);
      } else {
        const double rel = diff / mag;
        rep.max_relative_error = std::max(rep.max_relative_error, rel);
        rep.layer_max_relative_error[k] =
            std::max(rep.layer_max_relative_error[k], rel);
      }
      ++rep.parameters_checked;
    };

    for (std::size_t k = 0; k < layers.size(); ++k) {
      auto w = params.layers[k].weights.data();
      auto gw = grads[k].weights.data();
      for (std::size_t i = 0; i < w.size(); ++i) compare(k, w[i], gw[i]);
      auto b = params.layers[k].biases.data();
      auto gb = grads[k].biases.data();
      for (std::size_t i = 0; i < b.size(); ++i) compare(k, b[i], gb[i]);
    }
    rep.passed = rep.max_relative_error < kGradientRelTolerance &&
                 rep.max_small_abs_error < kGradientAbsTolerance;
    return rep;
  }
  throw NumericError("no kink-free parameter point found for gradient check");
}

}  // namespace pierscour
