#include "pierscour/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pierscour/error.hpp"

namespace pierscour {

namespace {

void check_pair(std::span<const double> a, std::span<const double> p,
                std::size_t min_len) {
  if (a.size() != p.size()) {
    throw DomainError("metric inputs differ in length (" +
                      std::to_string(a.size()) + " vs " +
                      std::to_string(p.size()) + ")");
  }
  if (a.size() < min_len) {
    throw DomainError("metric needs at least " + std::to_string(min_len) +
                      " pairs, got " + std::to_string(a.size()));
  }
}

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, 1);
  double ss = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(actual.size()));
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i)
    s += std::abs(actual[i] - predicted[i]);
  return s / static_cast<double>(actual.size());
}

double correlation(std::span<const double> actual,
                   std::span<const double> predicted) {
  check_pair(actual, predicted, 2);
  const double ma = mean(actual);
  const double mp = mean(predicted);
  double sap = 0.0, saa = 0.0, spp = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double da = actual[i] - ma;
    const double dp = predicted[i] - mp;
    sap += da * dp;
    saa += da * da;
    spp += dp * dp;
  }
  if (saa == 0.0 || spp == 0.0) {
    throw UndefinedCorrelationError(
        std::string("correlation undefined: ") +
        (saa == 0.0 ? "actual" : "predicted") + " values are constant");
  }
  return std::clamp(sap / std::sqrt(saa * spp), -1.0, 1.0);
}

MetricsReport report(std::span<const double> actual,
                     std::span<const double> predicted) {
  return {correlation(actual, predicted), rmse(actual, predicted),
          mae(actual, predicted), actual.size()};
}

}  // namespace pierscour
