#pragma once

#include <cstddef>
#include <span>

namespace pierscour {

struct MetricsReport {
  double cc = 0.0;    // Pearson correlation; NaN from evaluate when undefined
  double rmse = 0.0;  // meters
  double mae = 0.0;   // meters
  std::size_t n = 0;
};

// All three throw DomainError on length mismatch or empty input.
double rmse(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);
// Throws UndefinedCorrelationError when either vector is constant.
double correlation(std::span<const double> actual,
                   std::span<const double> predicted);

MetricsReport report(std::span<const double> actual,
                     std::span<const double> predicted);

}  // namespace pierscour
