#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pierscour/linalg.hpp"

namespace pierscour {

inline constexpr std::size_t kFeatureCount = 7;
inline constexpr std::size_t kColumnCount = 8;
// CSV column order; the first seven are model inputs, the last the target.
inline constexpr std::array<std::string_view, kColumnCount> kColumns = {
    "ps", "pw", "skew", "v", "h", "d50", "sigma", "scour"};

// One field measurement. Units: pw, h, scour in meters; v in m/s; d50 in
// millimeters; skew in degrees; ps and sigma dimensionless.
struct ScourRecord {
  double ps = 1.0;
  double pw = 1.0;
  double skew = 0.0;
  double v = 0.0;
  double h = 0.0;
  double d50 = 1.0;
  double sigma = 1.0;
  double scour = 0.0;

  double column(std::size_t index) const;
  double& column(std::size_t index);

  bool operator==(const ScourRecord&) const = default;
};

// Names of every invariant the record breaks, e.g. "pw > 0". Empty if valid.
std::vector<std::string> violations(const ScourRecord& r);

enum class Provenance { file, synthetic };

struct Dataset {
  std::vector<ScourRecord> records;
  Provenance provenance = Provenance::file;
  std::optional<std::uint64_t> seed;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

Dataset load_csv(const std::filesystem::path& path);
// `source` only labels error messages.
Dataset parse_csv(std::istream& in, std::string_view source = "<stream>");

void write_csv(const Dataset& ds, std::ostream& out);
void write_csv(const Dataset& ds, const std::filesystem::path& path);

// Seeded shuffle, then the first n_train records form the training set.
std::pair<Dataset, Dataset> split(const Dataset& ds, std::size_t n_train,
                                  std::uint64_t seed);

struct ColumnStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

struct FeatureStats {
  std::size_t n = 0;
  bool sample_std = true;  // n - 1 denominator; 0 when n == 1
  std::array<ColumnStats, kColumnCount> columns{};
};

FeatureStats summarize(const Dataset& ds);

// Affine map x -> (x - center) / scale for one column.
struct ColumnScale {
  double center = 0.0;
  double scale = 1.0;

  // Mean and sample standard deviation; degenerate columns get scale 1.
  static ColumnScale fit(std::span<const double> values);

  double apply(double x) const { return (x - center) / scale; }
  double invert(double z) const { return z * scale + center; }

  bool operator==(const ColumnScale&) const = default;
};

// Standardization of the seven inputs and the target, fitted on training data.
struct Standardizer {
  std::array<ColumnScale, kColumnCount> columns{};

  static Standardizer fit(const Dataset& train);

  // n x 7 matrix of standardized inputs.
  Matrix features(const Dataset& ds) const;
  // n x 1 matrix of standardized targets.
  Matrix targets(const Dataset& ds) const;
  double target_to_meters(double z) const {
    return columns[kFeatureCount].invert(z);
  }

  bool operator==(const Standardizer&) const = default;
};

// Raw (unscaled) n x 7 input matrix.
Matrix feature_matrix(const Dataset& ds);

// Statistics-matched synthetic records with a planted scour relation.
Dataset synth_generate(std::size_t n, std::uint64_t seed);

// Shortest decimal text that parses back to the identical double.
std::string format_double(double x);

}  // namespace pierscour
