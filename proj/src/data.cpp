#include "pierscour/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pierscour/error.hpp"
#include "pierscour/rng.hpp"

namespace pierscour {

double ScourRecord::column(std::size_t index) const {
  switch (index) {
    case 0: return ps;
    case 1: return pw;
    case 2: return skew;
    case 3: return v;
    case 4: return h;
    case 5: return d50;
    case 6: return sigma;
    case 7: return scour;
  }
  throw DomainError("column index " + std::to_string(index) + " out of range");
}

double& ScourRecord::column(std::size_t index) {
  switch (index) {
    case 0: return ps;
    case 1: return pw;
    case 2: return skew;
    case 3: return v;
    case 4: return h;
    case 5: return d50;
    case 6: return sigma;
    case 7: return scour;
  }
  throw DomainError("column index " + std::to_string(index) + " out of range");
}

std::vector<std::string> violations(const ScourRecord& r) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    if (!std::isfinite(r.column(c)))
      out.push_back(std::string(kColumns[c]) + " is finite");
  }
  if (!out.empty()) return out;
  if (!(r.ps >= 0.7 && r.ps <= 1.3)) out.emplace_back("ps in [0.7, 1.3]");
  if (!(r.pw > 0.0)) out.emplace_back("pw > 0");
  if (!(r.skew >= 0.0 && r.skew <= 90.0)) out.emplace_back("skew in [0, 90]");
  if (!(r.v >= 0.0)) out.emplace_back("v >= 0");
  if (!(r.h >= 0.0)) out.emplace_back("h >= 0");
  if (!(r.d50 > 0.0)) out.emplace_back("d50 > 0");
  if (!(r.sigma >= 1.0)) out.emplace_back("sigma >= 1");
  if (!(r.scour >= 0.0)) out.emplace_back("scour >= 0");
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

void check_header(std::string_view line, std::string_view source) {
  auto fields = split_fields(line);
  if (!fields.empty() && fields.front().starts_with("\xEF\xBB\xBF"))
    fields.front().remove_prefix(3);
  std::string missing;
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    bool found = false;
    for (auto f : fields) found = found || f == kColumns[c];
    if (!found) missing += (missing.empty() ? "" : ", ") + std::string(kColumns[c]);
  }
  if (!missing.empty()) {
    throw SchemaError(std::string(source) + ": missing column(s): " + missing);
  }
  bool exact = fields.size() == kColumnCount;
  for (std::size_t c = 0; exact && c < kColumnCount; ++c)
    exact = fields[c] == kColumns[c];
  if (!exact) {
    throw SchemaError(std::string(source) +
                      ": header must be exactly ps,pw,skew,v,h,d50,sigma,scour");
  }
}

}  // namespace

Dataset parse_csv(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    check_header(line, source);
    have_header = true;
    break;
  }
  if (!have_header) throw SchemaError(std::string(source) + ": missing header");

  Dataset ds;
  ds.provenance = Provenance::file;
  std::string problems;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != kColumnCount) {
      throw ParseError(std::string(source) + ": line " + std::to_string(line_no) +
                       ": expected " + std::to_string(kColumnCount) +
                       " fields, found " + std::to_string(fields.size()));
    }
    ScourRecord r;
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      auto f = fields[c];
      double value = 0.0;
      auto res = std::from_chars(f.data(), f.data() + f.size(), value);
      if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError(std::string(source) + ": line " +
                         std::to_string(line_no) + ", column " +
                         std::string(kColumns[c]) + ": '" + std::string(f) +
                         "' is not a number");
      }
      r.column(c) = value;
    }
    auto bad = violations(r);
    if (!bad.empty()) {
      problems += "\n  line " + std::to_string(line_no) + ": violates";
      for (const auto& b : bad) problems += " \"" + b + "\"";
    }
    ds.records.push_back(r);
  }
  if (!problems.empty()) {
    throw ValidationError(std::string(source) + ": invalid records:" + problems);
  }
  if (ds.records.empty()) {
    throw ValidationError(std::string(source) + ": empty dataset");
  }
  return ds;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return parse_csv(in, path.string());
}

void write_csv(const Dataset& ds, std::ostream& out) {
  for (std::size_t c = 0; c < kColumnCount; ++c)
    out << (c ? "," : "") << kColumns[c];
  out << '\n';
  for (const auto& r : ds.records) {
    for (std::size_t c = 0; c < kColumnCount; ++c)
      out << (c ? "," : "") << format_double(r.column(c));
    out << '\n';
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(ds, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::pair<Dataset, Dataset> split(const Dataset& ds, std::size_t n_train,
                                  std::uint64_t seed) {
  if (n_train == 0 || n_train >= ds.size()) {
    throw DomainError("split: n_train must lie in (0, " +
                      std::to_string(ds.size()) + "), got " +
                      std::to_string(n_train));
  }
  std::vector<std::size_t> order(ds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  shuffle(std::span<std::size_t>(order), rng);

  Dataset train{{}, ds.provenance, ds.seed};
  Dataset test{{}, ds.provenance, ds.seed};
  train.records.reserve(n_train);
  test.records.reserve(ds.size() - n_train);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? train : test).records.push_back(ds.records[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

FeatureStats summarize(const Dataset& ds) {
  if (ds.empty()) throw DomainError("summarize: empty dataset");
  FeatureStats stats;
  stats.n = ds.size();
  const double n = static_cast<double>(ds.size());
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    auto& s = stats.columns[c];
    s.min = s.max = ds.records.front().column(c);
    double sum = 0.0;
    for (const auto& r : ds.records) {
      const double x = r.column(c);
      s.min = std::min(s.min, x);
      s.max = std::max(s.max, x);
      sum += x;
    }
    s.mean = std::clamp(sum / n, s.min, s.max);
    double ss = 0.0;
    for (const auto& r : ds.records) {
      const double d = r.column(c) - s.mean;
      ss += d * d;
    }
    s.std = ds.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return stats;
}

ColumnScale ColumnScale::fit(std::span<const double> values) {
  if (values.empty()) throw DomainError("cannot fit a scale to an empty column");
  double sum = 0.0;
  for (double x : values) sum += x;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd > 0.0 && std::isfinite(sd) ? sd : 1.0};
}

Standardizer Standardizer::fit(const Dataset& train) {
  if (train.empty()) throw DomainError("cannot fit a standardizer to an empty dataset");
  Standardizer s;
  std::vector<double> col(train.size());
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    for (std::size_t i = 0; i < train.size(); ++i)
      col[i] = train.records[i].column(c);
    s.columns[c] = ColumnScale::fit(col);
  }
  return s;
}

Matrix Standardizer::features(const Dataset& ds) const {
  Matrix m = feature_matrix(ds);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t c = 0; c < kFeatureCount; ++c) r[c] = columns[c].apply(r[c]);
  }
  return m;
}

Matrix Standardizer::targets(const Dataset& ds) const {
  if (ds.empty()) throw DomainError("empty dataset");
  Matrix m(ds.size(), 1);
  for (std::size_t i = 0; i < ds.size(); ++i)
    m(i, 0) = columns[kFeatureCount].apply(ds.records[i].scour);
  return m;
}

Matrix feature_matrix(const Dataset& ds) {
  if (ds.empty()) throw DomainError("empty dataset");
  Matrix m(ds.size(), kFeatureCount);
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t c = 0; c < kFeatureCount; ++c)
      m(i, c) = ds.records[i].column(c);
  return m;
}

}  // namespace pierscour
