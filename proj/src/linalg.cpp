#include "pierscour/linalg.hpp"

#include <utility>

#include "pierscour/error.hpp"

namespace pierscour {

namespace {

void require_nonempty(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw ShapeError("matrix dimensions must be positive, got " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

// dst[j] += sum over r of coeff[r] * rows[r][j], four rows at a time. The
// grouping is fixed, so results are reproducible run to run.
void accumulate_rows(double* __restrict dst, std::size_t n,
                     const double* coeff, const double* const* rows,
                     std::size_t count) {
  std::size_t r = 0;
  for (; r + 4 <= count; r += 4) {
    const double c0 = coeff[r], c1 = coeff[r + 1], c2 = coeff[r + 2],
                 c3 = coeff[r + 3];
    const double* __restrict s0 = rows[r];
    const double* __restrict s1 = rows[r + 1];
    const double* __restrict s2 = rows[r + 2];
    const double* __restrict s3 = rows[r + 3];
    for (std::size_t j = 0; j < n; ++j)
      dst[j] += (c0 * s0[j] + c1 * s1[j]) + (c2 * s2[j] + c3 * s3[j]);
  }
  for (; r < count; ++r) {
    const double c = coeff[r];
    const double* __restrict s = rows[r];
    for (std::size_t j = 0; j < n; ++j) dst[j] += c * s[j];
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols) {
  require_nonempty(rows, cols);
  data_.assign(rows * cols, fill);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_nonempty(rows, cols);
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

Matrix Matrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(n * m);
  for (const auto& r : rows) {
    if (r.size() != m) throw ShapeError("ragged row in matrix literal");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(n, m, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector::Vector(std::size_t n, double fill) : data_(n, fill) {
  if (n == 0) throw ShapeError("vector length must be positive");
}

Vector::Vector(std::vector<double> data) : data_(std::move(data)) {
  if (data_.empty()) throw ShapeError("vector length must be positive");
}

Vector::Vector(std::initializer_list<double> values) : data_(values) {
  if (data_.empty()) throw ShapeError("vector length must be positive");
}

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul shape mismatch: " + shape_string(a) + " * " +
                     shape_string(b) + " (" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + ")");
  }
  Matrix out(a.rows(), b.cols());
  std::vector<const double*> rows(b.rows());
  for (std::size_t k = 0; k < b.rows(); ++k) rows[k] = b.row(k).data();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    accumulate_rows(out.row(i).data(), b.cols(), a.row(i).data(), rows.data(),
                    a.cols());
  }
  return out;
}

Matrix matmul_transposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_transposed shape mismatch: " + shape_string(a) +
                     " * transpose(" + shape_string(b) + ")");
  }
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ar = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto br = b.row(j);
      // Four independent partial sums; the order is fixed, so results stay
      // reproducible.
      double acc[4] = {0.0, 0.0, 0.0, 0.0};
      const std::size_t n = ar.size();
      std::size_t k = 0;
      for (; k + 4 <= n; k += 4) {
        acc[0] += ar[k] * br[k];
        acc[1] += ar[k + 1] * br[k + 1];
        acc[2] += ar[k + 2] * br[k + 2];
        acc[3] += ar[k + 3] * br[k + 3];
      }
      for (; k < n; ++k) acc[0] += ar[k] * br[k];
      out(i, j) = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    }
  }
  return out;
}

Matrix transposed_matmul(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("transposed_matmul shape mismatch: transpose(" +
                     shape_string(a) + ") * " + shape_string(b));
  }
  Matrix out(a.cols(), b.cols());
  std::vector<const double*> rows(b.rows());
  for (std::size_t k = 0; k < b.rows(); ++k) rows[k] = b.row(k).data();
  std::vector<double> coeff(a.rows());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t k = 0; k < a.rows(); ++k) coeff[k] = a(k, i);
    accumulate_rows(out.row(i).data(), b.cols(), coeff.data(), rows.data(),
                    a.rows());
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix elementwise(ElementwiseOp op, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("elementwise shape mismatch: " + shape_string(a) +
                     " vs " + shape_string(b));
  }
  Matrix out(a.rows(), a.cols());
  auto x = a.data();
  auto y = b.data();
  auto z = out.data();
  switch (op) {
    case ElementwiseOp::add:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + y[i];
      break;
    case ElementwiseOp::sub:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] - y[i];
      break;
    case ElementwiseOp::hadamard:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] * y[i];
      break;
  }
  return out;
}

Vector column_sums(const Matrix& a) {
  Vector out(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j];
  }
  return out;
}

}  // namespace pierscour
