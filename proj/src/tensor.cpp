#include "hdmf/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace hdmf {

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  DenseMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != m.cols()) throw std::invalid_argument("ragged initializer rows");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

bool DenseMatrix::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* crow = c.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const double* brow = b.row(k).data();
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: inner dimensions differ");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* arow = a.row(k).data();
    const double* brow = b.row(k).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      double* crow = c.row(i).data();
      const double aki = arow[i];
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: inner dimensions differ");
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i).data();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* brow = b.row(j).data();
      double sum = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) sum += arow[k] * brow[k];
      c(i, j) = sum;
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

DenseMatrix add_bias(const DenseMatrix& m, std::span<const double> bias) {
  if (bias.size() != m.rows()) throw std::invalid_argument("add_bias: bias length != row count");
  DenseMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double* row = out.row(i).data();
    const double bi = bias[i];
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] += bi;
  }
  return out;
}

DenseMatrix tanh_map(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (double& v : out.values()) v = std::tanh(v);
  return out;
}

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double frobenius_sq(const DenseMatrix& m) {
  double sum = 0.0;
  for (double v : m.values()) sum += v * v;
  return sum;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("hadamard: shape mismatch");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= b.values()[i];
  return out;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("subtract: shape mismatch");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] -= b.values()[i];
  return out;
}

void add_in_place(DenseMatrix& target, const DenseMatrix& delta) {
  if (!target.same_shape(delta)) throw std::invalid_argument("add_in_place: shape mismatch");
  for (std::size_t i = 0; i < target.size(); ++i) target.values()[i] += delta.values()[i];
}

void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("axpy: shape mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) y.values()[i] += alpha * x.values()[i];
}

std::vector<double> row_sums(const DenseMatrix& m) {
  std::vector<double> sums(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row(i).data();
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += row[j];
    sums[i] = s;
  }
  return sums;
}

}  // namespace hdmf
