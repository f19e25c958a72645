#include "scoreinf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scoreinf/random.hpp"

namespace scoreinf::kernels {

Matrix gram(const Matrix& rows) {
  const Index n = rows.rows();
  const Index m = rows.cols();
  if (n == 0) return Matrix::Zero(m, m);
  const Index chunks = (n + kChunkRows - 1) / kChunkRows;
  std::vector<Matrix> partial(static_cast<size_t>(chunks));

#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const Index start = c * kChunkRows;
    const Index len = std::min(kChunkRows, n - start);
    Matrix acc = Matrix::Zero(m, m);
    acc.selfadjointView<Eigen::Lower>().rankUpdate(rows.middleRows(start, len).transpose());
    partial[static_cast<size_t>(c)] = std::move(acc);
  }

  Matrix out = Matrix::Zero(m, m);
  for (const Matrix& p : partial) out += p;
  out = out.selfadjointView<Eigen::Lower>();
  out /= static_cast<double>(n);
  return out;
}

Matrix gram_reference(const Matrix& rows) {
  const Index n = rows.rows();
  const Index m = rows.cols();
  Matrix out = Matrix::Zero(m, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) {
      const double v = rows(i, j);
      if (v == 0.0) continue;
      for (Index k = 0; k < m; ++k) out(j, k) += v * rows(i, k);
    }
  if (n > 0) out /= static_cast<double>(n);
  return out;
}

Vector column_mean(const Matrix& rows) {
  const Index n = rows.rows();
  const Index m = rows.cols();
  if (n == 0) return Vector::Zero(m);
  const Index chunks = (n + kChunkRows - 1) / kChunkRows;
  std::vector<Vector> partial(static_cast<size_t>(chunks));
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const Index start = c * kChunkRows;
    const Index len = std::min(kChunkRows, n - start);
    partial[static_cast<size_t>(c)] = rows.middleRows(start, len).colwise().sum().transpose();
  }
  Vector out = Vector::Zero(m);
  for (const Vector& p : partial) out += p;
  return out / static_cast<double>(n);
}

Vector column_mean_reference(const Matrix& rows) {
  Vector out = Vector::Zero(rows.cols());
  for (Index i = 0; i < rows.rows(); ++i)
    for (Index j = 0; j < rows.cols(); ++j) out[j] += rows(i, j);
  if (rows.rows() > 0) out /= static_cast<double>(rows.rows());
  return out;
}

BootstrapMaxima bootstrap_maxima(const Matrix& z, int draws, std::uint64_t seed, double scale) {
  const Index n = z.rows();
  BootstrapMaxima out;
  out.two_sided.assign(static_cast<size_t>(draws), 0.0);
  out.one_sided.assign(static_cast<size_t>(draws), 0.0);
  const int chunks = (draws + kChunkDraws - 1) / kChunkDraws;

#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < chunks; ++c) {
    const int start = c * kChunkDraws;
    const int len = std::min(kChunkDraws, draws - start);
    Matrix e(len, n);
    for (int k = 0; k < len; ++k)
      for (Index i = 0; i < n; ++i)
        e(k, i) = counter_normal(seed, static_cast<std::uint64_t>(start + k),
                                 static_cast<std::uint64_t>(i));
    const Matrix w = e * z;
    for (int k = 0; k < len; ++k) {
      double two = 0.0;
      double one = -std::numeric_limits<double>::infinity();
      for (Index j = 0; j < w.cols(); ++j) {
        two = std::max(two, std::abs(w(k, j)));
        one = std::max(one, w(k, j));
      }
      out.two_sided[static_cast<size_t>(start + k)] = two * scale;
      out.one_sided[static_cast<size_t>(start + k)] = one * scale;
    }
  }
  return out;
}

BootstrapMaxima bootstrap_maxima_reference(const Matrix& z, int draws, std::uint64_t seed,
                                           double scale) {
  BootstrapMaxima out;
  std::vector<double> e(static_cast<size_t>(z.rows()));
  for (int k = 0; k < draws; ++k) {
    for (Index i = 0; i < z.rows(); ++i)
      e[static_cast<size_t>(i)] =
          counter_normal(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(i));
    double two = 0.0;
    double one = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < z.cols(); ++j) {
      double s = 0.0;
      for (Index i = 0; i < z.rows(); ++i) s += z(i, j) * e[static_cast<size_t>(i)];
      two = std::max(two, std::abs(s));
      one = std::max(one, s);
    }
    out.two_sided.push_back(two * scale);
    out.one_sided.push_back(one * scale);
  }
  return out;
}

}  // namespace scoreinf::kernels
