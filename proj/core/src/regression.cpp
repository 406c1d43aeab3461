#include "carleman/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "carleman/error.hpp"

namespace carleman {

namespace {

template <class Real>
struct QrFactor {
  std::size_t rows;
  std::size_t cols;
  std::vector<Real> qr;  // row-major, Householder vectors below the diagonal
  std::vector<Real> diag;
  std::vector<Real> beta;
  std::vector<Real> scale;
};

template <class Real>
QrFactor<Real> factor(std::span<const Real> a, std::size_t rows, std::size_t cols) {
  if (rows < cols || a.size() != rows * cols) {
    throw Error(ErrorCode::invalid_parameter, "least squares: bad design matrix shape");
  }
  QrFactor<Real> f{rows, cols, std::vector<Real>(a.begin(), a.end()), std::vector<Real>(cols),
                   std::vector<Real>(cols), std::vector<Real>(cols, Real(1))};
  auto at = [&](std::size_t i, std::size_t j) -> Real& { return f.qr[i * cols + j]; };

  for (std::size_t j = 0; j < cols; ++j) {
    Real norm = 0;
    for (std::size_t i = 0; i < rows; ++i) norm = std::max(norm, std::abs(at(i, j)));
    if (norm > 0) {
      f.scale[j] = norm;
      for (std::size_t i = 0; i < rows; ++i) at(i, j) /= norm;
    }
  }

  for (std::size_t k = 0; k < cols; ++k) {
    Real sigma = 0;
    for (std::size_t i = k; i < rows; ++i) sigma += at(i, k) * at(i, k);
    Real alpha = std::sqrt(sigma);
    if (alpha == 0) {
      throw Error(ErrorCode::numerical_failure, "least squares: rank-deficient design matrix");
    }
    if (at(k, k) > 0) alpha = -alpha;
    const Real xk = at(k, k);
    const Real vk = xk - alpha;
    at(k, k) = vk;
    const Real vnorm2 = sigma - xk * xk + vk * vk;
    f.beta[k] = vnorm2 > 0 ? Real(2) / vnorm2 : Real(0);
    f.diag[k] = alpha;
    for (std::size_t j = k + 1; j < cols; ++j) {
      Real dot = 0;
      for (std::size_t i = k; i < rows; ++i) dot += at(i, k) * at(i, j);
      dot *= f.beta[k];
      for (std::size_t i = k; i < rows; ++i) at(i, j) -= dot * at(i, k);
    }
  }
  return f;
}

template <class Real>
std::vector<Real> solve(const QrFactor<Real>& f, std::vector<Real> b) {
  const auto cols = f.cols;
  auto at = [&](std::size_t i, std::size_t j) { return f.qr[i * cols + j]; };
  for (std::size_t k = 0; k < cols; ++k) {
    Real dot = 0;
    for (std::size_t i = k; i < f.rows; ++i) dot += at(i, k) * b[i];
    dot *= f.beta[k];
    for (std::size_t i = k; i < f.rows; ++i) b[i] -= dot * at(i, k);
  }
  std::vector<Real> x(cols);
  for (std::size_t kk = cols; kk-- > 0;) {
    Real s = b[kk];
    for (std::size_t j = kk + 1; j < cols; ++j) s -= at(kk, j) * x[j];
    x[kk] = s / f.diag[kk];
  }
  for (std::size_t j = 0; j < cols; ++j) x[j] /= f.scale[j];
  return x;
}

}  // namespace

template <class Real>
std::vector<Real> least_squares(std::span<const Real> a, std::size_t rows, std::size_t cols,
                                std::span<const Real> b) {
  if (b.size() != rows) {
    throw Error(ErrorCode::invalid_parameter, "least squares: right-hand side length mismatch");
  }
  const auto f = factor(a, rows, cols);
  return solve(f, std::vector<Real>(b.begin(), b.end()));
}

template <class Real>
std::vector<std::vector<Real>> least_squares_multi(std::span<const Real> a, std::size_t rows,
                                                   std::size_t cols,
                                                   const std::vector<std::vector<Real>>& rhs) {
  const auto f = factor(a, rows, cols);
  std::vector<std::vector<Real>> out;
  out.reserve(rhs.size());
  for (const auto& b : rhs) {
    if (b.size() != rows) {
      throw Error(ErrorCode::invalid_parameter, "least squares: right-hand side length mismatch");
    }
    out.push_back(solve(f, b));
  }
  return out;
}

template std::vector<double> least_squares<double>(std::span<const double>, std::size_t,
                                                   std::size_t, std::span<const double>);
template std::vector<long double> least_squares<long double>(std::span<const long double>,
                                                             std::size_t, std::size_t,
                                                             std::span<const long double>);
template std::vector<std::vector<double>> least_squares_multi<double>(
    std::span<const double>, std::size_t, std::size_t, const std::vector<std::vector<double>>&);
template std::vector<std::vector<long double>> least_squares_multi<long double>(
    std::span<const long double>, std::size_t, std::size_t,
    const std::vector<std::vector<long double>>&);

LinearFit fit_linear(const std::vector<std::vector<double>>& basis, std::span<const double> y) {
  const std::size_t cols = basis.size();
  const std::size_t rows = y.size();
  std::vector<double> a(rows * cols);
  for (std::size_t j = 0; j < cols; ++j) {
    if (basis[j].size() != rows) {
      throw Error(ErrorCode::invalid_parameter, "fit_linear: basis column length mismatch");
    }
    for (std::size_t i = 0; i < rows; ++i) a[i * cols + j] = basis[j][i];
  }
  LinearFit fit;
  fit.coefficients = least_squares<double>(a, rows, cols, y);
  double ss = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    double model = 0.0;
    for (std::size_t j = 0; j < cols; ++j) model += fit.coefficients[j] * basis[j][i];
    ss += (y[i] - model) * (y[i] - model);
  }
  fit.residual_rms = rows > 0 ? std::sqrt(ss / static_cast<double>(rows)) : 0.0;
  return fit;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::invalid_parameter, "fit_slope: need at least two paired samples");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw Error(ErrorCode::invalid_parameter, "fit_slope: degenerate abscissae");
  }
  return sxy / sxx;
}

}  // namespace carleman
