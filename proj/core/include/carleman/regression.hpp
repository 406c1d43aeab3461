#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace carleman {

/// Dense least-squares solve min ||A x - b|| by Householder QR.
/// `a` is row-major with `rows` rows and `cols` columns; rows >= cols.
/// Columns are equilibrated before factorisation.
template <class Real>
std::vector<Real> least_squares(std::span<const Real> a, std::size_t rows, std::size_t cols,
                                std::span<const Real> b);

/// Solve for several right-hand sides sharing the same design matrix.
/// `rhs` holds `nrhs` columns of length `rows`, stored one after another.
template <class Real>
std::vector<std::vector<Real>> least_squares_multi(std::span<const Real> a, std::size_t rows,
                                                   std::size_t cols,
                                                   const std::vector<std::vector<Real>>& rhs);

struct LinearFit {
  std::vector<double> coefficients;
  double residual_rms = 0.0;
};

/// Ordinary least squares y ~ sum_j c_j * basis_j, basis given column-wise.
LinearFit fit_linear(const std::vector<std::vector<double>>& basis, std::span<const double> y);

/// Slope of y against x by ordinary least squares.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace carleman
