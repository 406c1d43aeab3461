#pragma once

#include <cmath>
#include <complex>

namespace carleman {

/// Neumaier (improved Kahan-Babuska) compensated accumulator.
template <class Real>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real initial) : sum_(initial) {}

  CompensatedSum& operator+=(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  [[nodiscard]] Real value() const { return sum_ + comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

/// Componentwise compensated sum for complex values.
template <class Real>
class CompensatedComplexSum {
 public:
  CompensatedComplexSum& operator+=(std::complex<Real> z) {
    re_ += z.real();
    im_ += z.imag();
    return *this;
  }
  [[nodiscard]] std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

/// log(exp(a) + exp(b)) without overflow.
template <class Real>
Real log_add_exp(Real a, Real b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const Real hi = a > b ? a : b;
  const Real lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace carleman
