#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace periodfn {

/// Dense real polynomial, coefficients stored lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(double v) { return Polynomial({v}); }
  static Polynomial monomial(std::size_t degree, double coeff = 1.0) {
    std::vector<double> c(degree + 1, 0.0);
    c[degree] = coeff;
    return Polynomial(std::move(c));
  }

  /// Degree of the zero polynomial is reported as 0.
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const double> coefficients() const { return c_; }
  double coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Value and first derivative in one Horner pass.
  std::pair<double, double> value_and_slope(double x) const {
    double p = 0.0;
    double dp = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      dp = dp * x + p;
      p = p * x + *it;
    }
    return {p, dp};
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
  }

  /// Sum of |c_i| |x|^i, the natural magnitude against which evaluation error is measured.
  double magnitude(double x) const {
    double acc = 0.0;
    const double ax = std::abs(x);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * ax + std::abs(*it);
    return acc;
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
    for (std::size_t i = 0; i < q.c_.size(); ++i) r[i] += q.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-1.0) * q; }
  friend Polynomial operator*(double s, const Polynomial& p) {
    std::vector<double> r(p.c_);
    for (double& v : r) v *= s;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<double> r(p.c_.size() + q.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(r));
  }

  /// Quotient and remainder of long division by a nonzero divisor.
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den) {
    if (num.degree() < den.degree() || num.is_zero()) return {Polynomial{}, num};
    std::vector<double> r(num.c_);
    std::vector<double> q(num.c_.size() - den.c_.size() + 1, 0.0);
    const double lead = den.c_.back();
    for (std::size_t k = q.size(); k-- > 0;) {
      const double factor = r[k + den.c_.size() - 1] / lead;
      q[k] = factor;
      for (std::size_t j = 0; j < den.c_.size(); ++j) r[k + j] -= factor * den.c_[j];
      r[k + den.c_.size() - 1] = 0.0;
    }
    r.resize(den.c_.size() - 1);
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  /// Drops leading coefficients below rel_tol relative to the largest coefficient.
  Polynomial chopped(double rel_tol) const {
    double big = 0.0;
    for (double v : c_) big = std::max(big, std::abs(v));
    std::vector<double> r(c_);
    while (!r.empty() && std::abs(r.back()) <= rel_tol * big) r.pop_back();
    return Polynomial(std::move(r));
  }

  bool operator==(const Polynomial&) const = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

}  // namespace periodfn
