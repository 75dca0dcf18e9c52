#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace msel {

// Power-family modulus phi(x) = c * x^p on [0, inf), with c > 0 and p >= 2.
//
// Any such phi is convex, vanishes at 0 and has phi(x)/x^2 nondecreasing,
// which is exactly what the hold-out selection bound asks of the variance
// link between Pf^2 and Pf. p = 2 is the Massart margin regime (fast
// remainder ~ 1/n); p -> inf approaches the slow ~ n^{-1/2} regime.
class PowerModulus {
 public:
  PowerModulus(double c, double p) : c_(c), p_(p) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::domain_error("PowerModulus: coefficient c must be positive, got " + std::to_string(c));
    if (!(p >= 2.0) || !std::isfinite(p))
      throw std::domain_error("PowerModulus: exponent p must be >= 2, got " + std::to_string(p));
  }

  double coefficient() const noexcept { return c_; }
  double exponent() const noexcept { return p_; }

  double operator()(double x) const {
    require_nonnegative(x, "phi");
    return c_ * std::pow(x, p_);
  }

  double inverse(double y) const {
    require_nonnegative(y, "phi_inverse");
    return std::pow(y / c_, 1.0 / p_);
  }

  // sup_{x >= 0} (x*y - c*x^p), attained at x* = (y / (c p))^{1/(p-1)}.
  double conjugate(double y) const {
    require_nonnegative(y, "phi_conjugate");
    const double q = p_ / (p_ - 1.0);
    return (p_ - 1.0) * std::pow(p_, -q) * std::pow(c_, -1.0 / (p_ - 1.0)) * std::pow(y, q);
  }

  double conjugate_maximizer(double y) const {
    require_nonnegative(y, "phi_conjugate");
    return std::pow(y / (c_ * p_), 1.0 / (p_ - 1.0));
  }

  friend bool operator==(const PowerModulus&, const PowerModulus&) = default;

 private:
  static void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0)) throw std::domain_error(std::string(what) + ": argument must be >= 0");
  }

  double c_;
  double p_;
};

struct RateQuantities {
  double delta_n = 0.0;        // phi*(n^{-1/2})
  double delta_tilde_n = 0.0;  // nonzero root of phi(d) = d / sqrt(n)
  std::uint64_t n = 0;
};

inline RateQuantities rate_quantities(const PowerModulus& phi, std::uint64_t n) {
  if (n == 0) throw std::domain_error("rate_quantities: n must be >= 1");
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  RateQuantities r;
  r.n = n;
  r.delta_n = phi.conjugate(inv_sqrt_n);
  // c d^p = d n^{-1/2}  =>  d^{p-1} = 1 / (c sqrt(n))
  r.delta_tilde_n = std::pow(phi.coefficient() * std::sqrt(static_cast<double>(n)),
                             -1.0 / (phi.exponent() - 1.0));
  return r;
}

}  // namespace msel
