#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "msel/modulus.hpp"
#include "oracles.hpp"

using msel::PowerModulus;
using msel::rate_quantities;

TEST(PowerModulus, Evaluation) {
  EXPECT_DOUBLE_EQ(PowerModulus(1, 2)(0.0), 0.0);
  EXPECT_DOUBLE_EQ(PowerModulus(1, 2)(0.5), 0.25);
  EXPECT_DOUBLE_EQ(PowerModulus(2, 3)(1.0), 2.0);
}

TEST(PowerModulus, Inverse) {
  EXPECT_DOUBLE_EQ(PowerModulus(1, 2).inverse(0.0), 0.0);
  EXPECT_DOUBLE_EQ(PowerModulus(1, 2).inverse(0.25), 0.5);
  EXPECT_DOUBLE_EQ(PowerModulus(2, 3).inverse(2.0), 1.0);
  for (double c : {0.5, 1.0, 2.0})
    for (double p : {2.0, 2.5, 3.0, 4.0})
      for (double y : {1e-6, 0.01, 0.3, 1.0, 7.5}) {
        const PowerModulus phi(c, p);
        EXPECT_NEAR(phi(phi.inverse(y)), y, 1e-12 * y);
      }
}

TEST(PowerModulus, RejectsInvalidParameters) {
  EXPECT_THROW(PowerModulus(1.0, 1.5), std::domain_error);
  EXPECT_THROW(PowerModulus(0.0, 2.0), std::domain_error);
  EXPECT_THROW(PowerModulus(-1.0, 3.0), std::domain_error);
  const PowerModulus phi(1, 2);
  EXPECT_THROW(phi(-0.1), std::domain_error);
  EXPECT_THROW(phi.inverse(-0.1), std::domain_error);
  EXPECT_THROW(phi.conjugate(-0.1), std::domain_error);
}

TEST(PowerModulus, ConjugateExamples) {
  // Values from the grid-search oracle, not the closed form.
  const PowerModulus quad(1, 2), quartic(1, 4);
  EXPECT_NEAR(msel::oracle::conjugate_by_search([&](double x) { return quad(x); }, 1.0), 0.25, 1e-9);
  EXPECT_NEAR(msel::oracle::conjugate_by_search([&](double x) { return quartic(x); }, 1.0), 0.472470393710577, 1e-9);

  EXPECT_NEAR(quad.conjugate(1.0), 0.25, 1e-15);
  EXPECT_NEAR(quartic.conjugate(1.0), 0.472470393710577, 1e-12);
  EXPECT_EQ(PowerModulus(0.7, 3.3).conjugate(0.0), 0.0);
}

TEST(PowerModulus, ConjugateMatchesSearchAndFenchelYoung) {
  for (double c : {0.5, 1.0, 2.0})
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
      const PowerModulus phi(c, p);
      for (int k = 0; k <= 40; ++k) {
        const double y = 0.1 * k;
        const double closed = phi.conjugate(y);
        EXPECT_NEAR(closed, msel::oracle::conjugate_by_search([&](double x) { return phi(x); }, y), 1e-6)
            << "c=" << c << " p=" << p << " y=" << y;
        // Young's inequality on a grid, equality at the maximizer.
        for (double x : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) EXPECT_LE(x * y, phi(x) + closed + 1e-12);
        const double xs = phi.conjugate_maximizer(y);
        EXPECT_NEAR(xs * y, phi(xs) + closed, 1e-9);
      }
    }
}

TEST(PowerModulus, ConvexityAndMonotoneRatios) {
  for (double c : {0.5, 1.0, 2.0})
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
      const PowerModulus phi(c, p);
      for (double x1 = 0.0; x1 < 3.0; x1 += 0.37)
        for (double x2 = x1 + 0.2; x2 < 4.0; x2 += 0.41)
          for (double t = 0.0; t <= 1.0; t += 0.125)
            EXPECT_LE(phi(t * x1 + (1 - t) * x2), t * phi(x1) + (1 - t) * phi(x2) + 1e-12);
      double prev_phi = 0.0, prev_conj = std::numeric_limits<double>::infinity();
      for (double x = 0.05; x < 5.0; x += 0.05) {
        const double r = phi(x) / (x * x);
        const double rc = phi.conjugate(x) / (x * x);
        EXPECT_GE(r, prev_phi - 1e-12);
        EXPECT_LE(rc, prev_conj + 1e-12);
        prev_phi = r;
        prev_conj = rc;
      }
    }
}

TEST(RateQuantities, Examples) {
  const PowerModulus phi(1, 2);
  auto bisected = [&](unsigned n) {
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    return msel::oracle::bisect([&](double d) { return phi(d) - d * s; }, 1e-9, 1.0);
  };
  const auto r100 = rate_quantities(phi, 100);
  EXPECT_NEAR(r100.delta_n, 0.0025, 1e-15);
  EXPECT_NEAR(r100.delta_tilde_n, 0.1, 1e-12);
  EXPECT_NEAR(bisected(100), 0.1, 1e-10);
  const auto r4 = rate_quantities(phi, 4);
  EXPECT_NEAR(r4.delta_n, 0.0625, 1e-15);
  EXPECT_NEAR(r4.delta_tilde_n, 0.5, 1e-12);
  EXPECT_NEAR(bisected(4), 0.5, 1e-10);
  EXPECT_THROW(rate_quantities(phi, 0), std::domain_error);
}

TEST(RateQuantities, OrderingAndMonotonicity) {
  for (double c : {0.5, 1.0, 2.0})
    for (double p : {2.0, 3.0, 4.0}) {
      const PowerModulus phi(c, p);
      double prev_d = std::numeric_limits<double>::infinity(), prev_t = prev_d;
      for (std::uint64_t n = 4; n <= 1000000; n = n * 3 / 2 + 1) {
        const auto r = rate_quantities(phi, n);
        EXPECT_GT(r.delta_tilde_n, r.delta_n);
        EXPECT_LE(r.delta_n, prev_d);
        EXPECT_LE(r.delta_tilde_n, prev_t);
        prev_d = r.delta_n;
        prev_t = r.delta_tilde_n;
        // delta_tilde solves phi(d) = d / sqrt(n)
        EXPECT_NEAR(phi(r.delta_tilde_n), r.delta_tilde_n / std::sqrt(static_cast<double>(n)),
                    1e-12 * r.delta_tilde_n);
      }
    }
}
