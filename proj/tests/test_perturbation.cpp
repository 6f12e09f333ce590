#include <catch_amalgamated.hpp>
#include <cmath>

#include "qrm/perturbation.hpp"

using namespace qrm;
using Catch::Approx;

namespace {

double ground(const ModelSpec& m) { return converged_spectrum(m, 1, 1e-13).values[0]; }

}  // namespace

TEST_CASE("two-photon coefficients", "[perturbation]") {
  auto c = coeffs_2p(0);
  CHECK(c.e0 == 0.5);
  CHECK(c.e2 == -1.0);
  CHECK(*c.e4 == -1.0);  // 1/2 sqrt(1-4g^2) = 1/2 - g^2 - g^4 + ...
  CHECK(coeffs_2p(1).e2 == Approx(-0.5));
  CHECK(*coeffs_2p(1).e4 == Approx(-0.3125));
  CHECK_THROWS_AS(coeffs_2p(-0.1), ArgumentError);
  for (double g : {1e-3, 2e-3}) CHECK(c.eval(g) == Approx(0.5 * std::sqrt(1 - 4 * g * g)).margin(1e-14));
}

TEST_CASE("one-photon coefficients", "[perturbation]") {
  auto c = coeffs_1p(0);
  CHECK(c.e0 == 0.5);
  CHECK(c.e2 == -1.0);
  CHECK(*c.e4 == 0.0);
  CHECK(coeffs_1p(0.5).e2 == Approx(-0.5));
  CHECK(*coeffs_1p(0.5).e4 == Approx(-0.125));
  CHECK_THROWS_AS(coeffs_1p(-1), ArgumentError);
  // e^{1p}_0(g) = 1/2 - g^2 exactly
  for (double g : {0.1, 0.3}) CHECK(ground(ModelSpec::rabi1p(0, g)) == Approx(0.5 - g * g).margin(1e-10));
}

TEST_CASE("second-order coefficients agree with finite differences", "[perturbation]") {
  const double h = 1e-2;
  for (double d : {0.25, 1.0}) {
    double e0 = ground(ModelSpec::rabi2p(d, 0));
    double fd = (2 * ground(ModelSpec::rabi2p(d, h)) - 2 * e0) / (h * h);  // E even in g
    double fd2 = (2 * ground(ModelSpec::rabi2p(d, 2 * h)) - 2 * e0) / (4 * h * h);
    double rich = (4 * fd - fd2) / 3;
    CHECK(rich == Approx(2 * coeffs_2p(d).e2).margin(1e-4));
    e0 = ground(ModelSpec::rabi1p(d, 0));
    fd = (2 * ground(ModelSpec::rabi1p(d, h)) - 2 * e0) / (h * h);
    fd2 = (2 * ground(ModelSpec::rabi1p(d, 2 * h)) - 2 * e0) / (4 * h * h);
    rich = (4 * fd - fd2) / 3;
    CHECK(rich == Approx(2 * coeffs_1p(d).e2).margin(1e-4));
  }
}

TEST_CASE("xi: values, positivity, truncation", "[perturbation]") {
  auto one = xi(1.0);
  CHECK(one.value == Approx(0.0).margin(1e-15));
  CHECK(one.ground_warning);

  // [DERIVED] frozen; cross-checked against the one-sided finite-difference curvature in the acceptance suite
  CHECK(xi(3.0).value == Approx(0.0477273575).epsilon(1e-9));
  CHECK(xi(1.0 / 3).value == Approx(1.2886386532).epsilon(1e-9));
  CHECK(xi(2.0).value == Approx(0.0419133571).epsilon(1e-9));
  CHECK(xi(0.5).value == Approx(0.3353068566).epsilon(1e-9));
  CHECK(xi(3.0).ground_component == Approx(0.4707).margin(1e-4));

  // second display: u^{3/2} xi(u) is invariant under u -> 1/u
  for (double u : {0.2, 0.5, 2.0, 3.0, 7.0})
    CHECK(std::pow(u, 1.5) * xi(u).value == Approx(std::pow(u, -1.5) * xi(1 / u).value).epsilon(1e-10));

  for (double u : {0.0, 0.1, 0.7, 1.3, 4.0, 10.0}) CHECK(xi(u).value > 0);

  double prev = 1;
  for (int n : {16, 32, 64, 128}) {
    double diff = std::abs(xi(0.25, 2 * n).value - xi(0.25, n).value);
    CHECK(diff <= prev * 0.5 + 1e-16);
    prev = diff;
  }
  CHECK_THROWS_AS(xi(-1), ArgumentError);
  CHECK_THROWS_AS(xi(1, 8), ArgumentError);
}

TEST_CASE("NcHO lowest-eigenvalue series", "[perturbation]") {
  auto c = ncho_lambda0_series(2, 2);
  CHECK(c.e0 == Approx(0.5 * std::sqrt(3.0)));
  CHECK(c.e2 < 0);
  CHECK_FALSE(c.e4.has_value());
  CHECK(c.e1_abs == Approx(-0.4029637244).epsilon(1e-9));
  CHECK(c.e2 == Approx(-0.0715910363).epsilon(1e-8));
  // the combination as displayed in the source lemma does not match the spectrum
  CHECK(*c.e2_displayed == Approx(-0.2386367876).epsilon(1e-8));

  for (double h : {0.05, -0.05, 0.02}) {
    double lam = ground(ModelSpec::ncho(2 - h, 2 + h));
    CHECK(std::abs(lam - c.eval(h)) < 2.0 * std::pow(std::abs(h), 3));
  }
  CHECK_THROWS_AS(ncho_lambda0_series(0.5, 1.2), RegimeError);
}

TEST_CASE("concavity_check", "[perturbation]") {
  std::vector<double> g, e, e1;
  for (int i = -10; i <= 10; ++i) {
    double x = 0.01 * i;
    g.push_back(x);
    e.push_back(0.5 * std::sqrt(1 - 4 * x * x));
    e1.push_back(0.5 - x * x);
  }
  auto r = concavity_check(g, e);
  CHECK(r.concave);
  CHECK(r.max_second_diff < 0);
  r = concavity_check(g, e1);
  CHECK(r.max_second_diff == Approx(-2.0).epsilon(1e-8));
  std::vector<double> convex;
  for (double x : g) convex.push_back(x * x);
  CHECK_FALSE(concavity_check(g, convex).concave);
  CHECK_THROWS_AS(concavity_check({0, 1, 2}, {0, 1, 2}), ArgumentError);
}
