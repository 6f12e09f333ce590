#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "qrm/zeta.hpp"

using namespace qrm;
using Catch::Approx;
using std::numbers::pi;

namespace {

// partial sum plus first Euler-Maclaurin corrections of the integral tail; error ~ M^{-s-3}
double brute_hurwitz(double s, double tau) {
  const int M = 20000;
  double acc = 0;
  for (int n = M - 1; n >= 0; --n) acc += std::pow(n + tau, -s);
  double x = M + tau;
  return acc + std::pow(x, 1 - s) / (s - 1) + 0.5 * std::pow(x, -s) + s / 12.0 * std::pow(x, -s - 1);
}

}  // namespace

TEST_CASE("Hurwitz zeta reference values", "[zeta]") {
  CHECK(hurwitz_zeta(2, 1).value == Approx(pi * pi / 6).epsilon(1e-14));
  CHECK(hurwitz_zeta(2, 0.5).value == Approx(pi * pi / 2).epsilon(1e-14));
  for (double s : {1.5, 2.5, 4.0})
    for (double tau : {0.3, 1.7})
      CHECK(hurwitz_zeta(s, tau).value - hurwitz_zeta(s, tau + 1).value == Approx(std::pow(tau, -s)).epsilon(1e-12));
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), ArgumentError);
}

TEST_CASE("Hurwitz zeta matches brute-force summation", "[zeta]") {
  for (double s : {1.5, 2.0, 3.0, 4.0})
    for (double tau : {0.25, 0.5, 0.75, 1.0}) {
      auto z = hurwitz_zeta(s, tau);
      CHECK(std::abs(z.value - brute_hurwitz(s, tau)) < 1e-10);
      CHECK(z.tail_bound <= 1e-12 * std::abs(z.value));
    }
}

TEST_CASE("spectral zeta on closed-form spectra", "[zeta]") {
  auto z = model_zeta(ModelSpec::rabi2p(0, 0.3), 2.0, 120);
  double exact = 2.0 / 0.64 * pi * pi / 2;
  CHECK(exact == Approx(15.4212568767).epsilon(1e-10));
  CHECK(std::abs(z.value - exact) <= z.tail_bound + 1e-8);
  CHECK(z.tail_bound < 1e-3);
  CHECK(z.method == ZetaMethod::truncated_plus_tail);
  CHECK(z.tail_lo <= z.tail_hi);

  z = model_zeta(ModelSpec::rabi2p(0.25, 0), 2.0, 120);
  exact = hurwitz_zeta(2, 0.75).value + hurwitz_zeta(2, 0.25).value;
  CHECK(std::abs(z.value - exact) <= z.tail_bound + 1e-8);

  z = model_zeta(ModelSpec::ncho(2, 2), 3.0, 120);
  exact = 2 * std::pow(3.0, -1.5) * hurwitz_zeta(3, 0.5).value;
  CHECK(std::abs(z.value - exact) <= z.tail_bound + 1e-8);
}

TEST_CASE("spectral zeta decreases in s when all eigenvalues exceed one", "[zeta]") {
  Spectrum sp = converged_spectrum(ModelSpec::quad_ts(0.7, 4.0), 64, 1e-10);
  double prev = INFINITY;
  for (double s : {1.5, 2.0, 3.0, 4.0}) {
    double v = spectral_zeta(sp, s).value;
    CHECK(v < prev);
    prev = v;
  }
  // sqrt(s)(2n+1) spectrum: closed form 2^{-s} 4^{-s/2}... = (2 sqrt4)^{-s} zeta(s;1/2)
  CHECK(spectral_zeta(sp, 2.0).value == Approx(std::pow(4.0, -2.0) * hurwitz_zeta(2, 0.5).value).epsilon(1e-6));
}

TEST_CASE("spectral zeta refusals", "[zeta]") {
  Spectrum raw = eigen(assemble(ModelSpec::rabi2p(0.1, 0.1), 32));
  CHECK_THROWS_AS(spectral_zeta(raw, 2.0), ArgumentError);  // not converged
  Spectrum neg = converged_spectrum(ModelSpec::rabi2p(0.6, 0.0), 16, 1e-10);
  CHECK_THROWS_AS(spectral_zeta(neg, 2.0), ArgumentError);
  Spectrum ok = converged_spectrum(ModelSpec::rabi2p(0.1, 0.0), 16, 1e-10);
  CHECK_THROWS_AS(spectral_zeta(ok, 1.0), ArgumentError);
}

TEST_CASE("two-photon zeta limits", "[zeta]") {
  std::vector<double> seq{0.1, 0.05, 0.025, 0.0125, 1e-3};  // diff ~ param^2
  auto r = limit_check_main3(2.0, 0.2, seq, Main3Limit::delta_to_zero, 100);
  CHECK(r.monotone);
  CHECK(r.final_diff < 1e-3);

  r = limit_check_main3(2.0, 0.25, seq, Main3Limit::g_to_zero, 100);
  CHECK(r.monotone);
  CHECK(r.final_diff < 1e-3);

  // ground eigenvalue approaches the g=0 value monotonically
  double prev = INFINITY;
  for (double g : seq) {
    double d = std::abs(converged_spectrum(ModelSpec::rabi2p(0.25, g), 1, 1e-12).values[0] - 0.25);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-3);
  CHECK_THROWS_AS(limit_check_main3(2.0, 0.6, seq, Main3Limit::delta_to_zero), RegimeError);
}

TEST_CASE("NcHO zeta limit", "[zeta]") {
  auto r = limit_check_main5(2.0, 3.0, {3.25, 3.125, 3.0625}, 100);
  CHECK(r.monotone);
  auto lo = limit_check_main5(2.0, 3.0, {2.75, 2.875, 2.9375}, 100);
  CHECK(lo.monotone);
  auto eq = limit_check_main5(2.0, 3.0, {3.0}, 100);
  CHECK(eq.final_diff <= eq.rows[0].tail_bound + 1e-8);

  Spectrum a = converged_spectrum(ModelSpec::ncho(3, 3), 6, 1e-12);
  double prev = INFINITY;
  for (double b : {3.1, 3.01, 3.001}) {
    Spectrum s = converged_spectrum(ModelSpec::ncho(3, b), 6, 1e-12);
    double d = 0;
    for (int n = 0; n < 6; ++n) d = std::max(d, std::abs(s.values[n] - a.values[n]));
    CHECK(d < prev);
    prev = d;
  }
  CHECK_THROWS_AS(limit_check_main5(2.0, 0.5, {1.0}), RegimeError);
}

TEST_CASE("one-sided semigroup envelope", "[zeta]") {
  // (phi, e^{-tL} phi) <= t^{-s} (s/e)^s (1 + D/(mu_g - D))^s |L_{0,g}^{-s/2} phi|^2
  const double D = 0.1, g = 0.2, s = 1.0;
  const double mug = 0.5 * std::sqrt(1 - 4 * g * g);
  EigenOptions eo;
  eo.vectors = true;
  Spectrum L = eigen(assemble(ModelSpec::rabi2p(D, g), 200), eo);
  Spectrum L0 = eigen(assemble(ModelSpec::rabi2p(0, g), 200), eo);
  Vec phi = Vec::Zero(400);
  phi(0) = 0.8;
  phi(5) = 0.6;
  Vec a = L.vectors->transpose() * phi, b = L0.vectors->transpose() * phi;
  double rhs_norm = 0;
  for (int i = 0; i < 400; ++i) rhs_norm += std::pow(L0.values[i], -s) * b(i) * b(i);
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    double lhs = 0;
    for (int i = 0; i < 400; ++i) lhs += std::exp(-t * L.values[i]) * a(i) * a(i);
    double rhs = std::pow(t, -s) * std::pow(s / std::exp(1.0), s) * std::pow(1 + D / (mug - D), s) * rhs_norm;
    CHECK(lhs <= rhs);
  }
}
