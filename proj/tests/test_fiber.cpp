#include <catch_amalgamated.hpp>
#include <cmath>

#include "qrm/fiber.hpp"

using namespace qrm;
using Catch::Approx;

TEST_CASE("fiber_model parameters", "[fiber]") {
  auto f = fiber_model(2, 2, 1.7);
  CHECK(f.induced_delta == 0.0);
  CHECK(f.induced_g == Approx(0.25));
  f = fiber_model(3, 2, 1.0);
  CHECK(f.induced_delta == Approx(1.0 / 12));
  CHECK(f.induced_g == Approx(1 / (2 * std::sqrt(6.0))));
  CHECK(f.scale == Approx(12.0 / 5));
  CHECK(f.model.family == Family::rabi2p);
  CHECK(fiber_model(1.0, 1.0 + 1e-9, 1).induced_g < 0.5);
  CHECK(fiber_model(1.0, 1.0 + 1e-9, 1).induced_g == Approx(0.5).epsilon(1e-8));
  CHECK_THROWS_AS(fiber_model(1, 1, 1), RegimeError);
  CHECK_NOTHROW(fiber_model(0.5, 1, 1, FiberFamily::fiber1p));
  CHECK(fiber_model(0.5, 1, 1, FiberFamily::fiber1p).model.family == Family::rabi1p);
}

TEST_CASE("verify_fiber, symmetric case", "[fiber]") {
  auto r = verify_fiber(2, 2, 6, 1e-6);
  CHECK(r.all_pass);
  for (const auto& row : r.rows) {
    CHECK(row.lambda == Approx(std::sqrt(3.0) * (row.index / 2 + 0.5)).epsilon(1e-9));
    CHECK(row.mult_ncho == 2);
    CHECK(row.mult_fiber == 2);
  }
}

TEST_CASE("verify_fiber, alpha != beta", "[fiber]") {
  auto r = verify_fiber(3, 2, 6, 1e-6);
  CHECK(r.all_pass);
  CHECK(r.rows[0].mult_ncho == 1);
  // [DERIVED] numpy eigvalsh at N=300
  CHECK(r.rows[0].lambda == Approx(0.9192108837).epsilon(1e-9));
  CHECK(r.rows[5].lambda == Approx(6.2074969831).epsilon(1e-9));
  for (const auto& row : r.rows) CHECK(row.distance < 1e-10);
  CHECK(r.max_multiplicity <= 2);  // beta < 3 alpha and alpha < 3 beta

  auto one = verify_fiber(3, 2, 8, 1e-6, FiberFamily::fiber1p);
  CHECK(one.all_pass);
  auto one_b = verify_fiber(0.7, 1.1, 6, 1e-6, FiberFamily::fiber1p);
  CHECK(one_b.all_pass);
}

TEST_CASE("reconstruction from the fiber family", "[fiber]") {
  auto r = reconstruct_ncho_spectrum(2, 2, 0, 5, 1e-9);
  REQUIRE(r.roots.size() == 6);
  const double r3 = std::sqrt(3.0);
  for (int i = 0; i < 6; ++i) CHECK(r.roots[i] == Approx(r3 * (i / 2 + 0.5)).epsilon(1e-8));
  CHECK(r.coverage_gaps.empty());

  auto q = reconstruct_ncho_spectrum(3, 2, 0.5, 7.5, 1e-9);
  Spectrum s = converged_spectrum(ModelSpec::ncho(3, 2), int(q.roots.size()) + 1, 1e-11);
  REQUIRE(q.roots.size() == 7);
  for (size_t i = 0; i < q.roots.size(); ++i) CHECK(std::abs(q.roots[i] - s.values[i]) < 1e-8);

  // below the lower bound (min/2) sqrt(1 - 1/(ab)) = 0.9129 for (3,2)
  CHECK(reconstruct_ncho_spectrum(3, 2, 0.0, 0.9, 1e-9).roots.empty());
  CHECK_THROWS_AS(reconstruct_ncho_spectrum(3, 2, 1, 0.5, 1e-9), ArgumentError);
}

TEST_CASE("weighted Gram structure of the intertwiner", "[fiber]") {
  auto r = weighted_gram_check(3, 2, 6);
  CHECK(r.max_offdiag_weighted < 1e-8);
  CHECK(r.max_norm_defect < 1e-10);
  CHECK(r.max_gram_diff < 1e-10);
  CHECK(r.max_fiber_residual < 1e-10);
  auto s = weighted_gram_check(2, 2, 6);
  CHECK(s.max_gram_diff < 1e-10);

  Vec v = Vec::Random(10);
  CVec iv = intertwine(2, 2, v);
  // alpha = beta: gamma = identity / alpha, so the weighted norm equals |c|^2/alpha |v|^2 = |v|^2
  CHECK(std::abs(weighted_inner(2, 2, iv, iv) - std::complex<double>(v.squaredNorm(), 0)) < 1e-12);
  CHECK(iv.squaredNorm() == Approx(2 * v.squaredNorm()));
}
