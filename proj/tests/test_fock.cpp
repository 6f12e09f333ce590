#include <catch_amalgamated.hpp>
#include <cmath>

#include "qrm/fock.hpp"
#include "qrm/spectral.hpp"

using namespace qrm;
using Catch::Approx;

TEST_CASE("boson matrices follow ladder conventions", "[fock]") {
  Mat n = boson_matrix(BosonKind::number, 4);
  CHECK(n.isApprox(Vec::LinSpaced(4, 0, 3).asDiagonal().toDenseMatrix()));

  Mat s = boson_matrix(BosonKind::create2_plus_annih2, 4);
  CHECK(s(2, 0) == Approx(std::sqrt(2.0)));
  CHECK(s(3, 1) == Approx(std::sqrt(6.0)));
  CHECK(s(0, 2) == s(2, 0));

  // <n|q^2|n> = n + 1/2; oracle: q*q from the 2-level-larger q, cropped
  const int N = 12;
  Mat q = boson_matrix(BosonKind::q, N + 2);
  Mat q2 = (q * q).topLeftCorner(N, N);
  CHECK((boson_matrix(BosonKind::q2, N) - q2).cwiseAbs().maxCoeff() < 1e-14);
  for (int k = 0; k < N; ++k) CHECK(boson_matrix(BosonKind::q2, N)(k, k) == Approx(k + 0.5));
}

TEST_CASE("p^2 and the antisymmetric kinds", "[fock]") {
  const int N = 10;
  Mat a = boson_matrix(BosonKind::annih, N + 2), ad = boson_matrix(BosonKind::create, N + 2);
  // p = i(a' - a)/sqrt2, p^2 = -(a' - a)^2 / 2
  Mat p2 = (-0.5 * (ad - a) * (ad - a)).topLeftCorner(N, N);
  CHECK((boson_matrix(BosonKind::p2, N) - p2).cwiseAbs().maxCoeff() < 1e-14);

  Mat d2 = boson_matrix(BosonKind::i_times_diff, N);
  Mat d1 = boson_matrix(BosonKind::i_times_diff1, N);
  CHECK((d2 + d2.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d1 + d1.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((boson_matrix(BosonKind::pq_sym, N) - 0.5 * d2).cwiseAbs().maxCoeff() == 0.0);
  for (auto k : {BosonKind::number, BosonKind::q2, BosonKind::p2, BosonKind::create2_plus_annih2})
    CHECK((boson_matrix(k, N) - boson_matrix(k, N).transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ladder adjointness and truncated commutator", "[fock]") {
  for (int N : {2, 5, 33}) {
    Mat a = boson_matrix(BosonKind::annih, N), ad = boson_matrix(BosonKind::create, N);
    CHECK((ad - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Mat c = a * ad - ad * a;
    CHECK((c.topLeftCorner(N - 1, N - 1) - Mat::Identity(N - 1, N - 1)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("boson_matrix rejects tiny truncation", "[fock]") {
  CHECK_THROWS_AS(boson_matrix(BosonKind::number, 1), ArgumentError);
}

TEST_CASE("spin matrices", "[fock]") {
  Mat sx = spin_matrix(SpinKind::sx);
  CHECK(sx(0, 1) == 1.0);
  CHECK(sx(1, 0) == 1.0);
  CHECK(sx(0, 0) == 0.0);
  Mat J = spin_matrix(SpinKind::sy_real);
  CHECK(J(0, 1) == -1.0);
  CHECK(J(1, 0) == 1.0);
  Mat gm = spin_matrix(SpinKind::gamma, 2, 4);
  CHECK(gm(0, 0) == 0.5);
  CHECK(gm(1, 1) == 0.25);
  CHECK_THROWS_AS(spin_matrix(SpinKind::diag, 0, 1), ArgumentError);
  CHECK_THROWS_AS(spin_matrix(SpinKind::gamma, 1, -2), ArgumentError);
}

TEST_CASE("kron_assemble uses the interleaved ordering", "[fock]") {
  const int N = 3;
  CHECK(kron_assemble(spin_matrix(SpinKind::identity), Mat::Identity(N, N)).isIdentity());

  Mat d = Mat::Zero(2, 2);
  d(1, 1) = 1;
  Mat m = kron_assemble(spin_matrix(SpinKind::sz), d);
  Vec expect(4);
  expect << 0, 0, 1, -1;
  CHECK(m.isApprox(Mat(expect.asDiagonal())));

  Vec up0 = Vec::Zero(2 * N);
  up0(flat({Spin::up, 0})) = 1;
  Vec out = kron_assemble(spin_matrix(SpinKind::sx), Mat::Identity(N, N)) * up0;
  CHECK(out(flat({Spin::down, 0})) == 1.0);
  CHECK(out.sum() == 1.0);

  CHECK_THROWS_AS(kron_assemble(Mat::Identity(3, 3), Mat::Identity(2, 2)), ArgumentError);
}

TEST_CASE("flat index is a bijection", "[fock]") {
  for (int i = 0; i < 40; ++i) CHECK(flat(unflat(i)) == i);
  CHECK(flat({Spin::down, 3}) == 7);
}

TEST_CASE("sector labels", "[fock]") {
  CHECK(sector_of({Spin::down, 0}) == Sector::minus1);
  CHECK(sector_of({Spin::up, 0}) == Sector::plus1);
  CHECK(sector_of({Spin::up, 3}) == Sector::minusI);
  CHECK(sector_of({Spin::up, 1}) == Sector::plusI);
  CHECK(sector_of({Spin::up, 2}) == Sector::minus1);
  CHECK(sector_of({Spin::down, 1}) == Sector::minusI);
  CHECK(sector_of({Spin::down, 2}) == Sector::plus1);
  CHECK(sector_of({Spin::down, 3}) == Sector::plusI);
  CHECK(sector_of({Spin::up, 4}) == Sector::plus1);
}

TEST_CASE("assembled two-photon Rabi matrix is sector block diagonal", "[fock]") {
  for (auto m : {ModelSpec::rabi2p(0.3, 0.2), ModelSpec::rabi2p(0.0, -0.45), ModelSpec::ncho(3, 2),
                 ModelSpec::k_alpha_beta(2, 1)}) {
    Mat H = assemble(m, 40).matrix;
    for (int i = 0; i < H.rows(); ++i)
      for (int j = 0; j < H.cols(); ++j)
        if (sector_of(unflat(i)) != sector_of(unflat(j))) REQUIRE(H(i, j) == 0.0);
  }
}
