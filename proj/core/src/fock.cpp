#include "qrm/fock.hpp"

#include <cmath>

namespace qrm {

const char* to_string(Sector s) {
  switch (s) {
    case Sector::plus1: return "plus1";
    case Sector::minus1: return "minus1";
    case Sector::plusI: return "plusI";
    case Sector::minusI: return "minusI";
  }
  return "?";
}

const char* to_string(BosonKind k) {
  switch (k) {
    case BosonKind::number: return "number";
    case BosonKind::create2_plus_annih2: return "create2_plus_annih2";
    case BosonKind::i_times_diff: return "i_times_diff";
    case BosonKind::create_plus_annih: return "create_plus_annih";
    case BosonKind::i_times_diff1: return "i_times_diff1";
    case BosonKind::q: return "q";
    case BosonKind::q2: return "q2";
    case BosonKind::p2: return "p2";
    case BosonKind::pq_sym: return "pq_sym";
    case BosonKind::annih: return "annih";
    case BosonKind::create: return "create";
  }
  return "?";
}

namespace {

// entries are built from sqrt products only, so symmetric kinds come out exactly symmetric
Mat shift2(int n, double sign) {
  // a^2 + sign * a'^2
  Mat m = Mat::Zero(n, n);
  for (int k = 0; k + 2 < n; ++k) {
    double v = std::sqrt(double(k + 1) * double(k + 2));
    m(k, k + 2) = v;
    m(k + 2, k) = sign * v;
  }
  return m;
}

Mat shift1(int n, double sign) {
  // a + sign * a'
  Mat m = Mat::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    double v = std::sqrt(double(k + 1));
    m(k, k + 1) = v;
    m(k + 1, k) = sign * v;
  }
  return m;
}

Mat number(int n) {
  Mat m = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = k;
  return m;
}

}  // namespace

Mat boson_matrix(BosonKind kind, int n_max) {
  if (n_max < 2) throw ArgumentError("boson_matrix: n_max must be >= 2");
  const int n = n_max;
  switch (kind) {
    case BosonKind::number: return number(n);
    case BosonKind::create2_plus_annih2: return shift2(n, 1.0);
    case BosonKind::i_times_diff: return shift2(n, -1.0);
    case BosonKind::create_plus_annih: return shift1(n, 1.0);
    case BosonKind::i_times_diff1: return shift1(n, -1.0);
    case BosonKind::q: return shift1(n, 1.0) / std::sqrt(2.0);
    case BosonKind::q2: {
      // (a^2 + a'^2 + 2N + 1)/2, written out rather than squaring the truncated q
      Mat m = shift2(n, 1.0) * 0.5;
      for (int k = 0; k < n; ++k) m(k, k) = k + 0.5;
      return m;
    }
    case BosonKind::p2: {
      Mat m = shift2(n, 1.0) * -0.5;
      for (int k = 0; k < n; ++k) m(k, k) = k + 0.5;
      return m;
    }
    case BosonKind::pq_sym: return shift2(n, -1.0) * 0.5;
    case BosonKind::annih: {
      Mat m = Mat::Zero(n, n);
      for (int k = 0; k + 1 < n; ++k) m(k, k + 1) = std::sqrt(double(k + 1));
      return m;
    }
    case BosonKind::create: {
      Mat m = Mat::Zero(n, n);
      for (int k = 0; k + 1 < n; ++k) m(k + 1, k) = std::sqrt(double(k + 1));
      return m;
    }
  }
  throw ArgumentError("boson_matrix: unknown kind");
}

Mat spin_matrix(SpinKind kind, double alpha, double beta) {
  Mat m = Mat::Zero(2, 2);
  switch (kind) {
    case SpinKind::sx: m << 0, 1, 1, 0; break;
    case SpinKind::sy_real: m << 0, -1, 1, 0; break;
    case SpinKind::sz: m << 1, 0, 0, -1; break;
    case SpinKind::identity: m << 1, 0, 0, 1; break;
    case SpinKind::diag:
    case SpinKind::gamma:
      if (!(alpha > 0) || !(beta > 0)) throw ArgumentError("spin_matrix: alpha, beta must be > 0");
      if (kind == SpinKind::diag)
        m << alpha, 0, 0, beta;
      else
        m << 1.0 / alpha, 0, 0, 1.0 / beta;
      break;
  }
  return m;
}

Mat kron_assemble(const Mat& spin, const Mat& boson) {
  if (spin.rows() != 2 || spin.cols() != 2) throw ArgumentError("kron_assemble: spin factor must be 2x2");
  if (boson.rows() != boson.cols() || boson.rows() < 1)
    throw ArgumentError("kron_assemble: boson factor must be square");
  const Eigen::Index n = boson.rows();
  Mat out = Mat::Zero(2 * n, 2 * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      double v = boson(a, b);
      if (v == 0.0) continue;
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) out(2 * a + s, 2 * b + t) = spin(s, t) * v;
    }
  return out;
}

Sector sector_of(BasisIndex b) {
  int r = ((b.level % 4) + 4) % 4;
  // down carries an extra sign -1 relative to up (sigma_z factor)
  if (b.spin == Spin::down) r = (r + 2) % 4;
  switch (r) {
    case 0: return Sector::plus1;
    case 1: return Sector::plusI;
    case 2: return Sector::minus1;
    default: return Sector::minusI;
  }
}

}  // namespace qrm
