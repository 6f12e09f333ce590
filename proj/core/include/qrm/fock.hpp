#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace qrm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Bad parameters / shapes.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Spin { up, down };

// Spin runs fastest: flat = 2*level + (up ? 0 : 1).
struct BasisIndex {
  Spin spin = Spin::up;
  int level = 0;
};

inline int flat(BasisIndex b) { return 2 * b.level + (b.spin == Spin::up ? 0 : 1); }
inline BasisIndex unflat(int i) { return {i % 2 == 0 ? Spin::up : Spin::down, i / 2}; }

// Kinds whose operator is purely imaginary (i_times_diff, i_times_diff1, pq_sym)
// are returned as the real antisymmetric M with operator = -i*M.
enum class BosonKind {
  number,               // a'a
  create2_plus_annih2,  // a^2 + a'^2
  i_times_diff,         // M = a^2 - a'^2
  create_plus_annih,    // a + a'
  i_times_diff1,        // M = a - a'
  q,
  q2,
  p2,
  pq_sym,               // M = (a^2 - a'^2)/2
  annih,                // a (helper)
  create,               // a' (helper)
};

enum class SpinKind { sx, sy_real, sz, identity, diag, gamma };

enum class Sector { plus1, minus1, plusI, minusI };

const char* to_string(Sector s);
const char* to_string(BosonKind k);

Mat boson_matrix(BosonKind kind, int n_max);
Mat spin_matrix(SpinKind kind, double alpha = 1.0, double beta = 1.0);

// (flat(s,n), flat(s',m)) = spin(s,s') * boson(n,m)
Mat kron_assemble(const Mat& spin, const Mat& boson);

Sector sector_of(BasisIndex b);

}  // namespace qrm
