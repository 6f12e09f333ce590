#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qrm/spectral.hpp"

namespace qrm {

using CVec = Eigen::VectorXcd;

enum class FiberFamily { fiber2p, fiber1p };

struct FiberSpec {
  double alpha = 1, beta = 1, lambda = 0;
  double induced_delta = 0;  // (alpha-beta) lambda / (2 alpha beta)
  double induced_g = 0;      // 1/(2 sqrt(alpha beta))
  double scale = 1;          // 2 alpha beta / (alpha+beta)
  FiberFamily family = FiberFamily::fiber2p;
  ModelSpec model;           // rabi2p or rabi1p
};

FiberSpec fiber_model(double alpha, double beta, double lambda, FiberFamily family = FiberFamily::fiber2p);

// I = c (x) U with c = diag(sqrt a, sqrt b) diag(e^{i pi/4}, e^{-i pi/4}),
// U = e^{-i pi N/4} (2p) or e^{-i pi N/2} (1p). v is a flat Fock vector.
CVec intertwine(double alpha, double beta, const Vec& v, FiberFamily family = FiberFamily::fiber2p);
// weight diag(1/alpha, 1/beta) on the spin factor
CVec gamma_weight(double alpha, double beta, const CVec& v);
// (u, v)_{alpha beta} = (u, gamma v)
std::complex<double> weighted_inner(double alpha, double beta, const CVec& u, const CVec& v);

struct FiberRow {
  int index = 0;
  double lambda = 0;
  double scaled = 0;         // (alpha+beta) lambda / (2 alpha beta)
  double distance = 0;       // to sigma(fiber(lambda))
  int mult_ncho = 0, mult_fiber = 0;
  bool pass = false;
};

struct FiberReport {
  std::vector<FiberRow> rows;
  int n_max = 0;
  bool all_pass = true;
  int max_multiplicity = 0;
};

FiberReport verify_fiber(double alpha, double beta, int k_max, double tol,
                         FiberFamily family = FiberFamily::fiber2p, double conv_tol = 1e-11);

struct ReconstructResult {
  std::vector<double> roots;               // sorted, one per fiber branch crossing
  std::vector<std::string> coverage_gaps;  // brackets that failed to resolve
  int n_max = 0;
  int grid_points = 0;
};

// n_max = 0 picks the truncation at which the direct spectrum over the window converges
ReconstructResult reconstruct_ncho_spectrum(double alpha, double beta, double lo, double hi, double tol,
                                            FiberFamily family = FiberFamily::fiber2p, int n_max = 0);

struct GramReport {
  double max_gram_diff = 0;         // |(Iv_i, Iv_j)_ab - (v_i, v_j)|
  double max_offdiag_weighted = 0;  // distinct eigenvalues
  double max_norm_defect = 0;       // | |Iv|_ab^2 - |v|^2 |
  double max_fiber_residual = 0;    // |H(lambda) Iv - scaled Iv| / |Iv|
  int k = 0;
  int n_max = 0;
};

GramReport weighted_gram_check(double alpha, double beta, int k_max, FiberFamily family = FiberFamily::fiber2p);

}  // namespace qrm
