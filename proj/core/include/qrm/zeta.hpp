#pragma once

#include <string>
#include <vector>

#include "qrm/spectral.hpp"

namespace qrm {

enum class ZetaMethod { hurwitz_closed, truncated_plus_tail };

struct ZetaValue {
  double s = 0;
  double value = 0;
  ZetaMethod method = ZetaMethod::hurwitz_closed;
  int tail_terms = 0;   // eigenvalues summed explicitly
  double tail_bound = 0;
  double tail_lo = 0, tail_hi = 0;  // bracketing tails (optimistic / pessimistic intercept)
  double fit_slope = 0, fit_intercept = 0;
};

ZetaValue hurwitz_zeta(double s, double tau);

struct TailModel {
  int window = 0;  // last eigenvalues used for the affine fit; 0 -> max(16, K/4)
};

ZetaValue spectral_zeta(const Spectrum& spec, double s, TailModel tail = {});

// sum_n mu_n^{-s} for the model via converged_spectrum(k) plus tail
ZetaValue model_zeta(const ModelSpec& model, double s, int k = 160, double tol = 1e-10);

// closed forms of the limits
double zeta2p_limit_delta0(double s, double g);            // 2 (1-4g^2)^{-s/2} zeta(s; 1/2)
double zeta2p_limit_g0(double s, double delta);            // zeta(s; 1/2+D) + zeta(s; 1/2-D)
double zetanh_limit(double s, double alpha);               // 2 (alpha^2-1)^{-s/2} zeta(s; 1/2)

struct LimitRow {
  double param = 0;
  double value = 0;
  double limit = 0;
  double diff = 0;
  double tail_bound = 0;
};

struct LimitReport {
  std::string which;
  std::vector<LimitRow> rows;
  bool monotone = true;  // |diff| non-increasing up to the tail bound
  double final_diff = 0;
};

enum class Main3Limit { delta_to_zero, g_to_zero };

// delta_to_zero: fixed_param = g, sequence = Delta_k; g_to_zero: fixed_param = Delta, sequence = g_k
LimitReport limit_check_main3(double s, double fixed_param, const std::vector<double>& sequence, Main3Limit which,
                              int k = 160);
LimitReport limit_check_main5(double s, double alpha, const std::vector<double>& beta_sequence, int k = 160);

}  // namespace qrm
