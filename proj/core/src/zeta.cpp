#include "qrm/zeta.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qrm {

ZetaValue hurwitz_zeta(double s, double tau) {
  if (!(s > 1.0)) throw ArgumentError("hurwitz_zeta: s must be > 1 (no continuation)");
  if (!(tau > 0.0)) throw ArgumentError("hurwitz_zeta: tau must be > 0");
  static const bool quiet = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)quiet;
  gsl_sf_result r;
  int st = gsl_sf_hzeta_e(s, tau, &r);
  if (st != GSL_SUCCESS) throw std::runtime_error(std::string("hurwitz_zeta: ") + gsl_strerror(st));
  ZetaValue z;
  z.s = s;
  z.value = r.val;
  z.tail_bound = r.err;
  z.method = ZetaMethod::hurwitz_closed;
  return z;
}

ZetaValue spectral_zeta(const Spectrum& spec, double s, TailModel tail) {
  if (!(s > 1.0)) throw ArgumentError("spectral_zeta: s must be > 1");
  const int K = spec.converged_count;
  if (K < 8) throw ArgumentError("spectral_zeta: refusing unconverged spectrum (need converged_count >= 8)");
  double sum = 0;
  for (int n = 0; n < K; ++n) {
    if (!(spec.values[n] > 0)) throw ArgumentError("spectral_zeta: nonpositive eigenvalue");
    sum += std::pow(spec.values[n], -s);
  }
  int W = tail.window > 0 ? tail.window : std::max(16, K / 4);
  W = std::min(W, K);
  // least squares mu_n ~ c n + d on the last W converged indices
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = K - W; n < K; ++n) {
    sx += n;
    sy += spec.values[n];
    sxx += double(n) * n;
    sxy += n * spec.values[n];
  }
  double c = (W * sxy - sx * sy) / (W * sxx - sx * sx);
  double d = (sy - c * sx) / W;
  if (!(c > 0)) throw ArgumentError("spectral_zeta: eigenvalues do not grow; tail model invalid");
  double rmin = 0, rmax = 0;
  for (int n = K - W; n < K; ++n) {
    double r = spec.values[n] - (c * n + d);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  // sum_{n>=K} (c n + d')^{-s} = c^{-s} zeta(s; K + d'/c); lower intercept -> larger tail
  auto tail_at = [&](double dd) {
    double tau = K + dd / c;
    if (!(tau > 0)) throw ArgumentError("spectral_zeta: tail model has nonpositive shift");
    return std::pow(c, -s) * hurwitz_zeta(s, tau).value;
  };
  double hi = tail_at(d + rmin), lo = tail_at(d + rmax);
  ZetaValue z;
  z.s = s;
  z.method = ZetaMethod::truncated_plus_tail;
  z.tail_terms = K;
  z.tail_lo = lo;
  z.tail_hi = hi;
  z.value = sum + 0.5 * (lo + hi);
  z.tail_bound = 0.5 * (hi - lo);
  z.fit_slope = c;
  z.fit_intercept = d;
  return z;
}

ZetaValue model_zeta(const ModelSpec& model, double s, int k, double tol) {
  Spectrum sp = converged_spectrum(model, k, tol);
  return spectral_zeta(sp, s);
}

double zeta2p_limit_delta0(double s, double g) {
  return 2.0 * std::pow(1.0 - 4.0 * g * g, -0.5 * s) * hurwitz_zeta(s, 0.5).value;
}

double zeta2p_limit_g0(double s, double delta) {
  return hurwitz_zeta(s, 0.5 + delta).value + hurwitz_zeta(s, 0.5 - delta).value;
}

double zetanh_limit(double s, double alpha) {
  return 2.0 * std::pow(alpha * alpha - 1.0, -0.5 * s) * hurwitz_zeta(s, 0.5).value;
}

namespace {

void finish(LimitReport& rep) {
  for (size_t i = 1; i < rep.rows.size(); ++i) {
    const auto &a = rep.rows[i - 1], &b = rep.rows[i];
    if (std::abs(b.diff) > std::abs(a.diff) + a.tail_bound + b.tail_bound) rep.monotone = false;
  }
  if (!rep.rows.empty()) rep.final_diff = std::abs(rep.rows.back().diff);
}

}  // namespace

LimitReport limit_check_main3(double s, double fixed_param, const std::vector<double>& sequence, Main3Limit which,
                              int k) {
  LimitReport rep;
  rep.which = which == Main3Limit::delta_to_zero ? "main3: Delta->0" : "main3: g->0";
  for (double x : sequence) {
    ModelSpec m = which == Main3Limit::delta_to_zero ? ModelSpec::rabi2p(x, fixed_param)
                                                     : ModelSpec::rabi2p(fixed_param, x);
    if (!m.bounded_below()) throw RegimeError(m.regime_message());
    double lim = which == Main3Limit::delta_to_zero ? zeta2p_limit_delta0(s, fixed_param)
                                                    : zeta2p_limit_g0(s, fixed_param);
    ZetaValue z = model_zeta(m, s, k);
    rep.rows.push_back({x, z.value, lim, z.value - lim, z.tail_bound});
  }
  finish(rep);
  return rep;
}

LimitReport limit_check_main5(double s, double alpha, const std::vector<double>& beta_sequence, int k) {
  LimitReport rep;
  rep.which = "main5: beta->alpha";
  const double lim = zetanh_limit(s, alpha);
  for (double b : beta_sequence) {
    ModelSpec m = ModelSpec::ncho(alpha, b);
    if (!m.bounded_below()) throw RegimeError(m.regime_message());
    ZetaValue z = model_zeta(m, s, k);
    rep.rows.push_back({b, z.value, lim, z.value - lim, z.tail_bound});
  }
  finish(rep);
  return rep;
}

}  // namespace qrm
