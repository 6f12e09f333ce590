#include "qrm/perturbation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qrm {

double SeriesCoeffs::eval(double g) const {
  double g2 = g * g;
  double v = e0 + e1_abs * std::abs(g) + e2 * g2;
  if (e4) v += *e4 * g2 * g2;
  return v;
}

SeriesCoeffs coeffs_2p(double delta) {
  if (!(delta >= 0)) throw ArgumentError("coeffs_2p: delta must be >= 0");
  SeriesCoeffs c;
  c.family = SeriesFamily::rabi2p;
  c.params = ModelSpec::rabi2p(delta, 0);
  double r = 1.0 / (1.0 + delta);
  c.e0 = 0.5 - delta;
  c.e2 = -r;
  c.e4 = -0.5 * r * r * (2.0 + 3.0 * delta) * r;
  return c;
}

SeriesCoeffs coeffs_1p(double delta) {
  if (!(delta >= 0)) throw ArgumentError("coeffs_1p: delta must be >= 0");
  SeriesCoeffs c;
  c.family = SeriesFamily::rabi1p;
  c.params = ModelSpec::rabi1p(delta, 0);
  double d = 1.0 + 2.0 * delta;
  c.e0 = 0.5 - delta;
  c.e2 = -1.0 / d;
  c.e4 = -2.0 * delta / (d * d * d);
  return c;
}

XiEvaluation xi(double u, int n_max) {
  if (!(u >= 0)) throw ArgumentError("xi: u must be >= 0");
  if (n_max < 16) throw ArgumentError("xi: n_max must be >= 16");
  const double pi = std::numbers::pi;
  // <n | e^{-x^2 u/2}>: odd levels vanish, even levels by the squeezed-vacuum recursion
  const int n = n_max + 2;
  Vec c = Vec::Zero(n);
  c(0) = std::pow(pi, -0.25) * std::sqrt(2.0 * pi / (1.0 + u));
  const double r = (1.0 - u) / (1.0 + u);
  for (int k = 0; k + 2 < n_max; k += 2) c(k + 2) = c(k) * r * std::sqrt(double(k + 1) / double(k + 2));
  Vec w = c + (1.0 - u) * (boson_matrix(BosonKind::q2, n) * c);

  XiEvaluation out;
  out.u = u;
  out.n_max = n_max;
  out.ground_component = w(0);
  out.ground_warning = std::abs(w(0)) > 1e-12 * std::max(1.0, w.norm());
  // p^2+q^2-1 = 2N; reduced resolvent drops level 0
  double s = 0;
  for (int k = 1; k < n; ++k) s += w(k) * w(k) / (2.0 * k);
  out.value = s / std::sqrt(pi);
  return out;
}

SeriesCoeffs ncho_lambda0_series(double alpha, double beta, int xi_n_max) {
  const double A = 0.5 * (alpha + beta);
  if (!(A > 1.0)) throw RegimeError("Lemma qsa: (alpha+beta)/2 must exceed 1 for the ground-level series");
  SeriesCoeffs c;
  c.family = SeriesFamily::ncho;
  c.params = ModelSpec::ncho(alpha, beta);
  const double Ap = A + 1.0, Am = A - 1.0;
  c.e0 = 0.5 * std::sqrt(A * A - 1.0);
  // ground level is two-fold at alpha=beta; the splitting is linear in |g|
  c.e1_abs = -std::pow(A * A - 1.0, 0.75) / (2.0 * std::pow(A, 1.5));
  XiEvaluation x1 = xi(Ap / Am, xi_n_max), x2 = xi(Am / Ap, xi_n_max);
  // curvature of each branch (g>0 and g<0 agree by alpha<->beta symmetry)
  c.e2 = -0.25 * (Ap / (Am * Am) * x1.value + Am / (Ap * Ap) * x2.value);
  c.e2_displayed = -0.5 * (x1.value / Am + x2.value / Ap);
  return c;
}

ConcavityReport concavity_check(const std::vector<double>& x, const std::vector<double>& E, double tol) {
  if (x.size() != E.size()) throw ArgumentError("concavity_check: size mismatch");
  if (x.size() < 5) throw ArgumentError("concavity_check: grid too coarse (need >= 5 points)");
  ConcavityReport rep;
  rep.n_points = int(x.size());
  rep.max_second_diff = -std::numeric_limits<double>::infinity();
  for (size_t i = 1; i + 1 < x.size(); ++i) {
    double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
    if (!(h0 > 0) || !(h1 > 0)) throw ArgumentError("concavity_check: x must be strictly increasing");
    double d2 = 2.0 * ((E[i + 1] - E[i]) / h1 - (E[i] - E[i - 1]) / h0) / (h0 + h1);
    rep.max_second_diff = std::max(rep.max_second_diff, d2);
  }
  rep.concave = rep.max_second_diff <= tol;
  return rep;
}

}  // namespace qrm
