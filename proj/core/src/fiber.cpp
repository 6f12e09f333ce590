#include "qrm/fiber.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qrm {

namespace {

Family ncho_family(FiberFamily f) { return f == FiberFamily::fiber2p ? Family::ncho : Family::ncho1p; }

}  // namespace

FiberSpec fiber_model(double alpha, double beta, double lambda, FiberFamily family) {
  if (!(alpha > 0) || !(beta > 0)) throw ArgumentError("fiber_model: alpha, beta must be > 0");
  if (family == FiberFamily::fiber2p && !(alpha * beta > 1.0))
    throw RegimeError(alpha * beta == 1.0 ? "Lemma qsa: alpha*beta=1 is critical; fiber coupling g=1/2"
                                          : "Lemma qsa: alpha*beta<1 unbounded below; fiber coupling g>1/2");
  FiberSpec f;
  f.alpha = alpha;
  f.beta = beta;
  f.lambda = lambda;
  f.family = family;
  f.induced_delta = (alpha - beta) * lambda / (2.0 * alpha * beta);
  f.induced_g = 1.0 / (2.0 * std::sqrt(alpha * beta));
  f.scale = 2.0 * alpha * beta / (alpha + beta);
  f.model = family == FiberFamily::fiber2p ? ModelSpec::rabi2p(f.induced_delta, f.induced_g)
                                           : ModelSpec::rabi1p(f.induced_delta, f.induced_g);
  return f;
}

CVec intertwine(double alpha, double beta, const Vec& v, FiberFamily family) {
  using std::numbers::pi;
  const double step = family == FiberFamily::fiber2p ? pi / 4 : pi / 2;
  CVec out(v.size());
  const double m[2] = {std::sqrt(alpha), std::sqrt(beta)};
  const double sg[2] = {1.0, -1.0};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    int s = int(i % 2), n = int(i / 2);
    out(i) = m[s] * std::polar(1.0, sg[s] * pi / 4 - step * n) * v(i);
  }
  return out;
}

CVec gamma_weight(double alpha, double beta, const CVec& v) {
  CVec out = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) /= (i % 2 == 0 ? alpha : beta);
  return out;
}

std::complex<double> weighted_inner(double alpha, double beta, const CVec& u, const CVec& v) {
  return u.dot(gamma_weight(alpha, beta, v));  // dot conjugates the first argument
}

FiberReport verify_fiber(double alpha, double beta, int k_max, double tol, FiberFamily family, double conv_tol) {
  ModelSpec q{ncho_family(family), 0, 0, alpha, beta};
  fiber_model(alpha, beta, 0, family);  // regime check
  Spectrum sp = converged_spectrum(q, k_max, conv_tol);
  FiberReport rep;
  rep.n_max = sp.n_max;
  std::vector<int> group_of(sp.values.size());
  for (int gi = 0; gi < int(sp.degeneracy_groups.size()); ++gi)
    for (int i : sp.degeneracy_groups[gi]) group_of[i] = gi;

  for (int i = 0; i < k_max; ++i) {
    FiberSpec fs = fiber_model(alpha, beta, sp.values[i], family);
    Spectrum fsp = eigen(assemble(fs.model, sp.n_max));
    FiberRow r;
    r.index = i;
    r.lambda = sp.values[i];
    r.scaled = r.lambda / fs.scale;
    r.distance = std::numeric_limits<double>::infinity();
    const double gap = sp.degeneracy_tol * std::max(1.0, std::abs(r.scaled));
    for (double mu : fsp.values) {
      double d = std::abs(mu - r.scaled);
      r.distance = std::min(r.distance, d);
      if (d < gap) ++r.mult_fiber;
    }
    r.mult_ncho = int(sp.degeneracy_groups[group_of[i]].size());
    r.pass = r.distance < tol && r.mult_ncho == r.mult_fiber;
    rep.all_pass = rep.all_pass && r.pass;
    rep.max_multiplicity = std::max(rep.max_multiplicity, r.mult_ncho);
    rep.rows.push_back(r);
  }
  return rep;
}

ReconstructResult reconstruct_ncho_spectrum(double alpha, double beta, double lo, double hi, double tol,
                                            FiberFamily family, int n_max) {
  if (!(hi > lo)) throw ArgumentError("reconstruct_ncho_spectrum: empty window");
  if (!(tol > 0)) throw ArgumentError("reconstruct_ncho_spectrum: tol must be > 0");
  const FiberSpec probe = fiber_model(alpha, beta, 0, family);
  ReconstructResult res;

  if (n_max <= 0) {
    ModelSpec q{ncho_family(family), 0, 0, alpha, beta};
    int k = 8;
    for (;;) {
      Spectrum sp = converged_spectrum(q, k, std::min(1e-11, tol * 1e-3));
      n_max = sp.n_max;
      if (sp.values[k - 1] > hi) break;
      k *= 2;
    }
  }
  res.n_max = n_max;

  auto fiber_vals = [&](double lam) { return eigen(assemble(fiber_model(alpha, beta, lam, family).model, n_max)).values; };
  const double s = probe.scale;

  // each branch h_j is strictly decreasing (|d mu_j/d Delta| <= 1), so it crosses zero once
  const double ab = alpha * beta;
  const double w = ab > 1.0 ? std::sqrt(1.0 - 1.0 / ab) : 0.5;
  const double step = 0.25 * std::min(alpha, beta) * w;
  std::vector<double> grid;
  for (double x = lo; x < hi; x += step) grid.push_back(x);
  grid.push_back(hi);
  res.grid_points = int(grid.size());

  std::vector<std::vector<double>> h(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    h[i] = fiber_vals(grid[i]);
    for (double& v : h[i]) v -= grid[i] / s;
  }
  const size_t dim = h[0].size();
  for (size_t j = 0; j < dim; ++j) {
    std::vector<double> branch_roots;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      double a = h[i][j], b = h[i + 1][j];
      if (!(a > 0 && b <= 0)) continue;
      if (b == 0) {
        branch_roots.push_back(grid[i + 1]);
        continue;
      }
      auto F = [&](double lam) { return fiber_vals(lam)[j] - lam / s; };
      boost::uintmax_t iters = 200;
      auto stop = [&](double x0, double x1) { return std::abs(x1 - x0) < 0.01 * tol; };
      try {
        auto br = boost::math::tools::toms748_solve(F, grid[i], grid[i + 1], a, b, stop, iters);
        branch_roots.push_back(0.5 * (br.first + br.second));
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "branch " << j << " on [" << grid[i] << ", " << grid[i + 1] << "]: " << e.what();
        res.coverage_gaps.push_back(os.str());
      }
    }
    std::sort(branch_roots.begin(), branch_roots.end());
    for (size_t r = 0; r < branch_roots.size(); ++r)
      if (r == 0 || branch_roots[r] - branch_roots[r - 1] > tol) res.roots.push_back(branch_roots[r]);
  }
  std::sort(res.roots.begin(), res.roots.end());
  return res;
}

GramReport weighted_gram_check(double alpha, double beta, int k_max, FiberFamily family) {
  fiber_model(alpha, beta, 0, family);
  ModelSpec q{ncho_family(family), 0, 0, alpha, beta};
  ConvergenceOptions co;
  co.vectors = true;
  Spectrum sp = converged_spectrum(q, k_max, 1e-11, co);
  const Mat& V = *sp.vectors;
  GramReport rep;
  rep.k = k_max;
  rep.n_max = sp.n_max;
  std::vector<CVec> img(k_max);
  for (int i = 0; i < k_max; ++i) img[i] = intertwine(alpha, beta, V.col(i), family);
  const double gap = sp.degeneracy_tol;
  for (int i = 0; i < k_max; ++i) {
    for (int j = 0; j < k_max; ++j) {
      std::complex<double> w = weighted_inner(alpha, beta, img[i], img[j]);
      double plain = V.col(i).dot(V.col(j));
      rep.max_gram_diff = std::max(rep.max_gram_diff, std::abs(w - plain));
      bool distinct = std::abs(sp.values[i] - sp.values[j]) >= gap * std::max(1.0, std::abs(sp.values[i]));
      if (distinct) rep.max_offdiag_weighted = std::max(rep.max_offdiag_weighted, std::abs(w));
      if (i == j) rep.max_norm_defect = std::max(rep.max_norm_defect, std::abs(w.real() - V.col(i).squaredNorm()));
    }
    FiberSpec fs = fiber_model(alpha, beta, sp.values[i], family);
    Eigen::MatrixXcd H = assemble(fs.model, sp.n_max).matrix.cast<std::complex<double>>();
    CVec r = H * img[i] - (sp.values[i] / fs.scale) * img[i];
    rep.max_fiber_residual = std::max(rep.max_fiber_residual, r.norm() / img[i].norm());
  }
  return rep;
}

}  // namespace qrm
