#include "qrm/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qrm {

const char* to_string(Family f) {
  switch (f) {
    case Family::rabi2p: return "rabi2p";
    case Family::rabi1p: return "rabi1p";
    case Family::ncho: return "ncho";
    case Family::ncho1p: return "ncho1p";
    case Family::k_alpha_beta: return "k_alpha_beta";
    case Family::rak: return "rak";
    case Family::quad_ts: return "quad_ts";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::rabi2p, Family::rabi1p, Family::ncho, Family::ncho1p, Family::k_alpha_beta,
                   Family::rak, Family::quad_ts})
    if (s == to_string(f)) return f;
  throw ArgumentError("unknown family '" + s + "'");
}

bool ModelSpec::bounded_below() const {
  switch (family) {
    case Family::rabi2p:
    case Family::rak: return std::abs(g) < 0.5;
    case Family::ncho:
    case Family::k_alpha_beta: return alpha * beta > 1.0;
    case Family::rabi1p:
    case Family::ncho1p: return true;
    case Family::quad_ts: return s_coef > 0.0;
  }
  return false;
}

bool ModelSpec::critical() const {
  switch (family) {
    case Family::rabi2p:
    case Family::rak: return std::abs(g) == 0.5;
    case Family::ncho:
    case Family::k_alpha_beta: return alpha * beta == 1.0;
    case Family::quad_ts: return s_coef == 0.0;
    default: return false;
  }
}

std::string ModelSpec::regime_message() const {
  if (bounded_below()) return {};
  const std::string tail = "; truncated eigenvalues do not converge";
  switch (family) {
    case Family::rabi2p:
    case Family::rak:
      if (critical()) return "Lemma re: |g|=1/2 is critical, spectrum is continuous [0,inf)" + tail;
      return "Lemma ess: |g|>1/2 unbounded below" + tail;
    case Family::ncho:
      if (critical()) return "Lemma qsa: alpha*beta=1 is critical, spectrum is continuous" + tail;
      return "Lemma qsa: alpha*beta<1 unbounded below" + tail;
    case Family::k_alpha_beta:
      if (critical()) return "Lemma K: alpha*beta=1 is critical, spectrum is continuous" + tail;
      return "Lemma K: alpha*beta<1 unbounded below" + tail;
    case Family::quad_ts:
      if (critical()) return "Proposition p: s=0 gives continuous spectrum" + tail;
      return "Proposition p: s<0 unbounded below" + tail;
    default: return {};
  }
}

std::vector<std::vector<int>> degeneracy_groups(const std::vector<double>& v, double rel_tol) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < int(v.size()); ++i) {
    if (!groups.empty()) {
      double prev = v[i - 1];
      if (std::abs(v[i] - prev) < rel_tol * std::max(1.0, std::abs(v[i]))) {
        groups.back().push_back(i);
        continue;
      }
    }
    groups.push_back({i});
  }
  return groups;
}

namespace {

void check_finite(const ModelSpec& m) {
  for (double x : {m.delta, m.g, m.alpha, m.beta, m.t_coef, m.s_coef})
    if (!std::isfinite(x)) throw ArgumentError("assemble: non-finite parameter");
}

Mat half_shift(int n) {
  Mat m = boson_matrix(BosonKind::number, n);
  m.diagonal().array() += 0.5;
  return m;
}

}  // namespace

TruncatedOperator assemble(const ModelSpec& model, int n_max) {
  if (n_max < 4) throw ArgumentError("assemble: n_max must be >= 4");
  check_finite(model);
  const int n = n_max;
  const Mat I2 = spin_matrix(SpinKind::identity);
  const Mat sx = spin_matrix(SpinKind::sx);
  const Mat sz = spin_matrix(SpinKind::sz);
  const Mat J = spin_matrix(SpinKind::sy_real);
  const Mat In = Mat::Identity(n, n);
  TruncatedOperator op;
  op.n_max = n;
  op.model = model;
  switch (model.family) {
    case Family::rabi2p:
      op.matrix = kron_assemble(model.delta * sz, In) + kron_assemble(I2, half_shift(n)) +
                  kron_assemble(model.g * sx, boson_matrix(BosonKind::create2_plus_annih2, n));
      break;
    case Family::rabi1p:
      op.matrix = kron_assemble(model.delta * sz, In) + kron_assemble(I2, half_shift(n)) +
                  kron_assemble(model.g * sx, boson_matrix(BosonKind::create_plus_annih, n));
      break;
    case Family::ncho:
    case Family::ncho1p: {
      Mat d = spin_matrix(SpinKind::diag, model.alpha, model.beta);
      BosonKind k = model.family == Family::ncho ? BosonKind::i_times_diff : BosonKind::i_times_diff1;
      op.matrix = kron_assemble(d, half_shift(n)) + kron_assemble(0.5 * J, boson_matrix(k, n));
      break;
    }
    case Family::k_alpha_beta: {
      if (!(model.alpha > 0) || !(model.beta > 0)) throw ArgumentError("assemble: alpha, beta must be > 0");
      double c = 1.0 / (2.0 * std::sqrt(model.alpha * model.beta));
      op.matrix = kron_assemble(I2, half_shift(n)) + kron_assemble(c * J, boson_matrix(BosonKind::i_times_diff, n));
      break;
    }
    case Family::rak: {
      // -D sx + (1 - 2g sz) N + g sz (2x^2 - 1) + 1/2 in the b-ladder basis; x has the q matrix
      Mat x2m1 = 2.0 * boson_matrix(BosonKind::q2, n) - In;
      op.matrix = kron_assemble(-model.delta * sx, In) +
                  kron_assemble(I2 - 2.0 * model.g * sz, boson_matrix(BosonKind::number, n)) +
                  kron_assemble(model.g * sz, x2m1) + 0.5 * Mat::Identity(2 * n, 2 * n);
      break;
    }
    case Family::quad_ts: {
      // (p+tq)^2 + s q^2 = d(2N+1) + c a^2 + conj(c) a'^2, d=(1+t^2+s)/2, c=(t^2+s-1)/2 - i t.
      // A diagonal Fock phase rotates c to |c| exactly, leaving a real symmetric matrix.
      double t = model.t_coef, s = model.s_coef;
      double d = 0.5 * (1.0 + t * t + s);
      double c = std::hypot(0.5 * (t * t + s - 1.0), t);
      op.matrix = d * (2.0 * boson_matrix(BosonKind::number, n) + In) +
                  c * boson_matrix(BosonKind::create2_plus_annih2, n);
      break;
    }
  }
  op.truncation_artifact = !model.bounded_below();
  return op;
}

namespace {

// connected components of the nonzero pattern
std::vector<std::vector<int>> blocks_of(const Mat& m) {
  const int d = int(m.rows());
  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int j = 0; j < d; ++j)
    for (int i = j + 1; i < d; ++i)
      if (m(i, j) != 0.0) {
        int a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::vector<int>> out;
  std::vector<int> slot(d, -1);
  for (int i = 0; i < d; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = int(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(i);
  }
  return out;
}

}  // namespace

Spectrum eigen(const Mat& m, EigenOptions opt) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ArgumentError("eigen: matrix must be square and non-empty");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw std::logic_error("eigen: contract violation, input is not symmetric");
  const int d = int(m.rows());

  std::vector<std::vector<int>> blocks;
  if (opt.split_blocks)
    blocks = blocks_of(m);
  else {
    blocks.emplace_back(d);
    std::iota(blocks[0].begin(), blocks[0].end(), 0);
  }

  std::vector<double> vals;
  vals.reserve(d);
  Mat vecs;
  if (opt.vectors) vecs = Mat::Zero(d, d);
  int col = 0;
  for (const auto& b : blocks) {
    const int k = int(b.size());
    Mat sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = m(b[i], b[j]);
    Eigen::SelfAdjointEigenSolver<Mat> es(sub, opt.vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen: solver failed");
    for (int i = 0; i < k; ++i) {
      vals.push_back(es.eigenvalues()(i));
      if (opt.vectors)
        for (int r = 0; r < k; ++r) vecs(b[r], col + i) = es.eigenvectors()(r, i);
    }
    col += k;
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
  Spectrum sp;
  sp.values.resize(d);
  for (int i = 0; i < d; ++i) sp.values[i] = vals[order[i]];
  if (opt.vectors) {
    Mat sorted(d, d);
    for (int i = 0; i < d; ++i) sorted.col(i) = vecs.col(order[i]);
    sp.vectors = std::move(sorted);
  }
  sp.degeneracy_groups = degeneracy_groups(sp.values, sp.degeneracy_tol);
  sp.n_max = d;
  return sp;
}

Spectrum eigen(const TruncatedOperator& op, EigenOptions opt) {
  Spectrum sp = eigen(op.matrix, opt);
  sp.n_max = op.n_max;
  return sp;
}

Spectrum converged_spectrum(const ModelSpec& model, int k, double tol, ConvergenceOptions opt) {
  if (k < 1) throw ArgumentError("converged_spectrum: k must be >= 1");
  if (!(tol > 0)) throw ArgumentError("converged_spectrum: tol must be > 0");
  if (!model.bounded_below()) throw RegimeError(model.regime_message());

  int n = opt.n_max_start > 0 ? opt.n_max_start : std::max(64, 8 * k);
  if (model.dim(n) < k) throw ArgumentError("converged_spectrum: k exceeds the truncated dimension");
  Spectrum prev = eigen(assemble(model, n));
  double last_change = 0;
  while (2 * n <= opt.n_max_cap) {
    n *= 2;
    EigenOptions eo;
    eo.vectors = opt.vectors;
    Spectrum cur = eigen(assemble(model, n), eo);
    last_change = 0;
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      double ch = std::abs(cur.values[i] - prev.values[i]);
      last_change = std::max(last_change, ch);
      if (ch >= tol * std::max(1.0, std::abs(cur.values[i]))) ok = false;
    }
    if (ok) {
      cur.converged_count = k;
      cur.convergence_tol = tol;
      return cur;
    }
    prev = std::move(cur);
  }
  std::ostringstream os;
  os << "converged_spectrum: " << to_string(model.family) << " did not converge for k=" << k << " at tol=" << tol
     << " by n_max cap " << opt.n_max_cap << " (last max change " << last_change << ")";
  throw ConvergenceError(os.str());
}

BoundsReport verify_bounds(const Spectrum& spec, const ModelSpec& model, double slack) {
  BoundsReport rep;
  const int K = spec.converged_count > 0 ? spec.converged_count : int(spec.values.size());
  auto add = [&](std::string name, int idx, double lo, double v, double hi) {
    BoundRow r{std::move(name), idx, lo, v, hi};
    r.margin = std::min(v - lo, hi - v);
    r.ok = r.margin >= -slack * std::max(1.0, std::abs(v));
    rep.all_ok = rep.all_ok && r.ok;
    rep.rows.push_back(r);
  };
  const double inf = std::numeric_limits<double>::infinity();
  switch (model.family) {
    case Family::ncho: {
      if (!model.bounded_below()) throw RegimeError(model.regime_message());
      double w = std::sqrt(1.0 - 1.0 / (model.alpha * model.beta));
      double lo = std::min(model.alpha, model.beta) * w, hi = std::max(model.alpha, model.beta) * w;
      add("ground_lower", 0, 0.5 * lo, spec.values.at(0), inf);
      for (int n = 0; 2 * n + 1 < K; ++n) {
        add("interlace_even", 2 * n, (n + 0.5) * lo, spec.values[2 * n], spec.values[2 * n + 1]);
        add("interlace_odd", 2 * n + 1, spec.values[2 * n], spec.values[2 * n + 1], (n + 0.5) * hi);
      }
      break;
    }
    case Family::rabi2p:
    case Family::rak: {
      if (!model.bounded_below()) throw RegimeError(model.regime_message());
      double lo = 0.5 * std::sqrt(1.0 - 4.0 * model.g * model.g) - std::abs(model.delta);
      add("ground_lower", 0, lo, spec.values.at(0), inf);
      break;
    }
    default: throw ArgumentError(std::string("verify_bounds: no stated bounds for family ") + to_string(model.family));
  }
  return rep;
}

double SymmetryReport::max_diff() const {
  double m = 0;
  for (const auto& r : rows) m = std::max(m, r.max_diff);
  return m;
}

SymmetryReport symmetry_checks(const ModelSpec& model, int n_max, int k) {
  SymmetryReport rep;
  const Spectrum base = eigen(assemble(model, n_max));
  k = std::min<int>(k, int(base.values.size()));
  auto cmp = [&](const char* name, ModelSpec other) {
    Spectrum s = eigen(assemble(other, n_max));
    double d = 0;
    for (int i = 0; i < k; ++i) d = std::max(d, std::abs(s.values[i] - base.values[i]));
    rep.rows.push_back({name, d});
  };
  switch (model.family) {
    case Family::rabi2p:
    case Family::rabi1p:
    case Family::rak: {
      ModelSpec m = model;
      m.g = -model.g;
      cmp("g->-g", m);
      m = model;
      m.delta = -model.delta;
      cmp("delta->-delta", m);
      break;
    }
    case Family::ncho:
    case Family::ncho1p:
    case Family::k_alpha_beta: {
      ModelSpec m = model;
      std::swap(m.alpha, m.beta);
      cmp("alpha<->beta", m);
      break;
    }
    case Family::quad_ts: {
      ModelSpec m = model;
      m.t_coef = -model.t_coef;
      cmp("t->-t", m);
      break;
    }
  }
  return rep;
}

SectorReport ground_sector(const ModelSpec& model, int n_max) {
  if (model.family != Family::rabi2p) throw ArgumentError("ground_sector: only rabi2p is supported");
  if (!model.bounded_below()) throw RegimeError(model.regime_message());
  EigenOptions eo;
  eo.vectors = true;
  eo.split_blocks = false;  // keep the check honest: no structural help from the block split
  Spectrum sp = eigen(assemble(model, n_max), eo);
  SectorReport rep;
  const auto& grp = sp.degeneracy_groups.front();
  rep.degeneracy = int(grp.size());
  rep.ground_energy = sp.values[0];
  const Mat& V = *sp.vectors;
  for (int c : grp)
    for (int i = 0; i < V.rows(); ++i) rep.overlap[int(sector_of(unflat(i)))] += V(i, c) * V(i, c);
  int best = 0;
  for (int s = 1; s < 4; ++s)
    if (rep.overlap[s] > rep.overlap[best]) best = s;
  rep.dominant = Sector(best);
  return rep;
}

}  // namespace qrm
