#include "qrm/feynman_kac.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qrm/fiber.hpp"

namespace qrm {

// ---- test vectors

TestVector TestVector::from_coeffs(Vec c, std::string name) {
  if (c.size() % 2 != 0) throw ArgumentError("TestVector: coefficient vector must have even length (spin x level)");
  TestVector v;
  v.coeffs_ = std::move(c);
  v.name_ = std::move(name);
  return v;
}

TestVector TestVector::from_function(std::function<double(double, int)> f, std::string name) {
  TestVector v;
  v.fn_ = std::move(f);
  v.name_ = std::move(name);
  return v;
}

TestVector TestVector::constant(double c) {
  Vec v = Vec::Zero(2);
  v << c, c;
  return from_coeffs(v, "constant");
}

TestVector TestVector::spin_indicator(int sigma) {
  Vec v = Vec::Zero(2);
  v(sigma > 0 ? 0 : 1) = 1.0;
  return from_coeffs(v, sigma > 0 ? "indicator(up)" : "indicator(down)");
}

double TestVector::operator()(double x, int sigma) const {
  if (!has_coeffs()) return fn_(x, sigma);
  const int s = sigma > 0 ? 0 : 1;
  const int levels = int(coeffs_.size() / 2);
  // normalized Hermite polynomials, orthonormal for dmu
  double hm1 = 0, h = 1, acc = coeffs_(s) * h;
  for (int n = 0; n + 1 < levels; ++n) {
    double hn = std::sqrt(2.0 / (n + 1)) * x * h - std::sqrt(double(n) / (n + 1)) * hm1;
    hm1 = h;
    h = hn;
    acc += coeffs_(2 * (n + 1) + s) * h;
  }
  return acc;
}

// ---- rng

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream),
                    std::uint32_t(stream >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

namespace {

bool is_2p(const ModelSpec& m) { return m.family == Family::rabi2p || m.family == Family::rak; }

void check_fk_model(const ModelSpec& m, double t) {
  if (!(t > 0)) throw ArgumentError("feynman_kac: t must be > 0");
  if (m.family == Family::rabi1p) {
    if (!(m.delta >= 0)) throw ArgumentError("feynman_kac: delta must be >= 0 (it is a jump rate)");
    return;
  }
  if (!is_2p(m)) throw ArgumentError("feynman_kac: model must be rabi2p, rak or rabi1p");
  if (!(m.delta >= 0)) throw ArgumentError("feynman_kac: delta must be >= 0 (it is a jump rate)");
  if (!(std::abs(m.g) < 0.5)) throw RegimeError("Lemma ess: |g|>=1/2, the Feynman-Kac representation needs |g|<1/2");
}

struct GaussLegendre {
  std::vector<double> x, w;  // on [-1, 1]
  explicit GaussLegendre(int n) {
    // Golub-Welsch
    Mat J = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    for (int i = 0; i < n; ++i) {
      x.push_back(es.eigenvalues()(i));
      double v = es.eigenvectors()(0, i);
      w.push_back(2.0 * v * v);
    }
  }
};

struct OU {
  double x, time;
  void advance(double to, double z) {
    double dt = to - time;
    double e = std::exp(-dt);
    x = x * e + std::sqrt(0.5 * (1.0 - e * e)) * z;
    time = to;
  }
};

// equal GL panels per inter-jump interval, none longer than max_panel (0: one panel)
int panels(double len, double max_panel) {
  return max_panel > 0 ? std::max(1, int(std::ceil(len / max_panel))) : 1;
}

// One path; when rec is non-null the full PathSample is filled.
template <class Rng>
void walk(const ModelSpec& m, double t, const GaussLegendre& gl, double max_panel, TimeChange tc, Rng& rng, PathSample& p,
          bool rec) {
  std::normal_distribution<double> N01(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  p.horizon = t;
  p.x0 = N01(rng) * std::sqrt(0.5);
  p.sigma0 = coin(rng) ? 1 : -1;
  p.jump_times.clear();
  if (m.delta > 0) {
    std::exponential_distribution<double> ex(m.delta);
    for (double s = ex(rng); s < t; s += ex(rng)) p.jump_times.push_back(s);
  }
  const bool two = is_2p(m);
  const double g = m.g;
  const int Q = int(gl.x.size());
  if (rec) {
    p.eval_times.clear();
    p.ou_values.clear();
  }

  if (!two || tc == TimeChange::integrated_clock) {
    // read times are monotone: step the OU forward node by node
    OU ou{p.x0, 0.0};
    double a = 0, tau_a = 0, I = 0;
    int sigma = p.sigma0;
    size_t nj = p.jump_times.size();
    for (size_t seg = 0; seg <= nj; ++seg) {
      double b = seg < nj ? p.jump_times[seg] : t;
      double speed = two ? 1.0 - 2.0 * g * sigma : 1.0;
      const int np = panels(b - a, max_panel);
      const double half = 0.5 * (b - a) / np;
      for (int j = 0; j < np; ++j) {
        double mid = a + (2 * j + 1) * half;
        for (int k = 0; k < Q; ++k) {
          double s = mid + half * gl.x[k];
          ou.advance(tau_a + speed * (s - a), N01(rng));
          double X = ou.x;
          double V = two ? (2.0 * X * X - 1.0) * sigma : std::sqrt(2.0) * sigma * X;
          I += half * gl.w[k] * V;
          if (rec) {
            p.eval_times.push_back(ou.time);
            p.ou_values.push_back(X);
          }
        }
      }
      tau_a += speed * (b - a);
      a = b;
      if (seg < nj) sigma = -sigma;
    }
    ou.advance(tau_a, N01(rng));
    if (rec) {
      p.eval_times.push_back(ou.time);
      p.ou_values.push_back(ou.x);
    }
    p.integral_V = I;
    p.x_end = ou.x;
    p.sigma_end = sigma;
    return;
  }

  // literal: X read at s(1 - 2g T_s); sort the read times, sample once in order
  struct Node {
    double read, weight;
    int sigma;
  };
  std::vector<Node> nodes;
  double a = 0;
  int sigma = p.sigma0;
  size_t nj = p.jump_times.size();
  for (size_t seg = 0; seg <= nj; ++seg) {
    double b = seg < nj ? p.jump_times[seg] : t;
    const int np = panels(b - a, max_panel);
    const double half = 0.5 * (b - a) / np;
    for (int j = 0; j < np; ++j)
      for (int k = 0; k < Q; ++k) {
        double s = a + (2 * j + 1) * half + half * gl.x[k];
        nodes.push_back({s * (1.0 - 2.0 * g * sigma), half * gl.w[k], sigma});
      }
    a = b;
    if (seg < nj) sigma = -sigma;
  }
  nodes.push_back({t * (1.0 - 2.0 * g * sigma), 0.0, sigma});
  std::vector<int> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return nodes[i].read < nodes[j].read; });
  std::vector<double> X(nodes.size());
  OU ou{p.x0, 0.0};
  for (int i : order) {
    ou.advance(nodes[i].read, N01(rng));
    X[i] = ou.x;
    if (rec) {
      p.eval_times.push_back(ou.time);
      p.ou_values.push_back(ou.x);
    }
  }
  double I = 0;
  for (size_t i = 0; i + 1 < nodes.size(); ++i) I += nodes[i].weight * (2.0 * X[i] * X[i] - 1.0) * nodes[i].sigma;
  p.integral_V = I;
  p.x_end = X.back();
  p.sigma_end = sigma;
}

struct Moments {
  long n = 0;
  double mean = 0, m2 = 0;
  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    long tot = n + o.n;
    double d = o.mean - mean;
    mean += d * o.n / tot;
    m2 += o.m2 + d * d * double(n) * o.n / tot;
    n = tot;
  }
};

// integrand(path) -> value; the 2 e^{Delta t - t/2} prefactor is applied here
template <class F>
MCEstimate run_fk(const ModelSpec& m, double t, long n_samples, std::uint64_t seed, const FKOptions& opt, F integrand,
                  std::string spec) {
  check_fk_model(m, t);
  if (n_samples < 2) throw ArgumentError("feynman_kac: need at least 2 samples");
  if (opt.quad_nodes < 1 || opt.chunk < 1 || !(opt.max_panel >= 0)) throw ArgumentError("feynman_kac: bad options");
  const GaussLegendre gl(opt.quad_nodes);
  const long chunks = (n_samples + opt.chunk - 1) / opt.chunk;
  std::vector<Moments> parts(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < chunks; ++c) {
    auto rng = chunk_rng(seed, std::uint64_t(c));
    long lo = c * opt.chunk, hi = std::min(n_samples, lo + opt.chunk);
    PathSample p;
    Moments mo;
    for (long i = lo; i < hi; ++i) {
      walk(m, t, gl, opt.max_panel, opt.time_change, rng, p, false);
      mo.add(integrand(p));
    }
    parts[c] = mo;
  }
  Moments all;
  for (const auto& p : parts) all.merge(p);  // fixed order: bitwise reproducible
  const double pref = 2.0 * std::exp(std::max(m.delta, 0.0) * t - 0.5 * t);
  MCEstimate e;
  e.n_samples = all.n;
  e.seed = seed;
  e.mean = pref * all.mean;
  e.std_error = pref * std::sqrt(all.m2 / double(all.n - 1)) / std::sqrt(double(all.n));
  e.integrand_spec = std::move(spec);
  return e;
}

}  // namespace

PathSample sample_path(const ModelSpec& model, double t, int quad_nodes, std::mt19937_64& rng, TimeChange tc,
                       double max_panel) {
  check_fk_model(model, t);
  if (quad_nodes < 1) throw ArgumentError("sample_path: quad_nodes must be >= 1");
  GaussLegendre gl(quad_nodes);
  PathSample p;
  if (!(max_panel >= 0)) throw ArgumentError("sample_path: max_panel must be >= 0");
  walk(model, t, gl, max_panel, tc, rng, p, true);
  return p;
}

MCEstimate fk_matrix_element(const ModelSpec& model, const TestVector& f, const TestVector& g_vec, double t,
                             long n_samples, std::uint64_t seed, const FKOptions& opt) {
  const double g = model.g;
  auto integrand = [&](const PathSample& p) {
    double fv = f(p.x0, p.sigma0);
    if (fv == 0.0) return 0.0;
    double gv = g_vec(p.x_end, p.sigma_end);
    if (gv == 0.0) return 0.0;
    return fv * gv * std::exp(-g * p.integral_V);
  };
  std::ostringstream os;
  os << "(" << f.name() << ", exp(-t L) " << g_vec.name() << ") " << to_string(model.family)
     << (opt.time_change == TimeChange::literal ? " literal-time" : "");
  return run_fk(model, t, n_samples, seed, opt, integrand, os.str());
}

TruncatedOperator fk_generator(const ModelSpec& model, int n_max) {
  if (is_2p(model)) {
    ModelSpec m = model;
    m.family = Family::rak;
    return assemble(m, n_max);
  }
  if (model.family != Family::rabi1p) throw ArgumentError("fk_generator: model must be rabi2p, rak or rabi1p");
  // -D sx + N + 1/2 + sqrt2 g sz x, b-ladder basis
  const int n = n_max;
  TruncatedOperator op = assemble(ModelSpec::rabi1p(0, 0), n);
  op.matrix += kron_assemble(-model.delta * spin_matrix(SpinKind::sx), Mat::Identity(n, n)) +
               kron_assemble(std::sqrt(2.0) * model.g * spin_matrix(SpinKind::sz), boson_matrix(BosonKind::q, n));
  op.model = model;
  return op;
}

namespace {

Vec padded(const TestVector& v, int dim) {
  if (!v.has_coeffs()) throw ArgumentError("spectral_matrix_element: test vector needs coefficients");
  Vec out = Vec::Zero(dim);
  int k = std::min<int>(dim, int(v.coeffs().size()));
  out.head(k) = v.coeffs().head(k);
  return out;
}

}  // namespace

double spectral_matrix_element(const ModelSpec& model, const TestVector& f, const TestVector& g_vec, double t,
                               int n_max) {
  EigenOptions eo;
  eo.vectors = true;
  Spectrum sp = eigen(fk_generator(model, n_max), eo);
  const Mat& V = *sp.vectors;
  const int d = int(V.rows());
  Vec a = V.transpose() * padded(f, d), b = V.transpose() * padded(g_vec, d);
  double s = 0;
  for (int i = 0; i < d; ++i) s += std::exp(-t * sp.values[i]) * a(i) * b(i);
  return s;
}

MCEstimate fk_ground_energy(const ModelSpec& model, double t, long n_samples, std::uint64_t seed,
                            const FKOptions& opt, int n_max) {
  check_fk_model(model, t);
  EigenOptions eo;
  eo.vectors = true;
  Spectrum sp = eigen(fk_generator(model, n_max), eo);
  Vec v = sp.vectors->col(0);
  if (v.sum() < 0) v = -v;
  TestVector f = TestVector::from_coeffs(v, "spectral ground vector");
  MCEstimate m = fk_matrix_element(model, f, f, t, n_samples, seed, opt);
  if (!(m.mean > 0)) {
    std::ostringstream os;
    os << "fk_ground_energy: matrix element estimate " << m.mean << " is not positive; increase samples";
    throw StatisticalError(os.str());
  }
  MCEstimate e = m;
  const double nf = v.squaredNorm();
  e.mean = -std::log(m.mean / nf) / t;
  e.std_error = m.std_error / (t * m.mean);  // delta method
  e.integrand_spec = "-(1/t) log " + m.integrand_spec;
  if (sp.degeneracy_groups.size() > 1) {
    double gap = sp.values[sp.degeneracy_groups[1][0]] - sp.values[0];
    if (gap * t < 3.0) {
      std::ostringstream os;
      os << "spectral gap * t = " << gap * t << " < 3";
      e.warnings.push_back(os.str());
    }
  }
  return e;
}

PositivityReport positivity_scan(const ModelSpec& model, const std::vector<TestVector>& vectors, double t,
                                 long n_samples, std::uint64_t seed, const FKOptions& opt) {
  if (vectors.empty()) throw ArgumentError("positivity_scan: no vectors");
  PositivityReport rep;
  rep.min_z = std::numeric_limits<double>::infinity();
  rep.all_positive = true;
  std::uint64_t k = 0;
  for (int i = 0; i < int(vectors.size()); ++i)
    for (int j = 0; j < int(vectors.size()); ++j) {
      PositivityPair pp;
      pp.i = i;
      pp.j = j;
      pp.est = fk_matrix_element(model, vectors[i], vectors[j], t, n_samples, seed + 0x9e3779b97f4a7c15ull * ++k, opt);
      double se = pp.est.std_error;
      pp.z = se > 0 ? pp.est.mean / se : (pp.est.mean > 0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (pp.z >= 3.0)
        pp.status = PositivityPair::Status::positive;
      else if (std::abs(pp.est.mean) <= 3.0 * se + 1e-300)
        pp.status = PositivityPair::Status::zero;
      else
        pp.status = PositivityPair::Status::inconclusive;
      rep.all_positive = rep.all_positive && pp.status == PositivityPair::Status::positive;
      rep.min_z = std::min(rep.min_z, pp.z);
      rep.pairs.push_back(pp);
    }
  return rep;
}

MCEstimate fk_ncho_matrix_element(double alpha, double beta, const Vec& f, const Vec& g_vec, double t,
                                  long n_samples, std::uint64_t seed, const NchoFKOptions& opt) {
  if (!(alpha * beta > 1.0)) throw RegimeError("Lemma qsa: alpha*beta<=1, NcHO Feynman-Kac formula needs alpha*beta>1");
  if (!(alpha > beta)) throw ArgumentError("fk_ncho_matrix_element: requires alpha > beta");
  if (!(t > 0)) throw ArgumentError("fk_ncho_matrix_element: t must be > 0");
  ConvergenceOptions co;
  co.vectors = true;
  Spectrum sp = converged_spectrum(ModelSpec::ncho(alpha, beta), opt.k_max, opt.conv_tol, co);
  const Mat& V = *sp.vectors;
  const int d = int(V.rows());
  auto pad = [&](const Vec& x) {
    Vec o = Vec::Zero(d);
    int k = std::min<int>(d, int(x.size()));
    o.head(k) = x.head(k);
    return o;
  };
  const Vec F = pad(f), G = pad(g_vec);
  // J on coefficients: spin rotation [[1,1],[-1,1]]/sqrt2
  auto to_mu = [](const CVec& v) {
    CVec o(v.size());
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i + 1 < v.size(); i += 2) {
      o(i) = r * (v(i) + v(i + 1));
      o(i + 1) = r * (-v(i) + v(i + 1));
    }
    return o;
  };

  MCEstimate total;
  total.seed = seed;
  double var = 0;
  int done = 0;
  for (int gi = 0; gi < int(sp.degeneracy_groups.size()); ++gi) {
    const auto& grp = sp.degeneracy_groups[gi];
    if (grp.front() >= opt.k_max) break;
    Vec pf = Vec::Zero(d), pg = Vec::Zero(d);
    for (int c : grp) {
      pf += V.col(c) * V.col(c).dot(F);
      pg += V.col(c) * V.col(c).dot(G);
    }
    done = grp.back() + 1;
    if (pf.norm() * pg.norm() < 1e-15) continue;
    double lam = 0;
    for (int c : grp) lam += sp.values[c];
    lam /= double(grp.size());
    FiberSpec fs = fiber_model(alpha, beta, lam);
    CVec L = to_mu(gamma_weight(alpha, beta, intertwine(alpha, beta, pf)));
    CVec R = to_mu(intertwine(alpha, beta, pg));
    TestVector Lr = TestVector::from_coeffs(L.real()), Li = TestVector::from_coeffs(L.imag());
    TestVector Rr = TestVector::from_coeffs(R.real()), Ri = TestVector::from_coeffs(R.imag());
    const double g = fs.induced_g;
    auto integrand = [&](const PathSample& p) {
      double v = Lr(p.x0, p.sigma0) * Rr(p.x_end, p.sigma_end) + Li(p.x0, p.sigma0) * Ri(p.x_end, p.sigma_end);
      return v * std::exp(-g * p.integral_V);
    };
    MCEstimate e = run_fk(ModelSpec::rak(fs.induced_delta, g), fs.scale * t, n_samples,
                          seed ^ (0xd1b54a32d192ed03ull * std::uint64_t(gi + 1)), opt.fk, integrand, "");
    total.mean += e.mean;
    var += e.std_error * e.std_error;
    total.n_samples += e.n_samples;
  }
  total.std_error = std::sqrt(var);
  total.integrand_spec = "NcHO (f, exp(-tQ) g) via fiber sum";
  if (done < d) {
    double tail = std::exp(-t * sp.values[done]) * F.norm() * G.norm();
    if (tail > opt.tail_tol) {
      std::ostringstream os;
      os << "eigenvalue sum truncated at k=" << done << ", tail bound " << tail;
      total.warnings.push_back(os.str());
    }
  }
  return total;
}

}  // namespace qrm
