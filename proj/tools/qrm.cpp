// qrm: batch front end for the spectral / perturbative / Feynman-Kac / zeta / fiber tools.
#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include "qrm/feynman_kac.hpp"
#include "qrm/fiber.hpp"
#include "qrm/perturbation.hpp"
#include "qrm/spectral.hpp"
#include "qrm/zeta.hpp"
#include "table.hpp"

using namespace qrm;
using cli::Table;
using cli::fmt;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Model {
  std::string family = "rabi2p";
  double delta = 0, g = 0, alpha = 1, beta = 1, t_coef = 0, s_coef = 1;

  void bind(CLI::App* app, const std::string& default_family) {
    family = default_family;
    app->add_option("--family", family, "model family")->capture_default_str();
    app->add_option("--delta", delta, "detuning Delta")->capture_default_str();
    app->add_option("--g", g, "coupling g")->capture_default_str();
    app->add_option("--alpha", alpha, "NcHO alpha")->capture_default_str();
    app->add_option("--beta", beta, "NcHO beta")->capture_default_str();
    app->add_option("--t-coef", t_coef, "quad_ts t")->capture_default_str();
    app->add_option("--s-coef", s_coef, "quad_ts s")->capture_default_str();
  }
  ModelSpec spec() const { return {family_from_string(family), delta, g, alpha, beta, t_coef, s_coef}; }
  void meta(Table& t) const {
    t.add_meta("family", family);
    t.add_meta("delta", fmt(delta));
    t.add_meta("g", fmt(g));
    t.add_meta("alpha", fmt(alpha));
    t.add_meta("beta", fmt(beta));
    t.add_meta("t_coef", fmt(t_coef));
    t.add_meta("s_coef", fmt(s_coef));
  }
};

struct Output {
  std::string out;
  std::string format = "csv";
  void bind(CLI::App* app) {
    app->add_option("--out", out, "output file ('-' for stdout; default $QRM_OUTPUT_DIR/<command>.<format>)");
    app->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }
};

void emit(const std::string& command, Table t, const Output& o) {
  t.meta.insert(t.meta.begin(), {"command", command});
  t.meta.insert(t.meta.begin(), {"tool", std::string("qrm ") + kVersion});
  std::string body = o.format == "json" ? cli::to_json(t) : cli::to_csv(t);
  if (o.out == "-") {
    std::cout << body;
    return;
  }
  std::string path = o.out;
  if (path.empty()) {
    const char* dir = std::getenv("QRM_OUTPUT_DIR");
    path = std::string(dir && *dir ? dir : ".") + "/" + command + "." + o.format;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << body;
  if (!f) throw std::runtime_error("write failed: " + path);
  std::cerr << "wrote " << path << "\n";
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) v.push_back(std::stod(item));
  return v;
}

// ---- spectrum
struct SpectrumCmd {
  Model m;
  Output o;
  int k = 8, n_max = 0, cap = 4096;
  double tol = 1e-10;
  void bind(CLI::App* app) {
    m.bind(app, "rabi2p");
    o.bind(app);
    app->add_option("--k", k, "number of eigenvalues")->capture_default_str();
    app->add_option("--tol", tol, "convergence tolerance")->capture_default_str();
    app->add_option("--n-max", n_max, "fixed truncation (0: escalate to convergence)")->capture_default_str();
    app->add_option("--cap", cap, "n_max cap for escalation")->capture_default_str();
  }
  void run() {
    ModelSpec spec = m.spec();
    Spectrum sp;
    bool converged = n_max == 0;
    if (converged) {
      ConvergenceOptions co;
      co.n_max_cap = cap;
      sp = converged_spectrum(spec, k, tol, co);
    } else {
      TruncatedOperator op = assemble(spec, n_max);
      if (op.truncation_artifact) std::cerr << "warning: " << spec.regime_message() << " (truncation artifact)\n";
      sp = eigen(op);
    }
    Table t;
    m.meta(t);
    t.add_meta("n_max", std::to_string(sp.n_max));
    t.add_meta("tol", fmt(tol));
    t.add_meta("converged", converged ? "true" : "false");
    t.columns = {"index", "value", "degeneracy_group", "n_max", "tol"};
    std::vector<int> grp(sp.values.size());
    for (int gi = 0; gi < int(sp.degeneracy_groups.size()); ++gi)
      for (int i : sp.degeneracy_groups[gi]) grp[i] = gi;
    for (int i = 0; i < std::min<int>(k, int(sp.values.size())); ++i)
      t.rows.push_back({long(i), sp.values[i], long(grp[i]), long(sp.n_max), tol});
    emit("spectrum", std::move(t), o);
  }
};

// ---- perturb
struct PerturbCmd {
  Model m;
  Output o;
  double h = 0.01, tol = 1e-12;
  bool check = false;
  int xi_n_max = 256;
  void bind(CLI::App* app) {
    m.bind(app, "rabi2p");
    o.bind(app);
    app->add_flag("--check", check, "compare with finite differences of the converged ground energy");
    app->add_option("--step", h, "finite-difference step")->capture_default_str();
    app->add_option("--tol", tol, "convergence tolerance for the check")->capture_default_str();
    app->add_option("--xi-n-max", xi_n_max, "Fock truncation for xi(u)")->capture_default_str();
  }
  void run() {
    ModelSpec spec = m.spec();
    Table t;
    m.meta(t);
    t.columns = {"name", "value", "n_max", "tol"};
    auto ground = [&](ModelSpec x) { return converged_spectrum(x, 1, tol).values[0]; };
    if (spec.family == Family::rabi2p || spec.family == Family::rabi1p) {
      SeriesCoeffs c = spec.family == Family::rabi2p ? coeffs_2p(spec.delta) : coeffs_1p(spec.delta);
      t.rows.push_back({std::string("e0"), c.e0, 0L, 0.0});
      t.rows.push_back({std::string("e2"), c.e2, 0L, 0.0});
      t.rows.push_back({std::string("e4"), *c.e4, 0L, 0.0});
      if (check) {
        ModelSpec a = spec, b = spec;
        a.g = 0;
        b.g = h;
        ModelSpec b2 = spec;
        b2.g = 2 * h;
        double e0 = ground(a), e1 = ground(b), e2 = ground(b2);
        double fd = (2 * e1 - 2 * e0) / (h * h), fd2 = (2 * e2 - 2 * e0) / (4 * h * h);
        long n = converged_spectrum(b, 1, tol).n_max;
        t.rows.push_back({std::string("fd_second_derivative"), (4 * fd - fd2) / 3, n, tol});
        t.rows.push_back({std::string("series_second_derivative"), 2 * c.e2, 0L, 0.0});
      }
    } else if (spec.family == Family::ncho) {
      SeriesCoeffs c = ncho_lambda0_series(spec.alpha, spec.beta, xi_n_max);
      double A = 0.5 * (spec.alpha + spec.beta);
      t.rows.push_back({std::string("e0"), c.e0, 0L, 0.0});
      t.rows.push_back({std::string("e1_abs"), c.e1_abs, 0L, 0.0});
      t.rows.push_back({std::string("e2"), c.e2, long(xi_n_max), 0.0});
      t.rows.push_back({std::string("e2_displayed_combination"), *c.e2_displayed, long(xi_n_max), 0.0});
      t.rows.push_back({std::string("xi(A+/A-)"), xi((A + 1) / (A - 1), xi_n_max).value, long(xi_n_max), 0.0});
      t.rows.push_back({std::string("xi(A-/A+)"), xi((A - 1) / (A + 1), xi_n_max).value, long(xi_n_max), 0.0});
      if (check) {
        // one-sided: lambda_0 has a |g| kink at alpha = beta
        double e0 = ground(ModelSpec::ncho(A, A));
        double d1 = ground(ModelSpec::ncho(A - h, A + h)) - e0, d2 = ground(ModelSpec::ncho(A - 2 * h, A + 2 * h)) - e0;
        double d3 = ground(ModelSpec::ncho(A - 3 * h, A + 3 * h)) - e0;
        // fit d = k g + c2 g^2 + c3 g^3
        Eigen::Matrix3d M;
        Eigen::Vector3d y(d1, d2, d3);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) M(i, j) = std::pow((i + 1) * h, j + 1);
        Eigen::Vector3d s = M.lu().solve(y);
        t.rows.push_back({std::string("fd_slope"), s(0), 0L, tol});
        t.rows.push_back({std::string("fd_branch_second_derivative"), 2 * s(1), 0L, tol});
        t.rows.push_back({std::string("series_second_derivative"), 2 * c.e2, 0L, 0.0});
      }
    } else {
      throw ArgumentError("perturb: family must be rabi2p, rabi1p or ncho");
    }
    emit("perturb", std::move(t), o);
  }
};

TestVector named_vector(const std::string& name, const ModelSpec& m, int n_max) {
  if (name == "const") return TestVector::constant();
  if (name == "up") return TestVector::spin_indicator(1);
  if (name == "down") return TestVector::spin_indicator(-1);
  if (name == "x") {
    Vec c = Vec::Zero(4);
    c << 0, 0, 1, 1;
    return TestVector::from_coeffs(c, "x");
  }
  if (name == "ground") {
    EigenOptions eo;
    eo.vectors = true;
    Vec v = eigen(fk_generator(m, n_max), eo).vectors->col(0);
    if (v.sum() < 0) v = -v;
    return TestVector::from_coeffs(v, "ground");
  }
  throw ArgumentError("unknown test vector '" + name + "' (const, up, down, x, ground)");
}

// ---- fk
struct FkCmd {
  Model m;
  Output o;
  std::string mode = "element", f = "const", gv = "const", time_change = "clock";
  double t = 1.0;
  long samples = 100000;
  std::uint64_t seed = 1;
  int quad = 16, n_max = 160, k_max = 24;
  double max_panel = 0.5;
  void bind(CLI::App* app) {
    m.bind(app, "rabi2p");
    o.bind(app);
    app->add_option("--mode", mode, "element, ground, positivity")
        ->check(CLI::IsMember({"element", "ground", "positivity"}))
        ->capture_default_str();
    app->add_option("--f", f, "left vector: const, up, down, x, ground")->capture_default_str();
    app->add_option("--gv", gv, "right vector: const, up, down, x, ground")->capture_default_str();
    app->add_option("--t", t, "time")->capture_default_str();
    app->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
    app->add_option("--seed", seed, "RNG seed")->capture_default_str();
    app->add_option("--quad-nodes", quad, "Gauss-Legendre nodes per panel")->capture_default_str();
    app->add_option("--max-panel", max_panel, "longest quadrature panel inside an inter-jump interval (0: one panel)")
        ->capture_default_str();
    app->add_option("--n-max", n_max, "truncation of the spectral oracle")->capture_default_str();
    app->add_option("--k-max", k_max, "NcHO eigenvalues in the fiber sum")->capture_default_str();
    app->add_option("--time-change", time_change, "clock (integrated) or literal")
        ->check(CLI::IsMember({"clock", "literal"}))
        ->capture_default_str();
  }
  void run() {
    ModelSpec spec = m.spec();
    FKOptions fo;
    fo.quad_nodes = quad;
    fo.max_panel = max_panel;
    fo.time_change = time_change == "literal" ? TimeChange::literal : TimeChange::integrated_clock;
    Table t_;
    m.meta(t_);
    t_.add_meta("t", fmt(t));
    t_.add_meta("samples", std::to_string(samples));
    t_.add_meta("seed", std::to_string(seed));
    t_.add_meta("quad_nodes", std::to_string(quad));
    t_.add_meta("max_panel", fmt(max_panel));
    t_.add_meta("time_change", time_change);
    t_.add_meta("n_max", std::to_string(n_max));
    t_.columns = {"quantity", "estimate", "std_error", "spectral", "z", "n_samples", "seed", "n_max"};
    if (spec.family == Family::ncho) {
      ConvergenceOptions co;
      co.vectors = true;
      Spectrum sp = converged_spectrum(spec, k_max, 1e-10, co);
      auto pick = [&](const std::string& s) -> Vec {
        if (s == "ground") return sp.vectors->col(0);
        if (s == "up0") {
          Vec v = Vec::Zero(sp.vectors->rows());
          v(0) = 1;
          return v;
        }
        throw ArgumentError("ncho fk vectors: ground or up0");
      };
      Vec F = pick(f), G = pick(gv);
      NchoFKOptions no;
      no.fk = fo;
      no.k_max = k_max;
      MCEstimate e = fk_ncho_matrix_element(spec.alpha, spec.beta, F, G, t, samples, seed, no);
      const Mat& V = *sp.vectors;
      double exact = 0;
      for (int i = 0; i < int(sp.values.size()); ++i) exact += std::exp(-t * sp.values[i]) * V.col(i).dot(F) * V.col(i).dot(G);
      for (auto& w : e.warnings) std::cerr << "warning: " << w << "\n";
      t_.rows.push_back({std::string("ncho_element"), e.mean, e.std_error, exact,
                         e.std_error > 0 ? (e.mean - exact) / e.std_error : 0.0, e.n_samples, long(seed), long(sp.n_max)});
      emit("fk", std::move(t_), o);
      return;
    }
    if (mode == "element") {
      TestVector F = named_vector(f, spec, n_max), G = named_vector(gv, spec, n_max);
      MCEstimate e = fk_matrix_element(spec, F, G, t, samples, seed, fo);
      double exact = spectral_matrix_element(spec, F, G, t, n_max);
      t_.rows.push_back({e.integrand_spec, e.mean, e.std_error, exact,
                         e.std_error > 0 ? (e.mean - exact) / e.std_error : 0.0, e.n_samples, long(seed), long(n_max)});
    } else if (mode == "ground") {
      MCEstimate e = fk_ground_energy(spec, t, samples, seed, fo, n_max);
      double exact = eigen(fk_generator(spec, n_max)).values[0];
      for (auto& w : e.warnings) std::cerr << "warning: " << w << "\n";
      t_.rows.push_back({std::string("ground_energy"), e.mean, e.std_error, exact,
                         e.std_error > 0 ? (e.mean - exact) / e.std_error : 0.0, e.n_samples, long(seed), long(n_max)});
    } else {
      std::vector<TestVector> vs{TestVector::spin_indicator(1), TestVector::spin_indicator(-1), TestVector::constant()};
      PositivityReport r = positivity_scan(spec, vs, t, samples, seed, fo);
      for (const auto& p : r.pairs) {
        const char* st = p.status == PositivityPair::Status::positive ? "positive"
                         : p.status == PositivityPair::Status::zero   ? "zero"
                                                                      : "inconclusive";
        t_.rows.push_back({"(" + vs[p.i].name() + "," + vs[p.j].name() + ") " + st, p.est.mean, p.est.std_error,
                           std::numeric_limits<double>::quiet_NaN(), p.z, p.est.n_samples, long(p.est.seed),
                           long(n_max)});
      }
    }
    emit("fk", std::move(t_), o);
  }
};

// ---- zeta
struct ZetaCmd {
  Model m;
  Output o;
  std::string s_grid = "2", limit = "none", sequence;
  int k = 160;
  double tol = 1e-10;
  void bind(CLI::App* app) {
    m.bind(app, "rabi2p");
    o.bind(app);
    app->add_option("--s", s_grid, "comma-separated s values (> 1)")->capture_default_str();
    app->add_option("--k", k, "eigenvalues summed explicitly")->capture_default_str();
    app->add_option("--tol", tol, "convergence tolerance")->capture_default_str();
    app->add_option("--limit", limit, "none, main3-delta, main3-g, main5")
        ->check(CLI::IsMember({"none", "main3-delta", "main3-g", "main5"}))
        ->capture_default_str();
    app->add_option("--sequence", sequence, "comma-separated parameter sequence for --limit");
  }
  void run() {
    ModelSpec spec = m.spec();
    Table t;
    m.meta(t);
    t.add_meta("k", std::to_string(k));
    t.add_meta("tol", fmt(tol));
    if (limit == "none") {
      Spectrum sp = converged_spectrum(spec, k, tol);
      t.add_meta("n_max", std::to_string(sp.n_max));
      t.columns = {"s", "value", "tail_bound", "tail_lo", "tail_hi", "n_max", "tol"};
      for (double s : parse_list(s_grid)) {
        ZetaValue z = spectral_zeta(sp, s);
        t.rows.push_back({s, z.value, z.tail_bound, z.tail_lo, z.tail_hi, long(sp.n_max), tol});
      }
    } else {
      std::vector<double> seq = parse_list(sequence);
      if (seq.empty()) throw ArgumentError("zeta: --limit needs --sequence");
      t.columns = {"s", "param", "value", "limit", "diff", "tail_bound", "tol"};
      for (double s : parse_list(s_grid)) {
        LimitReport r = limit == "main5"         ? limit_check_main5(s, spec.alpha, seq, k)
                        : limit == "main3-delta" ? limit_check_main3(s, spec.g, seq, Main3Limit::delta_to_zero, k)
                                                 : limit_check_main3(s, spec.delta, seq, Main3Limit::g_to_zero, k);
        for (const auto& row : r.rows) t.rows.push_back({s, row.param, row.value, row.limit, row.diff, row.tail_bound, tol});
      }
    }
    emit("zeta", std::move(t), o);
  }
};

// ---- fiber
struct FiberCmd {
  Output o;
  double alpha = 3, beta = 2, tol = 1e-6;
  int k_max = 8;
  std::string family = "fiber2p", window;
  void bind(CLI::App* app) {
    o.bind(app);
    app->add_option("--alpha", alpha)->capture_default_str();
    app->add_option("--beta", beta)->capture_default_str();
    app->add_option("--k-max", k_max)->capture_default_str();
    app->add_option("--tol", tol)->capture_default_str();
    app->add_option("--family", family, "fiber2p or fiber1p")
        ->check(CLI::IsMember({"fiber2p", "fiber1p"}))
        ->capture_default_str();
    app->add_option("--window", window, "lo,hi: also reconstruct the NcHO spectrum on this window");
  }
  void run() {
    FiberFamily ff = family == "fiber1p" ? FiberFamily::fiber1p : FiberFamily::fiber2p;
    FiberReport r = verify_fiber(alpha, beta, k_max, tol, ff);
    Table t;
    t.add_meta("alpha", fmt(alpha));
    t.add_meta("beta", fmt(beta));
    t.add_meta("family", family);
    t.add_meta("n_max", std::to_string(r.n_max));
    t.add_meta("tol", fmt(tol));
    t.columns = {"kind", "index", "lambda", "scaled", "distance", "mult_ncho", "mult_fiber", "pass", "n_max", "tol"};
    for (const auto& row : r.rows)
      t.rows.push_back({std::string("verify"), long(row.index), row.lambda, row.scaled, row.distance,
                        long(row.mult_ncho), long(row.mult_fiber), std::string(row.pass ? "true" : "false"),
                        long(r.n_max), tol});
    if (!window.empty()) {
      auto w = parse_list(window);
      if (w.size() != 2) throw ArgumentError("fiber: --window expects lo,hi");
      ReconstructResult rc = reconstruct_ncho_spectrum(alpha, beta, w[0], w[1], tol * 1e-3, ff);
      for (auto& gap : rc.coverage_gaps) std::cerr << "coverage gap: " << gap << "\n";
      for (size_t i = 0; i < rc.roots.size(); ++i)
        t.rows.push_back({std::string("reconstruct"), long(i), rc.roots[i], std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN(), 0L, 0L, std::string("-"), long(rc.n_max), tol});
    }
    emit("fiber", std::move(t), o);
  }
};

// ---- sector
struct SectorCmd {
  Output o;
  double delta = 0.5, g = 0.3;
  int n_max = 256;
  void bind(CLI::App* app) {
    o.bind(app);
    app->add_option("--delta", delta)->capture_default_str();
    app->add_option("--g", g)->capture_default_str();
    app->add_option("--n-max", n_max)->capture_default_str();
  }
  void run() {
    SectorReport r = ground_sector(ModelSpec::rabi2p(delta, g), n_max);
    Table t;
    t.add_meta("delta", fmt(delta));
    t.add_meta("g", fmt(g));
    t.add_meta("n_max", std::to_string(n_max));
    t.add_meta("ground_energy", fmt(r.ground_energy));
    t.add_meta("degeneracy", std::to_string(r.degeneracy));
    t.add_meta("dominant", to_string(r.dominant));
    t.columns = {"sector", "overlap", "n_max"};
    for (int s = 0; s < 4; ++s) t.rows.push_back({std::string(to_string(Sector(s))), r.overlap[s], long(n_max)});
    emit("sector", std::move(t), o);
  }
};

// ---- symcheck
struct SymCmd {
  Model m;
  Output o;
  int n_max = 128, k = 10;
  void bind(CLI::App* app) {
    m.bind(app, "rabi2p");
    o.bind(app);
    app->add_option("--n-max", n_max)->capture_default_str();
    app->add_option("--k", k)->capture_default_str();
  }
  void run() {
    ModelSpec spec = m.spec();
    if (!spec.bounded_below()) throw RegimeError(spec.regime_message());
    SymmetryReport r = symmetry_checks(spec, n_max, k);
    Table t;
    m.meta(t);
    t.add_meta("n_max", std::to_string(n_max));
    t.columns = {"symmetry", "max_diff", "n_max", "k"};
    for (const auto& row : r.rows) t.rows.push_back({row.name, row.max_diff, long(n_max), long(k)});
    emit("symcheck", std::move(t), o);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrm: spectra, perturbation series, Feynman-Kac estimates, zeta values and fiber checks for "
               "quantum Rabi models and non-commutative harmonic oscillators"};
  app.set_version_flag("--version", std::string("qrm ") + kVersion);
  app.set_config("--config", "", "key=value config file with [command] sections");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SpectrumCmd spectrum;
  PerturbCmd perturb;
  FkCmd fk;
  ZetaCmd zeta;
  FiberCmd fiber;
  SectorCmd sector;
  SymCmd sym;
  std::map<std::string, std::function<void()>> runners;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.bind(sub);
    runners[name] = [&cmd] { cmd.run(); };
  };
  add("spectrum", "truncated / converged spectra", spectrum);
  add("perturb", "perturbation coefficients and finite-difference checks", perturb);
  add("fk", "Feynman-Kac Monte Carlo estimates", fk);
  add("zeta", "spectral zeta values and limit tables", zeta);
  add("fiber", "fiber decomposition checks", fiber);
  add("sector", "Z4 sector of the two-photon Rabi ground state", sector);
  add("symcheck", "spectral symmetries", sym);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the effective configuration of the selected command and exit")
      ->configurable(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (print_config) {
    // only the selected command's keys, so the output can be fed back through --config
    std::string prefix = app.get_subcommands().front()->get_name() + ".";
    std::stringstream all(app.config_to_str(true, false));
    for (std::string line; std::getline(all, line);)
      if (line.rfind(prefix, 0) == 0) std::cout << line << "\n";
    return 0;
  }
  try {
    for (auto* sub : app.get_subcommands()) runners.at(sub->get_name())();
  } catch (const RegimeError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
