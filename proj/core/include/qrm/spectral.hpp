#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrm/fock.hpp"

namespace qrm {

// Parameters outside the regime where truncated spectra mean anything.
// Message names the governing result.
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Escalation hit the n_max cap.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family { rabi2p, rabi1p, ncho, ncho1p, k_alpha_beta, rak, quad_ts };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

struct ModelSpec {
  Family family = Family::rabi2p;
  double delta = 0.0;
  double g = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double t_coef = 0.0;
  double s_coef = 1.0;

  static ModelSpec rabi2p(double delta, double g) { return {Family::rabi2p, delta, g}; }
  static ModelSpec rabi1p(double delta, double g) { return {Family::rabi1p, delta, g}; }
  static ModelSpec rak(double delta, double g) { return {Family::rak, delta, g}; }
  static ModelSpec ncho(double a, double b) { return {Family::ncho, 0, 0, a, b}; }
  static ModelSpec ncho1p(double a, double b) { return {Family::ncho1p, 0, 0, a, b}; }
  static ModelSpec k_alpha_beta(double a, double b) { return {Family::k_alpha_beta, 0, 0, a, b}; }
  static ModelSpec quad_ts(double t, double s) { return {Family::quad_ts, 0, 0, 1, 1, t, s}; }

  // strictly inside the bounded-below regime (critical points excluded)
  bool bounded_below() const;
  bool critical() const;
  // empty when bounded below, otherwise the refusal text
  std::string regime_message() const;
  // spin x Fock families have dimension 2*n_max, quad_ts n_max
  int dim(int n_max) const { return family == Family::quad_ts ? n_max : 2 * n_max; }
};

struct TruncatedOperator {
  Mat matrix;
  int n_max = 0;
  ModelSpec model;
  bool truncation_artifact = false;  // assembled outside the bounded-below regime
};

struct Spectrum {
  std::vector<double> values;
  std::vector<std::vector<int>> degeneracy_groups;
  int n_max = 0;
  int converged_count = 0;
  double convergence_tol = 0.0;
  double degeneracy_tol = 1e-7;
  std::optional<Mat> vectors;  // columns, same order as values
};

// 1e-7 relative by default; groups are maximal runs with consecutive gaps below tol*max(1,|x|)
std::vector<std::vector<int>> degeneracy_groups(const std::vector<double>& v, double rel_tol = 1e-7);

TruncatedOperator assemble(const ModelSpec& model, int n_max);

struct EigenOptions {
  bool vectors = false;
  bool split_blocks = true;  // diagonalize exact-zero-decoupled blocks separately
};

Spectrum eigen(const TruncatedOperator& op, EigenOptions opt = {});
Spectrum eigen(const Mat& m, EigenOptions opt = {});

struct ConvergenceOptions {
  int n_max_cap = 4096;
  int n_max_start = 0;  // 0 -> max(64, 8k)
  bool vectors = false;
};

Spectrum converged_spectrum(const ModelSpec& model, int k, double tol, ConvergenceOptions opt = {});

struct BoundRow {
  std::string name;
  int index = 0;
  double lower = 0, value = 0, upper = 0;
  bool ok = false;
  double margin = 0;  // min distance to the violated side, negative on violation
};

struct BoundsReport {
  std::vector<BoundRow> rows;
  bool all_ok = true;
};

// ncho: interlacing envelope on (lambda_2n, lambda_2n+1); rabi2p/rak: ground lower bound.
BoundsReport verify_bounds(const Spectrum& spec, const ModelSpec& model, double slack = 1e-9);

struct SymmetryRow {
  std::string name;
  double max_diff = 0;
};

struct SymmetryReport {
  std::vector<SymmetryRow> rows;
  double max_diff() const;
};

SymmetryReport symmetry_checks(const ModelSpec& model, int n_max, int k);

struct SectorReport {
  Sector dominant = Sector::minus1;
  double overlap[4] = {0, 0, 0, 0};  // indexed by Sector, summed over the ground space
  int degeneracy = 1;
  double ground_energy = 0;
};

SectorReport ground_sector(const ModelSpec& model, int n_max);

}  // namespace qrm
