#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrm/spectral.hpp"

namespace qrm {

// Estimate not usable (e.g. nonpositive where a log is needed); more samples may help.
struct StatisticalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MCEstimate {
  double mean = 0;
  double std_error = 0;
  long n_samples = 0;
  std::uint64_t seed = 0;
  std::string integrand_spec;
  std::vector<std::string> warnings;
};

// Function of (x, sigma) on R x {+1,-1}, square integrable for dmu = pi^{-1/2} e^{-x^2} dx.
// Either b-ladder coefficients (flat spin-fastest layout, h_n normalized Hermite polynomials)
// or a closed form.
class TestVector {
 public:
  static TestVector from_coeffs(Vec c, std::string name = "coeffs");
  static TestVector from_function(std::function<double(double, int)> f, std::string name);
  static TestVector constant(double c = 1.0);
  static TestVector spin_indicator(int sigma);  // 1 on spin sigma, 0 on the other

  double operator()(double x, int sigma) const;
  bool has_coeffs() const { return coeffs_.size() > 0; }
  const Vec& coeffs() const { return coeffs_; }
  const std::string& name() const { return name_; }

 private:
  Vec coeffs_;
  std::function<double(double, int)> fn_;
  std::string name_;
};

// integrated_clock: the OU path is read at tau(s) = int_0^s (1 - 2g T_r) dr.
// literal: at s(1 - 2g T_s). See README for the comparison.
enum class TimeChange { integrated_clock, literal };

struct FKOptions {
  int quad_nodes = 16;     // Gauss-Legendre nodes per panel
  double max_panel = 0.5;  // inter-jump intervals are split into equal panels no longer than this; 0: one panel
  TimeChange time_change = TimeChange::integrated_clock;
  int chunk = 1024;  // samples per RNG stream; fixed so results do not depend on thread count
};

struct PathSample {
  double x0 = 0;
  int sigma0 = 1;
  std::vector<double> jump_times;  // in [0, t]
  std::vector<double> eval_times;  // sorted OU read times
  std::vector<double> ou_values;   // X at eval_times
  double horizon = 0;
  double integral_V = 0;           // int_0^t V ds, composite Gauss-Legendre on each inter-jump interval
  double x_end = 0;                // X at the mapped endpoint
  int sigma_end = 1;
};

// model: rabi2p/rak (2p functional) or rabi1p (1p functional)
PathSample sample_path(const ModelSpec& model, double t, int quad_nodes, std::mt19937_64& rng,
                       TimeChange tc = TimeChange::integrated_clock, double max_panel = 0.5);

MCEstimate fk_matrix_element(const ModelSpec& model, const TestVector& f, const TestVector& g_vec, double t,
                             long n_samples, std::uint64_t seed, const FKOptions& opt = {});

// The semigroup generator in the FK frame: rak for rabi2p/rak, its 1p analogue for rabi1p.
TruncatedOperator fk_generator(const ModelSpec& model, int n_max);

// (f, e^{-tL} g) from the truncated generator; vectors must carry coefficients
double spectral_matrix_element(const ModelSpec& model, const TestVector& f, const TestVector& g_vec, double t,
                               int n_max = 160);

// -(1/t) log of (f, e^{-tL} f)/|f|^2 with f the (positive) spectral ground vector of the FK generator
MCEstimate fk_ground_energy(const ModelSpec& model, double t, long n_samples, std::uint64_t seed,
                            const FKOptions& opt = {}, int n_max = 160);

struct PositivityPair {
  int i = 0, j = 0;
  MCEstimate est;
  double z = 0;
  enum class Status { positive, zero, inconclusive } status = Status::inconclusive;
};

struct PositivityReport {
  std::vector<PositivityPair> pairs;
  double min_z = 0;
  bool all_positive = false;
};

PositivityReport positivity_scan(const ModelSpec& model, const std::vector<TestVector>& vectors, double t,
                                 long n_samples, std::uint64_t seed, const FKOptions& opt = {});

struct NchoFKOptions {
  FKOptions fk;
  int k_max = 24;
  double tail_tol = 1e-6;
  double conv_tol = 1e-10;
};

// f, g_vec are Fock-side coefficient vectors (flat, spin fastest) for the NcHO.
MCEstimate fk_ncho_matrix_element(double alpha, double beta, const Vec& f, const Vec& g_vec, double t,
                                  long n_samples, std::uint64_t seed, const NchoFKOptions& opt = {});

// low-level: independent per-chunk streams
std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace qrm
