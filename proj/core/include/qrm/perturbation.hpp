#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrm/spectral.hpp"

namespace qrm {

enum class SeriesFamily { rabi2p, rabi1p, ncho };

// E(g) = e0 + e1_abs*|g| + e2*g^2 + e4*g^4 + ...
struct SeriesCoeffs {
  SeriesFamily family = SeriesFamily::rabi2p;
  ModelSpec params;
  double e0 = 0;
  double e1_abs = 0;          // nonzero only for ncho (degenerate ground level at alpha=beta)
  double e2 = 0;
  std::optional<double> e4;   // absent for ncho
  std::optional<double> e2_displayed;  // ncho: the combination as printed in the source lemma, diagnostic only

  double eval(double g) const;
};

SeriesCoeffs coeffs_2p(double delta);
SeriesCoeffs coeffs_1p(double delta);

struct XiEvaluation {
  double u = 0;
  double value = 0;
  int n_max = 0;
  double A_plus = 0, A_minus = 0;  // set by ncho_lambda0_series, else 0
  double ground_component = 0;     // level-0 component of the resolvent argument
  bool ground_warning = false;     // ground component above tolerance: reduced resolvent was needed
};

// pi^{-1/2} (w, R w) with w = (1+(1-u)q^2) e^{-x^2 u/2}, R the reduced resolvent of p^2+q^2-1
XiEvaluation xi(double u, int n_max = 256);

// Lowest NcHO eigenvalue along alpha = A - g, beta = A + g.
SeriesCoeffs ncho_lambda0_series(double alpha, double beta, int xi_n_max = 256);

struct ConcavityReport {
  double max_second_diff = 0;   // over the sampled variable
  bool concave = true;
  int n_points = 0;
};

// second divided differences of E over x (x need not be uniform); concave iff all <= tol
ConcavityReport concavity_check(const std::vector<double>& x, const std::vector<double>& E, double tol = 1e-12);

}  // namespace qrm
