#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "quadrature.hpp"
#include "test_function.hpp"

namespace stein_bounds {

// Which integral representation of f^(k) to evaluate. A carries the Gaussian
// factor against h^(k-1); B differentiates once more and uses h^(k). They
// describe the same function; the pair is the built-in cross-check.
enum class SteinRep { A, B };

// Numerical solution of f''(w) - w f'(w) = h(w) - E h(Z) via the
// Ornstein-Uhlenbeck time integral, after the substitutions t = e^{-s},
// t = sin(theta) that remove the endpoint singularity:
//   rep A: f^(k)(w) = -int_0^{pi/2} sin^{k-1}(th) E[Z h^(k-1)(w sin th + Z cos th)] dth
//   rep B: f^(k)(w) = -int_0^{pi/2} sin^{k-1}(th) cos(th) E[h^(k)(w sin th + Z cos th)] dth
// with the inner expectation by Gauss-Hermite.
class SteinSolution {
 public:
  explicit SteinSolution(TestFunctionPtr h, int theta_order = 64, int z_order = 64);

  // f^(k)(w), k >= 1; rep A needs h derivatives through k-1, rep B through k.
  // |w| <= 20 (accuracy envelope of the default orders).
  double derivative(int k, double w, SteinRep rep = SteinRep::B) const;

  // f''(w) - w f'(w) - (h(w) - phi_h): should vanish to quadrature accuracy
  double residual(double w) const;

  const TestFunction& h() const { return *h_; }
  int theta_order() const { return theta_order_; }
  int z_order() const { return z_order_; }

 private:
  TestFunctionPtr h_;
  int theta_order_, z_order_;
  double phi_;
  quadrature::Rule theta_;  // Gauss-Legendre on [0, pi/2]
  quadrature::Rule z_;      // probabilists' Gauss-Hermite
};

struct BoundEntry {
  std::string branch;
  double value;
};

// The alternative sup-norm bounds on |f^(k)| and their minimum:
//   "classic"       sqrt(pi/2)||h - phi|| (k=1), 2||h - phi|| (k=2)
//   "h^(k)/k"       ||h^(k)|| / k                (k>=1)
//   "gamma*h^(k-1)" gamma_ratio_constant(k) ||h^(k-1)||  (k>=2)
//   "3h^(k-2)"      3 ||h^(k-2)||                (k>=3)
// Entries whose norms the function cannot supply are omitted.
struct DerivativeBoundCatalog {
  int k = 0;
  std::vector<BoundEntry> entries;
  double min_bound = 0.0;
  std::string branch;  // winning entry
};

DerivativeBoundCatalog derivative_bounds(const TestFunction& h, int k);

// Bound compared against sup |w f^(k)(w)|: ||h - phi|| at k = 1 (branch
// "h-Eh"), ||h^(k-1)|| for k >= 2 (branch "h^(k-1)").
struct WfBound {
  double value = 0.0;
  std::string branch;
};

WfBound wf_bound(const TestFunction& h, int k);

struct VerifyGrid {
  double lo = -8.0;
  double hi = 8.0;
  double step = 0.01;
};

struct VerifyRecord {
  int k = 0;
  double sup_f = 0.0;
  double sup_wf = 0.0;
  double bound = 0.0;  // min catalog bound on |f^(k)|
  std::string branch;
  double bound_wf = 0.0;
  std::string branch_wf;
  bool pass_f = false;
  bool pass_wf = false;
  bool pass = false;  // pass_f && pass_wf
};

struct VerifyReport {
  std::vector<VerifyRecord> records;
  bool all_pass = false;
};

// Sup-scan of |f^(k)| and |w f^(k)| over the grid (one refinement pass around
// each argmax) compared against the catalog bounds. PASS means
// sup <= bound * (1 + 1e-6) + 1e-9.
VerifyReport verify_bounds(TestFunctionPtr h, int k_max, VerifyGrid grid = {},
                           int theta_order = 64, int z_order = 64);

nlohmann::ordered_json to_json(const VerifyReport& report);
VerifyReport verify_report_from_json(const nlohmann::ordered_json& j);

}  // namespace stein_bounds
