#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "distribution.hpp"
#include "test_function.hpp"

namespace stein_bounds {

// Winning branch of the three-way derivative-constant minimum
//   N_k = min{ 3||h^(k-1)||, gamma(k+1)||h^(k)||, ||h^(k+1)||/(k+1) }
// where gamma(k+1) = Gamma((k+1)/2) / (sqrt(2) Gamma(k/2+1)). The first
// branch at k = 1 rests on the stated-but-unconfirmed |w f''| <= ||h'|| bound
// (see the solution verifier), so its use is flagged.
struct NkChoice {
  int k = 0;
  int j = -1;  // coordinate for multivariate reports; -1 = univariate
  double value = 0.0;
  std::string branch;  // "3h^(k-1)" | "gamma*h^(k)" | "h^(k+1)/(k+1)"
  bool stated_only = false;
};

// h_norms[j] = ||h^(j)|| when available; a missing norm excludes its branch
NkChoice n_k(const std::vector<std::optional<double>>& h_norms, int k);

// two-branch multivariate variant M_{j,k} = min{ gamma(k+1)||d^k h/dw_j^k||,
// ||d^{k+1} h/dw_j^{k+1}||/(k+1) }
NkChoice m_jk(double norm_k, double norm_kp1, int j, int k);

struct InnerTerm {
  int i = 0;   // summand index; -1 = aggregated iid row
  int j = -1;  // coordinate; -1 = univariate
  int k = 0;
  double value = 0.0;
};

// Itemized evaluation of the main moment-matching bound: the total is the
// first-moment term plus the inner (i,k) terms plus the remainder, summed in
// that fixed order.
struct BoundReport {
  double total = 0.0;
  double first_moment_term = 0.0;
  std::vector<InnerTerm> inner_terms;
  double remainder_term = 0.0;
  std::vector<NkChoice> nk_branches;
};

// |E h(W_n) - Phi h| <= (||h'||/sqrt n) sum_i |eps_{i,1}|
//   + sum_i sum_{k=1}^{p-1} N_k/(k! n^{(k+1)/2}) |k eps_{i,k-1} - eps_{i,k+1}|
//   + (N_p/n^{(p+1)/2}) sum_i (m_{p-1}/(p-1)! + m_{p+1}/p!)
// eps.size() must equal n; each table must cover order p.
BoundReport theorem31_bound(const std::vector<EpsilonTable>& eps, const TestFunction& h,
                            long n, int p);

// iid convenience: one moment table for all n summands; inner terms and the
// remainder are aggregated over i (reported with i = -1)
BoundReport theorem31_bound(const EpsilonTable& eps, const TestFunction& h, long n, int p);

// Moment-matched specialization: requires eps_k = 0 for k <= p (tolerance
// 1e-10), returns (N_p/n^{(p+1)/2}) sum_i(...) = N_p n^{-(p-1)/2} (...) for
// iid summands. n = 1 gives the single-variable matched-moments bound.
double corollary32_bound(const EpsilonTable& eps, const TestFunction& h, long n, int p);

// Truncated evaluation of the infinite-series bound
//   ||h'|| |eps_1| + sum_{k>=1} ||h^(k+1)||/(k+1)! |k eps_{k-1} - eps_{k+1}|
// under the certified envelope ||h^(k)|| |eps_k| <= (C/n^alpha) k^{-delta} (k-1)!
// (and the same with ||h^(k+2)||). The series is summed through k = K; the
// dropped tail is bounded by (2C/n^alpha) K^{-delta}/delta. The envelope is
// machine-checked for k <= K only and reported separately — the caller
// certifies it for all k.
struct Theorem34Result {
  double bound = 0.0;  // truncated series
  double tail = 0.0;   // rigorous bound on the dropped tail
  double total = 0.0;  // bound + tail
  bool condition_checked_ok = false;
  int checked_k_max = 0;
};

Theorem34Result theorem34_bound(const std::function<double(int)>& eps,
                                const std::function<double(int)>& h_norm, double C,
                                double alpha, double delta, int K, long n);

// Sigma and the derived Sigma^{-1/2} machinery for the multivariate constants
struct CovarianceModel {
  int d = 0;
  std::vector<double> sigma;     // row-major d x d input
  std::vector<double> inv_sqrt;  // Sigma^{-1/2}
  std::vector<double> row_norms; // per-i sqrt(sum_j inv_sqrt(i,j)^2)
  double op_norm = 0.0;          // ||Sigma^{-1/2}||_op = lambda_min(Sigma)^{-1/2}
};

// Eigendecomposition by cyclic Jacobi sweeps (small d); requires symmetry
// within 1e-12 of the matrix scale and positive eigenvalues.
CovarianceModel covariance_model(std::vector<double> sigma, int d);

// Norm inputs for the multivariate solution constants. index_tuple lists the
// differentiated coordinates i_1..i_k (needed for k >= 2 families).
struct MvnNormData {
  double centered_norm = 0.0;  // ||h - E h(Sigma^{1/2} Z)||
  std::vector<int> index_tuple;
  // ||d^m h / dw_{j_1}..dw_{j_m}|| for an arbitrary tuple
  std::function<double(std::span<const int>)> mixed_partial_norm;
  std::optional<double> m_km1_h;  // M_{k-1}(h), operator norm of the (k-1)-th derivative
};

// All four bound families on the derivatives of the multivariate solution:
//   first_partial[i]  sqrt(pi/2) row_norm_i ||h - E h(Sigma^{1/2} Z)||
//   mixed_partial     gamma(k) min_l{ row_norm_{i_l} ||d^{k-1}h without slot l|| }
//   operator_first    sqrt(pi/2) op_norm ||h - E h(Sigma^{1/2} Z)||
//   operator_k        gamma(k) op_norm M_{k-1}(h)
struct MvnConstantCatalog {
  int k = 0;
  std::vector<double> first_partial;      // k = 1, per coordinate
  std::optional<double> mixed_partial;    // k >= 2
  double operator_first = 0.0;            // k = 1
  std::optional<double> operator_k;       // k >= 2
};

MvnConstantCatalog mvn_constant_catalog(const CovarianceModel& model, const MvnNormData& data,
                                        int k);

// Multivariate moment-matching bound for h(w) = g(<u, w>) with independent
// coordinates: triple sum over (i, j, k) with the two-branch M_{j,k}.
// eps[i][j] tables per summand/coordinate; the iid overload takes one table
// per coordinate.
BoundReport theorem35_bound(const std::vector<std::vector<EpsilonTable>>& eps,
                            const DirectionalFunction& h, long n, int p);

BoundReport theorem35_bound(const std::vector<EpsilonTable>& eps_by_coord,
                            const DirectionalFunction& h, long n, int p);

nlohmann::ordered_json to_json(const BoundReport& report);
BoundReport bound_report_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const Theorem34Result& result);
Theorem34Result theorem34_result_from_json(const nlohmann::ordered_json& j);

}  // namespace stein_bounds
