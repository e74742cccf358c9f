#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stein_bounds {

// Raised when an exact convolution would exceed the configured support cap;
// callers should fall back to Monte Carlo.
class SupportCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite-atom probability distribution: sorted unique atoms with matching
// weights. Immutable after construction.
class DiscreteDistribution {
 public:
  // sorts, merges atoms closer than merge_tol_rel * max|atom|, validates that
  // probabilities are non-negative and sum to 1 within sum_tol (long
  // convolution chains pass a looser tolerance; their drift is O(n) ulps)
  static DiscreteDistribution from_atoms(std::vector<double> atoms,
                                         std::vector<double> probs,
                                         double merge_tol_rel = 1e-12,
                                         double sum_tol = 1e-12);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return atoms_.size(); }

  double moment(int k) const;      // E X^k
  double abs_moment(int k) const;  // E |X|^k

  DiscreteDistribution scaled(double c) const;  // law of c X

 private:
  DiscreteDistribution() = default;
  std::vector<double> atoms_, probs_;
};

// Moment table against the standard normal: eps[k] = E X^k - E Z^k for
// k = 0..p, abs_moments[k] = E |X|^k for k = 0..p+1.
struct EpsilonTable {
  int p = 0;
  std::vector<double> eps;
  std::vector<double> abs_moments;
};

EpsilonTable moments(const DiscreteDistribution& dist, int p);

// m-atom law on the roots of the m-th probabilists' Hermite polynomial with
// Gauss-Hermite weights; matches E Z^k exactly for k <= 2m-1 (validated to
// 1e-9 at construction). m = 2 is the Rademacher law on {-1, +1}.
DiscreteDistribution hermite_distribution(int m);

DiscreteDistribution rademacher();

// law of X + Y for independent X, Y (no rescaling)
DiscreteDistribution convolve(const DiscreteDistribution& x, const DiscreteDistribution& y,
                              double merge_tol_rel = 1e-12,
                              std::size_t support_cap = 5'000'000);

// exact law of W_n = n^{-1/2} (X_1 + ... + X_n), X_i iid copies of dist
DiscreteDistribution convolve_iid(const DiscreteDistribution& dist, long n,
                                  double merge_tol_rel = 1e-12,
                                  std::size_t support_cap = 5'000'000);

// CSV persistence: one "atom,prob" row per atom, header row included on save,
// optional on load
DiscreteDistribution load_distribution_csv(const std::string& path);
void save_distribution_csv(const DiscreteDistribution& dist, const std::string& path);

}  // namespace stein_bounds
