#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "distribution.hpp"
#include "test_function.hpp"

namespace stein_bounds {

// One point of an empirical convergence study: the smooth-metric distance
// |E h(W_n) - E h(Z)| at sample size n, exact or Monte Carlo.
struct DistancePoint {
  long n = 0;
  double distance = 0.0;
  std::string method;  // "exact" | "monte-carlo"
  double ci = 0.0;     // CI half-width; 0 for exact entries
};

struct DistanceSeries {
  std::vector<DistancePoint> points;
};

// least-squares line through (log n, log distance)
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
  int n_points = 0;
};

// |E h(W_n) - phi_h| over the exact law of W_n = n^{-1/2} (X_1 + ... + X_n),
// X_i iid copies of dist. Requires h to supply phi_h. Single-threaded: the
// convolution chain is sequential.
double exact_distance(const DiscreteDistribution& dist, const TestFunction& h, long n,
                      std::size_t support_cap = 5'000'000);

// Multivariate counterpart for h(w) = g(<u, w>) with d independent
// coordinates, each an n^{-1/2}-scaled iid sum of dist: <u, W_n> is itself a
// finite-atom law, so the distance stays exactly computable.
double exact_distance(const DiscreteDistribution& dist, const DirectionalFunction& h, long n,
                      std::size_t support_cap = 5'000'000);

// k-th word of a splitmix64 stream: counter-based, so any (seed, index) pair
// can be generated independently of all others
std::uint64_t counter_word(std::uint64_t seed, std::uint64_t index);

// maps a 64-bit word to [0, 1)
double uniform01(std::uint64_t word);

// pure variate source: one uniform word in, one draw out
using Sampler = std::function<double(std::uint64_t)>;

// inverse-CDF sampler over the atoms of dist
Sampler discrete_sampler(const DiscreteDistribution& dist);

struct McDistance {
  double estimate = 0.0;
  double ci = 0.0;  // 3 * (sample std) / sqrt(reps)
};

// Monte Carlo estimate of |E h(W_n) - phi_h| over `reps` independent
// replications. Replication r draws its n variates from counter words
// r*n..r*n+n-1, and partial sums are accumulated per fixed-size block and
// combined in block order, so the result is bit-identical for any worker
// count. threads = 0 picks hardware concurrency.
McDistance mc_distance(const Sampler& sampler, const TestFunction& h, long n, long reps,
                       std::uint64_t seed, int threads = 0);

// least squares on the log-log pairs; needs >= 4 points, all distances > 0
RateFit rate_fit(const DistanceSeries& series);

// CSV persistence, columns n,distance,method,ci (header row on save)
void save_distance_series_csv(const DistanceSeries& series, const std::string& path);
DistanceSeries load_distance_series_csv(const std::string& path);

nlohmann::ordered_json to_json(const RateFit& fit);
RateFit rate_fit_from_json(const nlohmann::ordered_json& j);

}  // namespace stein_bounds
