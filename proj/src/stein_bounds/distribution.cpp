#include "distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "kernels.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace stein_bounds {

namespace {

// shared merge step: atoms assumed sorted, weights folded into coincident atoms
void merge_sorted(std::vector<double>& atoms, std::vector<double>& probs, double tol) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (out > 0 && atoms[i] - atoms[out - 1] <= tol) {
      probs[out - 1] += probs[i];
    } else {
      atoms[out] = atoms[i];
      probs[out] = probs[i];
      ++out;
    }
  }
  atoms.resize(out);
  probs.resize(out);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

DiscreteDistribution DiscreteDistribution::from_atoms(std::vector<double> atoms,
                                                      std::vector<double> probs,
                                                      double merge_tol_rel,
                                                      double sum_tol) {
  if (atoms.size() != probs.size())
    throw std::invalid_argument("DiscreteDistribution: atom/prob length mismatch");
  if (atoms.empty()) throw std::invalid_argument("DiscreteDistribution: empty support");
  for (double p : probs)
    if (!(p >= 0.0)) throw std::invalid_argument("DiscreteDistribution: negative probability");

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  DiscreteDistribution d;
  d.atoms_.reserve(atoms.size());
  d.probs_.reserve(atoms.size());
  for (std::size_t i : order) {
    d.atoms_.push_back(atoms[i]);
    d.probs_.push_back(probs[i]);
  }
  merge_sorted(d.atoms_, d.probs_, merge_tol_rel * max_abs(d.atoms_));

  const double total = kernels::sum(d.probs_);
  if (std::fabs(total - 1.0) > sum_tol)
    throw std::invalid_argument("DiscreteDistribution: probabilities sum to " +
                                std::to_string(total));
  return d;
}

double DiscreteDistribution::moment(int k) const {
  if (k < 0) throw std::invalid_argument("DiscreteDistribution::moment: k must be >= 0");
  return kernels::weighted_pow_sum(probs_, atoms_, k);
}

double DiscreteDistribution::abs_moment(int k) const {
  if (k < 0) throw std::invalid_argument("DiscreteDistribution::abs_moment: k must be >= 0");
  return kernels::weighted_abs_pow_sum(probs_, atoms_, k);
}

DiscreteDistribution DiscreteDistribution::scaled(double c) const {
  if (c == 0.0) {
    DiscreteDistribution point;
    point.atoms_ = {0.0};
    point.probs_ = {1.0};
    return point;  // law of 0 * X
  }
  DiscreteDistribution d;
  d.atoms_.resize(atoms_.size());
  d.probs_ = probs_;
  kernels::affine(c, 0.0, atoms_, d.atoms_);
  if (c < 0.0) {
    std::reverse(d.atoms_.begin(), d.atoms_.end());
    std::reverse(d.probs_.begin(), d.probs_.end());
  }
  return d;
}

EpsilonTable moments(const DiscreteDistribution& dist, int p) {
  if (p < 1) throw std::invalid_argument("moments: p must be >= 1");
  EpsilonTable t;
  t.p = p;
  t.eps.resize(p + 1);
  t.abs_moments.resize(p + 2);
  for (int k = 0; k <= p; ++k) t.eps[k] = dist.moment(k) - specfun::normal_moment(k);
  for (int k = 0; k <= p + 1; ++k) t.abs_moments[k] = dist.abs_moment(k);
  return t;
}

DiscreteDistribution hermite_distribution(int m) {
  if (m < 2 || m > 16)
    throw std::invalid_argument("hermite_distribution: m must be in [2, 16]");
  if (m == 2) return DiscreteDistribution::from_atoms({-1.0, 1.0}, {0.5, 0.5});
  quadrature::Rule rule = quadrature::gauss_hermite_prob(m);
  // enforce the exact +- symmetry of the law (Newton leaves ulp-level skew)
  for (int i = 0; i < m / 2; ++i) {
    const double a = 0.5 * (rule.nodes[m - 1 - i] - rule.nodes[i]);
    rule.nodes[i] = -a;
    rule.nodes[m - 1 - i] = a;
    const double w = 0.5 * (rule.weights[i] + rule.weights[m - 1 - i]);
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  DiscreteDistribution d = DiscreteDistribution::from_atoms(rule.nodes, rule.weights);
  // construction check: the law must reproduce normal moments through 2m-1
  for (int k = 0; k <= 2 * m - 1; ++k) {
    const double want = specfun::normal_moment(k);
    const double got = d.moment(k);
    if (std::fabs(got - want) > 1e-9 * std::max(1.0, std::fabs(want)))
      throw std::runtime_error("hermite_distribution: moment validation failed at k=" +
                               std::to_string(k));
  }
  return d;
}

DiscreteDistribution rademacher() { return hermite_distribution(2); }

DiscreteDistribution convolve(const DiscreteDistribution& x, const DiscreteDistribution& y,
                              double merge_tol_rel, std::size_t support_cap) {
  if (x.size() * y.size() > support_cap)
    throw SupportCapError("convolve: projected support " +
                          std::to_string(x.size() * y.size()) + " exceeds cap " +
                          std::to_string(support_cap));
  // accumulate |y| shifted copies of x, keeping the running result sorted
  std::vector<double> atoms, probs;
  for (std::size_t j = 0; j < y.size(); ++j) {
    std::vector<double> shifted(x.size());
    kernels::affine(1.0, y.atoms()[j], x.atoms(), shifted);
    std::vector<double> w(x.size());
    kernels::affine(y.probs()[j], 0.0, x.probs(), w);

    std::vector<double> na(atoms.size() + shifted.size()), np(atoms.size() + shifted.size());
    std::size_t a = 0, b = 0, o = 0;
    while (a < atoms.size() || b < shifted.size()) {
      const bool take_a = b == shifted.size() ||
                          (a < atoms.size() && atoms[a] <= shifted[b]);
      if (take_a) {
        na[o] = atoms[a];
        np[o] = probs[a];
        ++a;
      } else {
        na[o] = shifted[b];
        np[o] = w[b];
        ++b;
      }
      ++o;
    }
    atoms = std::move(na);
    probs = std::move(np);
    merge_sorted(atoms, probs, merge_tol_rel * max_abs(atoms));
  }
  return DiscreteDistribution::from_atoms(std::move(atoms), std::move(probs), merge_tol_rel,
                                          1e-9);
}

DiscreteDistribution convolve_iid(const DiscreteDistribution& dist, long n,
                                  double merge_tol_rel, std::size_t support_cap) {
  if (n < 1) throw std::invalid_argument("convolve_iid: n must be >= 1");
  // binary-doubling over the bits of n: S_n assembled from dist, dist^2, dist^4, ...
  DiscreteDistribution acc = dist;  // running partial sum law (unscaled)
  bool have_acc = false;
  DiscreteDistribution pow2 = dist;  // dist convolved 2^bit times
  long remaining = n;
  while (true) {
    if (remaining & 1) {
      acc = have_acc ? convolve(acc, pow2, merge_tol_rel, support_cap) : pow2;
      have_acc = true;
    }
    remaining >>= 1;
    if (remaining == 0) break;
    pow2 = convolve(pow2, pow2, merge_tol_rel, support_cap);
  }
  return acc.scaled(1.0 / std::sqrt(double(n)));
}

DiscreteDistribution load_distribution_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_distribution_csv: cannot open " + path);
  std::vector<double> atoms, probs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, p;
    if (!(row >> a >> p)) {
      if (first) {
        first = false;  // header
        continue;
      }
      throw std::runtime_error("load_distribution_csv: malformed line '" + line + "'");
    }
    first = false;
    atoms.push_back(a);
    probs.push_back(p);
  }
  return DiscreteDistribution::from_atoms(std::move(atoms), std::move(probs));
}

void save_distribution_csv(const DiscreteDistribution& dist, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_distribution_csv: cannot open " + path);
  out << "atom,prob\n";
  char buf[64];
  for (std::size_t i = 0; i < dist.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", dist.atoms()[i], dist.probs()[i]);
    out << buf;
  }
  if (!out) throw std::runtime_error("save_distribution_csv: write failed for " + path);
}

}  // namespace stein_bounds
