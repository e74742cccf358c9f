#include "clt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "kernels.hpp"

namespace stein_bounds {

namespace {

double mean_under(const DiscreteDistribution& law, const std::function<double(double)>& g) {
  const auto& atoms = law.atoms();
  const auto& probs = law.probs();
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) acc += probs[i] * g(atoms[i]);
  return acc;
}

}  // namespace

double exact_distance(const DiscreteDistribution& dist, const TestFunction& h, long n,
                      std::size_t support_cap) {
  auto phi = h.phi_h();
  if (!phi) throw std::invalid_argument("exact_distance: test function has no phi_h");
  DiscreteDistribution wn = convolve_iid(dist, n, 1e-12, support_cap);
  double mean = mean_under(wn, [&](double w) { return h.evaluate(0, w); });
  return std::fabs(mean - *phi);
}

double exact_distance(const DiscreteDistribution& dist, const DirectionalFunction& h, long n,
                      std::size_t support_cap) {
  auto phi = h.phi_h();
  if (!phi) throw std::invalid_argument("exact_distance: test function has no phi_h");
  const auto& u = h.direction();
  // law of <u, W_n> = sum_j u_j * (iid coordinate sum), convolved across j
  DiscreteDistribution coord = convolve_iid(dist, n, 1e-12, support_cap);
  DiscreteDistribution acc = coord.scaled(u[0]);
  for (std::size_t j = 1; j < u.size(); ++j)
    acc = convolve(acc, coord.scaled(u[j]), 1e-12, support_cap);
  double mean = mean_under(acc, [&](double t) { return h.g().evaluate(0, t); });
  return std::fabs(mean - *phi);
}

std::uint64_t counter_word(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 output function on the stream seed + (index+1) * golden ratio
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t word) { return static_cast<double>(word >> 11) * 0x1.0p-53; }

Sampler discrete_sampler(const DiscreteDistribution& dist) {
  std::vector<double> cdf(dist.probs().size());
  double run = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    run += dist.probs()[i];
    cdf[i] = run;
  }
  cdf.back() = 1.0;
  std::vector<double> atoms = dist.atoms();
  return [cdf = std::move(cdf), atoms = std::move(atoms)](std::uint64_t word) {
    double v = uniform01(word);
    std::size_t i = std::lower_bound(cdf.begin(), cdf.end(), v) - cdf.begin();
    if (i >= atoms.size()) i = atoms.size() - 1;
    return atoms[i];
  };
}

McDistance mc_distance(const Sampler& sampler, const TestFunction& h, long n, long reps,
                       std::uint64_t seed, int threads) {
  if (reps < 1000) throw std::invalid_argument("mc_distance: reps must be >= 1000");
  auto phi = h.phi_h();
  if (!phi) throw std::invalid_argument("mc_distance: test function has no phi_h");
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;

  const long block_size = 65536;
  const long n_blocks = (reps + block_size - 1) / block_size;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  struct Partial {
    double sum = 0.0, sumsq = 0.0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(n_blocks));

  auto run_block = [&](long b) {
    const long lo = b * block_size;
    const long hi = std::min(reps, lo + block_size);
    double s = 0.0, ss = 0.0;
    for (long r = lo; r < hi; ++r) {
      double acc = 0.0;
      const std::uint64_t base = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(n);
      for (long i = 0; i < n; ++i) acc += sampler(counter_word(seed, base + i));
      const double v = h.evaluate(0, acc * inv_sqrt_n);
      s += v;
      ss += v * v;
    }
    partials[static_cast<std::size_t>(b)] = {s, ss};
  };

  if (threads == 1 || n_blocks == 1) {
    for (long b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(std::min<long>(threads, n_blocks));
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (;;) {
          long b = next.fetch_add(1);
          if (b >= n_blocks) return;
          run_block(b);
        }
      });
    for (auto& th : pool) th.join();
  }

  // combine in block order: the fold is fixed regardless of scheduling
  double sum = 0.0, sumsq = 0.0;
  for (const auto& p : partials) {
    sum += p.sum;
    sumsq += p.sumsq;
  }
  const double m = sum / static_cast<double>(reps);
  double var = (sumsq - static_cast<double>(reps) * m * m) / static_cast<double>(reps - 1);
  if (var < 0.0) var = 0.0;  // degenerate h: roundoff can push it barely negative
  McDistance out;
  out.estimate = std::fabs(m - *phi);
  out.ci = 3.0 * std::sqrt(var / static_cast<double>(reps));
  return out;
}

RateFit rate_fit(const DistanceSeries& series) {
  const auto& pts = series.points;
  if (pts.size() < 4) throw std::invalid_argument("rate_fit: need at least 4 points");
  std::vector<double> x(pts.size()), y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].distance <= 0.0)
      throw std::invalid_argument("rate_fit: distances must be positive");
    x[i] = std::log(static_cast<double>(pts[i].n));
    y[i] = std::log(pts[i].distance);
  }
  const double np = static_cast<double>(pts.size());
  const double mx = kernels::sum(x) / np;
  const double my = kernels::sum(y) / np;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = static_cast<int>(pts.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    fit.max_abs_residual =
        std::max(fit.max_abs_residual, std::fabs(y[i] - fit.slope * x[i] - fit.intercept));
  return fit;
}

void save_distance_series_csv(const DistanceSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "n,distance,method,ci\n";
  char buf[64];
  for (const auto& p : series.points) {
    out << p.n << ',';
    std::snprintf(buf, sizeof buf, "%.17g", p.distance);
    out << buf << ',' << p.method << ',';
    std::snprintf(buf, sizeof buf, "%.17g", p.ci);
    out << buf << '\n';
  }
}

DistanceSeries load_distance_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  DistanceSeries series;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string n_s, d_s, m_s, ci_s;
    std::getline(ss, n_s, ',');
    std::getline(ss, d_s, ',');
    std::getline(ss, m_s, ',');
    std::getline(ss, ci_s, ',');
    if (first) {
      first = false;
      if (n_s == "n") continue;  // header
    }
    DistancePoint p;
    p.n = std::stol(n_s);
    p.distance = std::stod(d_s);
    p.method = m_s;
    p.ci = ci_s.empty() ? 0.0 : std::stod(ci_s);
    series.points.push_back(p);
  }
  return series;
}

nlohmann::ordered_json to_json(const RateFit& fit) {
  nlohmann::ordered_json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["max_abs_residual"] = fit.max_abs_residual;
  j["n_points"] = fit.n_points;
  return j;
}

RateFit rate_fit_from_json(const nlohmann::ordered_json& j) {
  RateFit fit;
  fit.slope = j.at("slope").get<double>();
  fit.intercept = j.at("intercept").get<double>();
  fit.max_abs_residual = j.at("max_abs_residual").get<double>();
  fit.n_points = j.at("n_points").get<int>();
  return fit;
}

}  // namespace stein_bounds
