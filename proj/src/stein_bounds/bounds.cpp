#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernels.hpp"
#include "specfun.hpp"

namespace stein_bounds {

namespace {

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

double inv_factorial(int m) {
  if (m <= 170) return 1.0 / factorial(m);
  return std::exp(-specfun::log_gamma(static_cast<double>(m) + 1.0));
}

// norms of h through order `top`, nullopt where the function cannot supply one
std::vector<std::optional<double>> collect_norms(const TestFunction& h, int top) {
  std::vector<std::optional<double>> norms(static_cast<std::size_t>(top) + 1);
  for (int j = 0; j <= top; ++j)
    if (j <= h.max_order()) norms[static_cast<std::size_t>(j)] = h.sup_norm(j);
  return norms;
}

void check_table(const EpsilonTable& t, int p, const char* who) {
  if (t.p < p || static_cast<int>(t.eps.size()) < p + 1 ||
      static_cast<int>(t.abs_moments.size()) < p + 2)
    throw std::invalid_argument(std::string(who) + ": moment table does not cover order p");
}

// shared assembly: given per-row epsilon tables (weight = how many summands
// each row stands for), compute the three bound pieces
BoundReport assemble31(const std::vector<const EpsilonTable*>& rows,
                       const std::vector<long>& weights, const std::vector<int>& labels,
                       const TestFunction& h, long n, int p) {
  if (n < 1) throw std::invalid_argument("theorem31_bound: n must be >= 1");
  if (p < 1) throw std::invalid_argument("theorem31_bound: p must be >= 1");
  for (const auto* t : rows) check_table(*t, p, "theorem31_bound");

  auto norms = collect_norms(h, p + 1);
  if (!norms[1]) throw std::invalid_argument("theorem31_bound: ||h'|| unavailable");

  BoundReport report;
  std::vector<NkChoice> nk(static_cast<std::size_t>(p) + 1);
  for (int k = 1; k <= p; ++k) nk[static_cast<std::size_t>(k)] = n_k(norms, k);
  report.nk_branches.assign(nk.begin() + 1, nk.end());

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  double first = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    first += static_cast<double>(weights[r]) * std::fabs(rows[r]->eps[1]);
  report.first_moment_term = *norms[1] / sqrt_n * first;

  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int k = 1; k <= p - 1; ++k) {
      const auto& e = rows[r]->eps;
      const double dev = std::fabs(k * e[static_cast<std::size_t>(k - 1)] -
                                   e[static_cast<std::size_t>(k + 1)]);
      const double scale = nk[static_cast<std::size_t>(k)].value * inv_factorial(k) *
                           std::pow(static_cast<double>(n), -(k + 1) / 2.0);
      report.inner_terms.push_back(
          {labels[r], -1, k, static_cast<double>(weights[r]) * scale * dev});
    }
  }

  double rem = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& m = rows[r]->abs_moments;
    rem += static_cast<double>(weights[r]) *
           (m[static_cast<std::size_t>(p - 1)] * inv_factorial(p - 1) +
            m[static_cast<std::size_t>(p + 1)] * inv_factorial(p));
  }
  report.remainder_term =
      nk[static_cast<std::size_t>(p)].value * std::pow(static_cast<double>(n), -(p + 1) / 2.0) * rem;

  report.total = report.first_moment_term;
  for (const auto& t : report.inner_terms) report.total += t.value;
  report.total += report.remainder_term;
  return report;
}

}  // namespace

NkChoice n_k(const std::vector<std::optional<double>>& h_norms, int k) {
  if (k < 1) throw std::invalid_argument("n_k: k must be >= 1");
  auto norm = [&](int j) -> std::optional<double> {
    if (j < 0 || j >= static_cast<int>(h_norms.size())) return std::nullopt;
    return h_norms[static_cast<std::size_t>(j)];
  };
  NkChoice best;
  best.k = k;
  bool have = false;
  auto offer = [&](std::optional<double> n_j, double factor, const char* label) {
    if (!n_j) return;
    const double v = factor * *n_j;
    if (!have || v < best.value) {
      best.value = v;
      best.branch = label;
      have = true;
    }
  };
  offer(norm(k - 1), 3.0, "3h^(k-1)");
  offer(norm(k), specfun::gamma_ratio_constant(k + 1).value, "gamma*h^(k)");
  offer(norm(k + 1), 1.0 / (k + 1), "h^(k+1)/(k+1)");
  if (!have) throw std::invalid_argument("n_k: no norm available for any branch");
  best.stated_only = (k == 1 && best.branch == "3h^(k-1)");
  return best;
}

NkChoice m_jk(double norm_k, double norm_kp1, int j, int k) {
  if (k < 1) throw std::invalid_argument("m_jk: k must be >= 1");
  NkChoice best;
  best.k = k;
  best.j = j;
  const double mid = specfun::gamma_ratio_constant(k + 1).value * norm_k;
  const double right = norm_kp1 / (k + 1);
  if (mid <= right) {
    best.value = mid;
    best.branch = "gamma*h^(k)";
  } else {
    best.value = right;
    best.branch = "h^(k+1)/(k+1)";
  }
  return best;
}

BoundReport theorem31_bound(const std::vector<EpsilonTable>& eps, const TestFunction& h,
                            long n, int p) {
  if (static_cast<long>(eps.size()) != n)
    throw std::invalid_argument("theorem31_bound: need one moment table per summand");
  std::vector<const EpsilonTable*> rows(eps.size());
  std::vector<long> weights(eps.size(), 1);
  std::vector<int> labels(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    rows[i] = &eps[i];
    labels[i] = static_cast<int>(i);
  }
  return assemble31(rows, weights, labels, h, n, p);
}

BoundReport theorem31_bound(const EpsilonTable& eps, const TestFunction& h, long n, int p) {
  return assemble31({&eps}, {n}, {-1}, h, n, p);
}

double corollary32_bound(const EpsilonTable& eps, const TestFunction& h, long n, int p) {
  if (n < 1) throw std::invalid_argument("corollary32_bound: n must be >= 1");
  if (p < 1) throw std::invalid_argument("corollary32_bound: p must be >= 1");
  check_table(eps, p, "corollary32_bound");
  for (int k = 1; k <= p; ++k)
    if (std::fabs(eps.eps[static_cast<std::size_t>(k)]) > 1e-10)
      throw std::invalid_argument("corollary32_bound: moment " + std::to_string(k) +
                                  " does not match the normal moment");
  auto norms = collect_norms(h, p + 1);
  const double np = n_k(norms, p).value;
  const double per = eps.abs_moments[static_cast<std::size_t>(p - 1)] * inv_factorial(p - 1) +
                     eps.abs_moments[static_cast<std::size_t>(p + 1)] * inv_factorial(p);
  return np * std::pow(static_cast<double>(n), -(p + 1) / 2.0) * static_cast<double>(n) * per;
}

Theorem34Result theorem34_bound(const std::function<double(int)>& eps,
                                const std::function<double(int)>& h_norm, double C,
                                double alpha, double delta, int K, long n) {
  if (K < 2) throw std::invalid_argument("theorem34_bound: K must be >= 2");
  if (delta <= 0.0) throw std::invalid_argument("theorem34_bound: delta must be positive");
  if (n < 1) throw std::invalid_argument("theorem34_bound: n must be >= 1");

  const double envelope_scale = C * std::pow(static_cast<double>(n), -alpha);

  Theorem34Result out;
  out.checked_k_max = K;
  out.condition_checked_ok = true;
  for (int k = 1; k <= K; ++k) {
    const double rhs =
        envelope_scale * std::pow(static_cast<double>(k), -delta) * factorial(k - 1);
    const double e = std::fabs(eps(k));
    if (h_norm(k) * e > rhs * (1.0 + 1e-12) || h_norm(k + 2) * e > rhs * (1.0 + 1e-12)) {
      out.condition_checked_ok = false;
      break;
    }
  }

  out.bound = h_norm(1) * std::fabs(eps(1));
  for (int k = 1; k <= K; ++k)
    out.bound +=
        h_norm(k + 1) * inv_factorial(k + 1) * std::fabs(k * eps(k - 1) - eps(k + 1));
  out.tail = 2.0 * envelope_scale * std::pow(static_cast<double>(K), -delta) / delta;
  out.total = out.bound + out.tail;
  return out;
}

CovarianceModel covariance_model(std::vector<double> sigma, int d) {
  if (d < 1) throw std::invalid_argument("covariance_model: d must be >= 1");
  if (static_cast<int>(sigma.size()) != d * d)
    throw std::invalid_argument("covariance_model: matrix size does not match d");
  double scale = 0.0;
  for (double v : sigma) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) throw std::invalid_argument("covariance_model: zero matrix");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::fabs(sigma[i * d + j] - sigma[j * d + i]) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("covariance_model: matrix is not symmetric");

  // cyclic Jacobi on a working copy; V accumulates the rotations
  std::vector<double> a = sigma;
  std::vector<double> v(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) v[i * d + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) s += 2.0 * a[i * d + j] * a[i * d + j];
    return std::sqrt(s);
  };
  double fro = 0.0;
  for (double x : a) fro += x * x;
  fro = std::sqrt(fro);

  for (int sweep = 0; sweep < 100 && off_norm() > 1e-13 * fro; ++sweep) {
    for (int pq = 0; pq < d * (d - 1) / 2; ++pq) {
      // unravel sweep order (p, q), p < q
      int p = 0, q = 1, c = pq;
      for (p = 0; p < d - 1; ++p) {
        if (c < d - 1 - p) {
          q = p + 1 + c;
          break;
        }
        c -= d - 1 - p;
      }
      const double apq = a[p * d + q];
      if (apq == 0.0) continue;
      const double app = a[p * d + p], aqq = a[q * d + q];
      const double theta = (aqq - app) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
      const double cs = 1.0 / std::sqrt(t * t + 1.0);
      const double sn = t * cs;
      for (int i = 0; i < d; ++i) {
        const double aip = a[i * d + p], aiq = a[i * d + q];
        a[i * d + p] = cs * aip - sn * aiq;
        a[i * d + q] = sn * aip + cs * aiq;
      }
      for (int i = 0; i < d; ++i) {
        const double api = a[p * d + i], aqi = a[q * d + i];
        a[p * d + i] = cs * api - sn * aqi;
        a[q * d + i] = sn * api + cs * aqi;
      }
      for (int i = 0; i < d; ++i) {
        const double vip = v[i * d + p], viq = v[i * d + q];
        v[i * d + p] = cs * vip - sn * viq;
        v[i * d + q] = sn * vip + cs * viq;
      }
    }
  }

  std::vector<double> lam(static_cast<std::size_t>(d));
  double lam_min = a[0];
  for (int i = 0; i < d; ++i) {
    lam[static_cast<std::size_t>(i)] = a[i * d + i];
    lam_min = std::min(lam_min, a[i * d + i]);
  }
  if (lam_min <= 0.0)
    throw std::invalid_argument("covariance_model: matrix is not positive definite");

  CovarianceModel model;
  model.d = d;
  model.sigma = std::move(sigma);
  model.inv_sqrt.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int m = 0; m < d; ++m)
        s += v[i * d + m] * v[j * d + m] / std::sqrt(lam[static_cast<std::size_t>(m)]);
      model.inv_sqrt[i * d + j] = s;
    }
  model.row_norms.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    std::span<const double> row(model.inv_sqrt.data() + i * d, static_cast<std::size_t>(d));
    model.row_norms[static_cast<std::size_t>(i)] = std::sqrt(kernels::dot(row, row));
  }
  model.op_norm = 1.0 / std::sqrt(lam_min);
  return model;
}

MvnConstantCatalog mvn_constant_catalog(const CovarianceModel& model, const MvnNormData& data,
                                        int k) {
  if (k < 1) throw std::invalid_argument("mvn_constant_catalog: k must be >= 1");
  MvnConstantCatalog cat;
  cat.k = k;
  const double half_pi_root = std::sqrt(std::acos(-1.0) / 2.0);
  cat.first_partial.resize(static_cast<std::size_t>(model.d));
  for (int i = 0; i < model.d; ++i)
    cat.first_partial[static_cast<std::size_t>(i)] =
        half_pi_root * model.row_norms[static_cast<std::size_t>(i)] * data.centered_norm;
  cat.operator_first = half_pi_root * model.op_norm * data.centered_norm;
  if (k >= 2) {
    const double gk = specfun::gamma_ratio_constant(k).value;
    if (static_cast<int>(data.index_tuple.size()) == k && data.mixed_partial_norm) {
      double best = 0.0;
      bool have = false;
      std::vector<int> sub(static_cast<std::size_t>(k) - 1);
      for (int l = 0; l < k; ++l) {
        for (int m = 0, w = 0; m < k; ++m)
          if (m != l) sub[static_cast<std::size_t>(w++)] = data.index_tuple[static_cast<std::size_t>(m)];
        const int il = data.index_tuple[static_cast<std::size_t>(l)];
        const double cand =
            model.row_norms[static_cast<std::size_t>(il)] * data.mixed_partial_norm(sub);
        if (!have || cand < best) {
          best = cand;
          have = true;
        }
      }
      cat.mixed_partial = gk * best;
    }
    if (data.m_km1_h) cat.operator_k = gk * model.op_norm * *data.m_km1_h;
  }
  return cat;
}

namespace {

BoundReport assemble35(const std::vector<std::vector<const EpsilonTable*>>& rows,
                       const std::vector<long>& weights, const std::vector<int>& labels,
                       const DirectionalFunction& h, long n, int p) {
  if (n < 1) throw std::invalid_argument("theorem35_bound: n must be >= 1");
  if (p < 1) throw std::invalid_argument("theorem35_bound: p must be >= 1");
  const int d = h.dimension();
  if (h.max_order() < p + 1)
    throw std::invalid_argument("theorem35_bound: h lacks derivatives through order p+1");
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d)
      throw std::invalid_argument("theorem35_bound: need one moment table per coordinate");
    for (const auto* t : row) check_table(*t, p, "theorem35_bound");
  }

  BoundReport report;
  // M_{j,k} per coordinate and order
  std::vector<std::vector<NkChoice>> m(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    m[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(p) + 1);
    for (int k = 1; k <= p; ++k)
      m[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
          m_jk(h.partial_norm(j, k), h.partial_norm(j, k + 1), j, k);
  }
  for (int j = 0; j < d; ++j)
    report.nk_branches.insert(report.nk_branches.end(),
                              m[static_cast<std::size_t>(j)].begin() + 1,
                              m[static_cast<std::size_t>(j)].end());

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  double first = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < d; ++j)
      first += static_cast<double>(weights[r]) *
               std::fabs(rows[r][static_cast<std::size_t>(j)]->eps[1]) * h.partial_norm(j, 1);
  report.first_moment_term = first / sqrt_n;

  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < d; ++j)
      for (int k = 1; k <= p - 1; ++k) {
        const auto& e = rows[r][static_cast<std::size_t>(j)]->eps;
        const double dev = std::fabs(k * e[static_cast<std::size_t>(k - 1)] -
                                     e[static_cast<std::size_t>(k + 1)]);
        const double scale = m[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].value *
                             inv_factorial(k) *
                             std::pow(static_cast<double>(n), -(k + 1) / 2.0);
        report.inner_terms.push_back(
            {labels[r], j, k, static_cast<double>(weights[r]) * scale * dev});
      }

  double rem = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int j = 0; j < d; ++j) {
      const auto& mm = rows[r][static_cast<std::size_t>(j)]->abs_moments;
      rem += static_cast<double>(weights[r]) *
             m[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)].value *
             (mm[static_cast<std::size_t>(p - 1)] * inv_factorial(p - 1) +
              mm[static_cast<std::size_t>(p + 1)] * inv_factorial(p));
    }
  report.remainder_term = std::pow(static_cast<double>(n), -(p + 1) / 2.0) * rem;

  report.total = report.first_moment_term;
  for (const auto& t : report.inner_terms) report.total += t.value;
  report.total += report.remainder_term;
  return report;
}

}  // namespace

BoundReport theorem35_bound(const std::vector<std::vector<EpsilonTable>>& eps,
                            const DirectionalFunction& h, long n, int p) {
  if (static_cast<long>(eps.size()) != n)
    throw std::invalid_argument("theorem35_bound: need one moment-table row per summand");
  std::vector<std::vector<const EpsilonTable*>> rows(eps.size());
  std::vector<long> weights(eps.size(), 1);
  std::vector<int> labels(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    rows[i].reserve(eps[i].size());
    for (const auto& t : eps[i]) rows[i].push_back(&t);
    labels[i] = static_cast<int>(i);
  }
  return assemble35(rows, weights, labels, h, n, p);
}

BoundReport theorem35_bound(const std::vector<EpsilonTable>& eps_by_coord,
                            const DirectionalFunction& h, long n, int p) {
  std::vector<std::vector<const EpsilonTable*>> rows(1);
  rows[0].reserve(eps_by_coord.size());
  for (const auto& t : eps_by_coord) rows[0].push_back(&t);
  return assemble35(rows, {n}, {-1}, h, n, p);
}

nlohmann::ordered_json to_json(const BoundReport& report) {
  nlohmann::ordered_json j;
  j["total"] = report.total;
  j["first_moment_term"] = report.first_moment_term;
  const bool multivariate = !report.inner_terms.empty()
                                ? report.inner_terms.front().j >= 0
                                : (!report.nk_branches.empty() && report.nk_branches.front().j >= 0);
  j["inner_terms"] = nlohmann::ordered_json::array();
  for (const auto& t : report.inner_terms) {
    nlohmann::ordered_json e;
    e["i"] = t.i;
    if (multivariate) e["j"] = t.j;
    e["k"] = t.k;
    e["value"] = t.value;
    j["inner_terms"].push_back(std::move(e));
  }
  j["remainder_term"] = report.remainder_term;
  j["nk_branches"] = nlohmann::ordered_json::array();
  for (const auto& c : report.nk_branches) {
    nlohmann::ordered_json e;
    if (multivariate) e["j"] = c.j;
    e["k"] = c.k;
    e["value"] = c.value;
    e["branch"] = c.branch;
    e["stated_only"] = c.stated_only;
    j["nk_branches"].push_back(std::move(e));
  }
  return j;
}

BoundReport bound_report_from_json(const nlohmann::ordered_json& j) {
  BoundReport report;
  report.total = j.at("total").get<double>();
  report.first_moment_term = j.at("first_moment_term").get<double>();
  for (const auto& e : j.at("inner_terms")) {
    InnerTerm t;
    t.i = e.at("i").get<int>();
    t.j = e.contains("j") ? e.at("j").get<int>() : -1;
    t.k = e.at("k").get<int>();
    t.value = e.at("value").get<double>();
    report.inner_terms.push_back(t);
  }
  report.remainder_term = j.at("remainder_term").get<double>();
  for (const auto& e : j.at("nk_branches")) {
    NkChoice c;
    c.j = e.contains("j") ? e.at("j").get<int>() : -1;
    c.k = e.at("k").get<int>();
    c.value = e.at("value").get<double>();
    c.branch = e.at("branch").get<std::string>();
    c.stated_only = e.value("stated_only", false);
    report.nk_branches.push_back(c);
  }
  return report;
}

nlohmann::ordered_json to_json(const Theorem34Result& result) {
  nlohmann::ordered_json j;
  j["bound"] = result.bound;
  j["tail"] = result.tail;
  j["total"] = result.total;
  j["condition_checked_ok"] = result.condition_checked_ok;
  j["checked_k_max"] = result.checked_k_max;
  return j;
}

Theorem34Result theorem34_result_from_json(const nlohmann::ordered_json& j) {
  Theorem34Result r;
  r.bound = j.at("bound").get<double>();
  r.tail = j.at("tail").get<double>();
  r.total = j.at("total").get<double>();
  r.condition_checked_ok = j.at("condition_checked_ok").get<bool>();
  r.checked_k_max = j.at("checked_k_max").get<int>();
  return r;
}

}  // namespace stein_bounds
