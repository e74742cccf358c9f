#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "bounds.hpp"
#include "clt.hpp"
#include "specfun.hpp"

using namespace stein_bounds;

namespace {

std::vector<std::optional<double>> unit_norms(int top) {
  return std::vector<std::optional<double>>(static_cast<std::size_t>(top) + 1, 1.0);
}

}  // namespace

TEST_CASE("three-way minimum picks the documented branches") {
  auto u = unit_norms(8);
  auto k3 = n_k(u, 3);
  CHECK(k3.value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(k3.branch == "h^(k+1)/(k+1)");
  CHECK_FALSE(k3.stated_only);

  auto k5 = n_k(u, 5);
  CHECK(k5.value == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(k5.branch == "h^(k+1)/(k+1)");

  auto missing_top = unit_norms(8);
  missing_top[4] = std::nullopt;
  auto k3m = n_k(missing_top, 3);
  CHECK(k3m.value == doctest::Approx(0.5319230405352436).epsilon(1e-10));
  CHECK(k3m.branch == "gamma*h^(k)");

  auto k1 = n_k(u, 1);
  CHECK(k1.value == doctest::Approx(0.5).epsilon(1e-14));  // ||h''||/2
  CHECK_FALSE(k1.stated_only);

  std::vector<std::optional<double>> only_h0(1, 1.0);
  auto k1s = n_k(only_h0, 1);
  CHECK(k1s.value == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(k1s.branch == "3h^(k-1)");
  CHECK(k1s.stated_only);

  std::vector<std::optional<double>> none(6);
  CHECK_THROWS_AS(n_k(none, 2), std::invalid_argument);
}

TEST_CASE("two-branch multivariate minimum") {
  auto m3 = m_jk(1.0, 1.0, 0, 3);
  CHECK(m3.value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(m3.branch == "h^(k+1)/(k+1)");
  auto m1 = m_jk(1.0, 10.0, 1, 1);
  CHECK(m1.branch == "gamma*h^(k)");
  CHECK(m1.value == doctest::Approx(specfun::gamma_ratio_constant(2).value).epsilon(1e-13));
}

TEST_CASE("golden value: Rademacher + cos at n = 100, p = 3") {
  auto h = cosine_family(1.0);
  auto table = moments(rademacher(), 3);
  auto report = theorem31_bound(table, *h, 100, 3);
  CHECK(std::fabs(report.total - 1.0 / 600.0) <= 1e-12 / 600.0);
  CHECK(report.first_moment_term == 0.0);
  CHECK(report.remainder_term == doctest::Approx(1.0 / 600.0).epsilon(1e-12));
  REQUIRE(report.nk_branches.size() == 3);
  CHECK(report.nk_branches[2].branch == "h^(k+1)/(k+1)");
}

TEST_CASE("per-summand and iid forms agree") {
  auto h = cosine_family(1.0);
  auto table = moments(hermite_distribution(4), 3);
  const long n = 7;
  std::vector<EpsilonTable> rows(static_cast<std::size_t>(n), table);
  auto a = theorem31_bound(rows, *h, n, 3);
  auto b = theorem31_bound(table, *h, n, 3);
  CHECK(a.total == doctest::Approx(b.total).epsilon(1e-14));
  CHECK(a.inner_terms.size() == 2 * 7);
  CHECK(b.inner_terms.size() == 2);
  CHECK(b.inner_terms[0].i == -1);
}

TEST_CASE("report additivity is exact") {
  auto h = cosine_family(1.3);
  auto table = moments(hermite_distribution(2), 4);
  auto report = theorem31_bound(table, *h, 25, 4);
  double total = report.first_moment_term;
  for (const auto& t : report.inner_terms) {
    CHECK(t.value >= 0.0);
    total += t.value;
  }
  total += report.remainder_term;
  CHECK(report.total == total);
  CHECK(report.first_moment_term >= 0.0);
  CHECK(report.remainder_term >= 0.0);
}

TEST_CASE("degenerate moment table gives zero") {
  EpsilonTable t;
  t.p = 3;
  t.eps = {0.0, 0.0, 0.0, 0.0};
  t.abs_moments = {0.0, 0.0, 0.0, 0.0, 0.0};
  auto h = cosine_family(1.0);
  auto report = theorem31_bound(t, *h, 10, 3);
  CHECK(report.total == 0.0);
}

TEST_CASE("matched-moments specialization") {
  auto h = cosine_family(1.0);
  auto r3 = moments(rademacher(), 3);
  CHECK(corollary32_bound(r3, *h, 10, 3) == doctest::Approx(1.0 / 60.0).epsilon(1e-12));
  CHECK(corollary32_bound(r3, *h, 20, 3) / corollary32_bound(r3, *h, 40, 3) ==
        doctest::Approx(2.0).epsilon(1e-13));

  auto h5 = moments(hermite_distribution(3), 5);
  CHECK(corollary32_bound(h5, *h, 1, 5) == doctest::Approx(0.2 / 6.0).epsilon(1e-11));
  CHECK(corollary32_bound(h5, *h, 8, 5) == doctest::Approx(0.2 / 6.0 / 64.0).epsilon(1e-11));

  // Rademacher matches only three moments: p = 5 must be rejected
  auto r5 = moments(rademacher(), 5);
  CHECK_THROWS_AS(corollary32_bound(r5, *h, 10, 5), std::invalid_argument);
}

TEST_CASE("more matched moments eventually win") {
  auto h = cosine_family(1.0);
  auto t = moments(hermite_distribution(3), 5);
  for (long n : {4L, 64L, 1024L})
    CHECK(corollary32_bound(t, *h, n, 5) < corollary32_bound(t, *h, n, 3));
}

TEST_CASE("truncated series bound: zero deficits") {
  auto h = cosine_family(1.0);
  auto zero = [](int) { return 0.0; };
  auto norm = [&](int j) { return h->sup_norm(j); };
  auto r = theorem34_bound(zero, norm, 1.0, 1.0, 2.0, 10, 100);
  CHECK(r.bound == 0.0);
  CHECK(r.tail == doctest::Approx(2.0 / 100.0 * 0.01 / 2.0).epsilon(1e-13));
  CHECK(r.total == r.tail);
  CHECK(r.condition_checked_ok);
  CHECK(r.checked_k_max == 10);
}

TEST_CASE("truncated series bound: envelope-saturating sequence") {
  auto h = cosine_family(1.0);
  auto norm = [&](int j) { return h->sup_norm(j); };
  const double zeta3 = 1.2020569031595943;
  for (long n : {10L, 100L}) {
    auto eps = [n, &norm](int k) {
      if (k < 1) return 0.0;
      double fact = 1.0;
      for (int i = 2; i < k; ++i) fact *= i;
      return fact / (static_cast<double>(n) * k * k * std::max(norm(k), norm(k + 2)));
    };
    auto r = theorem34_bound(eps, norm, 1.0, 1.0, 2.0, 20, n);
    CHECK(r.condition_checked_ok);
    CHECK(r.total <= (1.5 + 2.0 * zeta3) / static_cast<double>(n) * (1.0 + 1e-9));
    // alpha = 1: doubling n halves everything
    auto r2 = theorem34_bound([&](int k) { return eps(k) * 0.5; }, norm, 1.0, 1.0, 2.0, 20,
                              2 * n);
    CHECK(r2.total == doctest::Approx(0.5 * r.total).epsilon(1e-12));
  }
}

TEST_CASE("truncated series bound: parameter validation and envelope check") {
  auto one = [](int) { return 1.0; };
  auto norm = [](int) { return 1.0; };
  CHECK_THROWS_AS(theorem34_bound(one, norm, 1.0, 1.0, 2.0, 1, 10), std::invalid_argument);
  CHECK_THROWS_AS(theorem34_bound(one, norm, 1.0, 1.0, 0.0, 10, 10), std::invalid_argument);
  // eps_k = 1 for all k violates the envelope at k = 1 (rhs = C/n = 0.1)
  auto r = theorem34_bound(one, norm, 1.0, 1.0, 2.0, 10, 10);
  CHECK_FALSE(r.condition_checked_ok);
}

TEST_CASE("covariance model: identity and diagonal closed forms") {
  auto id = covariance_model({1, 0, 0, 0, 1, 0, 0, 0, 1}, 3);
  CHECK(id.op_norm == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 0; i < 3; ++i) {
    CHECK(id.row_norms[static_cast<std::size_t>(i)] == doctest::Approx(1.0).epsilon(1e-14));
    for (int j = 0; j < 3; ++j)
      CHECK(id.inv_sqrt[i * 3 + j] == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-14));
  }

  auto diag = covariance_model({4, 0, 0, 1}, 2);
  CHECK(diag.inv_sqrt[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(diag.inv_sqrt[3] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(diag.inv_sqrt[1]) <= 1e-14);
  CHECK(diag.op_norm == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(diag.row_norms[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(diag.row_norms[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("covariance model: reconstruction and row-norm dominance on random SPD input") {
  std::uint64_t s = 12345;
  auto next = [&s] {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return 2.0 * (static_cast<double>(s >> 11) * 0x1.0p-53) - 1.0;
  };
  for (int d : {2, 3, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> b(static_cast<std::size_t>(d) * d);
      for (auto& x : b) x = next();
      std::vector<double> sigma(static_cast<std::size_t>(d) * d, 0.0);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          for (int k = 0; k < d; ++k) sigma[i * d + j] += b[k * d + i] * b[k * d + j];
          if (i == j) sigma[i * d + j] += 0.1;
        }
      auto model = covariance_model(sigma, d);
      // inv_sqrt * inv_sqrt * sigma == identity
      std::vector<double> t(static_cast<std::size_t>(d) * d, 0.0);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            t[i * d + j] += model.inv_sqrt[i * d + k] * model.inv_sqrt[k * d + j];
      double residual = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double e = 0.0;
          for (int k = 0; k < d; ++k) e += t[i * d + k] * model.sigma[k * d + j];
          residual = std::max(residual, std::fabs(e - (i == j ? 1.0 : 0.0)));
        }
      CHECK(residual <= 1e-10 * d);
      for (double rn : model.row_norms) CHECK(rn <= model.op_norm * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("covariance model rejects bad input") {
  CHECK_THROWS_AS(covariance_model({1, 2, 0, 1}, 2), std::invalid_argument);   // asymmetric
  CHECK_THROWS_AS(covariance_model({1, 2, 2, 1}, 2), std::invalid_argument);   // eigenvalue 3, -1
  CHECK_THROWS_AS(covariance_model({1, 0, 0}, 2), std::invalid_argument);      // bad size
}

TEST_CASE("multivariate constant catalog") {
  const double pi = std::acos(-1.0);
  auto id = covariance_model({1, 0, 0, 1}, 2);

  MvnNormData data;
  data.centered_norm = 1.0;
  data.index_tuple = {0, 1, 1};
  data.mixed_partial_norm = [](std::span<const int>) { return 1.0; };
  data.m_km1_h = 1.0;

  auto cat = mvn_constant_catalog(id, data, 3);
  REQUIRE(cat.mixed_partial.has_value());
  CHECK(*cat.mixed_partial == doctest::Approx(0.6266570686577501).epsilon(1e-12));
  REQUIRE(cat.operator_k.has_value());
  CHECK(*cat.operator_k == doctest::Approx(specfun::gamma_ratio_constant(3).value).epsilon(1e-12));
  CHECK(cat.operator_first == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-12));

  auto diag = covariance_model({4, 0, 0, 1}, 2);
  auto cat1 = mvn_constant_catalog(diag, data, 1);
  REQUIRE(cat1.first_partial.size() == 2);
  CHECK(cat1.first_partial[0] == doctest::Approx(std::sqrt(pi / 2.0) * 0.5).epsilon(1e-12));
  CHECK(cat1.first_partial[1] == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-12));

  // min over slots: differentiating coordinate 0 (row norm 1/2) wins when the
  // remaining-norm values tie
  MvnNormData d2;
  d2.centered_norm = 1.0;
  d2.index_tuple = {0, 1};
  d2.mixed_partial_norm = [](std::span<const int>) { return 1.0; };
  auto cat2 = mvn_constant_catalog(diag, d2, 2);
  REQUIRE(cat2.mixed_partial.has_value());
  CHECK(*cat2.mixed_partial ==
        doctest::Approx(specfun::gamma_ratio_constant(2).value * 0.5).epsilon(1e-12));
}

TEST_CASE("multivariate bound: hand-evaluated d = 2 example") {
  auto g = cosine_family(1.0);
  DirectionalFunction h = directional_function(g, {1.0, 1.0});
  auto table = moments(rademacher(), 3);
  for (long n : {5L, 64L}) {
    auto report = theorem35_bound(std::vector<EpsilonTable>{table, table}, h, n, 3);
    CHECK(report.total == doctest::Approx(1.0 / (3.0 * static_cast<double>(n))).epsilon(1e-12));
    CHECK(report.first_moment_term == 0.0);
    for (const auto& c : report.nk_branches) {
      CHECK(c.j >= 0);
      if (c.k == 3) CHECK(c.branch == "h^(k+1)/(k+1)");
    }
  }
}

TEST_CASE("multivariate bound: per-summand rows and degenerate zeros") {
  auto g = cosine_family(1.0);
  DirectionalFunction h = directional_function(g, {1.0, 1.0});
  auto table = moments(rademacher(), 3);
  const long n = 4;
  std::vector<std::vector<EpsilonTable>> rows(static_cast<std::size_t>(n), {table, table});
  auto a = theorem35_bound(rows, h, n, 3);
  auto b = theorem35_bound(std::vector<EpsilonTable>{table, table}, h, n, 3);
  CHECK(a.total == doctest::Approx(b.total).epsilon(1e-14));

  EpsilonTable zero;
  zero.p = 3;
  zero.eps = {0, 0, 0, 0};
  zero.abs_moments = {0, 0, 0, 0, 0};
  auto z = theorem35_bound(std::vector<EpsilonTable>{zero, zero}, h, 16, 3);
  CHECK(z.total == 0.0);
}

TEST_CASE("d = 1 multivariate reduction is never tighter than the univariate bound") {
  // amplitude 10 makes the 3||h^(k-1)|| branch win inside N_3, which the
  // two-branch M_{1,3} cannot use
  auto g = cosine_family(10.0);
  DirectionalFunction h = directional_function(g, {1.0});
  auto table = moments(rademacher(), 3);
  const long n = 9;
  auto multi = theorem35_bound(std::vector<EpsilonTable>{table}, h, n, 3);
  auto uni = theorem31_bound(table, *g, n, 3);
  CHECK(multi.total >= uni.total);
  CHECK(uni.nk_branches[2].branch == "3h^(k-1)");
  CHECK(multi.total > uni.total);
}

TEST_CASE("bound report JSON round trip") {
  auto h = cosine_family(1.0);
  auto table = moments(hermite_distribution(4), 3);
  auto report = theorem31_bound(table, *h, 12, 3);
  auto back = bound_report_from_json(to_json(report));
  CHECK(back.total == report.total);
  CHECK(back.first_moment_term == report.first_moment_term);
  CHECK(back.remainder_term == report.remainder_term);
  REQUIRE(back.inner_terms.size() == report.inner_terms.size());
  for (std::size_t i = 0; i < back.inner_terms.size(); ++i) {
    CHECK(back.inner_terms[i].i == report.inner_terms[i].i);
    CHECK(back.inner_terms[i].j == report.inner_terms[i].j);
    CHECK(back.inner_terms[i].k == report.inner_terms[i].k);
    CHECK(back.inner_terms[i].value == report.inner_terms[i].value);
  }
  REQUIRE(back.nk_branches.size() == report.nk_branches.size());
  for (std::size_t i = 0; i < back.nk_branches.size(); ++i) {
    CHECK(back.nk_branches[i].branch == report.nk_branches[i].branch);
    CHECK(back.nk_branches[i].stated_only == report.nk_branches[i].stated_only);
  }

  DirectionalFunction hd = directional_function(h, {1.0, 1.0});
  auto mv = theorem35_bound(std::vector<EpsilonTable>{table, table}, hd, 12, 3);
  auto mv_back = bound_report_from_json(to_json(mv));
  CHECK(mv_back.total == mv.total);
  REQUIRE(!mv_back.inner_terms.empty());
  CHECK(mv_back.inner_terms[0].j == mv.inner_terms[0].j);
}

TEST_CASE("series result JSON round trip") {
  Theorem34Result r{0.123, 0.004, 0.127, true, 20};
  auto back = theorem34_result_from_json(to_json(r));
  CHECK(back.bound == r.bound);
  CHECK(back.tail == r.tail);
  CHECK(back.total == r.total);
  CHECK(back.condition_checked_ok == r.condition_checked_ok);
  CHECK(back.checked_k_max == r.checked_k_max);
}
