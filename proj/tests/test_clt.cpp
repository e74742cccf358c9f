#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <vector>

#include "clt.hpp"

using namespace stein_bounds;

TEST_CASE("exact distance matches the closed form for Rademacher + cos") {
  auto h = cosine_family(1.0);
  // E cos(W_n) = cos(n^{-1/2})^n
  for (long n : {1L, 4L, 9L, 64L}) {
    const double closed =
        std::fabs(std::pow(std::cos(1.0 / std::sqrt(static_cast<double>(n))), n) -
                  std::exp(-0.5));
    CHECK(exact_distance(rademacher(), *h, n) == doctest::Approx(closed).epsilon(1e-12));
  }
  CHECK(exact_distance(rademacher(), *h, 4) ==
        doctest::Approx(0.0133978613469564).epsilon(1e-10));
}

TEST_CASE("constant test function gives zero distance") {
  auto h = constant_function(3.0);
  CHECK(exact_distance(rademacher(), *h, 16) == 0.0);
}

TEST_CASE("distances eventually decrease along the dyadic grid") {
  auto h = cosine_family(1.0);
  double prev = exact_distance(rademacher(), *h, 8);
  for (long n = 16; n <= 512; n *= 2) {
    double cur = exact_distance(rademacher(), *h, n);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("directional exact distance: two coordinates collapse to a 2n-fold sum") {
  auto g = cosine_family(1.0);
  DirectionalFunction h = directional_function(g, {1.0, 1.0});
  for (long n : {4L, 16L, 64L}) {
    const double closed =
        std::fabs(std::pow(std::cos(1.0 / std::sqrt(static_cast<double>(n))), 2 * n) -
                  std::exp(-1.0));
    CHECK(exact_distance(rademacher(), h, n) == doctest::Approx(closed).epsilon(1e-11));
  }
}

TEST_CASE("counter words are deterministic and uniform01 stays in range") {
  CHECK(counter_word(1, 0) == counter_word(1, 0));
  CHECK(counter_word(1, 0) != counter_word(1, 1));
  CHECK(counter_word(1, 0) != counter_word(2, 0));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    double u = uniform01(counter_word(7, i));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("discrete sampler inverts the CDF") {
  auto d = DiscreteDistribution::from_atoms({-1.0, 0.0, 2.0}, {0.25, 0.5, 0.25});
  auto s = discrete_sampler(d);
  // count atom frequencies over a deterministic word stream
  int counts[3] = {0, 0, 0};
  for (std::uint64_t i = 0; i < 100000; ++i) {
    double x = s(counter_word(11, i));
    if (x == -1.0) ++counts[0];
    else if (x == 0.0) ++counts[1];
    else if (x == 2.0) ++counts[2];
    else FAIL("sampler produced a non-atom");
  }
  CHECK(counts[0] == doctest::Approx(25000).epsilon(0.05));
  CHECK(counts[1] == doctest::Approx(50000).epsilon(0.05));
  CHECK(counts[2] == doctest::Approx(25000).epsilon(0.05));
}

TEST_CASE("mc_distance is bit-identical across worker counts") {
  auto h = cosine_family(1.0);
  auto s = discrete_sampler(rademacher());
  auto one = mc_distance(s, *h, 8, 200000, 99, 1);
  auto eight = mc_distance(s, *h, 8, 200000, 99, 8);
  CHECK(std::memcmp(&one.estimate, &eight.estimate, sizeof(double)) == 0);
  CHECK(std::memcmp(&one.ci, &eight.ci, sizeof(double)) == 0);
  CHECK(one.ci > 0.0);
}

TEST_CASE("mc_distance on a constant function is exactly zero") {
  auto h = constant_function(1.0);
  auto s = discrete_sampler(rademacher());
  auto r = mc_distance(s, *h, 4, 5000, 1, 2);
  CHECK(r.estimate == 0.0);
  CHECK(r.ci == 0.0);
}

TEST_CASE("mc_distance enforces the replication floor") {
  auto h = cosine_family(1.0);
  auto s = discrete_sampler(rademacher());
  CHECK_THROWS_AS(mc_distance(s, *h, 4, 100, 1, 1), std::invalid_argument);
}

TEST_CASE("mc_distance brackets the exact value") {
  auto h = cosine_family(1.0);
  auto s = discrete_sampler(rademacher());
  const long n = 16;
  auto mc = mc_distance(s, *h, n, 200000, 12345, 4);
  const double exact = exact_distance(rademacher(), *h, n);
  CHECK(std::fabs(mc.estimate - exact) <= 4.0 * mc.ci);
}

TEST_CASE("rate_fit recovers synthetic power laws") {
  DistanceSeries s1, s2;
  for (long n : {8L, 16L, 32L, 64L}) {
    s1.points.push_back({n, 5.0 / n, "exact", 0.0});
    s2.points.push_back({n, 3.0 / (static_cast<double>(n) * n), "exact", 0.0});
  }
  auto f1 = rate_fit(s1);
  CHECK(f1.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f1.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(f1.max_abs_residual <= 1e-12);
  CHECK(f1.n_points == 4);
  auto f2 = rate_fit(s2);
  CHECK(f2.slope == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("rate_fit scale equivariance") {
  DistanceSeries s, sc;
  const double c = 7.25;
  for (long n : {8L, 16L, 32L, 64L, 128L}) {
    double d = 2.0 / std::pow(static_cast<double>(n), 1.3) * (1.0 + 0.05 * std::sin(n));
    s.points.push_back({n, d, "exact", 0.0});
    sc.points.push_back({n, c * d, "exact", 0.0});
  }
  auto f = rate_fit(s);
  auto fc = rate_fit(sc);
  CHECK(fc.slope == doctest::Approx(f.slope).epsilon(1e-12));
  CHECK(fc.intercept - f.intercept == doctest::Approx(std::log(c)).epsilon(1e-12));
}

TEST_CASE("rate_fit preconditions") {
  DistanceSeries small;
  for (long n : {8L, 16L, 32L}) small.points.push_back({n, 1.0 / n, "exact", 0.0});
  CHECK_THROWS_AS(rate_fit(small), std::invalid_argument);
  DistanceSeries zero;
  for (long n : {8L, 16L, 32L, 64L}) zero.points.push_back({n, 0.0, "exact", 0.0});
  CHECK_THROWS_AS(rate_fit(zero), std::invalid_argument);
}

TEST_CASE("distance series CSV round trip") {
  auto dir = std::filesystem::temp_directory_path() / "sb_clt";
  std::filesystem::create_directories(dir);
  auto path = (dir / "series.csv").string();
  DistanceSeries s;
  s.points.push_back({8, 0.008160812819033486, "exact", 0.0});
  s.points.push_back({4096, 1.4775e-05, "monte-carlo", 2.5e-06});
  save_distance_series_csv(s, path);
  auto back = load_distance_series_csv(path);
  REQUIRE(back.points.size() == 2);
  CHECK(back.points[0].n == 8);
  CHECK(back.points[0].distance == s.points[0].distance);
  CHECK(back.points[0].method == "exact");
  CHECK(back.points[1].ci == s.points[1].ci);
  CHECK(back.points[1].method == "monte-carlo");
  std::filesystem::remove_all(dir);
}

TEST_CASE("rate fit JSON round trip") {
  RateFit fit{-1.0051, 0.3312, 0.0042, 10};
  auto back = rate_fit_from_json(to_json(fit));
  CHECK(back.slope == fit.slope);
  CHECK(back.intercept == fit.intercept);
  CHECK(back.max_abs_residual == fit.max_abs_residual);
  CHECK(back.n_points == fit.n_points);
}
