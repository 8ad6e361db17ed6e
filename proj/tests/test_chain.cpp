#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "doctest.h"
#include "quadgrowth/chain.hpp"
#include "quadgrowth/genfun.hpp"

using namespace qg;

namespace {

// chi-square p-value, bins with expected count < 5 pooled into one
double chi_square_p(const std::vector<double>& expected_prob, const std::vector<long>& observed, long n) {
  double stat = 0, pool_e = 0, pool_o = 0;
  int df = -1;
  for (std::size_t i = 0; i < expected_prob.size(); ++i) {
    double e = expected_prob[i] * n;
    if (e < 5) {
      pool_e += e;
      pool_o += observed[i];
      continue;
    }
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++df;
  }
  if (pool_e > 0) {
    stat += (pool_o - pool_e) * (pool_o - pool_e) / std::max(pool_e, 1e-300);
    ++df;
  }
  boost::math::chi_squared d(std::max(df, 1));
  return boost::math::cdf(boost::math::complement(d, stat));
}

}  // namespace

TEST_CASE("branching kernel") {
  CHECK(xi_transition(1, 1, 1) == Rational(5, 27));
  CHECK(xi_transition(1, 1, 1) == offspring_p(1));
  CHECK(xi_transition(2, 0, 1) == Rational(4, 9));
  CHECK_THROWS(xi_transition(0, 1, 1));
}

TEST_CASE("closed form of [t] phi_R^m") {
  CHECK(t1_closed(0, 1) == 1);
  CHECK(t1_closed(0, 2) == 0);
  for (int R = 1; R <= 10; ++R)
    for (int m = 1; m <= 10; ++m) CHECK(t1_closed(R, m) == xi_transition(m, 1, R));
  CHECK(t1_closed_ld(3, 4) == doctest::Approx(to_double(t1_closed(3, 4))));
}

TEST_CASE("distribution of the top cycle length") {
  for (int R : {0, 1, 2, 5}) {
    Dist d = gamma_dist(R, 200);
    CHECK(d.total() <= 1);
    CHECK(d.total() + d.tail_bound >= 1);
    for (auto& x : d.masses) CHECK(sgn(x) >= 0);
  }
  Dist d0 = gamma_dist(0, 5);
  CHECK(d0.masses[1] == 1);
  Dist d1 = gamma_dist(0, 5, 1);
  CHECK(d1.masses[1] == F_coeff(1) * xi_transition(1, 1, 1));
  CHECK(d1.masses[1] == Rational(5, 27));
  auto ld = gamma_masses_ld(3, 40);
  Dist d3 = gamma_dist(3, 40);
  for (int m = 1; m <= 40; ++m) CHECK(double(ld[m]) == doctest::Approx(to_double(d3.masses[m])).epsilon(1e-12));
}

TEST_CASE("outward kernel") {
  for (int l = 1; l <= 20; ++l) {
    Dist row = outward_row(l, 60);
    CHECK(row.total() <= 1);
    CHECK(row.total() + row.tail_bound >= 1);
  }
  CHECK(reversed_transition(1, 1, 1) == Rational(5, 27));
  // Chapman-Kolmogorov through j <= J with a certified remainder
  const int J = 80;
  for (int l = 1; l <= 10; l += 3)
    for (int k = 1; k <= 10; k += 3) {
      Rational sum = 0;
      for (int j = 1; j <= J; ++j) sum += reversed_transition(l, j, 1) * reversed_transition(j, k, 1);
      Rational two = reversed_transition(l, k, 2);
      CHECK(sum <= two);
      // rt(j,k,1) <= F_k / F_j <= 9/4 / F_j and F_j is decreasing, so the remainder is below (9/4)/F_J times the row tail
      CHECK(two - sum <= outward_tail_bound(l, J) * Rational(9, 4) / F_coeff(J));
    }
}

TEST_CASE("outward sampler against exact masses") {
  Rng rng(12345);
  const long n = 100000;
  const int K = 60;
  Dist row = outward_row(1, K);
  std::vector<double> p(K + 2, 0.0);
  for (int k = 1; k <= K; ++k) p[k] = to_double(row.masses[k]);
  p[K + 1] = 1 - to_double(row.total());
  std::vector<long> obs(K + 2, 0);
  for (long i = 0; i < n; ++i) {
    int k = sample_outward(1, rng);
    obs[std::min(k, K + 1)]++;
  }
  double pv = chi_square_p(p, obs, n);
  INFO("p-value " << pv);
  CHECK(pv > 1e-3);
}

TEST_CASE("inward kernel is a probability row") {
  for (int r = 1; r <= 4; ++r)
    for (int m = 1; m <= 5; ++m) {
      Rational s = 0;
      for (int l = 1; l <= 120; ++l) s += inward_transition(m, l, r);
      CHECK(s <= 1);
      CHECK(to_double(s) > 1 - 1e-6);
    }
  CHECK(inward_transition(4, 1, 1) == 1);
  CHECK(inward_transition(4, 2, 1) == 0);
}

TEST_CASE("inward sampler at m=3, r=2") {
  Rng rng(99);
  const long n = 100000;
  const int K = 40;
  std::vector<double> p(K + 2, 0.0);
  double acc = 0;
  for (int l = 1; l <= K; ++l) acc += p[l] = to_double(inward_transition(3, l, 2));
  p[K + 1] = 1 - acc;
  std::vector<long> obs(K + 2, 0);
  for (long i = 0; i < n; ++i) obs[std::min(sample_inward(3, 2, rng), K + 1)]++;
  double pv = chi_square_p(p, obs, n);
  INFO("p-value " << pv);
  CHECK(pv > 1e-3);
}

TEST_CASE("chain paths") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    ChainPath c = sample_chain(4, rng);
    REQUIRE(c.values.size() == 5);
    CHECK(c.values[0] == 1);
    for (int v : c.values) CHECK(v >= 1);
  }
}

TEST_CASE("conditional split") {
  Rng rng(3);
  CHECK(conditional_split(1, 7, rng) == std::vector<int>{7});
  CHECK(conditional_split(2, 0, rng) == std::vector<int>{0, 0});
  CHECK(split_prob({1, 0}) == Rational(1, 2));
  CHECK(split_prob({0, 1}) == Rational(1, 2));
  int first = 0;
  for (int i = 0; i < 20000; ++i) {
    auto v = conditional_split(2, 1, rng);
    CHECK(v[0] + v[1] == 1);
    first += v[0];
  }
  CHECK(std::abs(first / 20000.0 - 0.5) < 0.02);
  for (int i = 0; i < 100; ++i) {
    auto v = conditional_split(5, 9, rng);
    int s = 0;
    for (int x : v) s += x;
    CHECK(s == 9);
  }
  CHECK_THROWS(conditional_split(0, 1, rng));
}

TEST_CASE("theta moments") {
  for (int R = 1; R <= 6; ++R) CHECK(theta_moments(R).norm == 1);
  // generating function route against exact series extraction at R = 2
  int R = 2;
  Rational c = phi_iter(R, 0)[0], d = phi_iter(2 * R, 0)[0] - c;
  // d/dy of y g F'(c + y d) at y = 1, with F' summed termwise from the coefficients
  long double g = to_long_double(phi_iter(2 * R, 1)[1]), u = to_long_double(c + d), dd = to_long_double(d);
  long double mean = 0;
  for (int k = 1; k <= 600; ++k) mean += F_coeff_ld(k) * k * (std::pow(u, k - 1) + (k - 1) * dd * std::pow(u, k - 2)) * g;
  CHECK(double(mean) == doctest::Approx(to_double(theta_moments(R).mean)).epsilon(1e-9));
  ThetaMoments t = theta_moments(200);
  CHECK(to_double(t.mean) == doctest::Approx(5.5).epsilon(0.01));
}

TEST_CASE("one-step outward moments") {
  auto ex = exim_moments_exact(1);
  CHECK(ex.first == Rational(76, 25));
  // kernel summation at m = 1
  Rational s = 0;
  for (int k = 1; k <= 200; ++k) s += (k - 1) * reversed_transition(1, k, 1);
  CHECK(std::abs(to_double(s) - 76.0 / 25) < 1e-3);
  for (int m : {1, 2, 5, 20}) {
    auto e = exim_moments(m, false);
    auto x = exim_moments_exact(m);
    CHECK(double(e.mean_shift) == doctest::Approx(to_double(x.first)).epsilon(1e-12));
    CHECK(double(e.second_moment) == doctest::Approx(to_double(x.second)).epsilon(1e-10));
    CHECK(e.mean_shift > 0);
  }
  auto a = exim_moments(300, true), b = exim_moments(300, false);
  CHECK(a.mean_shift == b.mean_shift);
  CHECK(a.second_moment == b.second_moment);
}
