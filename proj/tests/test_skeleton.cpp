#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "doctest.h"
#include "quadgrowth/chain.hpp"
#include "quadgrowth/genfun.hpp"
#include "quadgrowth/oracle.hpp"
#include "quadgrowth/skeleton.hpp"

using namespace qg;

namespace {

double chi_p(const std::vector<double>& p, const std::vector<long>& obs, long n) {
  double stat = 0, pe = 0, po = 0;
  int df = -1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double e = p[i] * n;
    if (e < 5) {
      pe += e;
      po += obs[i];
      continue;
    }
    stat += (obs[i] - e) * (obs[i] - e) / e;
    ++df;
  }
  if (pe > 0) {
    stat += (po - pe) * (po - pe) / pe;
    ++df;
  }
  boost::math::chi_squared d(std::max(df, 1));
  return boost::math::cdf(boost::math::complement(d, stat));
}

}  // namespace

TEST_CASE("top cycle law at R=1") {
  Rng rng(2024);
  const long n = 100000;
  const int K = 40;
  Dist d = gamma_dist(1, K);
  std::vector<double> p(K + 2, 0);
  for (int m = 1; m <= K; ++m) p[m] = to_double(d.masses[m]);
  p[K + 1] = 1 - to_double(d.total());
  std::vector<long> obs(K + 2, 0);
  for (long i = 0; i < n; ++i) {
    SkeletonForest f = sample_skeleton(1, rng);
    CHECK(f.valid());
    obs[std::min(f.sizes[1], K + 1)]++;
  }
  double pv = chi_p(p, obs, n);
  INFO("p-value " << pv);
  CHECK(pv > 1e-3);
}

TEST_CASE("forest structure") {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    SkeletonForest f = sample_skeleton(5, rng);
    REQUIRE(f.valid());
    CHECK(f.sizes[0] == 1);
    CHECK(f.rotation >= 0);
    CHECK(f.rotation < f.sizes[5]);
  }
  // rotating by k then by the rest of the cycle returns the original
  SkeletonForest f = sample_skeleton(3, rng);
  for (int k = 0; k < f.sizes[3]; ++k) {
    SkeletonForest g = rotate_forest(rotate_forest(f, k), f.sizes[3] - k);
    CHECK(g.outdeg == f.outdeg);
    CHECK(rotate_forest(f, k).valid());
  }
}

TEST_CASE("split law at k=3, l=4") {
  Rng rng(77);
  std::vector<std::vector<int>> comps;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) comps.push_back({a, b, 4 - a - b});
  std::vector<double> p;
  for (auto& c : comps) p.push_back(to_double(split_prob(c)));
  std::vector<long> obs(comps.size(), 0);
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    auto v = conditional_split(3, 4, rng);
    obs[std::find(comps.begin(), comps.end(), v) - comps.begin()]++;
  }
  CHECK(chi_p(p, obs, n) > 1e-3);
}

TEST_CASE("block size law") {
  for (int l = 0; l <= 6; ++l) {
    auto w = block_size_masses(l);
    Rational s = 0;
    for (auto& x : w) s += x;
    CHECK(s < 1);
    // remainder against the n^(-5/2) tail from the table edge; the constant is the one
    // C(n,1) x0^n actually has, (2/sqrt(pi))/12, times b(m)/b(1)
    double tail = 0;
    const double kappa = 2 / std::sqrt(M_PI) / 12 * to_double(b_ratio(l + 1));
    for (int n = 65; n < 200000; ++n) tail += kappa * std::pow(n, -2.5);
    double A = to_double(expansion_coeffs(8).A[l + 1]);
    INFO("l=" << l << " remainder " << 1 - to_double(s) << " asymptotic " << tail / A);
    double rem = 1 - to_double(s);
    CHECK(rem < tail / A);
    if (l <= 3) CHECK(rem / (tail / A) > 0.88);
    for (int n = 0; n <= l; ++n) CHECK(w[n] == 0);
  }
  auto w0 = block_size_masses(0);
  CHECK(w0[1] == Rational(3, 4));  // C(1,1) x0 / A_1 = (1/12)/(1/9)
  CHECK(std::max_element(w0.begin(), w0.end()) - w0.begin() == 1);
  // truncated second moments keep growing with the table while the mean settles
  double m2_64 = 0, m2_256 = 0, m1_64 = 0, m1_256 = 0;
  auto a = block_size_masses(0, 64), b = block_size_masses(0, 256);
  for (int n = 0; n <= 64; ++n) {
    m2_64 += n * n * to_double(a[n]);
    m1_64 += n * to_double(a[n]);
  }
  for (int n = 0; n <= 256; ++n) {
    m2_256 += n * n * to_double(b[n]);
    m1_256 += n * to_double(b[n]);
  }
  CHECK(m2_256 > 1.6 * m2_64);
  CHECK(m1_256 < 1.3 * m1_64);
  Rng rng(4);
  double sum = 0;
  long cnt = 0, trunc = 0;
  for (int i = 0; i < 100000; ++i) {
    Block blk = sample_block_size(0, rng);
    if (blk.truncated) {
      ++trunc;
      continue;
    }
    sum += blk.n;
    ++cnt;
  }
  double exact_mass = 0;
  for (auto& x : a) exact_mass += to_double(x);
  CHECK(sum / cnt == doctest::Approx(m1_64 / exact_mass).epsilon(0.05));
  CHECK(std::abs(trunc / 1e5 - (1 - exact_mass)) < 0.005);
}

TEST_CASE("block catalog") {
  // uniform draw over the C(3,2) = 5 entries
  Rng rng(31);
  const auto& cat = block_catalog(1, 3);
  REQUIRE(cat.size() == 5);
  std::map<std::string, long> hits;
  for (int i = 0; i < 50000; ++i) hits[to_json(*realize_block(1, 3, rng))]++;
  REQUIRE(hits.size() == 5);
  std::vector<double> p(5, 0.2);
  std::vector<long> obs;
  for (auto& [k, v] : hits) obs.push_back(v);
  CHECK(chi_p(p, obs, 50000) > 1e-3);
  for (int l = 0; l <= 3; ++l)
    for (int n = l + 1; n <= 5; ++n)
      for (auto& b : block_catalog(l, n)) {
        RotationMap q = unstrip_squares(b);
        CHECK(canonical(strip_squares(q)) == canonical(b));
        CHECK(topology(q).F - 1 == n);
        CHECK(is_boundary_quadrangulation(q, l + 1));
      }
  CHECK_FALSE(realize_block(0, kDefaultCatalogLimit + 1, rng).has_value());
}

TEST_CASE("assembled hulls") {
  auto hs = sample_hulls(4, 1000, 11, true, true);
  for (auto& h : hs) {
    REQUIRE(h.map.has_value());
    CHECK(h.truncation_report.empty());
    HullLayout L = assemble_hull(h.forest, h.blocks);
    HullChecks c = check_hull(L, h.forest);
    INFO(c.failure);
    CHECK(c.all());
    CHECK(L.map == *h.map);
  }
  for (int i = 0; i < 100; ++i) {
    std::string s = to_json(*hs[i].map);
    CHECK(to_json(from_json(s)) == s);
  }
}

TEST_CASE("sampling is deterministic") {
  auto a = sample_hulls(3, 40, 7, true, true), b = sample_hulls(3, 40, 7, true, false);
  for (int i = 0; i < 40; ++i) CHECK(hull_json(a[i]) == hull_json(b[i]));
  auto c = sample_hulls(6, 30, 7, false, true);
  for (auto& h : c)
    if (!h.map) CHECK_FALSE(h.truncation_report.empty());
}

TEST_CASE("assembly names the bad vertex") {
  Rng rng(1);
  HullSample h = sample_hull(2, rng, true);
  auto blocks = h.blocks;
  blocks[1][0].l += 1;
  CHECK_THROWS_WITH_AS(assemble_hull(h.forest, blocks), doctest::Contains("vertex 0 of level 1"), MapError);
}

TEST_CASE("joint law of the cycle lengths at R=3") {
  Rng rng(606);
  const long n = 100000;
  std::map<std::vector<int>, long> emp;
  for (long i = 0; i < n; ++i) {
    ChainPath p = sample_chain(3, rng);
    emp[{p.values[1], p.values[2], p.values[3]}]++;
  }
  double tv = 0;
  Dist top = gamma_dist(3, 6);
  for (int m3 = 1; m3 <= 6; ++m3)
    for (int m2 = 1; m2 <= 6; ++m2)
      for (int m1 = 1; m1 <= 6; ++m1) {
        Rational p = top.masses[m3] * inward_transition(m3, m2, 3) * inward_transition(m2, m1, 2) *
                     inward_transition(m1, 1, 1);
        auto it = emp.find({m1, m2, m3});
        double e = it == emp.end() ? 0 : it->second / double(n);
        tv += std::abs(e - to_double(p));
      }
  CHECK(tv / 2 < 0.01);
}
