#include <filesystem>

#include "doctest.h"
#include "quadgrowth/genfun.hpp"
#include "quadgrowth/oracle.hpp"

using namespace qg;

TEST_CASE("rooted quadrangulations match q") {
  CHECK(enumerate_quadrangulations(1).count() == 2);
  CHECK(enumerate_quadrangulations(2).count() == 9);
  CHECK(enumerate_quadrangulations(3).count() == 54);
  CHECK(enumerate_quadrangulations(4).count() == count_C(4));
  for (auto& q : enumerate_quadrangulations(3).entries) {
    CHECK(is_planar(q));
    CHECK(inner_faces_quadrilateral(q));
    CHECK(is_bipartite(q));
  }
}

TEST_CASE("serial and parallel enumeration agree") {
  CHECK(enumerate_peeling(4, 3, true) == enumerate_peeling(4, 3, false));
  CHECK(enumerate_boundary_quadrangulations(5, 2, true).entries == enumerate_boundary_quadrangulations(5, 2, false).entries);
}

TEST_CASE("boundary quadrangulations match U") {
  for (int N = 0; N <= 5; ++N)
    for (int m = 1; m <= 3; ++m) {
      INFO("N=" << N << " m=" << m);
      CHECK(enumerate_boundary_quadrangulations(N, m).count() == count_CNm(N, m));
    }
  for (int N = 1; N <= 4; ++N) CHECK(enumerate_boundary_quadrangulations(N, 1).count() == count_C(N - 1));
  // smallest map with boundary 2: one square folded onto the 2-gon
  auto c = enumerate_boundary_quadrangulations(1, 1);
  REQUIRE(c.count() == 1);
  CHECK(simple_boundary(c.entries[0], 0));
  for (auto& q : enumerate_boundary_quadrangulations(4, 3).entries) {
    CHECK(is_planar(q));
    CHECK(is_bipartite(q));
    CHECK(simple_boundary(q, 0));
  }
}

TEST_CASE("cost refusal") {
  CHECK_THROWS_AS(enumerate_quadrangulations(kMaxQuadN + 1), CostTooHigh);
  try {
    enumerate_boundary_quadrangulations(kMaxBoundaryN + 1, 2);
  } catch (const CostTooHigh& e) {
    CHECK(e.estimate > 1e9);
  }
}

TEST_CASE("square stripping is a bijection") {
  for (int n = 1; n <= 5; ++n)
    for (int m = 1; m <= n; ++m)
      for (auto& q : enumerate_boundary_quadrangulations(n, m).entries) {
        RotationMap b = strip_squares(q);
        CHECK(outer_face(b).size() == static_cast<std::size_t>(2 * m));
        CHECK(canonical(unstrip_squares(b)) == q);
        CHECK(canonical(strip_squares(unstrip_squares(b))) == canonical(b));
      }
}

TEST_CASE("catalog persistence") {
  auto dir = std::filesystem::temp_directory_path() / "qg_catalog_test";
  std::filesystem::remove_all(dir);
  auto c = enumerate_boundary_quadrangulations(4, 2);
  save_catalog(dir.string(), c);
  save_catalog(dir.string(), enumerate_quadrangulations(2));
  auto back = load_catalog(dir.string(), 4, 2);
  CHECK(back.entries == c.entries);
  CHECK(load_catalog(dir.string(), 2, 0).count() == 9);
  CHECK_THROWS(load_catalog(dir.string(), 3, 1));
  std::filesystem::remove_all(dir);
}

TEST_CASE("well-labeled trees") {
  auto t1 = count_well_labeled_trees(1);
  CHECK(t1.root_label_one == 2);  // labels (1,1) and (1,2)
  CHECK(t1.min_label_one == 3);   // (1,1), (1,2), (2,1)
  Integer prev = 0;
  for (int n = 1; n <= 9; ++n) {
    auto t = count_well_labeled_trees(n);
    CHECK(t.root_label_one > prev);
    prev = t.root_label_one;
  }
  auto cal = calibrate_well_labeled_trees(6);
  CHECK(cal.variant == LabelVariant::root_label_one);
  CHECK(cal.ratio == 1);
  // calibrated against the map enumeration for small n
  for (int n = 1; n <= 3; ++n) CHECK(Integer(enumerate_quadrangulations(n).count()) == cal.counts[n - 1]);
}
