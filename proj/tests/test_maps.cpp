#include "doctest.h"
#include "quadgrowth/maps.hpp"
#include "quadgrowth/oracle.hpp"

using namespace qg;

namespace {

// a single square glued to itself into a path of two edges
RotationMap path_map() {
  Builder b;
  auto f = b.add_face(4);
  b.pair(f[0], f[3]);
  b.pair(f[1], f[2]);
  return b.finish(f[0]);
}

}  // namespace

TEST_CASE("builder and topology") {
  RotationMap m = path_map();
  Topology t = topology(m);
  CHECK(t.V == 3);
  CHECK(t.E == 2);
  CHECK(t.F == 1);
  CHECK(is_planar(m));
  CHECK(inner_faces_quadrilateral(m));
  CHECK(is_bipartite(m));
  auto d = vertex_distances(m);
  CHECK(*std::max_element(d.begin(), d.end()) == 2);
}

TEST_CASE("canonical form") {
  for (auto& q : enumerate_quadrangulations(3).entries) {
    CHECK(canonical(q) == q);
    CHECK(canonical(canonical(q)) == canonical(q));
    // relabelling the darts does not change the canonical form
    int n = q.darts();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = (i * 7 + 3) % n;
    if (n % 7 == 0) continue;
    RotationMap r;
    r.sigma.resize(n);
    r.alpha.resize(n);
    for (int i = 0; i < n; ++i) {
      r.sigma[perm[i]] = perm[q.sigma[i]];
      r.alpha[perm[i]] = perm[q.alpha[i]];
    }
    r.root = perm[q.root];
    CHECK(canonical(r) == q);
  }
}

TEST_CASE("json round trip") {
  for (auto& q : enumerate_boundary_quadrangulations(4, 2).entries) {
    std::string s = to_json(q);
    RotationMap back = from_json(s);
    CHECK(back == q);
    CHECK(to_json(back) == s);
  }
  std::string j = to_json(path_map());
  CHECK(j.find("\"labels\":{\"dist\":[0,1,2]}") != std::string::npos);
}

TEST_CASE("deserialize rejects bad maps") {
  // alpha fixed point at dart 3
  CHECK_THROWS_WITH_AS(from_json(R"({"darts":4,"sigma":[2,1,4,3],"alpha":[2,1,3,4],"root":1})"),
                       doctest::Contains("dart 3: alpha has a fixed point"), MapError);
  CHECK_THROWS_WITH_AS(from_json(R"({"darts":2,"sigma":[1,2],"alpha":[1,2],"root":1})"),
                       doctest::Contains("fixed point"), MapError);
  // two disjoint edges
  CHECK_THROWS_WITH_AS(from_json(R"({"darts":4,"sigma":[1,2,3,4],"alpha":[2,1,4,3],"root":1})"),
                       doctest::Contains("transitively"), MapError);
  CHECK_THROWS_AS(from_json("{\"darts\": 2, \"sigma\": [1"), MapError);
  CHECK_THROWS_AS(from_json(R"({"darts":2,"sigma":[1,2,3],"alpha":[2,1],"root":1})"), MapError);
}

TEST_CASE("glue a piece into a hole") {
  // a boundary quadrangulation with outer face 2m, reassembled around its own squares
  for (auto& q : enumerate_boundary_quadrangulations(5, 3).entries) {
    RotationMap block = strip_squares(q);
    CHECK(outer_face(block).size() == 6);
    CHECK(canonical(unstrip_squares(block)) == q);
    CHECK(block.darts() == q.darts() - 4 * 3);  // three squares fewer, same outer length
  }
}
