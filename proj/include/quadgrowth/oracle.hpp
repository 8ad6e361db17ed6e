#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadgrowth/maps.hpp"
#include "quadgrowth/series.hpp"

namespace qg {

struct CostTooHigh : std::runtime_error {
  double estimate;
  CostTooHigh(const std::string& what, double est) : std::runtime_error(what), estimate(est) {}
};

struct Catalog {
  int N = 0, m = 0;  // m = 0 for plain quadrangulations
  std::vector<RotationMap> entries;
  std::size_t count() const { return entries.size(); }
};

// Raw output of the peeling enumerator: every rooted planar map made of one root face of
// degree root_degree plus n_quads quadrilaterals, root = dart 0 of the root face.
std::vector<RotationMap> enumerate_peeling(int root_degree, int n_quads, bool parallel = true);

inline constexpr int kMaxQuadN = 6;
inline constexpr int kMaxBoundaryN = 9;
double enumeration_cost(int root_degree, int n_quads);

Catalog enumerate_quadrangulations(int N, bool parallel = true);
Catalog enumerate_boundary_quadrangulations(int N, int m, bool parallel = true);

// the boundary conditions of C(N, m) on a map whose outer face is the root face
bool is_boundary_quadrangulation(const RotationMap& q, int m);

// block <-> boundary quadrangulation: remove (resp. add) the squares at the degree-two
// boundary vertices.  A block of l lower edges has a boundary of length 2(l+1).
RotationMap strip_squares(const RotationMap& q);
RotationMap unstrip_squares(const RotationMap& block);

// JSON-lines of maps plus index.json with counts
void save_catalog(const std::string& dir, const Catalog& c);
Catalog load_catalog(const std::string& dir, int N, int m);
std::string catalog_file_name(int N, int m);

enum class LabelVariant { root_label_one, min_label_one };
struct TreeCount {
  Integer root_label_one, min_label_one;
};
TreeCount count_well_labeled_trees(int n);
// the variant whose ratio to C(n) is constant over n = 1..max_n, with that ratio
struct TreeCalibration {
  LabelVariant variant;
  Rational ratio;
  std::vector<Integer> counts;  // W(1..max_n) under the chosen variant
};
TreeCalibration calibrate_well_labeled_trees(int max_n = 6);

}  // namespace qg
