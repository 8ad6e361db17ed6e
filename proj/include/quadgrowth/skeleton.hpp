#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadgrowth/maps.hpp"
#include "quadgrowth/rng.hpp"
#include "quadgrowth/series.hpp"

namespace qg {

// Level r has sizes[r] vertices in forest order; vertex i of level r >= 1 governs
// outdeg[r][i] consecutive vertices of level r-1.  Level 0 is the root-extension vertex.
struct SkeletonForest {
  int R = 0;
  std::vector<int> sizes;
  std::vector<std::vector<int>> outdeg;  // outdeg[0] is empty
  int rotation = 0;                      // top-level start chosen uniformly
  bool valid() const;
};

struct Block {
  int l = 0;
  int n = -1;              // faces of the boundary quadrangulation; -1 when beyond the size table
  bool truncated = false;  // drawn from the tail mass beyond the table
  std::optional<RotationMap> interior;
};

struct TruncatedBlock {
  int level, index, l, n;
};

struct HullSample {
  int R = 0;
  std::vector<int> gamma_sizes;
  SkeletonForest forest;
  std::vector<std::vector<Block>> blocks;  // blocks[r][i] for r >= 1
  std::optional<RotationMap> map;
  std::vector<TruncatedBlock> truncation_report;
};

inline constexpr int kDefaultCatalogLimit = 7;
inline constexpr int kDefaultBlockTable = 64;

SkeletonForest sample_skeleton(int R, Rng& rng);
// outdegree sequences without the rotation, for tests of the split law
SkeletonForest rotate_forest(const SkeletonForest& f, int k);

// P{n} = C(n, l+1) x0^n / [y^(l+1)]A(y) for n <= table; the remaining mass gives truncated
Block sample_block_size(int l, Rng& rng, int table = kDefaultBlockTable);
// the same law conditioned on n <= limit
Block sample_block_size_limited(int l, int limit, Rng& rng);
// exact masses of the block-size law for n <= table
std::vector<Rational> block_size_masses(int l, int table = kDefaultBlockTable);

// uniform block with l lower edges from the quadrangulations with n faces and boundary 2(l+1)
std::optional<RotationMap> realize_block(int l, int n, Rng& rng, int limit = kDefaultCatalogLimit);
const std::vector<RotationMap>& block_catalog(int l, int n);

struct HullLayout {
  RotationMap map;
  std::vector<std::vector<int>> gamma_vertices;  // vertex ids of gamma_r in the final map
};
// blocks[r][i] must carry an interior with boundary 2(outdeg+1)
HullLayout assemble_hull(const SkeletonForest& f, const std::vector<std::vector<Block>>& blocks);

struct HullChecks {
  bool valid = false, planar = false, quads = false, bipartite = false, distances = false, boundary = false;
  bool all() const { return valid && planar && quads && bipartite && distances && boundary; }
  std::string failure;
};
HullChecks check_hull(const HullLayout& h, const SkeletonForest& f);

// realize = true: condition on every block fitting the catalog and assemble the map
HullSample sample_hull(int R, Rng& rng, bool realize, int limit = kDefaultCatalogLimit);
std::vector<HullSample> sample_hulls(int R, int count, std::uint64_t seed, bool realize, bool parallel = true,
                                     int limit = kDefaultCatalogLimit);

std::string hull_json(const HullSample& h);

}  // namespace qg
