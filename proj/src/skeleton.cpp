#include "quadgrowth/skeleton.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "json.hpp"
#include "quadgrowth/chain.hpp"
#include "quadgrowth/genfun.hpp"
#include "quadgrowth/oracle.hpp"

namespace qg {

bool SkeletonForest::valid() const {
  if (static_cast<int>(sizes.size()) != R + 1 || static_cast<int>(outdeg.size()) != R + 1) return false;
  if (sizes[0] != 1) return false;
  for (int r = 1; r <= R; ++r) {
    if (static_cast<int>(outdeg[r].size()) != sizes[r]) return false;
    long s = 0;
    for (int x : outdeg[r]) {
      if (x < 0) return false;
      s += x;
    }
    if (s != sizes[r - 1]) return false;
  }
  return true;
}

SkeletonForest rotate_forest(const SkeletonForest& f, int k) {
  SkeletonForest g = f;
  int shift = k;
  for (int r = f.R; r >= 1; --r) {
    int M = f.sizes[r];
    shift %= M;
    std::rotate(g.outdeg[r].begin(), g.outdeg[r].begin() + shift, g.outdeg[r].end());
    int next = 0;
    for (int i = 0; i < shift; ++i) next += f.outdeg[r][i];
    shift = next;
  }
  g.rotation = k;
  return g;
}

SkeletonForest sample_skeleton(int R, Rng& rng) {
  if (R < 1) throw std::domain_error("sample_skeleton: R >= 1");
  ChainPath p = sample_chain(R, rng);
  SkeletonForest f;
  f.R = R;
  f.sizes = p.values;
  f.outdeg.assign(R + 1, {});
  for (int r = 1; r <= R; ++r) f.outdeg[r] = conditional_split(f.sizes[r], f.sizes[r - 1], rng);
  int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(f.sizes[R])));
  return rotate_forest(f, k);
}

// ---------------------------------------------------------------- block sizes

namespace {

struct SizeTable {
  std::vector<Rational> masses;
  std::vector<long double> cdf;
};

std::mutex table_mu;

const SizeTable& size_table(int l, int table) {
  static std::map<std::pair<int, int>, std::unique_ptr<SizeTable>> cache;
  std::lock_guard<std::mutex> lk(table_mu);
  auto key = std::make_pair(l, table);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto t = std::make_unique<SizeTable>();
  t->masses.assign(table + 1, Rational(0));
  if (l + 1 <= table) {
    BiSeries U = U_series(table, l + 1);
    Rational A = expansion_coeffs(std::max(l + 1, 8)).A[l + 1];
    Rational w = 1;
    for (int n = 0; n <= table; ++n) {
      t->masses[n] = U.coeff(n, l + 1) * w / A;
      w *= X0;
    }
  }
  long double c = 0;
  for (auto& x : t->masses) t->cdf.push_back(c += to_long_double(x));
  return *cache.emplace(key, std::move(t)).first->second;
}

int pick(const std::vector<long double>& cdf, long double u) {
  return static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

}  // namespace

std::vector<Rational> block_size_masses(int l, int table) { return size_table(l, table).masses; }

Block sample_block_size(int l, Rng& rng, int table) {
  if (l < 0) throw std::domain_error("sample_block_size: l >= 0");
  const SizeTable& t = size_table(l, table);
  Block b;
  b.l = l;
  int n = pick(t.cdf, rng.uniform());
  if (n > table) {
    b.truncated = true;
    b.n = -1;
  } else {
    b.n = n;
  }
  return b;
}

Block sample_block_size_limited(int l, int limit, Rng& rng) {
  const SizeTable& t = size_table(l, kDefaultBlockTable);
  if (limit > kDefaultBlockTable || l + 1 > limit)
    throw std::domain_error("sample_block_size_limited: no block with l=" + std::to_string(l) + " fits n <= " + std::to_string(limit));
  Block b;
  b.l = l;
  b.n = pick(t.cdf, rng.uniform() * t.cdf[limit]);
  return b;
}

const std::vector<RotationMap>& block_catalog(int l, int n) {
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<RotationMap>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(l, n);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto v = std::make_unique<std::vector<RotationMap>>();
  for (auto& q : enumerate_boundary_quadrangulations(n, l + 1, false).entries) v->push_back(strip_squares(q));
  return *cache.emplace(key, std::move(v)).first->second;
}

std::optional<RotationMap> realize_block(int l, int n, Rng& rng, int limit) {
  if (n < 0 || n > limit) return std::nullopt;
  const auto& cat = block_catalog(l, n);
  if (cat.empty()) throw std::domain_error("realize_block: no quadrangulation with n=" + std::to_string(n) +
                                           " and boundary " + std::to_string(2 * (l + 1)));
  return cat[rng.below(cat.size())];
}

// ---------------------------------------------------------------- assembly

HullLayout assemble_hull(const SkeletonForest& f, const std::vector<std::vector<Block>>& blocks) {
  if (!f.valid()) throw MapError("assemble_hull: forest levels are inconsistent");
  Builder b;
  // root extension: a square with two sides folded together; its two free sides stand for gamma_0
  std::vector<int> e = b.add_face(4);
  b.pair(e[2], e[3]);
  std::vector<int> beta{e[1], e[0]};
  std::vector<std::vector<int>> gamma_darts(f.R + 1);
  for (int r = 1; r <= f.R; ++r) {
    int M = f.sizes[r];
    std::vector<std::vector<int>> S(M);
    for (int i = 0; i < M; ++i) S[i] = b.add_face(4);
    int c = 0;
    for (int i = 0; i < M; ++i) {
      int l = f.outdeg[r][i];
      const Block& blk = blocks.at(r).at(i);
      if (blk.l != l) throw MapError("assemble_hull: vertex " + std::to_string(i) + " of level " + std::to_string(r) +
                                     " has outdegree " + std::to_string(l) + " but its block has l=" + std::to_string(blk.l));
      if (!blk.interior) throw MapError("assemble_hull: vertex " + std::to_string(i) + " of level " + std::to_string(r) + " has no interior");
      std::vector<int> ports;
      ports.push_back(S[i][0]);
      for (int t = 0; t < 2 * l; ++t) ports.push_back(beta[2 * c + 2 * l - 1 - t]);
      ports.push_back(S[(i - 1 + M) % M][1]);
      glue_piece(b, *blk.interior, ports);
      c += l;
    }
    beta.clear();
    for (int k = 0; k < M; ++k) {
      beta.push_back(S[k][3]);
      beta.push_back(S[k][2]);
      gamma_darts[r].push_back(S[k][0]);
    }
  }
  std::vector<int> o = b.add_face(static_cast<int>(beta.size()));
  for (std::size_t i = 0; i < beta.size(); ++i) b.pair(o[i], beta[i]);
  // undo the extension: the two edges glued to it become one edge, which carries the root
  int x = b.alpha(e[0]), y = b.alpha(e[1]);
  b.pair(x, y);
  for (int d : e) b.remove(d);
  HullLayout h;
  h.map = b.finish(y, o[0]);
  auto id = b.final_ids();
  Topology t = topology(h.map);
  h.gamma_vertices.assign(f.R + 1, {});
  h.gamma_vertices[0].push_back(t.vertex[h.map.root]);
  for (int r = 1; r <= f.R; ++r)
    for (int d : gamma_darts[r]) h.gamma_vertices[r].push_back(t.vertex[id[d]]);
  return h;
}

HullChecks check_hull(const HullLayout& h, const SkeletonForest& f) {
  HullChecks c;
  try {
    validate(h.map);
    c.valid = true;
  } catch (const MapError& e) {
    c.failure = e.what();
    return c;
  }
  c.planar = is_planar(h.map);
  c.quads = inner_faces_quadrilateral(h.map);
  c.bipartite = is_bipartite(h.map);
  auto dist = vertex_distances(h.map);
  c.distances = true;
  for (int r = 0; r <= f.R; ++r)
    for (int v : h.gamma_vertices[r])
      if (dist[v] != r) c.distances = false;
  c.boundary = outer_face(h.map).size() == static_cast<std::size_t>(2 * f.sizes[f.R]) && simple_boundary(h.map, 1);
  if (!c.planar) c.failure = "Euler characteristic is not 2";
  else if (!c.quads) c.failure = "a non-outer face is not a quadrilateral";
  else if (!c.bipartite) c.failure = "odd cycle";
  else if (!c.distances) c.failure = "a gamma vertex is at the wrong distance";
  else if (!c.boundary) c.failure = "outer boundary is not simple with alternating degree-two vertices";
  return c;
}

// ---------------------------------------------------------------- sampling

HullSample sample_hull(int R, Rng& rng, bool realize, int limit) {
  HullSample h;
  h.R = R;
  for (;;) {
    h.forest = sample_skeleton(R, rng);
    if (!realize) break;
    bool fits = true;
    for (int r = 1; r <= R && fits; ++r)
      for (int l : h.forest.outdeg[r])
        if (l + 1 > limit) fits = false;
    if (fits) break;
  }
  h.gamma_sizes = h.forest.sizes;
  h.blocks.assign(R + 1, {});
  bool complete = true;
  for (int r = 1; r <= R; ++r)
    for (int i = 0; i < h.forest.sizes[r]; ++i) {
      int l = h.forest.outdeg[r][i];
      Block blk = realize ? sample_block_size_limited(l, limit, rng) : sample_block_size(l, rng);
      blk.interior = realize_block(l, blk.n, rng, limit);
      if (!blk.interior) {
        complete = false;
        h.truncation_report.push_back({r, i, l, blk.n});
      }
      h.blocks[r].push_back(std::move(blk));
    }
  if (complete) h.map = assemble_hull(h.forest, h.blocks).map;
  return h;
}

std::vector<HullSample> sample_hulls(int R, int count, std::uint64_t seed, bool realize, bool parallel, int limit) {
  std::vector<HullSample> out(count);
  Rng base(seed);
  // catalogs are built once up front so worker threads only read them
  if (realize)
    for (int l = 0; l + 1 <= limit; ++l)
      for (int n = l + 1; n <= limit; ++n) block_catalog(l, n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < count; ++i) {
    Rng rng = base.split(static_cast<std::uint64_t>(i));
    out[i] = sample_hull(R, rng, realize, limit);
  }
  return out;
}

std::string hull_json(const HullSample& h) {
  nlohmann::json j;
  j["R"] = h.R;
  j["gamma_sizes"] = h.gamma_sizes;
  j["rotation"] = h.forest.rotation;
  nlohmann::json od = nlohmann::json::array(), bs = nlohmann::json::array();
  for (int r = 1; r <= h.R; ++r) {
    od.push_back(h.forest.outdeg[r]);
    std::vector<int> ns;
    for (auto& b : h.blocks[r]) ns.push_back(b.n);
    bs.push_back(ns);
  }
  j["outdeg"] = od;
  j["block_sizes"] = bs;
  nlohmann::json tr = nlohmann::json::array();
  for (auto& t : h.truncation_report) tr.push_back({{"level", t.level}, {"index", t.index}, {"l", t.l}, {"n", t.n}});
  j["truncated"] = tr;
  j["map"] = h.map ? nlohmann::json::parse(to_json(*h.map)) : nlohmann::json(nullptr);
  return j.dump();
}

}  // namespace qg
