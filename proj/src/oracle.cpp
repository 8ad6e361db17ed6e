#include "quadgrowth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "quadgrowth/genfun.hpp"

namespace qg {

namespace {

// Peeling state: darts carry phi (faces are created whole) and alpha (-1 while free).
// comps is a stack of boundary components of the unexplored region, each the cyclic
// list of free darts in the direction of travel along the boundary.
struct PeelState {
  std::vector<int> phi, alpha;
  std::vector<std::vector<int>> comps;
  int quads_left = 0;
};

RotationMap leaf_map(const PeelState& s) {
  int n = static_cast<int>(s.phi.size());
  RotationMap m;
  m.sigma.resize(n);
  m.alpha = s.alpha;
  for (int d = 0; d < n; ++d) m.sigma[d] = s.phi[s.alpha[d]];
  m.root = 0;
  m.outer = 0;
  return m;
}

// number of choices at the current top dart, and applying choice i
int n_choices(const PeelState& s) {
  const auto& c = s.comps.back();
  int L = static_cast<int>(c.size());
  return (s.quads_left > 0 ? 1 : 0) + L / 2;
}

void apply_choice(PeelState& s, int i) {
  std::vector<int> c = std::move(s.comps.back());
  s.comps.pop_back();
  int d = c[0];
  if (s.quads_left > 0) {
    if (i == 0) {
      int base = static_cast<int>(s.phi.size());
      for (int k = 0; k < 4; ++k) {
        s.phi.push_back(base + (k + 1) % 4);
        s.alpha.push_back(-1);
      }
      s.alpha[d] = base;
      s.alpha[base] = d;
      --s.quads_left;
      std::vector<int> nc{base + 1, base + 2, base + 3};
      nc.insert(nc.end(), c.begin() + 1, c.end());
      s.comps.push_back(std::move(nc));
      return;
    }
    --i;
  }
  // glue d to the dart at odd offset j; both sides then have even length
  int j = 2 * i + 1;
  int e = c[j];
  s.alpha[d] = e;
  s.alpha[e] = d;
  std::vector<int> x(c.begin() + 1, c.begin() + j), y(c.begin() + j + 1, c.end());
  if (!y.empty()) s.comps.push_back(std::move(y));
  if (!x.empty()) s.comps.push_back(std::move(x));
}

void peel(PeelState& s, std::vector<RotationMap>& out) {
  if (s.comps.empty()) {
    if (s.quads_left == 0) out.push_back(leaf_map(s));
    return;
  }
  int k = n_choices(s);
  for (int i = 0; i < k; ++i) {
    PeelState t = s;
    apply_choice(t, i);
    peel(t, out);
  }
}

PeelState initial_state(int root_degree, int n_quads) {
  PeelState s;
  for (int k = 0; k < root_degree; ++k) {
    s.phi.push_back((k + 1) % root_degree);
    s.alpha.push_back(-1);
  }
  // free darts keep the explored face on their left and chain head to tail
  std::vector<int> c(root_degree);
  for (int k = 0; k < root_degree; ++k) c[k] = k;
  s.comps.push_back(std::move(c));
  s.quads_left = n_quads;
  return s;
}

// Boundary start: outer face e_0..e_{2m-1} with the square at every even-position vertex
// already attached (e_{2j} and e_{2j-1} both border square j); the free darts are the two
// far sides of each square.  Darts are renumbered canonically afterwards.
PeelState boundary_state(int m, int n_quads) {
  PeelState s;
  int L = 2 * m;
  auto face = [&](int k) {
    int base = static_cast<int>(s.phi.size());
    for (int i = 0; i < k; ++i) {
      s.phi.push_back(base + (i + 1) % k);
      s.alpha.push_back(-1);
    }
    return base;
  };
  int e = face(L);
  std::vector<int> t(m);
  for (int j = 0; j < m; ++j) t[j] = face(4);
  auto pair = [&](int a, int b) {
    s.alpha[a] = b;
    s.alpha[b] = a;
  };
  for (int j = 0; j < m; ++j) {
    pair(e + 2 * j, t[j]);
    pair(e + 2 * j + 1, t[(j + 1) % m] + 1);
  }
  std::vector<int> c;
  c.push_back(t[0] + 3);
  for (int j = 1; j < m; ++j) {
    c.push_back(t[j] + 2);
    c.push_back(t[j] + 3);
  }
  c.push_back(t[0] + 2);
  s.comps.push_back(std::move(c));
  s.quads_left = n_quads - m;
  return s;
}

std::vector<RotationMap> run_peeling(const PeelState& s, bool parallel) {
  if (s.comps.empty()) {
    std::vector<RotationMap> out;
    if (s.quads_left == 0) out.push_back(leaf_map(s));
    return out;
  }
  int k = n_choices(s);
  std::vector<std::vector<RotationMap>> parts(k);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < k; ++i) {
    PeelState t = s;
    apply_choice(t, i);
    peel(t, parts[i]);
  }
  std::vector<RotationMap> out;
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

}  // namespace

double enumeration_cost(int root_degree, int n_quads) {
  // leaves grow roughly like 12^n times a boundary factor; calibrated loosely on small cases
  return std::pow(12.0, n_quads) * std::pow(3.0, root_degree / 2.0);
}

std::vector<RotationMap> enumerate_peeling(int root_degree, int n_quads, bool parallel) {
  if (root_degree < 2 || root_degree % 2) throw std::domain_error("root face degree must be even and >= 2");
  return run_peeling(initial_state(root_degree, n_quads), parallel);
}

Catalog enumerate_quadrangulations(int N, bool parallel) {
  if (N < 1) throw std::domain_error("enumerate_quadrangulations: N >= 1");
  if (N > kMaxQuadN) {
    double est = enumeration_cost(4, N - 1);
    throw CostTooHigh("quadrangulation enumeration at N=" + std::to_string(N) + " refused: about " +
                          std::to_string(static_cast<long long>(est)) + " leaves (limit N=" + std::to_string(kMaxQuadN) + ")",
                      est);
  }
  Catalog c;
  c.N = N;
  // the root face is itself one of the N quadrilaterals; outer marks nothing special here
  for (auto& m : enumerate_peeling(4, N - 1, parallel)) {
    m.outer = -1;
    c.entries.push_back(canonical(m));
  }
  std::sort(c.entries.begin(), c.entries.end());
  return c;
}

bool is_boundary_quadrangulation(const RotationMap& q, int m) {
  auto o = outer_face(q);
  if (static_cast<int>(o.size()) != 2 * m) return false;
  if (!inner_faces_quadrilateral(q)) return false;
  if (!simple_boundary(q, 0)) return false;
  Topology t = topology(q);
  std::set<int> squares;
  for (int k = 0; k < m; ++k)
    if (!squares.insert(t.face[q.alpha[o[2 * k]]]).second) return false;
  return true;
}

Catalog enumerate_boundary_quadrangulations(int N, int m, bool parallel) {
  if (N < 0 || m < 1) throw std::domain_error("enumerate_boundary_quadrangulations: N >= 0, m >= 1");
  if (N > kMaxBoundaryN) {
    double est = enumeration_cost(2 * m, N);
    throw CostTooHigh("boundary enumeration at N=" + std::to_string(N) + " refused: about " +
                          std::to_string(static_cast<long long>(est)) + " leaves (limit N=" +
                          std::to_string(kMaxBoundaryN) + ")",
                      est);
  }
  Catalog c;
  c.N = N;
  c.m = m;
  if (N < m) return c;  // every degree-two boundary vertex needs its own square
  for (auto& q : run_peeling(boundary_state(m, N), parallel))
    if (is_boundary_quadrangulation(q, m)) c.entries.push_back(canonical(q));
  std::sort(c.entries.begin(), c.entries.end());
  return c;
}

RotationMap strip_squares(const RotationMap& q) {
  auto o = outer_face(q);
  int L = static_cast<int>(o.size()), m = L / 2;
  if (L == 0 || L % 2) throw MapError("strip: map has no even outer face");
  int n = q.darts();
  std::vector<int> port(L), port_pos(n, -1);
  std::vector<char> removed(n, 0);
  for (int d : o) removed[d] = 1;
  for (int j = 0; j < m; ++j) {
    int t0 = q.alpha[o[2 * j]], t1 = q.phi(t0), t2 = q.phi(t1), t3 = q.phi(t2);
    if (q.alpha[t1] != o[(2 * j - 1 + L) % L] || q.phi(t3) != t0)
      throw MapError("strip: boundary vertex " + std::to_string(2 * j) + " does not sit in a single square");
    for (int t : {t0, t1, t2, t3}) {
      if (removed[t]) throw MapError("strip: squares at boundary vertices are not distinct");
      removed[t] = 1;
    }
    port[(2 * j - 1 + L) % L] = t2;
    port[2 * j] = t3;
  }
  for (int i = 0; i < L; ++i) port_pos[port[i]] = i;
  Builder b = to_builder(q);
  for (int d = 0; d < n; ++d)
    if (removed[d]) b.remove(d);
  std::vector<int> nd = b.add_face(L);
  for (int i = 0; i < L; ++i) {
    int a = q.alpha[port[i]];
    if (removed[a]) {
      if (port_pos[a] < 0) throw MapError("strip: square edge glued to the outer face");
      b.pair(nd[i], nd[port_pos[a]]);
    } else {
      b.pair(nd[i], a);
    }
  }
  return b.finish(nd[0], nd[0]);
}

RotationMap unstrip_squares(const RotationMap& block) {
  auto o = outer_face(block);
  int L = static_cast<int>(o.size()), m = L / 2;
  if (L == 0 || L % 2) throw MapError("unstrip: block has no even outer face");
  Builder b;
  std::vector<std::vector<int>> t(m);
  for (int j = 0; j < m; ++j) t[j] = b.add_face(4);
  std::vector<int> od = b.add_face(L);
  for (int j = 0; j < m; ++j) {
    b.pair(od[2 * j], t[j][0]);
    b.pair(od[2 * j + 1], t[(j + 1) % m][1]);
  }
  std::vector<int> ports(L);
  for (int i = 0; i < L; ++i) ports[i] = i % 2 == 0 ? t[i / 2][3] : t[((i + 1) / 2) % m][2];
  glue_piece(b, block, ports);
  return b.finish(od[0], od[0]);
}

std::string catalog_file_name(int N, int m) {
  return m == 0 ? "quad_N" + std::to_string(N) + ".jsonl" : "boundary_N" + std::to_string(N) + "_m" + std::to_string(m) + ".jsonl";
}

void save_catalog(const std::string& dir, const Catalog& c) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string name = catalog_file_name(c.N, c.m);
  {
    std::ofstream f(fs::path(dir) / name);
    for (auto& e : c.entries) f << to_json(e) << '\n';
  }
  fs::path idx = fs::path(dir) / "index.json";
  nlohmann::json j = nlohmann::json::object();
  if (fs::exists(idx)) {
    std::ifstream in(idx);
    j = nlohmann::json::parse(in);
  }
  j[name] = {{"N", c.N}, {"m", c.m}, {"count", c.count()}};
  std::ofstream out(idx);
  out << j.dump(2) << '\n';
}

Catalog load_catalog(const std::string& dir, int N, int m) {
  namespace fs = std::filesystem;
  std::string name = catalog_file_name(N, m);
  fs::path idx = fs::path(dir) / "index.json";
  if (!fs::exists(idx)) throw std::runtime_error("no catalog index in " + dir);
  std::ifstream in(idx);
  auto j = nlohmann::json::parse(in);
  if (!j.contains(name)) throw std::runtime_error("catalog " + name + " not in index");
  std::size_t expect = j[name]["count"].get<std::size_t>();
  Catalog c;
  c.N = N;
  c.m = m;
  std::ifstream f(fs::path(dir) / name);
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) c.entries.push_back(from_json(line));
  if (c.count() != expect)
    throw std::runtime_error("catalog " + name + " has " + std::to_string(c.count()) + " maps, index says " + std::to_string(expect));
  return c;
}

// ---------------------------------------------------------------- well-labeled trees

namespace {

// every plane tree with n edges as a parent array in preorder, from its Dyck word
void plane_trees(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> parent{-1}, stack{0};
  std::function<void(int, int)> go = [&](int opens, int closes) {
    if (opens == n && closes == n) {
      visit(parent);
      return;
    }
    if (opens < n) {
      int v = static_cast<int>(parent.size());
      parent.push_back(stack.back());
      stack.push_back(v);
      go(opens + 1, closes);
      stack.pop_back();
      parent.pop_back();
    }
    if (closes < opens) {
      int v = stack.back();
      stack.pop_back();
      go(opens, closes + 1);
      stack.push_back(v);
    }
  };
  go(0, 0);
}

// f[v][l] = labelings of the subtree at v with v labelled l, labels in 1..K
std::vector<std::vector<Integer>> label_counts(const std::vector<int>& parent, int K) {
  int V = static_cast<int>(parent.size());
  std::vector<std::vector<Integer>> f(V, std::vector<Integer>(K + 2, 1));
  for (int v = 0; v < V; ++v) f[v][0] = f[v][K + 1] = 0;
  // preorder, so children come after parents
  for (int v = V - 1; v >= 1; --v) {
    int p = parent[v];
    for (int l = 1; l <= K; ++l) f[p][l] *= f[v][l - 1] + f[v][l] + f[v][l + 1];
  }
  return f;
}

}  // namespace

TreeCount count_well_labeled_trees(int n) {
  if (n < 0 || n > 12) throw std::domain_error("count_well_labeled_trees: 0 <= n <= 12");
  TreeCount tc;
  tc.root_label_one = 0;
  tc.min_label_one = 0;
  plane_trees(n, [&](const std::vector<int>& parent) {
    auto f = label_counts(parent, n + 1);
    tc.root_label_one += f[0][1];
    auto g = label_counts(parent, n);
    Integer all = 0, shifted = 0;
    for (int l = 1; l <= n + 1; ++l) all += f[0][l];
    for (int l = 1; l <= n; ++l) shifted += g[0][l];
    tc.min_label_one += all - shifted;
  });
  return tc;
}

TreeCalibration calibrate_well_labeled_trees(int max_n) {
  std::vector<Integer> a, b;
  for (int n = 1; n <= max_n; ++n) {
    auto t = count_well_labeled_trees(n);
    a.push_back(t.root_label_one);
    b.push_back(t.min_label_one);
  }
  auto constant_ratio = [&](const std::vector<Integer>& w, Rational& r) {
    r = Rational(count_C(1)) / Rational(w[0]);
    for (int n = 2; n <= max_n; ++n)
      if (Rational(count_C(n)) / Rational(w[n - 1]) != r) return false;
    return true;
  };
  TreeCalibration cal;
  Rational r;
  if (constant_ratio(a, r)) {
    cal.variant = LabelVariant::root_label_one;
    cal.counts = a;
  } else if (constant_ratio(b, r)) {
    cal.variant = LabelVariant::min_label_one;
    cal.counts = b;
  } else {
    throw std::runtime_error("no well-labeled tree variant has a constant ratio to C(n)");
  }
  cal.ratio = r;
  return cal;
}

}  // namespace qg
