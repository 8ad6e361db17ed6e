#include "quadgrowth/maps.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

#include "json.hpp"

namespace qg {

namespace {

std::vector<int> cycles(int n, const std::vector<int>& perm, int& count) {
  std::vector<int> id(n, -1);
  count = 0;
  for (int d = 0; d < n; ++d) {
    if (id[d] >= 0) continue;
    for (int e = d; id[e] < 0; e = perm[e]) id[e] = count;
    ++count;
  }
  return id;
}

std::string dart_msg(int d, const std::string& what) { return "dart " + std::to_string(d + 1) + ": " + what; }

}  // namespace

bool RotationMap::operator<(const RotationMap& o) const {
  return std::tie(sigma, alpha, root, outer) < std::tie(o.sigma, o.alpha, o.root, o.outer);
}

Topology topology(const RotationMap& m) {
  Topology t;
  int n = m.darts();
  std::vector<int> phi(n);
  for (int d = 0; d < n; ++d) phi[d] = m.phi(d);
  t.vertex = cycles(n, m.sigma, t.V);
  t.face = cycles(n, phi, t.F);
  t.E = n / 2;
  t.vdeg.assign(t.V, 0);
  t.fdeg.assign(t.F, 0);
  for (int d = 0; d < n; ++d) {
    t.vdeg[t.vertex[d]]++;
    t.fdeg[t.face[d]]++;
  }
  return t;
}

bool is_connected(const RotationMap& m) {
  int n = m.darts();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> st{m.root};
  seen[m.root] = 1;
  int cnt = 1;
  while (!st.empty()) {
    int d = st.back();
    st.pop_back();
    for (int e : {m.sigma[d], m.alpha[d]})
      if (!seen[e]) {
        seen[e] = 1;
        ++cnt;
        st.push_back(e);
      }
  }
  return cnt == n;
}

bool is_planar(const RotationMap& m) {
  Topology t = topology(m);
  return t.V - t.E + t.F == 2;
}

std::vector<int> outer_face(const RotationMap& m) {
  std::vector<int> out;
  if (m.outer < 0) return out;
  int start = m.outer;
  for (int e = m.phi(m.outer); e != m.outer; e = m.phi(e))
    if (e == m.root) start = m.root;
  int e = start;
  do {
    out.push_back(e);
    e = m.phi(e);
  } while (e != start);
  return out;
}

bool inner_faces_quadrilateral(const RotationMap& m) {
  Topology t = topology(m);
  int of = m.outer >= 0 ? t.face[m.outer] : -1;
  for (int f = 0; f < t.F; ++f)
    if (f != of && t.fdeg[f] != 4) return false;
  return true;
}

std::vector<int> vertex_distances(const RotationMap& m) {
  Topology t = topology(m);
  std::vector<std::vector<int>> adj(t.V);
  for (int d = 0; d < m.darts(); ++d) adj[t.vertex[d]].push_back(t.vertex[m.alpha[d]]);
  std::vector<int> dist(t.V, -1);
  std::deque<int> q{t.vertex[m.root]};
  dist[q.front()] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
  }
  return dist;
}

bool is_bipartite(const RotationMap& m) {
  Topology t = topology(m);
  auto dist = vertex_distances(m);
  for (int d = 0; d < m.darts(); ++d) {
    int a = dist[t.vertex[d]], b = dist[t.vertex[m.alpha[d]]];
    if (a < 0 || b < 0 || (a - b) % 2 == 0) return false;
  }
  return true;
}

bool simple_boundary(const RotationMap& m, int parity) {
  auto o = outer_face(m);
  if (o.empty() || o.size() % 2) return false;
  Topology t = topology(m);
  std::set<int> vs;
  for (int d : o)
    if (!vs.insert(t.vertex[d]).second) return false;
  auto ok = [&](int p) {
    for (std::size_t i = p; i < o.size(); i += 2)
      if (t.vdeg[t.vertex[o[i]]] != 2) return false;
    return true;
  };
  if (parity >= 0) return ok(parity);
  return ok(0) || ok(1);
}

RotationMap canonical(const RotationMap& m) {
  int n = m.darts();
  std::vector<int> lab(n, -1), order;
  order.reserve(n);
  lab[m.root] = 0;
  order.push_back(m.root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    int d = order[i];
    for (int e : {m.sigma[d], m.alpha[d]})
      if (lab[e] < 0) {
        lab[e] = static_cast<int>(order.size());
        order.push_back(e);
      }
  }
  if (static_cast<int>(order.size()) != n) throw MapError("canonical: map is not connected");
  RotationMap c;
  c.sigma.resize(n);
  c.alpha.resize(n);
  for (int d = 0; d < n; ++d) {
    c.sigma[lab[d]] = lab[m.sigma[d]];
    c.alpha[lab[d]] = lab[m.alpha[d]];
  }
  c.root = 0;
  // the outer face is kept as its smallest canonical dart so equal maps compare equal
  if (m.outer >= 0) {
    int best = lab[m.outer];
    for (int e = m.phi(m.outer); e != m.outer; e = m.phi(e)) best = std::min(best, lab[e]);
    c.outer = best;
  }
  return c;
}

void validate(const RotationMap& m) {
  int n = m.darts();
  if (static_cast<int>(m.alpha.size()) != n) throw MapError("sigma and alpha lengths differ");
  if (n == 0 || n % 2) throw MapError("dart count must be positive and even");
  std::vector<char> hit(n, 0);
  for (int d = 0; d < n; ++d) {
    int s = m.sigma[d];
    if (s < 0 || s >= n) throw MapError(dart_msg(d, "sigma out of range"));
    if (hit[s]) throw MapError(dart_msg(d, "sigma is not a permutation"));
    hit[s] = 1;
  }
  for (int d = 0; d < n; ++d) {
    int a = m.alpha[d];
    if (a < 0 || a >= n) throw MapError(dart_msg(d, "alpha out of range"));
    if (a == d) throw MapError(dart_msg(d, "alpha has a fixed point"));
    if (m.alpha[a] != d) throw MapError(dart_msg(d, "alpha is not an involution"));
  }
  if (m.root < 0 || m.root >= n) throw MapError("root dart out of range");
  if (m.outer >= n) throw MapError("outer dart out of range");
  if (!is_connected(m)) throw MapError("sigma and alpha do not act transitively");
}

std::string to_json(const RotationMap& m) {
  nlohmann::json j;
  int n = m.darts();
  std::vector<int> s(n), a(n);
  for (int d = 0; d < n; ++d) {
    s[d] = m.sigma[d] + 1;
    a[d] = m.alpha[d] + 1;
  }
  j["darts"] = n;
  j["sigma"] = s;
  j["alpha"] = a;
  j["root"] = m.root + 1;
  j["labels"]["dist"] = vertex_distances(m);
  if (m.outer >= 0) j["labels"]["outer"] = m.outer + 1;
  return j.dump();
}

RotationMap from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MapError(std::string("malformed map JSON: ") + e.what());
  }
  RotationMap m;
  try {
    int n = j.at("darts").get<int>();
    auto s = j.at("sigma").get<std::vector<int>>();
    auto a = j.at("alpha").get<std::vector<int>>();
    if (static_cast<int>(s.size()) != n) throw MapError("sigma has " + std::to_string(s.size()) + " entries, darts is " + std::to_string(n));
    if (static_cast<int>(a.size()) != n) throw MapError("alpha has " + std::to_string(a.size()) + " entries, darts is " + std::to_string(n));
    m.sigma.resize(n);
    m.alpha.resize(n);
    for (int d = 0; d < n; ++d) {
      m.sigma[d] = s[d] - 1;
      m.alpha[d] = a[d] - 1;
    }
    m.root = j.at("root").get<int>() - 1;
    if (j.contains("labels") && j["labels"].contains("outer")) m.outer = j["labels"]["outer"].get<int>() - 1;
  } catch (const nlohmann::json::exception& e) {
    throw MapError(std::string("bad map JSON: ") + e.what());
  }
  validate(m);
  return m;
}

int Builder::add_dart() {
  phi_.push_back(-1);
  alpha_.push_back(-1);
  dead_.push_back(0);
  return size() - 1;
}

std::vector<int> Builder::add_face(int k) {
  std::vector<int> f(k);
  for (int i = 0; i < k; ++i) f[i] = add_dart();
  for (int i = 0; i < k; ++i) phi_[f[i]] = f[(i + 1) % k];
  return f;
}

void Builder::pair(int a, int b) {
  alpha_.at(a) = b;
  alpha_.at(b) = a;
}

std::vector<int> Builder::final_ids() const {
  std::vector<int> id(size(), -1);
  int k = 0;
  for (int d = 0; d < size(); ++d)
    if (!dead_[d]) id[d] = k++;
  return id;
}

RotationMap Builder::finish(int root, int outer) const {
  int n = size();
  std::vector<int> id = final_ids();
  int k = 0;
  for (int d = 0; d < n; ++d) k += !dead_[d];
  RotationMap m;
  m.sigma.resize(k);
  m.alpha.resize(k);
  for (int d = 0; d < n; ++d) {
    if (dead_[d]) continue;
    if (alpha_[d] < 0 || phi_[d] < 0) throw MapError(dart_msg(d, "left unset by the builder"));
    int a = alpha_[d];
    if (dead_[a] || dead_[phi_[a]]) throw MapError(dart_msg(d, "points to a removed dart"));
    m.alpha[id[d]] = id[a];
    m.sigma[id[d]] = id[phi_[a]];  // sigma = phi o alpha
  }
  if (dead_.at(root)) throw MapError("root dart was removed");
  m.root = id[root];
  m.outer = outer >= 0 ? id[outer] : -1;
  validate(m);
  return m;
}

Builder to_builder(const RotationMap& m) {
  Builder b;
  for (int d = 0; d < m.darts(); ++d) b.add_dart();
  for (int d = 0; d < m.darts(); ++d) {
    b.set_phi(d, m.phi(d));
    b.pair(d, m.alpha[d]);
  }
  return b;
}

void glue_piece(Builder& b, const RotationMap& piece, const std::vector<int>& ports) {
  auto o = outer_face(piece);
  if (o.size() != ports.size())
    throw MapError("glue: hole has " + std::to_string(ports.size()) + " ports, piece boundary has " +
                   std::to_string(o.size()));
  int n = piece.darts();
  std::vector<int> pos(n, -1), id(n, -1);
  for (std::size_t i = 0; i < o.size(); ++i) pos[o[i]] = static_cast<int>(i);
  for (int d = 0; d < n; ++d)
    if (pos[d] < 0) id[d] = b.add_dart();
  for (int d = 0; d < n; ++d) {
    if (pos[d] < 0) {
      b.set_phi(id[d], id[piece.phi(d)]);
      int a = piece.alpha[d];
      if (pos[a] < 0)
        b.pair(id[d], id[a]);
      else
        b.pair(id[d], ports[pos[a]]);
    } else {
      int a = piece.alpha[d];
      if (pos[a] >= 0) b.pair(ports[pos[d]], ports[pos[a]]);
    }
  }
}

}  // namespace qg
