#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qg {

struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Darts 0..n-1 internally, 1-based in JSON.  sigma turns around the tail vertex,
// alpha flips the edge, and the face permutation is phi = sigma o alpha.
struct RotationMap {
  std::vector<int> sigma, alpha;
  int root = 0;
  int outer = -1;  // a dart of the distinguished outer face, or -1

  int darts() const { return static_cast<int>(sigma.size()); }
  int phi(int d) const { return sigma[alpha[d]]; }
  bool operator==(const RotationMap& o) const {
    return sigma == o.sigma && alpha == o.alpha && root == o.root && outer == o.outer;
  }
  bool operator<(const RotationMap& o) const;
};

struct Topology {
  std::vector<int> vertex, face;  // cycle id per dart, numbered by first dart
  std::vector<int> vdeg, fdeg;
  int V = 0, E = 0, F = 0;
};

Topology topology(const RotationMap& m);
bool is_connected(const RotationMap& m);
bool is_planar(const RotationMap& m);  // Euler V - E + F = 2
// every face except the outer one has degree 4
bool inner_faces_quadrilateral(const RotationMap& m);
// graph distance of each vertex from the tail of the root
std::vector<int> vertex_distances(const RotationMap& m);
bool is_bipartite(const RotationMap& m);
// outer face darts in phi order starting at the root if the root is outer, else at m.outer
std::vector<int> outer_face(const RotationMap& m);
// outer boundary has distinct vertices and every second one has degree two;
// parity is the position (0 or 1) of the degree-two class, or -1 to accept either
bool simple_boundary(const RotationMap& m, int parity = -1);

// relabel darts in BFS order from the root, visiting sigma(d) then alpha(d)
RotationMap canonical(const RotationMap& m);

// throws MapError naming the first bad dart
void validate(const RotationMap& m);

std::string to_json(const RotationMap& m);
RotationMap from_json(const std::string& s);

// Assembles maps face by face; darts carry phi and alpha, -1 while unset.
class Builder {
 public:
  int add_dart();
  std::vector<int> add_face(int k);  // k darts with cyclic phi
  void pair(int a, int b);
  int size() const { return static_cast<int>(phi_.size()); }
  int phi(int d) const { return phi_[d]; }
  int alpha(int d) const { return alpha_[d]; }
  void set_phi(int d, int e) { phi_[d] = e; }
  void remove(int d) { dead_.at(d) = 1; }
  // drops removed darts; every remaining dart must be fully set
  RotationMap finish(int root, int outer = -1) const;
  // dart ids after finish(), -1 for removed darts
  std::vector<int> final_ids() const;

 private:
  std::vector<int> phi_, alpha_;
  std::vector<char> dead_;
};

// Glue piece into a hole of b.  ports[i] plays the role of the i-th outer dart of the
// piece (phi order from piece.root): it receives the piece's inner neighbour as alpha.
void glue_piece(Builder& b, const RotationMap& piece, const std::vector<int>& ports);

// builder from an existing map (all darts kept, same ids)
Builder to_builder(const RotationMap& m);

}  // namespace qg
