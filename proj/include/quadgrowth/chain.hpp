#pragma once

#include <string>
#include <vector>

#include "quadgrowth/rng.hpp"
#include "quadgrowth/series.hpp"

namespace qg {

struct Dist {
  std::vector<Rational> masses;  // index = state
  Rational tail_bound;           // bound on the mass above masses.size()-1
  Rational total() const;
  std::string csv(int first = 0) const;
};

struct ChainPath {
  std::vector<int> values;  // |gamma_0| .. |gamma_R|
  std::uint64_t seed = 0;
};

// [t^l] phi_n(t)^k
Rational xi_transition(int k, int l, int n);
// [t] phi_R^m from its closed form (4/3) m (2R+3)(R^2+3R)^(m-1)/(R^2+3R+2)^(m+1)
Rational t1_closed(const Rational& R, int m);
long double t1_closed_ld(long double R, int m);

// P{|gamma_R| = m} = F_m [t] phi_{R+shift}^m; shift 0 is the default convention here
Dist gamma_dist(int R, int m_max, int shift = 0);
Rational gamma_tail_bound(int R, int m_max, int shift = 0);

Rational reversed_transition(int l, int k, int n);
// exact n=1 outward row from l, truncated at k_max, with certified tail
Dist outward_row(int l, int k_max);
Rational outward_tail_bound(int l, int k_max);
int sample_outward(int l, Rng& rng);

// h-transformed inward step: P{m_{r-1} = l | m_r = m}
Rational inward_transition(int m, int l, int r);
int sample_inward(int m, int r, Rng& rng);
ChainPath sample_chain(int R, Rng& rng);  // |gamma_0..R| by sampling the top then walking inward

Rational split_prob(const std::vector<int>& parts);
std::vector<int> conditional_split(int k, int l, Rng& rng);

int sample_gamma(int R, Rng& rng);
std::vector<long double> gamma_masses_ld(int R, int m_max, int shift = 0);

struct ThetaMoments {
  Rational norm;              // E y^theta at y = 1
  Rational mean;
  Rational second_factorial;  // E theta(theta-1)
  Rational second_raw;        // E theta^2
};
ThetaMoments theta_moments(int R);

struct EximMoments {
  int m = 0;
  long double mean_shift = 0, second_moment = 0;
  long double printed_mean_shift = 0;  // [t^m]F'(phi)/F_m - m, the formula as printed
  long double mean_ratio = 0, second_ratio = 0;
};
EximMoments exim_moments(int m, bool parallel = true);
// exact version for small m: (mean shift, second moment)
std::pair<Rational, Rational> exim_moments_exact(int m);

// long double tables of [t^j] phi^i, shared and grown on demand
const std::vector<long double>& phi_pow_row(int i, int J);
long double F_coeff_ld(int k);

}  // namespace qg
