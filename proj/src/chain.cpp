#include "quadgrowth/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "quadgrowth/genfun.hpp"
#include "quadgrowth/numseries.hpp"

namespace qg {

using LD = long double;

Rational Dist::total() const {
  Rational s = 0;
  for (auto& m : masses) s += m;
  return s;
}

std::string Dist::csv(int first) const {
  std::ostringstream os;
  os.precision(17);
  os << "m,numerator,denominator,float\n";
  for (int i = first; i < static_cast<int>(masses.size()); ++i)
    os << i << ',' << masses[i].get_num().get_str() << ',' << masses[i].get_den().get_str() << ','
       << to_double(masses[i]) << '\n';
  os << "tail," << tail_bound.get_num().get_str() << ',' << tail_bound.get_den().get_str() << ','
     << to_double(tail_bound) << '\n';
  return os.str();
}

Rational xi_transition(int k, int l, int n) {
  if (k < 1 || l < 0 || n < 1) throw std::domain_error("xi_transition: need k >= 1, l >= 0, n >= 1");
  return pow(phi_iter(n, l), static_cast<unsigned>(k))[l];
}

Rational t1_closed(const Rational& R, int m) {
  Rational a = R * R + 3 * R, b = a + 2;
  return Rational(4, 3) * m * (2 * R + 3) * rpow(a, m - 1) / rpow(b, m + 1);
}

LD t1_closed_ld(LD R, int m) {
  if (m < 1) return 0;
  if (R == 0) return m == 1 ? 1.0L : 0.0L;
  LD a = R * R + 3 * R, b = a + 2;
  return std::exp(std::log(4.0L / 3.0L) + std::log(LD(m)) + std::log(2 * R + 3) + (m - 1) * std::log(a) -
                  (m + 1) * std::log(b));
}

namespace {

std::mutex ld_mu;

const std::vector<LD>& F_ld_table(int k) {
  static std::vector<LD> F;
  std::lock_guard<std::mutex> lk(ld_mu);
  if (static_cast<int>(F.size()) <= k) {
    int n = std::max(2 * k, 1024);
    F = num::s_series<LD>(n);
    for (auto& x : F) x *= 0.75L;
    F[0] = 0;
  }
  return F;
}

// sup of F_k over k >= 1 is F_1 = 1; 9/4 keeps the bound safe without relying on that
const Rational F_sup{9, 4};

}  // namespace

LD F_coeff_ld(int k) { return F_ld_table(k)[k]; }

Rational gamma_tail_bound(int R, int M, int shift) {
  Rational Re = R + shift;
  Rational a = Re * Re + 3 * Re, b = a + 2, rho = a / b;
  Rational geo = rpow(rho, M) * ((M + 1) - M * rho) / ((1 - rho) * (1 - rho));
  return F_sup * Rational(4, 3) * (2 * Re + 3) / (b * b) * geo;
}

Dist gamma_dist(int R, int m_max, int shift) {
  if (R < 0 || m_max < 0) throw std::domain_error("gamma_dist: R, m_max >= 0");
  Dist d;
  d.masses.assign(m_max + 1, Rational(0));
  Series F = F_series(std::max(m_max, 1));
  for (int m = 1; m <= m_max; ++m) d.masses[m] = F[m] * t1_closed(R + shift, m);
  // both laws have total mass one, so the remainder is exact; the geometric bound only helps past it
  d.tail_bound = std::min<Rational>(gamma_tail_bound(R, m_max, shift), 1 - d.total());
  return d;
}

std::vector<LD> gamma_masses_ld(int R, int m_max, int shift) {
  std::vector<LD> p(m_max + 1, 0.0L);
  const auto& F = F_ld_table(m_max);
  for (int m = 1; m <= m_max; ++m) p[m] = F[m] * t1_closed_ld(R + shift, m);
  return p;
}

Rational reversed_transition(int l, int k, int n) {
  if (l < 1 || k < 1) throw std::domain_error("reversed_transition: l, k >= 1");
  return F_coeff(k) / F_coeff(l) * xi_transition(k, l, n);
}

Rational outward_tail_bound(int l, int K) {
  // [t^l]phi^k <= phi_{R+1}(0)^k / phi_R(0)^l for every R > 0; F_k <= 9/4
  Rational best = -1;
  for (int j = 0; j <= 16; ++j) {
    Rational R = Rational(1 << j, 4);
    Rational r = 1 - Rational(8) / ((3 + 2 * R) * (3 + 2 * R) - 1);
    Rational c = 1 - Rational(8) / ((5 + 2 * R) * (5 + 2 * R) - 1);
    Rational b = F_sup / F_coeff(l) / rpow(r, l) * rpow(c, K + 1) / (1 - c);
    if (best < 0 || b < best) best = b;
  }
  return best;
}

Dist outward_row(int l, int k_max) {
  if (l < 1) throw std::domain_error("outward_row: l >= 1");
  Dist d;
  d.masses.assign(k_max + 1, Rational(0));
  Series phi = phi_series(l);
  Series p = Series::constant(1, l);
  Rational Fl = F_coeff(l);
  for (int k = 1; k <= k_max; ++k) {
    p = p * phi;
    d.masses[k] = F_coeff(k) / Fl * p[l];
  }
  d.tail_bound = std::min<Rational>(outward_tail_bound(l, k_max), 1 - d.total());
  return d;
}

// ---------------------------------------------------------------- float tables

const std::vector<LD>& phi_pow_row(int i, int J) {
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<LD>>> rows;
  static std::vector<LD> phi;
  int Jb = 32;
  while (Jb < J) Jb *= 2;
  std::lock_guard<std::mutex> lk(ld_mu);
  auto key = std::make_pair(i, Jb);
  auto it = rows.find(key);
  if (it != rows.end()) return *it->second;
  if (static_cast<int>(phi.size()) <= Jb) phi = num::phi_iter<LD>(1.0L, std::max(Jb, 2 * static_cast<int>(phi.size())), false);
  std::vector<LD> base(phi.begin(), phi.begin() + Jb + 1);
  std::vector<LD> out(Jb + 1, 0.0L);
  out[0] = 1;
  unsigned e = static_cast<unsigned>(i);
  while (e) {
    if (e & 1u) out = num::mul_serial(out, base, Jb);
    e >>= 1;
    if (e) base = num::mul_serial(base, base, Jb);
  }
  auto ins = rows.emplace(key, std::make_unique<std::vector<LD>>(std::move(out)));
  return *ins.first->second;
}

namespace {

std::map<int, std::vector<LD>> gamma_cdf_cache;
std::map<int, std::vector<LD>> outward_cdf_cache;

const std::vector<LD>& gamma_cdf(int R) {
  std::lock_guard<std::mutex> lk(ld_mu);
  auto it = gamma_cdf_cache.find(R);
  if (it != gamma_cdf_cache.end()) return it->second;
  LD Re = R;
  LD a = Re * Re + 3 * Re, b = a + 2, rho = a / b;
  // grow M until the certified tail is below 2^-40
  int M = 16;
  auto tail = [&](int MM) {
    LD geo = std::pow(rho, LD(MM)) * ((MM + 1) - MM * rho) / ((1 - rho) * (1 - rho));
    return 2.25L * (4.0L / 3.0L) * (2 * Re + 3) / (b * b) * geo;
  };
  while (R > 0 && tail(M) > std::ldexp(1.0L, -40)) M *= 2;
  std::vector<LD> F;
  {
    F = num::s_series<LD>(M + 1);
    for (auto& x : F) x *= 0.75L;
  }
  std::vector<LD> cdf(M + 1, 0.0L);
  for (int m = 1; m <= M; ++m) cdf[m] = cdf[m - 1] + F[m] * t1_closed_ld(Re, m);
  return gamma_cdf_cache.emplace(R, std::move(cdf)).first->second;
}

int inverse_cdf(const std::vector<LD>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), static_cast<LD>(u));
  if (it == cdf.end()) return static_cast<int>(cdf.size()) - 1;
  return static_cast<int>(it - cdf.begin());
}

}  // namespace

int sample_gamma(int R, Rng& rng) {
  if (R < 0) throw std::domain_error("sample_gamma: R >= 0");
  if (R == 0) return 1;
  return inverse_cdf(gamma_cdf(R), rng.uniform());
}

int sample_outward(int l, Rng& rng) {
  if (l < 1) throw std::domain_error("sample_outward: l >= 1");
  const std::vector<LD>* cdf = nullptr;
  {
    std::lock_guard<std::mutex> lk(ld_mu);
    auto it = outward_cdf_cache.find(l);
    if (it != outward_cdf_cache.end()) cdf = &it->second;
  }
  if (!cdf) {
    int K = 32;
    while (to_long_double(outward_tail_bound(l, K)) > std::ldexp(1.0L, -40)) {
      K *= 2;
      if (K > (1 << 16)) throw std::runtime_error("sample_outward: tail cannot be bounded below 2^-40");
    }
    // column l of phi^k for k = 1..K
    std::vector<LD> phi = num::phi_iter<LD>(1.0L, l, false);
    std::vector<LD> p(l + 1, 0.0L), c(K + 1, 0.0L);
    p[0] = 1;
    LD Fl = F_coeff_ld(l);
    for (int k = 1; k <= K; ++k) {
      p = num::mul_serial(p, phi, l);
      c[k] = c[k - 1] + F_coeff_ld(k) / Fl * p[l];
    }
    std::lock_guard<std::mutex> lk(ld_mu);
    cdf = &outward_cdf_cache.emplace(l, std::move(c)).first->second;
  }
  return inverse_cdf(*cdf, rng.uniform());
}

Rational inward_transition(int m, int l, int r) {
  if (m < 1 || r < 1) throw std::domain_error("inward_transition: m, r >= 1");
  if (l < 1) return 0;
  return xi_transition(m, l, 1) * t1_closed(r - 1, l) / t1_closed(r, m);
}

int sample_inward(int m, int r, Rng& rng) {
  if (r == 1) return 1;
  double u = rng.uniform();
  LD denom = t1_closed_ld(r, m);
  int J = std::max(64, 4 * m);
  for (;;) {
    const auto& row = phi_pow_row(m, J);
    LD cum = 0;
    int last = 1;
    for (int l = 1; l < static_cast<int>(row.size()); ++l) {
      LD w = row[l] * t1_closed_ld(r - 1, l) / denom;
      if (w > 0) last = l;
      cum += w;
      if (cum > u) return l;
    }
    if (1 - cum < std::ldexp(1.0L, -40)) return last;
    J = static_cast<int>(row.size()) * 2;
    if (J > (1 << 20)) throw std::runtime_error("sample_inward: kernel table too large");
  }
}

ChainPath sample_chain(int R, Rng& rng) {
  ChainPath p;
  p.seed = rng.seed();
  p.values.assign(R + 1, 0);
  p.values[R] = sample_gamma(R, rng);
  for (int r = R; r >= 1; --r) p.values[r - 1] = sample_inward(p.values[r], r, rng);
  return p;
}

Rational split_prob(const std::vector<int>& parts) {
  int l = 0;
  for (int x : parts) l += x;
  Rational num = 1;
  for (int x : parts) num *= offspring_p(x);
  return num / xi_transition(static_cast<int>(parts.size()), l, 1);
}

std::vector<int> conditional_split(int k, int l, Rng& rng) {
  if (k < 1 || l < 0) throw std::domain_error("conditional_split: impossible (k, l)");
  std::vector<int> out(k, 0);
  int L = l;
  const auto& p1 = phi_pow_row(1, L);
  for (int i = 0; i + 1 < k && L > 0; ++i) {
    int c = k - i;
    const auto& rest = phi_pow_row(c - 1, L);
    const auto& all = phi_pow_row(c, L);
    double u = rng.uniform();
    LD cum = 0;
    int pick = L;
    for (int a = 0; a <= L; ++a) {
      cum += p1[a] * rest[L - a] / all[L];
      if (cum > u) {
        pick = a;
        break;
      }
    }
    out[i] = pick;
    L -= pick;
  }
  out[k - 1] += L;
  return out;
}

// ---------------------------------------------------------------- theta

namespace {

// Laurent polynomials in s; derivatives in u = phi-variable via ds/du = (s^2-1)^2/(16 s)
using Laurent = std::map<int, Rational>;

Laurent lmul(const Laurent& a, const Laurent& b) {
  Laurent c;
  for (auto& [i, x] : a)
    for (auto& [j, y] : b) c[i + j] += x * y;
  return c;
}

Laurent d_ds(const Laurent& a) {
  Laurent c;
  for (auto& [i, x] : a)
    if (i != 0) c[i - 1] += x * i;
  return c;
}

Laurent d_du(const Laurent& a) {
  Laurent w{{3, Rational(1, 16)}, {1, Rational(-2, 16)}, {-1, Rational(1, 16)}};
  return lmul(d_ds(a), w);
}

Rational leval(const Laurent& a, const Rational& s) {
  Rational v = 0;
  for (auto& [i, x] : a) v += x * rpow(s, i);
  return v;
}

Laurent F_prime_laurent() { return {{3, Rational(3, 64)}, {1, Rational(-6, 64)}, {-1, Rational(3, 64)}}; }

}  // namespace

ThetaMoments theta_moments(int R) {
  if (R < 1) throw std::domain_error("theta_moments: R >= 1");
  Laurent F1 = F_prime_laurent(), F2 = d_du(F1), F3 = d_du(F2);
  Rational s1 = 3 + 4 * Rational(R);
  Rational c = 1 - Rational(8) / ((3 + 2 * Rational(R)) * (3 + 2 * Rational(R)) - 1);
  Rational u1 = 1 - Rational(8) / (s1 * s1 - 1);
  Rational d = u1 - c;
  Rational g = t1_closed(2 * R, 1);
  ThetaMoments t;
  Rational f1 = leval(F1, s1), f2 = leval(F2, s1), f3 = leval(F3, s1);
  t.norm = g * f1;
  t.mean = g * (f1 + d * f2);
  t.second_factorial = g * (2 * d * f2 + d * d * f3);
  t.second_raw = t.second_factorial + t.mean;
  return t;
}

// ---------------------------------------------------------------- exim

EximMoments exim_moments(int m, bool parallel) {
  if (m < 1) throw std::domain_error("exim_moments: m >= 1");
  const int n = m;
  auto mul = [&](const std::vector<LD>& a, const std::vector<LD>& b) {
    return parallel ? num::mul(a, b, n) : num::mul_serial(a, b, n);
  };
  std::vector<LD> S = num::s_series<LD>(n);
  S[0] += 2;
  std::vector<LD> S2 = mul(S, S);
  std::vector<LD> a = S2, b = S2, c = S2;
  a[0] -= 9;
  b[0] -= 1;
  for (auto& x : c) x *= 3;
  c[0] += 1;
  std::vector<LD> iS = num::inv(S, n);
  std::vector<LD> iS3 = mul(iS, mul(iS, iS));
  std::vector<LD> ab = mul(a, b);
  // sum_k k F_k phi^k = phi F'(phi) and sum_k k(k-1) F_k phi^k = phi^2 F''(phi), in S = s + 2
  LD A1 = 3.0L / 64 * mul(ab, iS)[m];
  LD A2 = 3.0L / 1024 * mul(mul(ab, a), mul(c, iS3))[m];
  LD P1 = 3.0L / 64 * mul(mul(b, b), iS)[m];
  LD Fm = F_coeff_ld(m);
  EximMoments e;
  e.m = m;
  LD E1 = A1 / Fm, E2 = (A2 + A1) / Fm;
  e.mean_shift = E1 - m;
  e.second_moment = E2 - 2 * m * E1 + LD(m) * m;
  e.printed_mean_shift = P1 / Fm - m;
  const LD root2pi = std::sqrt(2 * 3.14159265358979323846264338327950288L);
  e.mean_ratio = e.mean_shift / (0.75L * root2pi * std::sqrt(LD(m)));
  e.second_ratio = e.second_moment / (0.375L * root2pi * std::pow(LD(m), 1.5L));
  return e;
}

std::pair<Rational, Rational> exim_moments_exact(int m) {
  Series S = s_expr()(Series::variable(m)) + Series::constant(2, m);
  Series one = Series::constant(1, m);
  Series S2 = S * S;
  Series a = S2 - one * Rational(9), b = S2 - one, c = S2 * Rational(3) + one;
  Series iS = inverse(S);
  Series A1 = a * b * iS * Rational(3, 64);
  Series A2 = a * a * b * c * iS * iS * iS * Rational(3, 1024);
  Rational Fm = F_coeff(m);
  Rational E1 = A1[m] / Fm, E2 = (A2[m] + A1[m]) / Fm;
  return {E1 - m, E2 - 2 * m * E1 + Rational(m) * m};
}

}  // namespace qg
