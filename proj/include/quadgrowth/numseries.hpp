#pragma once

// Floating-point truncated series for orders where exact rationals get too heavy.
// mul() is the OpenMP kernel; mul_serial() is the reference it is tested against.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qg::num {

template <class T>
using Vec = std::vector<T>;

template <class T>
Vec<T> mul_serial(const Vec<T>& a, const Vec<T>& b, int n) {
  Vec<T> c(n + 1, T(0));
  for (int k = 0; k <= n; ++k) {
    T acc(0);
    int lo = k - static_cast<int>(b.size()) + 1;
    for (int i = lo < 0 ? 0 : lo; i <= k && i < static_cast<int>(a.size()); ++i) acc += a[i] * b[k - i];
    c[k] = acc;
  }
  return c;
}

// same summation order per output coefficient as mul_serial, so results are bitwise equal
template <class T>
Vec<T> mul(const Vec<T>& a, const Vec<T>& b, int n) {
  Vec<T> c(n + 1, T(0));
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (int k = 0; k <= n; ++k) {
    T acc(0);
    int lo = k - nb + 1;
    for (int i = lo < 0 ? 0 : lo; i <= k && i < na; ++i) acc += a[i] * b[k - i];
    c[k] = acc;
  }
  return c;
}

template <class T>
Vec<T> inv(const Vec<T>& a, int n) {
  if (a.empty() || a[0] == T(0)) throw std::domain_error("non-invertible series");
  Vec<T> b(n + 1, T(0));
  b[0] = T(1) / a[0];
  for (int k = 1; k <= n; ++k) {
    T acc(0);
    for (int i = 1; i <= k && i < static_cast<int>(a.size()); ++i) acc += a[i] * b[k - i];
    b[k] = -acc * b[0];
  }
  return b;
}

template <class T>
Vec<T> add(Vec<T> a, const Vec<T>& b, T scale = T(1)) {
  if (a.size() < b.size()) a.resize(b.size(), T(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
  return a;
}

// sqrt((9-t)/(1-t)) from its three-term recurrence
template <class T>
Vec<T> s_series(int n) {
  Vec<T> g(n + 1, T(0));
  g[0] = T(3);
  if (n >= 1) g[1] = T(4) / T(3);
  for (int k = 1; k < n; ++k)
    g[k + 1] = (T(10 * k + 4) * g[k] - T(k - 1) * g[k - 1]) / (T(9) * T(k + 1));
  return g;
}

// phi_R(t) = 1 - 8/((s+2R)^2 - 1)
template <class T>
Vec<T> phi_iter(const T& R, int n, bool parallel = true) {
  Vec<T> s = s_series<T>(n);
  s[0] += T(2) * R;
  Vec<T> q = parallel ? mul(s, s, n) : mul_serial(s, s, n);
  q[0] -= T(1);
  Vec<T> r = inv(q, n);
  for (auto& x : r) x *= T(-8);
  r[0] += T(1);
  return r;
}

}  // namespace qg::num
