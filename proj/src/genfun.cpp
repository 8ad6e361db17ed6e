#include "quadgrowth/genfun.hpp"

#include <cfloat>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace qg {

Expr s_expr() {
  Expr t;
  return sqrt((Expr(9) - t) / (Expr(1) - t)).named("s");
}

Expr F_expr() { return (Expr(Rational(3, 4)) * (s_expr() - Expr(3))).named("F"); }

Expr phi_iter_expr(const Rational& R) {
  Expr u = s_expr() + Expr(2 * R);
  return (Expr(1) - Expr(8) / (u * u - Expr(1))).named("phi_R");
}

Expr f_generator_expr() {
  Expr t;
  Expr one_minus = Expr(1) - t;
  return (Expr(Rational(1, 2)) * sqrt((Expr(9) - t) * one_minus * one_minus * one_minus)).named("f");
}

Series q_series(int order) {
  Expr x;
  Expr r = sqrt(Expr(1) - Expr(12) * x).named("sqrt(1-12x)");
  Expr q = Expr(Rational(4, 3)) * (Expr(2) * r + Expr(1)) / ((r + Expr(1)) * (r + Expr(1)));
  return q(Series::variable(order));
}

namespace {

std::mutex cache_mu;

const Series& q_cached(int order) {
  static Series q;
  std::lock_guard<std::mutex> lk(cache_mu);
  if (q.coeffs().empty() || q.order() < order) q = q_series(std::max(order, 64));
  return q;
}

BiSeries U_build(int ox, int oy) {
  BiSeries X = BiSeries::x(ox, oy), Y = BiSeries::y(ox, oy);
  BiSeries one = BiSeries::constant(1, ox, oy);
  BiSeries q = BiSeries::from_x(q_series(ox), oy);
  BiSeries xy2 = X * Y * Y;
  BiSeries rad = Y * Y - Rational(2) * X * Y * Y * Y - Rational(2) * Y + Rational(4) * X * Y * q + (xy2 - one) * (xy2 - one);
  return (Y - xy2 - one + sqrt(rad)) * Rational(1, 2);
}

const BiSeries& U_cached(int ox, int oy) {
  static BiSeries U;
  std::lock_guard<std::mutex> lk(cache_mu);
  if (U.order_x() < ox || U.order_y() < oy) {
    int nx = std::max({ox, U.order_x(), 24});
    int ny = std::max({oy, U.order_y(), 8});
    U = U_build(nx, ny);
  }
  return U;
}

const Series& S_cached(int order) {
  static Series S;
  std::lock_guard<std::mutex> lk(cache_mu);
  if (S.coeffs().empty() || S.order() < order) S = S_series(std::max(order, 64));
  return S;
}

const Series& F_cached(int order) {
  static Series F;
  std::lock_guard<std::mutex> lk(cache_mu);
  if (F.coeffs().empty() || F.order() < order) F = F_series(std::max(order, 64));
  return F;
}

const Series& phi_cached(int order) {
  static Series p;
  std::lock_guard<std::mutex> lk(cache_mu);
  if (p.coeffs().empty() || p.order() < order) p = phi_series(std::max(order, 64));
  return p;
}

}  // namespace

Integer count_C(int N) {
  if (N < 0) throw std::out_of_range("count_C: negative N");
  const Series& q = q_cached(N);
  return q[N].get_num();
}

BiSeries U_series(int order_x, int order_y) { return U_build(order_x, order_y); }

Integer count_CNm(int N, int m) {
  if (N < 0 || m < 0) throw std::out_of_range("count_CNm: negative index");
  const BiSeries& U = U_cached(N, m);
  return U.coeff(N, m).get_num();
}

Series S_series(int order) {
  Expr y;
  Expr P = (y - Expr(18)) * (y - Expr(2)) * (y - Expr(2)) * (y - Expr(2));
  return (Expr(12) / sqrt(P))(Series::variable(order));
}

ExpansionCoeffs expansion_coeffs(int order_y) {
  Expr y;
  Expr P = (y - Expr(18)) * (y - Expr(2)) * (y - Expr(2)) * (y - Expr(2));
  Expr A = sqrt(P) / Expr(24) - Expr(Rational(1, 2)) + y / Expr(2) - y * y / Expr(24);
  Expr A1 = y * y / Expr(2) + (y / Expr(2)) * (y * y - Expr(10) * y - Expr(32)) / sqrt((Expr(18) - y) * (Expr(2) - y));
  Series Y = Series::variable(order_y);
  ExpansionCoeffs e;
  e.A = A(Y);
  e.A1 = A1(Y);
  e.B_over_b1 = S_series(order_y).shift_up(1);
  return e;
}

Rational b_ratio(int m) {
  if (m <= 0) throw std::domain_error("b_ratio: m must be >= 1 (b(0) = 0)");
  return S_cached(m - 1)[m - 1];
}

double b1_value() { return 16.0 * std::sqrt(3.0) / 3.0; }

double log_asympt_CNm(int N, int m) {
  if (N < 1 || m < 1) throw std::domain_error("asympt_CNm: N, m >= 1");
  double lg = std::log(to_double(b_ratio(m)) * b1_value()) - std::lgamma(1.5);
  return lg - 2.5 * std::log(double(N)) + N * std::log(12.0);
}

double asympt_CNm(int N, int m) {
  double l = log_asympt_CNm(N, m);
  if (l > std::log(DBL_MAX) - 1) {
    std::ostringstream os;
    os << "asympt_CNm(" << N << "," << m << ") overflows double; use log_asympt_CNm";
    throw std::overflow_error(os.str());
  }
  return to_double(b_ratio(m)) * b1_value() / std::tgamma(1.5) * std::pow(double(N), -2.5) * std::pow(12.0, N);
}

Rational mu_hull_prob(int n, int m) {
  if (m < 1 || n < m) throw std::domain_error("mu_hull_prob: need n >= m >= 1");
  return b_ratio(m) * rpow(X0, n - m + 1);
}

Rational finite_ball_prob(int n, const std::vector<int>& holes, int N) {
  if (N < n) throw std::domain_error("finite_ball_prob: N < n");
  Rational CN = Rational(count_C(N));
  int free_faces = N - n;
  if (holes.empty()) return free_faces == 0 ? 1 / CN : Rational(0);
  int mmax = 0;
  for (int m : holes) {
    if (m < 1) throw std::domain_error("finite_ball_prob: hole length must be >= 1");
    mmax = std::max(mmax, m);
  }
  const int cap = 600;
  if (free_faces + mmax > cap) {
    std::ostringstream os;
    os << "finite_ball_prob: needs U to x-order " << free_faces + mmax << " (cap " << cap << ")";
    throw std::out_of_range(os.str());
  }
  // each hole m contributes sum_j C(j+m, m) z^j; the m = 1 column is just q
  Series acc = Series::constant(1, free_faces);
  for (int m : holes) {
    Series h(free_faces);
    if (m == 1) {
      const Series& q = q_cached(free_faces);
      for (int j = 0; j <= free_faces; ++j) h[j] = q[j];
    } else {
      const BiSeries& U = U_cached(free_faces + m, m);
      for (int j = 0; j <= free_faces; ++j) h[j] = U.coeff(j + m, m);
    }
    acc = acc * h;
  }
  return acc[free_faces] / CN;
}

Series phi_iter(const Rational& R, int order) {
  if (sgn(R) < 0) throw std::domain_error("phi_iter: R must be >= 0");
  return phi_iter_expr(R)(Series::variable(order));
}

Series phi_series(int order) { return phi_iter(1, order); }

Series F_series(int order) { return F_expr()(Series::variable(order)); }

Rational offspring_p(int k) { return phi_cached(k)[k]; }

Rational F_coeff(int k) { return F_cached(k)[k]; }

// ---------------------------------------------------------------- identities

namespace {

Check series_check(const std::string& name, const Series& a, const Series& b) {
  Check c{name, true, "exact to order " + std::to_string(a.order())};
  int i = first_difference(a, b);
  if (i >= 0) {
    c.passed = false;
    c.detail = "first offending coefficient [" + std::to_string(i) + "]: " + to_string(a[i]) + " vs " + to_string(b[i]);
  }
  return c;
}

Check bi_check(const std::string& name, const BiSeries& a, const BiSeries& b) {
  Check c{name, true, "exact to orders (" + std::to_string(a.order_x()) + "," + std::to_string(a.order_y()) + ")"};
  for (int n = 0; n <= a.order_x() && c.passed; ++n)
    for (int m = 0; m <= a.order_y(); ++m)
      if (a.coeff(n, m) != b.coeff(n, m)) {
        c.passed = false;
        c.detail = "first offending coefficient [x^" + std::to_string(n) + " y^" + std::to_string(m) + "]: " +
                   to_string(a.coeff(n, m)) + " vs " + to_string(b.coeff(n, m));
        break;
      }
  return c;
}

template <class Fn>
Check guarded(const std::string& name, Fn fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return Check{name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

Report verify_identities() {
  Report rep;

  rep.checks.push_back(guarded("abel", [] {
    const int n = 30;
    Series lhs = F_expr()(phi_iter(1, n)) - Series::constant(Rational(3, 2), n);
    return series_check("abel", lhs, F_series(n));
  }));

  rep.checks.push_back(guarded("quadratic", [] {
    const int ox = 10, oy = 10;
    BiSeries U = U_series(ox, oy);
    BiSeries X = BiSeries::x(ox, oy), Y = BiSeries::y(ox, oy), one = BiSeries::constant(1, ox, oy);
    BiSeries q = BiSeries::from_x(q_series(ox), oy);
    BiSeries xy2 = X * Y * Y;
    BiSeries l = Rational(2) * U - (Y - xy2 - one);
    BiSeries rhs = Y * Y - Rational(2) * X * Y * Y * Y - Rational(2) * Y + Rational(4) * X * Y * q + (xy2 - one) * (xy2 - one);
    return bi_check("quadratic", l * l, rhs);
  }));

  // u(q^2 x, y/q) = U(x,y) - x y q, computed by reverting X = x q(x)^2
  const int o = 8, w = o + 2;
  auto build_u = [&] {
    Series q = q_series(w);
    Series X = (q * q).shift_up(1);
    Series xr = reversion(X);
    Series q_r = compose(q, xr);
    BiSeries U = U_series(w, w);
    BiSeries V = U - BiSeries::x(w, w) * BiSeries::y(w, w) * BiSeries::from_x(q, w);
    BiSeries u(w, w);
    Series qpow = Series::constant(1, w);
    for (int m = 0; m <= w; ++m) {
      Series col = compose(V.column(m), xr) * qpow;
      for (int n = 0; n <= w; ++n) u.coeff(n, m) = col[n];
      qpow = qpow * q_r;
    }
    return u;
  };

  BiSeries u;
  rep.checks.push_back(guarded("substitution-root-decomposition", [&] {
    u = build_u();
    BiSeries v = u.shift_down_x(1).shift_down_y(1).truncate(o, o);
    BiSeries one = BiSeries::constant(1, o, o), X = BiSeries::x(o, o), Y = BiSeries::y(o, o);
    BiSeries lhs = one - X * Y - inverse(one + v);
    BiSeries ut = u.truncate(o, o);
    BiSeries u1 = BiSeries::from_x(u.eval_y(1).truncate(o), o);
    BiSeries rhs = (Y * u1 - ut) / (one - Y);
    return bi_check("substitution-root-decomposition", lhs, rhs);
  }));

  rep.checks.push_back(guarded("substitution-q", [&] {
    if (u.order_x() < 0) u = build_u();
    Series q = q_series(w);
    Series X = (q * q).shift_up(1);
    Series u1 = u.eval_y(1);
    Series lhs = compose(u1, X) + Rational(2) * X + Series::constant(1, w);
    return series_check("substitution-q", lhs.truncate(o), q.truncate(o));
  }));

  rep.checks.push_back(guarded("yU=xq", [] {
    const int n = 10;
    BiSeries U = U_series(n, 2);
    return series_check("yU=xq", U.column(1), q_series(n).shift_up(1));
  }));

  rep.checks.push_back(guarded("F-link", [] {
    const int n = 20;
    Series Fd = F_series(n + 1).derivative();
    Series S = S_series(n);
    Rational p = 1;
    for (int k = 0; k <= n; ++k, p *= 2) S[k] *= p;
    return series_check("F-link", Fd, S);
  }));

  rep.checks.push_back(guarded("mass", [] {
    Check c{"mass", true, "[t]F(phi_R(t)) = 1 for R = 1..20"};
    for (int R = 1; R <= 20; ++R) {
      Rational v = F_expr()(phi_iter(R, 1))[1];
      if (v != 1) {
        c.passed = false;
        c.detail = "R=" + std::to_string(R) + " gives " + to_string(v);
        break;
      }
    }
    return c;
  }));

  return rep;
}

std::string coeff_csv(const Series& s, int first_index) {
  std::ostringstream os;
  os << "index,numerator,denominator,float\n";
  os.precision(17);
  for (int i = first_index; i <= s.order(); ++i)
    os << i << ',' << s[i].get_num().get_str() << ',' << s[i].get_den().get_str() << ',' << to_double(s[i]) << '\n';
  return os.str();
}

}  // namespace qg
