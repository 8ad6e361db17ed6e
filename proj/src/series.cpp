#include "quadgrowth/series.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace qg {

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (sgn(r) < 0) return std::nullopt;
  const mpz_class& n = r.get_num();
  const mpz_class& d = r.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class a, b;
  mpz_sqrt(a.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(b.get_mpz_t(), d.get_mpz_t());
  Rational out(a, b);
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& r) { return r.get_str(); }

double to_double(const Rational& r) { return r.get_d(); }

long double to_long_double(const Rational& r) {
  if (sgn(r) == 0) return 0.0L;
  // top 64 bits of numerator and denominator keep full long double precision and range
  auto top = [](const mpz_class& z, long& shift) {
    mpz_class t = abs(z);
    shift = static_cast<long>(mpz_sizeinbase(t.get_mpz_t(), 2)) - 64;
    if (shift > 0)
      t >>= shift;
    else
      t <<= -shift;
    return static_cast<long double>(mpz_get_ui(t.get_mpz_t()));
  };
  long sn = 0, sd = 0;
  long double a = top(r.get_num(), sn);
  long double b = top(r.get_den(), sd);
  long double v = std::ldexp(a / b, static_cast<int>(sn - sd));
  return sgn(r) < 0 ? -v : v;
}

Rational rpow(const Rational& r, long e) {
  if (e < 0) return rpow(1 / r, -e);
  Rational out = 1, b = r;
  while (e) {
    if (e & 1) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

// ---------------------------------------------------------------- Series

Series::Series(int order) : c_(static_cast<std::size_t>(order + 1)) {
  if (order < 0) throw SeriesError("negative truncation order");
}

Series::Series(std::vector<Rational> c) : c_(std::move(c)) {
  if (c_.empty()) throw SeriesError("series needs at least one coefficient");
}

Series Series::constant(const Rational& c, int order) {
  Series s(order);
  s.c_[0] = c;
  return s;
}

Series Series::variable(int order) { return monomial(1, 1, order); }

Series Series::monomial(const Rational& c, int power, int order) {
  Series s(order);
  if (power <= order) s.c_[power] = c;
  return s;
}

Series Series::truncate(int order) const {
  if (order > this->order()) throw OrderMismatch("cannot extend truncation order");
  return Series(std::vector<Rational>(c_.begin(), c_.begin() + order + 1));
}

Series Series::derivative() const {
  if (order() == 0) throw OrderMismatch("derivative of an order-0 series is unknown");
  Series d(order() - 1);
  for (int i = 1; i <= order(); ++i) d.c_[i - 1] = c_[i] * i;
  return d;
}

Series Series::shift_down(int k) const {
  if (k > order()) throw OrderMismatch("shift exceeds truncation order");
  for (int i = 0; i < k; ++i)
    if (sgn(c_[i]) != 0) throw SeriesError("shift_down: low coefficient not zero");
  return Series(std::vector<Rational>(c_.begin() + k, c_.end()));
}

Series Series::shift_up(int k) const {
  Series s(order());
  for (int i = 0; i + k <= order(); ++i) s.c_[i + k] = c_[i];
  return s;
}

Rational Series::eval(const Rational& x) const {
  Rational v = 0;
  for (int i = order(); i >= 0; --i) v = v * x + c_[i];
  return v;
}

static void check_orders(int a, int b) {
  if (a != b) {
    std::ostringstream os;
    os << "truncation orders differ (" << a << " vs " << b << ")";
    throw OrderMismatch(os.str());
  }
}

Series& Series::operator+=(const Series& b) {
  check_orders(order(), b.order());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
  return *this;
}

Series& Series::operator-=(const Series& b) {
  check_orders(order(), b.order());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
  return *this;
}

Series& Series::operator*=(const Rational& r) {
  for (auto& c : c_) c *= r;
  return *this;
}

Series operator-(const Series& a) {
  Series s(a.order());
  for (int i = 0; i <= a.order(); ++i) s[i] = -a[i];
  return s;
}

Series operator*(const Series& a, const Series& b) {
  check_orders(a.order(), b.order());
  int n = a.order();
  Series s(n);
  int na = -1, nb = -1;  // skip trailing zeros cheaply
  for (int i = n; i >= 0 && na < 0; --i)
    if (sgn(a[i]) != 0) na = i;
  for (int i = n; i >= 0 && nb < 0; --i)
    if (sgn(b[i]) != 0) nb = i;
  if (na < 0 || nb < 0) return s;
  Rational tmp;
  for (int i = 0; i <= na; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (int j = 0; j <= nb && i + j <= n; ++j) {
      if (sgn(b[j]) == 0) continue;
      mpq_mul(tmp.get_mpq_t(), a[i].get_mpq_t(), b[j].get_mpq_t());
      s[i + j] += tmp;
    }
  }
  return s;
}

Series operator/(const Series& a, const Series& b) {
  check_orders(a.order(), b.order());
  if (sgn(b[0]) == 0) throw NonInvertibleSeries("non-invertible series: zero constant term in divisor");
  int n = a.order();
  Series q(n);
  Rational acc, tmp;
  for (int k = 0; k <= n; ++k) {
    acc = a[k];
    for (int i = 1; i <= k; ++i) {
      if (sgn(b[i]) == 0) continue;
      mpq_mul(tmp.get_mpq_t(), b[i].get_mpq_t(), q[k - i].get_mpq_t());
      acc -= tmp;
    }
    q[k] = acc / b[0];
  }
  return q;
}

Series inverse(const Series& a) { return Series::constant(1, a.order()) / a; }

Series sqrt(const Series& a) {
  auto r0 = rational_sqrt(a[0]);
  if (!r0 || sgn(*r0) == 0)
    throw IrrationalConstant("irrational constant term: " + to_string(a[0]) + " is not the square of a nonzero rational");
  int n = a.order();
  Series r(n);
  r[0] = *r0;
  Rational two_r0 = 2 * *r0, acc, tmp;
  for (int k = 1; k <= n; ++k) {
    acc = a[k];
    for (int i = 1; i < k; ++i) {
      mpq_mul(tmp.get_mpq_t(), r[i].get_mpq_t(), r[k - i].get_mpq_t());
      acc -= tmp;
    }
    r[k] = acc / two_r0;
  }
  return r;
}

Series pow(const Series& a, unsigned e) {
  Series out = Series::constant(1, a.order()), b = a;
  while (e) {
    if (e & 1u) out = out * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return out;
}

Series compose(const Series& g, const Series& f) {
  if (sgn(f[0]) != 0) throw SeriesError("compose: inner series must vanish at 0 (use Expr for closed forms)");
  int n = f.order();
  int top = std::min(n, g.order());
  Series r = Series::constant(g[top], n);
  for (int i = top - 1; i >= 0; --i) {
    r = r * f;
    r[0] += g[i];
  }
  if (g.order() < n) {
    // g is only known to its own order; the composite is known to the same order
    return r.truncate(g.order());
  }
  return r;
}

Series reversion(const Series& f) {
  if (sgn(f[0]) != 0 || f.order() < 1 || sgn(f[1]) == 0)
    throw SeriesError("reversion needs f(0) = 0 and f'(0) != 0");
  int n = f.order();
  Series h = Series::monomial(1 / f[1], 1, n);
  for (int k = 2; k <= n; ++k) {
    Series fh = compose(f, h);
    h[k] = -fh[k] / f[1];
  }
  return h;
}

int first_difference(const Series& a, const Series& b) {
  int n = std::min(a.order(), b.order());
  for (int i = 0; i <= n; ++i)
    if (a[i] != b[i]) return i;
  return -1;
}

// ---------------------------------------------------------------- BiSeries

BiSeries::BiSeries(int order_x, int order_y) : rows_(static_cast<std::size_t>(order_x + 1), Series(order_y)) {}

BiSeries::BiSeries(std::vector<Series> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw SeriesError("bivariate series needs at least one row");
  for (auto& r : rows_) check_orders(r.order(), rows_[0].order());
}

BiSeries BiSeries::constant(const Rational& c, int ox, int oy) {
  BiSeries b(ox, oy);
  b.rows_[0][0] = c;
  return b;
}

BiSeries BiSeries::x(int ox, int oy) {
  BiSeries b(ox, oy);
  if (ox >= 1) b.rows_[1][0] = 1;
  return b;
}

BiSeries BiSeries::y(int ox, int oy) {
  BiSeries b(ox, oy);
  if (oy >= 1) b.rows_[0][1] = 1;
  return b;
}

BiSeries BiSeries::from_x(const Series& s, int oy) {
  BiSeries b(s.order(), oy);
  for (int i = 0; i <= s.order(); ++i) b.rows_[i][0] = s[i];
  return b;
}

BiSeries BiSeries::from_y(const Series& s, int ox) {
  BiSeries b(ox, s.order());
  b.rows_[0] = s;
  return b;
}

Series BiSeries::eval_y(const Rational& y) const {
  Series s(order_x());
  for (int i = 0; i <= order_x(); ++i) s[i] = rows_[i].eval(y);
  return s;
}

Series BiSeries::column(int m) const {
  Series s(order_x());
  for (int i = 0; i <= order_x(); ++i) s[i] = rows_[i][m];
  return s;
}

BiSeries BiSeries::truncate(int ox, int oy) const {
  if (ox > order_x()) throw OrderMismatch("cannot extend x truncation order");
  std::vector<Series> r;
  for (int i = 0; i <= ox; ++i) r.push_back(rows_[i].truncate(oy));
  return BiSeries(std::move(r));
}

BiSeries BiSeries::shift_down_x(int k) const {
  for (int i = 0; i < k; ++i)
    for (auto& c : rows_[i].coeffs())
      if (sgn(c) != 0) throw SeriesError("shift_down_x: low row not zero");
  return BiSeries(std::vector<Series>(rows_.begin() + k, rows_.end()));
}

BiSeries BiSeries::shift_down_y(int k) const {
  std::vector<Series> r;
  for (auto& row : rows_) r.push_back(row.shift_down(k));
  return BiSeries(std::move(r));
}

BiSeries& BiSeries::operator+=(const BiSeries& b) {
  check_orders(order_x(), b.order_x());
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] += b.rows_[i];
  return *this;
}

BiSeries& BiSeries::operator-=(const BiSeries& b) {
  check_orders(order_x(), b.order_x());
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] -= b.rows_[i];
  return *this;
}

BiSeries& BiSeries::operator*=(const Rational& r) {
  for (auto& row : rows_) row *= r;
  return *this;
}

static bool is_zero(const Series& s) {
  for (auto& c : s.coeffs())
    if (sgn(c) != 0) return false;
  return true;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
  check_orders(a.order_x(), b.order_x());
  check_orders(a.order_y(), b.order_y());
  int n = a.order_x();
  BiSeries c(n, a.order_y());
  for (int i = 0; i <= n; ++i) {
    if (is_zero(a.row(i))) continue;
    for (int j = 0; i + j <= n; ++j) {
      if (is_zero(b.row(j))) continue;
      c.row(i + j) += a.row(i) * b.row(j);
    }
  }
  return c;
}

BiSeries operator/(const BiSeries& a, const BiSeries& b) {
  check_orders(a.order_x(), b.order_x());
  check_orders(a.order_y(), b.order_y());
  if (sgn(b.coeff(0, 0)) == 0) throw NonInvertibleSeries("non-invertible series: divisor has zero constant term");
  Series inv0 = inverse(b.row(0));
  int n = a.order_x();
  BiSeries q(n, a.order_y());
  for (int k = 0; k <= n; ++k) {
    Series acc = a.row(k);
    for (int i = 1; i <= k; ++i)
      if (!is_zero(b.row(i))) acc -= b.row(i) * q.row(k - i);
    q.row(k) = acc * inv0;
  }
  return q;
}

BiSeries inverse(const BiSeries& a) { return BiSeries::constant(1, a.order_x(), a.order_y()) / a; }

BiSeries sqrt(const BiSeries& a) {
  Series r0 = sqrt(a.row(0));  // throws on irrational constant
  Series inv = inverse(r0 * Rational(2));
  int n = a.order_x();
  BiSeries r(n, a.order_y());
  r.row(0) = r0;
  for (int k = 1; k <= n; ++k) {
    Series acc = a.row(k);
    for (int i = 1; i < k; ++i) acc -= r.row(i) * r.row(k - i);
    r.row(k) = acc * inv;
  }
  return r;
}

// ---------------------------------------------------------------- Expr

Expr::Expr() : node_(std::make_shared<Node>(Node{Kind::Arg, 0, nullptr, nullptr, {}})) {}

Expr::Expr(const Rational& c) : node_(std::make_shared<Node>(Node{Kind::Const, c, nullptr, nullptr, {}})) {}

Expr Expr::named(std::string label) const {
  auto n = std::make_shared<Node>(*node_);
  n->label = std::move(label);
  return Expr(std::shared_ptr<const Node>(n));
}

Expr Expr::make(Kind k, const Expr* a, const Expr* b) {
  auto n = std::make_shared<Node>(Node{k, 0, a ? a->node_ : nullptr, b ? b->node_ : nullptr, {}});
  return Expr(std::shared_ptr<const Node>(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Expr::Kind::Add, &a, &b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Expr::Kind::Sub, &a, &b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Expr::Kind::Mul, &a, &b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Expr::Kind::Div, &a, &b); }
Expr operator-(const Expr& a) { return Expr::make(Expr::Kind::Neg, &a, nullptr); }
Expr sqrt(const Expr& a) { return Expr::make(Expr::Kind::Sqrt, &a, nullptr); }

namespace {

const char* kind_name(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Const: return "const";
    case Expr::Kind::Arg: return "arg";
    case Expr::Kind::Add: return "add";
    case Expr::Kind::Sub: return "sub";
    case Expr::Kind::Mul: return "mul";
    case Expr::Kind::Div: return "div";
    case Expr::Kind::Neg: return "neg";
    case Expr::Kind::Sqrt: return "sqrt";
  }
  return "?";
}

std::string describe(const Expr::Node* n) {
  std::string s = std::string("node ") + kind_name(n->kind);
  if (!n->label.empty()) s += " '" + n->label + "'";
  return s;
}

template <class V, class Leaf, class Apply>
V eval_dag(const Expr::Node* root, Leaf leaf, Apply apply) {
  std::unordered_map<const Expr::Node*, V> memo;
  auto rec = [&](auto&& self, const Expr::Node* n) -> const V& {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    V v = [&]() -> V {
      if (n->kind == Expr::Kind::Const || n->kind == Expr::Kind::Arg) return leaf(n);
      const V& a = self(self, n->a.get());
      if (n->kind == Expr::Kind::Neg || n->kind == Expr::Kind::Sqrt) {
        try {
          return apply(n->kind, a, a);
        } catch (const SeriesError& e) {
          throw SeriesError(describe(n) + ": " + e.what());
        }
      }
      const V& b = self(self, n->b.get());
      try {
        return apply(n->kind, a, b);
      } catch (const NonInvertibleSeries& e) {
        throw NonInvertibleSeries(describe(n) + ": " + e.what());
      } catch (const SeriesError& e) {
        throw SeriesError(describe(n) + ": " + e.what());
      }
    }();
    return memo.emplace(n, std::move(v)).first->second;
  };
  return rec(rec, root);
}

}  // namespace

Series Expr::operator()(const Series& arg) const {
  int order = arg.order();
  return eval_dag<Series>(
      node_.get(),
      [&](const Node* n) { return n->kind == Kind::Arg ? arg : Series::constant(n->value, order); },
      [&](Kind k, const Series& a, const Series& b) -> Series {
        switch (k) {
          case Kind::Add: return a + b;
          case Kind::Sub: return a - b;
          case Kind::Mul: return a * b;
          case Kind::Div: return a / b;
          case Kind::Neg: return -a;
          case Kind::Sqrt: return sqrt(a);
          default: return a;
        }
      });
}

Rational Expr::operator()(const Rational& arg) const {
  return eval_dag<Rational>(
      node_.get(), [&](const Node* n) { return n->kind == Kind::Arg ? arg : n->value; },
      [&](Kind k, const Rational& a, const Rational& b) -> Rational {
        switch (k) {
          case Kind::Add: return a + b;
          case Kind::Sub: return a - b;
          case Kind::Mul: return a * b;
          case Kind::Div:
            if (sgn(b) == 0) throw NonInvertibleSeries("division by zero");
            return a / b;
          case Kind::Neg: return -a;
          case Kind::Sqrt: {
            auto r = rational_sqrt(a);
            if (!r) throw IrrationalConstant("irrational square root of " + to_string(a));
            return *r;
          }
          default: return a;
        }
      });
}

}  // namespace qg
