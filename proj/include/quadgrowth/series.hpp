#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace qg {

using Integer = mpz_class;
using Rational = mpq_class;

struct SeriesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonInvertibleSeries : SeriesError {
  using SeriesError::SeriesError;
};
struct IrrationalConstant : SeriesError {
  using SeriesError::SeriesError;
};
struct OrderMismatch : SeriesError {
  using SeriesError::SeriesError;
};

std::optional<Rational> rational_sqrt(const Rational& r);
std::string to_string(const Rational& r);
double to_double(const Rational& r);
long double to_long_double(const Rational& r);
Rational rpow(const Rational& r, long e);

template <class T>
T from_rational(const Rational& r) {
  if constexpr (std::is_floating_point_v<T>)
    return static_cast<T>(to_long_double(r));
  else
    return T(r.get_num().get_str()) / T(r.get_den().get_str());
}

// Truncated power series with exact coefficients; entries above order() are unknown.
class Series {
 public:
  Series() = default;
  explicit Series(int order);
  explicit Series(std::vector<Rational> c);

  static Series constant(const Rational& c, int order);
  static Series variable(int order);  // t
  static Series monomial(const Rational& c, int power, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& operator[](int i) const { return c_.at(i); }
  Rational& operator[](int i) { return c_.at(i); }
  const std::vector<Rational>& coeffs() const { return c_; }

  Series truncate(int order) const;
  Series derivative() const;          // order drops by one
  Series shift_down(int k) const;     // divide by t^k
  Series shift_up(int k) const;       // multiply by t^k, same order
  Rational eval(const Rational& x) const;  // as a polynomial

  Series& operator+=(const Series& b);
  Series& operator-=(const Series& b);
  Series& operator*=(const Rational& r);

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(const Series& a);
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator/(const Series& a, const Series& b);
  friend Series operator*(Series a, const Rational& r) { return a *= r; }
  friend Series operator*(const Rational& r, Series a) { return a *= r; }

  bool operator==(const Series& b) const { return c_ == b.c_; }

 private:
  std::vector<Rational> c_;
};

Series inverse(const Series& a);
Series sqrt(const Series& a);
Series pow(const Series& a, unsigned e);
// g(f(t)) for f(0) = 0; general composition goes through Expr instead
Series compose(const Series& g, const Series& f);
// compositional inverse, needs f(0) = 0 and f'(0) != 0
Series reversion(const Series& f);
// first index where a and b differ, or -1
int first_difference(const Series& a, const Series& b);

// Power series in x whose coefficients are y-series truncated at order_y.
class BiSeries {
 public:
  BiSeries() = default;
  BiSeries(int order_x, int order_y);
  explicit BiSeries(std::vector<Series> rows);

  static BiSeries constant(const Rational& c, int order_x, int order_y);
  static BiSeries x(int order_x, int order_y);
  static BiSeries y(int order_x, int order_y);
  static BiSeries from_x(const Series& s, int order_y);
  static BiSeries from_y(const Series& s, int order_x);

  int order_x() const { return static_cast<int>(rows_.size()) - 1; }
  int order_y() const { return rows_.empty() ? -1 : rows_[0].order(); }
  const Series& row(int n) const { return rows_.at(n); }
  Series& row(int n) { return rows_.at(n); }
  const Rational& coeff(int n, int m) const { return rows_.at(n)[m]; }
  Rational& coeff(int n, int m) { return rows_.at(n)[m]; }

  Series eval_y(const Rational& y) const;  // series in x
  Series column(int m) const;              // [y^m] as a series in x
  BiSeries truncate(int ox, int oy) const;
  BiSeries shift_down_x(int k) const;
  BiSeries shift_down_y(int k) const;

  BiSeries& operator+=(const BiSeries& b);
  BiSeries& operator-=(const BiSeries& b);
  BiSeries& operator*=(const Rational& r);
  friend BiSeries operator+(BiSeries a, const BiSeries& b) { return a += b; }
  friend BiSeries operator-(BiSeries a, const BiSeries& b) { return a -= b; }
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
  friend BiSeries operator/(const BiSeries& a, const BiSeries& b);
  friend BiSeries operator*(BiSeries a, const Rational& r) { return a *= r; }
  friend BiSeries operator*(const Rational& r, BiSeries a) { return a *= r; }
  bool operator==(const BiSeries& b) const { return rows_ == b.rows_; }

 private:
  std::vector<Series> rows_;
};

BiSeries inverse(const BiSeries& a);
BiSeries sqrt(const BiSeries& a);

// Closed-form expression DAG, evaluated by going through the formula rather than Taylor recomposition.
class Expr {
 public:
  enum class Kind { Const, Arg, Add, Sub, Mul, Div, Neg, Sqrt };
  struct Node {
    Kind kind;
    Rational value;
    std::shared_ptr<const Node> a, b;
    std::string label;
  };

  Expr();  // the argument
  Expr(const Rational& c);
  Expr(long c) : Expr(Rational(c)) {}
  Expr(int c) : Expr(Rational(c)) {}

  static Expr arg() { return Expr(); }
  Expr named(std::string label) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr sqrt(const Expr& a);

  Series operator()(const Series& arg) const;
  Rational operator()(const Rational& arg) const;

  // scalar evaluation in any field with sqrt (long double, cpp_bin_float, ...)
  template <class T, class Sqrt>
  T eval_num(const T& x, Sqrt sq) const {
    return eval_node<T>(node_.get(), x, sq);
  }

  const Node* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Kind k, const Expr* a, const Expr* b);

  template <class T, class Sqrt>
  static T eval_node(const Node* n, const T& x, Sqrt& sq) {
    switch (n->kind) {
      case Kind::Const: return from_rational<T>(n->value);
      case Kind::Arg: return x;
      case Kind::Add: return eval_node<T>(n->a.get(), x, sq) + eval_node<T>(n->b.get(), x, sq);
      case Kind::Sub: return eval_node<T>(n->a.get(), x, sq) - eval_node<T>(n->b.get(), x, sq);
      case Kind::Mul: return eval_node<T>(n->a.get(), x, sq) * eval_node<T>(n->b.get(), x, sq);
      case Kind::Div: return eval_node<T>(n->a.get(), x, sq) / eval_node<T>(n->b.get(), x, sq);
      case Kind::Neg: return -eval_node<T>(n->a.get(), x, sq);
      case Kind::Sqrt: return sq(eval_node<T>(n->a.get(), x, sq));
    }
    return x;
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace qg
