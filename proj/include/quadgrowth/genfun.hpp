#pragma once

#include <string>
#include <vector>

#include "quadgrowth/series.hpp"

namespace qg {

inline const Rational X0{1, 12};
inline const Rational Y0{2};

struct Orders {
  int x = 64, t = 64, y = 32;
};

// closed forms, all in the argument t (or x, y)
Expr s_expr();               // sqrt((9-t)/(1-t))
Expr F_expr();               // (3/4)(s - 3)
Expr phi_iter_expr(const Rational& R);
Expr f_generator_expr();     // (1/2) sqrt((9-t)(1-t)^3)

Series q_series(int order);
Integer count_C(int N);
BiSeries U_series(int order_x, int order_y);
Integer count_CNm(int N, int m);

struct ExpansionCoeffs {
  Series A, A1, B_over_b1;
  // b(1) = 16 sqrt(3)/3 only appears at float evaluation
  Rational b1_squared{256, 3};
};
ExpansionCoeffs expansion_coeffs(int order_y);
Rational b_ratio(int m);
Series S_series(int order);  // B(y)/(b(1) y)

double b1_value();
double asympt_CNm(int N, int m);
double log_asympt_CNm(int N, int m);

Rational mu_hull_prob(int n, int m);
Rational finite_ball_prob(int n, const std::vector<int>& holes, int N);

Series phi_series(int order);
Series F_series(int order);
Rational offspring_p(int k);
Rational F_coeff(int k);
Series phi_iter(const Rational& R, int order);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};
struct Report {
  std::vector<Check> checks;
  bool ok() const {
    for (auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

Report verify_identities();

// exact rows written as index,numerator,denominator,float
std::string coeff_csv(const Series& s, int first_index = 0);

}  // namespace qg
