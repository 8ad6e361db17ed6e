#include <cmath>

#include "doctest.h"
#include "quadgrowth/genfun.hpp"

using namespace qg;

TEST_CASE("q coefficients") {
  CHECK(count_C(0) == 1);
  CHECK(count_C(1) == 2);
  CHECK(count_C(2) == 9);
  CHECK(count_C(3) == 54);
  Series q = q_series(30);
  for (int N = 0; N <= 30; ++N) {
    CHECK(q[N].get_den() == 1);
    CHECK(sgn(q[N]) > 0);
  }
  // q times the denominator of its closed form is the numerator
  Series r = sqrt(Series::constant(1, 10) - Series::monomial(12, 1, 10));
  Series den = (r + Series::constant(1, 10)) * (r + Series::constant(1, 10));
  Series numr = (r * Rational(2) + Series::constant(1, 10)) * Rational(4, 3);
  CHECK(q_series(10) * den == numr);
  CHECK_THROWS(count_C(-1));
}

TEST_CASE("U coefficients") {
  BiSeries U = U_series(10, 6);
  for (int m = 0; m <= 6; ++m) CHECK(U.coeff(0, m) == 0);
  CHECK(U.column(1) == q_series(10).shift_up(1));
  for (int N = 0; N <= 8; ++N) CHECK(count_CNm(N + 1, 1) == count_C(N));
  CHECK(count_CNm(2, 1) == 2);
  CHECK(count_CNm(1, 2) == 0);
  CHECK(count_CNm(4, 2) == 32);
  CHECK(count_CNm(5, 3) == 78);
  for (int N = 0; N <= 10; ++N)
    for (int m = 0; m <= 6; ++m) {
      CHECK(U.coeff(N, m).get_den() == 1);
      CHECK(sgn(U.coeff(N, m)) >= 0);
      if (m > N) CHECK(sgn(U.coeff(N, m)) == 0);
    }
}

TEST_CASE("expansion coefficients near the critical point") {
  ExpansionCoeffs e = expansion_coeffs(12);
  CHECK(e.A[0] == 0);
  CHECK(e.A[1] == Rational(1, 9));  // X0 q(X0)
  CHECK(e.B_over_b1[0] == 0);
  CHECK(e.B_over_b1[1] == 1);
  CHECK(b_ratio(1) == 1);
  CHECK_THROWS(b_ratio(0));
  for (int m = 1; m <= 12; ++m) CHECK(sgn(b_ratio(m)) > 0);
  // p_l = Y0^(l-1) [y^(l+1)]A / X0
  for (int l = 0; l <= 8; ++l) CHECK(offspring_p(l) == rpow(Y0, l - 1) * e.A[l + 1] / X0);
  // partial sums of C(n,l+1) X0^n stay below [y^(l+1)]A
  BiSeries U = U_series(40, 4);
  for (int l = 0; l <= 3; ++l) {
    Rational partial = 0;
    for (int n = 0; n <= 40; ++n) partial += U.coeff(n, l + 1) * rpow(X0, n);
    CHECK(partial < e.A[l + 1]);
    CHECK(to_double(partial / e.A[l + 1]) > 0.85);
  }
}

TEST_CASE("F-link and F coefficients") {
  CHECK(F_coeff(0) == 0);
  CHECK(F_coeff(1) == 1);
  CHECK(F_coeff(2) == Rational(7, 9));
  for (int k = 1; k <= 40; ++k) CHECK(sgn(F_coeff(k)) > 0);
  // b_ratio(m) = m F_m / 2^(m-1)
  for (int m = 1; m <= 10; ++m) CHECK(b_ratio(m) == m * F_coeff(m) / rpow(Rational(2), m - 1));
}

TEST_CASE("asymptotics of C(N,m)") {
  for (int m = 1; m <= 5; ++m) CHECK(asympt_CNm(30, m) / asympt_CNm(30, 1) == doctest::Approx(to_double(b_ratio(m))));
  CHECK(std::isfinite(log_asympt_CNm(1000, 3)));
  CHECK_THROWS_AS(asympt_CNm(1000, 3), std::overflow_error);
  // asympt(N,1) X0 / C(N) tends to b(1)/12 with b(1) = 16 sqrt(3)/3, not to 1
  double r40 = asympt_CNm(40, 1) * to_double(X0) / to_double(Rational(count_C(40)));
  double r200 = std::exp(log_asympt_CNm(200, 1) + std::log(to_double(X0)) -
                         std::log(to_double(Rational(count_C(200)))));
  double limit = b1_value() / 12.0;
  CHECK(std::abs(r200 - limit) < std::abs(r40 - limit));
  CHECK(std::abs(r200 / limit - 1) < 0.02);
}

TEST_CASE("hull probabilities") {
  CHECK(mu_hull_prob(1, 1) == Rational(1, 12));
  for (int n = 2; n <= 6; ++n) CHECK(mu_hull_prob(n + 1, 2) == mu_hull_prob(n, 2) / 12);
  CHECK(finite_ball_prob(10, {}, 10) == 1 / Rational(count_C(10)));
  CHECK(finite_ball_prob(9, {}, 10) == 0);
  CHECK(finite_ball_prob(8, {3}, 8 + 0) == Rational(count_CNm(3, 3)) / Rational(count_C(8)));
  // two holes: direct double sum
  int N = 12, n = 5;
  Rational direct = 0;
  for (int a = 0; a <= N - n; ++a) direct += Rational(count_CNm(a + 1, 1) * count_CNm(N - n - a + 2, 2));
  CHECK(finite_ball_prob(n, {1, 2}, N) == direct / Rational(count_C(N)));
}

TEST_CASE("offspring law") {
  CHECK(offspring_p(0) == Rational(2, 3));
  CHECK(offspring_p(1) == Rational(5, 27));
  CHECK(offspring_p(2) == Rational(16, 243));
  Rational sum = 0;
  for (int k = 0; k <= 40; ++k) sum += offspring_p(k);
  CHECK(sum < 1);
  CHECK(to_double(sum) > 0.99);
  // phi in the t-divided form: 2 t phi = (1-t)^2 s - 3 + 6t - t^2
  Series t = Series::variable(12);
  Series one = Series::constant(1, 12);
  Series s = s_expr()(t);
  Series lhs = (phi_series(12) * t) * Rational(2);
  Series rhs = (one - t) * (one - t) * s - one * Rational(3) + t * Rational(6) - t * t;
  CHECK(lhs == rhs);
}

TEST_CASE("iterates of phi") {
  CHECK(phi_iter(0, 10) == Series::variable(10));
  CHECK(phi_iter(1, 0)[0] == Rational(2, 3));
  Series phi = phi_series(20);
  for (int R = 1; R <= 5; ++R) CHECK(phi_iter_expr(1)(phi_iter(R, 20)) == phi_iter(R + 1, 20));
  std::vector<Rational> grid{Rational(1, 2), 1, Rational(3, 2), 2};
  for (auto& R : grid)
    for (auto& S : grid) CHECK(phi_iter_expr(R)(phi_iter(S, 12)) == phi_iter(R + S, 12));
}

TEST_CASE("identity suite") {
  Report rep = verify_identities();
  for (auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  CHECK(rep.checks.size() == 7);
}

TEST_CASE("csv export") {
  std::string csv = coeff_csv(q_series(3));
  CHECK(csv == "index,numerator,denominator,float\n0,1,1,1\n1,2,1,2\n2,9,1,9\n3,54,1,54\n");
}
