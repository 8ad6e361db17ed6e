#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qg {

struct Partition {
  std::vector<double> t, s;  // t sums to 1, s are Laplace arguments
  void validate() const;
};

// u_t(lambda) = lambda / (1 + t sqrt(lambda))^2, branching mechanism psi(u) = 2 u^(3/2)
double u_t(double t, double lambda);
double psi(double u);

// P{zeta_t = 0 | zeta_0 = x} and its t-derivative; t = 0 gives (0, 0) for x > 0
std::pair<double, double> extinction(double x, double t);

std::vector<double> lambda_chain(const Partition& p);
double fdd_continuous(const Partition& p);
// [t] F(e^(-a_k) phi_(r_k)(... e^(-a_1) phi_(r_1)(t) ...)) with r_i = round(t_i R), a_i = 2 s_i / R^2;
// digits is 50 or 100
double fdd_discrete(int R, const Partition& p, int digits = 50);

struct Row {
  std::string point;
  double measured = 0, reference = 0, rel_diff = 0;
  bool pass = true;
};

struct ScalingReport {
  std::string name;
  std::vector<Row> rows;
  std::vector<std::pair<std::string, double>> values;  // summary numbers
  bool ok() const;
  std::string first_failure() const;
  std::string json() const;
  std::string csv() const;
};

ScalingReport csbp_checks(bool parallel = true);
ScalingReport generator_check();
ScalingReport fdd_report(const std::vector<int>& Rs, const Partition& p, double tol = 0.05, int digits = 50);
ScalingReport gamma_limit_report(int R);
ScalingReport theta_limit_report(int R);

}  // namespace qg
