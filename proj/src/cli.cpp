#include "quadgrowth/cli.hpp"

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "quadgrowth/acceptance.hpp"
#include "quadgrowth/chain.hpp"
#include "quadgrowth/genfun.hpp"
#include "quadgrowth/oracle.hpp"
#include "quadgrowth/scaling.hpp"
#include "quadgrowth/skeleton.hpp"

namespace qg::cli {

using nlohmann::json;

void apply_config_json(Config& c, const std::string& text) {
  json j = json::parse(text);
  if (!j.is_object()) throw std::runtime_error("config: top level must be an object");
  for (auto& [k, v] : j.items()) {
    if (k == "series_order_x") c.series_order_x = v.get<int>();
    else if (k == "series_order_t") c.series_order_t = v.get<int>();
    else if (k == "series_order_y") c.series_order_y = v.get<int>();
    else if (k == "catalog_max_n") c.catalog_max_n = v.get<int>();
    else if (k == "precision_digits") c.precision_digits = v.get<int>();
    else if (k == "seed") c.seed = v.get<std::uint64_t>();
    else if (k == "output_format") c.output_format = v.get<std::string>();
    else throw std::runtime_error("config: unknown key '" + k + "'");
  }
  if (c.output_format != "csv" && c.output_format != "json")
    throw std::runtime_error("config: output_format must be csv or json");
}

namespace {

struct CostError : std::runtime_error {
  double estimate;
  CostError(const std::string& w, double e) : std::runtime_error(w), estimate(e) {}
};

// rows rendered as CSV with a header or as one JSON object per line
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add_rational(std::vector<json> key, const Rational& r) {
    key.push_back(r.get_num().get_str());
    key.push_back(r.get_den().get_str());
    key.push_back(to_double(r));
    rows.push_back(std::move(key));
  }

  void print(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      for (auto& r : rows) {
        json o = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
        os << o.dump() << '\n';
      }
      return;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << ',';
        if (r[i].is_string()) os << r[i].get<std::string>();
        else os << r[i].dump();
      }
      os << '\n';
    }
  }
};

Table series_table(const Series& s, int first) {
  Table t{{"index", "numerator", "denominator", "float"}, {}};
  for (int i = first; i <= s.order(); ++i) t.add_rational({i}, s[i]);
  return t;
}

Table dist_table(const Dist& d, int first) {
  Table t{{"m", "numerator", "denominator", "float"}, {}};
  for (int i = first; i < static_cast<int>(d.masses.size()); ++i) t.add_rational({i}, d.masses[i]);
  t.add_rational({"tail_bound"}, d.tail_bound);
  return t;
}

void print_report(std::ostream& os, const ScalingReport& r, const std::string& format) {
  if (format == "json") os << r.json() << '\n';
  else os << r.csv();
}

int run_criteria(const std::vector<int>& ids, bool parallel, std::ostream& out, std::ostream& err) {
  for (int id : ids) {
    CriterionResult r = run_criterion(id, parallel);
    out << r.line() << '\n';
    if (!r.pass) {
      err << "verify: criterion " << id << " failed: " << r.summary << '\n';
      return kExitFailure;
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact series, branching chains, map oracles and hull sampling for random quadrangulations",
               "quadgrowth"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<int> ox, ot, oy, cat, digits;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  bool serial = false;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file (fallback: $QUADGROWTH_CONFIG)");
  app.add_option("--series-order-x", ox, "x order of the map series (default 64)");
  app.add_option("--series-order-t", ot, "t order of the branching series (default 64)");
  app.add_option("--series-order-y", oy, "y order of the boundary series (default 32)");
  app.add_option("--catalog-max-n", cat, "largest block size realized from the catalog (default 7)");
  app.add_option("--precision-digits", digits, "digits for fdd_discrete, at most 100 (default 50)");
  app.add_option("--seed", seed, "seed for all randomness (default 0)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--serial", serial, "disable OpenMP kernels");
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "exact series coefficients");
  std::string coeff_kind;
  std::optional<int> coeff_max;
  coeffs->add_option("kind", coeff_kind, "q, U, phi, F or b")->required()->check(CLI::IsMember({"q", "U", "phi", "F", "b"}));
  coeffs->add_option("--max", coeff_max, "largest index");

  // dist
  auto* dist = app.add_subcommand("dist", "exact distributions");
  std::string dist_kind;
  int dist_R = 1, dist_mmax = 20, dist_shift = 0;
  dist->add_option("kind", dist_kind, "gamma")->required()->check(CLI::IsMember({"gamma"}));
  dist->add_option("--R", dist_R, "level")->required()->check(CLI::PositiveNumber);
  dist->add_option("--mmax", dist_mmax, "largest cycle length")->required()->check(CLI::PositiveNumber);
  dist->add_option("--shift", dist_shift, "level offset; 1 reads |gamma_R| as [t]phi_(R+1)^m")->check(CLI::Range(0, 1));

  // kernel
  auto* kernel = app.add_subcommand("kernel", "outward transition probabilities from l");
  int kern_l = 1, kern_kmax = 10, kern_n = 1;
  kernel->add_option("--l", kern_l, "current state")->required()->check(CLI::PositiveNumber);
  kernel->add_option("--kmax", kern_kmax, "largest target state")->required()->check(CLI::PositiveNumber);
  kernel->add_option("--n", kern_n, "number of steps")->check(CLI::PositiveNumber);

  // sample hull
  auto* sample = app.add_subcommand("sample", "random hulls");
  sample->require_subcommand(1);
  auto* hull = sample->add_subcommand("hull", "sample hulls of radius R as JSON lines");
  int hull_R = 1, hull_count = 1;
  bool realize = false;
  hull->add_option("--R", hull_R, "radius")->required()->check(CLI::PositiveNumber);
  hull->add_option("--count", hull_count, "number of hulls")->required()->check(CLI::NonNegativeNumber);
  hull->add_flag("--realize-interiors", realize, "condition on catalog-sized blocks and emit the assembled maps");

  // oracle count
  auto* oracle = app.add_subcommand("oracle", "brute-force enumeration");
  oracle->require_subcommand(1);
  auto* count = oracle->add_subcommand("count", "count maps and compare with the series");
  std::string count_kind;
  int count_N = 1;
  std::optional<int> count_m;
  count->add_option("kind", count_kind, "quad, boundary or wlt")->required()->check(CLI::IsMember({"quad", "boundary", "wlt"}));
  count->add_option("--N", count_N, "number of faces")->required()->check(CLI::PositiveNumber);
  count->add_option("--m", count_m, "half boundary length")->check(CLI::PositiveNumber);

  // verify
  auto* verify = app.add_subcommand("verify", "run acceptance checks; exit 1 on the first failure");
  std::string verify_kind;
  verify->add_option("kind", verify_kind, "identities, oracle, sampler or all")
      ->required()
      ->check(CLI::IsMember({"identities", "oracle", "sampler", "all"}));

  // scaling
  auto* scaling = app.add_subcommand("scaling", "continuous-limit reports");
  scaling->require_subcommand(1);
  auto* sc_csbp = scaling->add_subcommand("csbp", "u-semigroup, psi and extinction checks");
  auto* sc_gen = scaling->add_subcommand("generator", "(phi_R - t)/R against the generator");
  auto* sc_fdd = scaling->add_subcommand("fdd", "discrete against continuous Laplace transform");
  int fdd_R = 20;
  std::vector<double> fdd_t, fdd_s;
  sc_fdd->add_option("--R", fdd_R, "radius")->required()->check(CLI::PositiveNumber);
  sc_fdd->add_option("--t", fdd_t, "partition of [0,1], comma separated")->required()->delimiter(',');
  sc_fdd->add_option("--s", fdd_s, "Laplace arguments, comma separated")->required()->delimiter(',');
  auto* sc_gamma = scaling->add_subcommand("gamma", "2|gamma_R|/R^2 against Gamma(3/2)");
  auto* sc_theta = scaling->add_subcommand("theta", "moments of theta_R");
  int gamma_R = 50, theta_R = 200;
  sc_gamma->add_option("--R", gamma_R, "radius, at least 10")->required();
  sc_theta->add_option("--R", theta_R, "radius, at least 10")->required();

  for (auto* sub : {coeffs, dist, kernel, sample, hull, oracle, count, verify, scaling, sc_csbp, sc_gen, sc_fdd,
                    sc_gamma, sc_theta})
    sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Config cfg;
  try {
    if (config_path.empty())
      if (const char* env = std::getenv("QUADGROWTH_CONFIG")) config_path = env;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw std::runtime_error("config: cannot read " + config_path);
      std::stringstream ss;
      ss << f.rdbuf();
      apply_config_json(cfg, ss.str());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (ox) cfg.series_order_x = *ox;
  if (ot) cfg.series_order_t = *ot;
  if (oy) cfg.series_order_y = *oy;
  if (cat) cfg.catalog_max_n = *cat;
  if (digits) cfg.precision_digits = *digits;
  if (seed) cfg.seed = *seed;
  if (format) cfg.output_format = *format;
  if (threads > 0) omp_set_num_threads(threads);
  const bool parallel = !serial;
  const std::string& fmt = cfg.output_format;

  try {
    if (coeffs->parsed()) {
      bool in_x = coeff_kind == "q" || coeff_kind == "U";
      int n = coeff_max.value_or(in_x ? cfg.series_order_x : coeff_kind == "b" ? cfg.series_order_y : cfg.series_order_t);
      if (n < 0) throw std::domain_error("--max must be >= 0");
      if (coeff_kind == "q") series_table(q_series(n), 0).print(out, fmt);
      else if (coeff_kind == "phi") series_table(phi_series(n), 0).print(out, fmt);
      else if (coeff_kind == "F") series_table(F_series(n), 0).print(out, fmt);
      else if (coeff_kind == "b") {
        Table t{{"m", "numerator", "denominator", "float"}, {}};
        for (int m = 1; m <= n; ++m) t.add_rational({m}, b_ratio(m));
        t.print(out, fmt);
      } else {
        int my = std::min(n, cfg.series_order_y);
        BiSeries U = U_series(n, my);
        Table t{{"N", "m", "numerator", "denominator", "float"}, {}};
        for (int N = 0; N <= n; ++N)
          for (int m = 0; m <= my; ++m) t.add_rational({N, m}, U.coeff(N, m));
        t.print(out, fmt);
      }
      return kExitOk;
    }

    if (dist->parsed()) {
      dist_table(gamma_dist(dist_R, dist_mmax, dist_shift), 1).print(out, fmt);
      return kExitOk;
    }

    if (kernel->parsed()) {
      Table t{{"k", "numerator", "denominator", "float"}, {}};
      for (int k = 1; k <= kern_kmax; ++k) t.add_rational({k}, reversed_transition(kern_l, k, kern_n));
      if (kern_n == 1) t.add_rational({"tail_bound"}, outward_tail_bound(kern_l, kern_kmax));
      t.print(out, fmt);
      return kExitOk;
    }

    if (hull->parsed()) {
      if (realize && cfg.catalog_max_n > kMaxBoundaryN)
        throw CostError("sample hull: catalog_max_n " + std::to_string(cfg.catalog_max_n) + " needs enumeration above N=" +
                            std::to_string(kMaxBoundaryN),
                        enumeration_cost(2, cfg.catalog_max_n));
      auto hs = sample_hulls(hull_R, hull_count, cfg.seed, realize, parallel, cfg.catalog_max_n);
      for (auto& h : hs) out << hull_json(h) << '\n';
      return kExitOk;
    }

    if (count->parsed()) {
      Table t;
      if (count_kind == "wlt") {
        TreeCount tc = count_well_labeled_trees(count_N);
        t.columns = {"N", "root_label_one", "min_label_one", "quadrangulations"};
        t.rows.push_back({count_N, tc.root_label_one.get_str(), tc.min_label_one.get_str(), count_C(count_N).get_str()});
      } else if (count_kind == "quad") {
        Catalog c = enumerate_quadrangulations(count_N, parallel);
        Integer gf = count_C(count_N);
        t.columns = {"N", "oracle", "series", "match"};
        t.rows.push_back({count_N, c.count(), gf.get_str(), Integer(static_cast<unsigned long>(c.count())) == gf});
      } else {
        if (!count_m) throw CLI::RequiredError("--m");
        Catalog c = enumerate_boundary_quadrangulations(count_N, *count_m, parallel);
        Integer gf = count_CNm(count_N, *count_m);
        t.columns = {"N", "m", "oracle", "series", "match"};
        t.rows.push_back({count_N, *count_m, c.count(), gf.get_str(), Integer(static_cast<unsigned long>(c.count())) == gf});
      }
      t.print(out, fmt);
      return kExitOk;
    }

    if (verify->parsed()) {
      if (verify_kind == "identities") return run_criteria({2, 3}, parallel, out, err);
      if (verify_kind == "sampler") return run_criteria({9}, parallel, out, err);
      if (verify_kind == "oracle") {
        int rc = run_criteria({1}, parallel, out, err);
        if (rc) return rc;
        TreeCalibration cal = calibrate_well_labeled_trees(6);
        bool ok = cal.variant == LabelVariant::root_label_one && cal.ratio == 1;
        out << (ok ? "PASS" : "FAIL") << " well-labeled trees: root-label-one counts equal C(n) for n = 1..6\n";
        if (!ok) err << "verify: well-labeled tree calibration changed\n";
        return ok ? kExitOk : kExitFailure;
      }
      std::vector<int> all;
      for (int i = 1; i <= kCriteria; ++i) all.push_back(i);
      return run_criteria(all, parallel, out, err);
    }

    if (sc_csbp->parsed()) print_report(out, csbp_checks(parallel), fmt);
    else if (sc_gen->parsed()) print_report(out, generator_check(), fmt);
    else if (sc_fdd->parsed()) print_report(out, fdd_report({fdd_R}, {fdd_t, fdd_s}, 0.05, cfg.precision_digits), fmt);
    else if (sc_gamma->parsed()) print_report(out, gamma_limit_report(gamma_R), fmt);
    else if (sc_theta->parsed()) print_report(out, theta_limit_report(theta_R), fmt);
    return kExitOk;
  } catch (const CostError& e) {
    err << "error: " << e.what() << "; estimated cost " << e.estimate << " steps\n";
    return kExitCost;
  } catch (const CostTooHigh& e) {
    err << "error: " << e.what() << "; estimated cost " << e.estimate << " steps\n";
    return kExitCost;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qg::cli
