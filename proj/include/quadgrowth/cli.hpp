#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qg::cli {

struct Config {
  int series_order_x = 64, series_order_t = 64, series_order_y = 32;
  int catalog_max_n = 7;
  int precision_digits = 50;
  std::uint64_t seed = 0;
  std::string output_format = "csv";
};

// merge keys of a JSON object into c; throws std::runtime_error on unknown keys or bad values
void apply_config_json(Config& c, const std::string& text);

inline constexpr int kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitCost = 3;

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qg::cli
