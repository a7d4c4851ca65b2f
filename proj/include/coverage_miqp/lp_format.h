#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coverage_miqp/model.h"

namespace coverage_miqp {

// Name-keyed view of a program, the common ground between a built model and
// a parsed LP file.
struct LpRow {
  std::string name;
  std::map<std::string, double> coefs;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;

  bool operator==(const LpRow&) const = default;
};

struct LpProblem {
  std::map<std::string, double> objective;
  // coef * a * b with a <= b lexicographically.
  std::map<std::pair<std::string, std::string>, double> quadratic;
  std::vector<LpRow> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::vector<std::string> binaries;  // sorted

  bool operator==(const LpProblem&) const = default;
};

LpProblem to_lp_problem(const MiqpModel& m);

// Minimize / Subject To / Bounds / Binaries / End. Quadratic objective terms
// sit in a "[ ... ] / 2" bracket with doubled coefficients; numbers are
// written with 17 significant digits so a re-parse is exact.
std::string write_lp(const LpProblem& p);
std::string write_lp(const MiqpModel& m);

// Reads the subset of the LP text format that write_lp produces. Throws
// std::invalid_argument on malformed input.
LpProblem read_lp(std::string_view text);

// Throws std::runtime_error when the destination cannot be written.
void export_lp(const MiqpModel& m, const std::filesystem::path& path);

}  // namespace coverage_miqp
