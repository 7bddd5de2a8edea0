#pragma once

#include <iosfwd>
#include <string>

#include "randsel/system_model.hpp"

namespace randsel {

struct Instance {
  LtiSystem system;
  SensorPool pool;
};

// Text format (blank lines and '#' comments ignored):
//
//   state_dim <m>
//   A
//   <m rows of m numbers>
//   Q
//   <m rows of m numbers>
//   sensors <n_c>
//   <n_c rows: c_1 ... c_m sigma2>
//
// Numbers are written in shortest round-trip form, so format/parse is
// bit-exact.
Instance parse_instance(std::istream& in);
Instance load_instance(const std::string& path);
std::string format_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);
double parse_double(const std::string& token);

// CSV with header "index,probability"; indices 1-based.
Eigen::VectorXd load_distribution(const std::string& path);
std::string format_distribution(const Eigen::VectorXd& p);

}  // namespace randsel
