#pragma once

#include "orthant/core.hpp"
#include "orthant/paths.hpp"
#include "orthant/report.hpp"
#include "orthant/skorokhod.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace orthant {

/// Shortest text that round-trips through strtod at 17 significant digits.
std::string format_double(double v);

/// Text format: first line `d`, then d whitespace-separated rows. `source`
/// names the input in error messages. Parse problems raise ConfigParse with
/// the line number; validation problems carry the row/column from validate().
ReflectionMatrix read_matrix(std::istream& in, std::string_view source = "<matrix>");
ReflectionMatrix read_matrix_file(const std::filesystem::path& file);
void write_matrix(std::ostream& out, const ReflectionMatrix& q);

/// Comma-separated list of reals, e.g. "-1,-0.5".
Vec parse_point(std::string_view text);

/// Header `t,x1,...,xd`, one row per grid point.
void write_path_csv(std::ostream& out, const GridPath& path, std::string_view prefix = "x");
/// Validates uniform spacing within 1e-9 relative tolerance and infers the
/// density from the spacing (must be an integer number of points per unit time).
GridPath read_path_csv(std::istream& in, std::string_view source = "<path>");
GridPath read_path_csv_file(const std::filesystem::path& file);

/// Header `t,x1..xd,k1..kd`.
void write_solution_csv(std::ostream& out, const SkorokhodSolution& s);
SkorokhodSolution read_solution_csv(std::istream& in, std::string_view source = "<solution>");

/// Columns n,h,mean_err_2p,stderr,log_x,log_y then a trailing
/// `slope,<s>,intercept,<b>,r_squared,<r2>` line (`slope,undefined` without a fit).
void write_rate_csv(std::ostream& out, const RateReport& report);
RateReport read_rate_csv(std::istream& in, std::string_view source = "<rate>");

/// key=value lines; '#' starts a comment. Duplicate keys: last wins.
using KeyValues = std::map<std::string, std::string>;
KeyValues read_key_values(std::istream& in, std::string_view source = "<config>");
KeyValues read_key_values_file(const std::filesystem::path& file);

}  // namespace orthant
