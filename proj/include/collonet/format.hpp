#pragma once

#include <string>
#include <string_view>

namespace collonet {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// Strict parse of a full decimal field (surrounding blanks allowed).
double parse_double(std::string_view text);

}  // namespace collonet
