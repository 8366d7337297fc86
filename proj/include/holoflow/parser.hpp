#pragma once

#include "holoflow/entire.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace holoflow {

/// Malformed expression or family text. `column` is 1-based within the
/// parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int column);
  int column() const { return column_; }

 private:
  int column_;
};

/// Parses an expression over z1..zn (aliases z = z1, w = z2), complex
/// literals (2, 1.5e-3, 3i, i), pi, + - * /, ^ with an integer exponent,
/// exp(...) and parentheses. The arity is the largest variable index used,
/// at least `min_arity`.
HoloMap parse_expression(std::string_view text, Domain source, int min_arity = 2);

/// A parsed family. Holomorphic families fill `map`; entire families
/// fill `entire` and, when built from a generator, `phi`.
struct Family {
  std::string text;
  std::optional<HoloMap> map;
  std::optional<EntireMap> entire;
  std::optional<EntireMap> phi;
};

/// mean | mean(n) | linear(a1, ..., an) | proj(j[, n]) | h_r(r | inf) |
/// g_nu(angle) | am(expr) | be(expr | inf) | blend(t) |
/// translate(family, t) | average(family, r[, N]) | periodic(k) |
/// entire(expr). Numeric arguments are constant expressions.
Family parse_family(std::string_view text);

}  // namespace holoflow
