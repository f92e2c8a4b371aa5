#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdfnoc/token.hpp"

namespace sdfnoc {

/// One firing: consumes one token per input, returns one token per output.
using FiringFunction = std::function<std::vector<Token>(std::span<const Token>)>;

struct Operator {
  std::uint32_t in_arity = 0;
  std::uint32_t out_arity = 0;
  FiringFunction fire;
  // When set, any Null input yields Null on every output without calling `fire`.
  bool null_propagating = true;
};

/// Maps type labels to pure firing functions.
class OperatorRegistry {
 public:
  void add(std::string type, Operator op);

  const Operator* find(std::string_view type) const;
  bool contains(std::string_view type) const { return find(type) != nullptr; }

  /// Applies the null rule, calls the firing function and checks the output
  /// count. Throws OperatorError for unknown types or arity mismatches.
  std::vector<Token> fire(std::string_view type, std::span<const Token> inputs) const;

  std::vector<std::string> types() const;

 private:
  std::map<std::string, Operator, std::less<>> ops_;
};

}  // namespace sdfnoc
