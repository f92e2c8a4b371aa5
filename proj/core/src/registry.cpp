#include "sdfnoc/registry.hpp"

#include <algorithm>

#include "sdfnoc/error.hpp"

namespace sdfnoc {

void OperatorRegistry::add(std::string type, Operator op) {
  if (!op.fire) throw OperatorError("operator '" + type + "' has no firing function");
  ops_.insert_or_assign(std::move(type), std::move(op));
}

const Operator* OperatorRegistry::find(std::string_view type) const {
  auto it = ops_.find(type);
  return it == ops_.end() ? nullptr : &it->second;
}

std::vector<Token> OperatorRegistry::fire(std::string_view type, std::span<const Token> inputs) const {
  const Operator* op = find(type);
  if (!op) throw OperatorError("no registry entry for type '" + std::string(type) + "'");
  if (inputs.size() != op->in_arity) {
    throw OperatorError("type '" + std::string(type) + "' expects " + std::to_string(op->in_arity) +
                        " inputs, got " + std::to_string(inputs.size()));
  }
  if (op->null_propagating && std::any_of(inputs.begin(), inputs.end(), is_null)) {
    return std::vector<Token>(op->out_arity, NullToken{});
  }
  auto out = op->fire(inputs);
  if (out.size() != op->out_arity) {
    throw OperatorError("type '" + std::string(type) + "' produced " + std::to_string(out.size()) +
                        " outputs, expected " + std::to_string(op->out_arity));
  }
  return out;
}

std::vector<std::string> OperatorRegistry::types() const {
  std::vector<std::string> out;
  for (const auto& [name, op] : ops_) out.push_back(name);
  return out;
}

}  // namespace sdfnoc
