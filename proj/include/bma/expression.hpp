#pragma once

#include <memory>
#include <string>

#include "bma/common.hpp"

namespace bma {

/// Values an expression may reference: cartesian position, cut-adapted
/// polar coordinates, and the (unwrapped) sheet index.
struct EvalContext {
  double x = 0, y = 0;
  double r = 0, theta = 0;
  double sheet = 0;
};

/// Minimal arithmetic grammar for boundary data and right-hand sides:
/// numbers; variables x, y, r, theta, s; pi; + - * / ^ and unary -;
/// exp, sin, cos, sqrt, log, abs; min(a,b), max(a,b), pow(a,b).
class Expression {
 public:
  static Expression parse(const std::string& text);
  double eval(const EvalContext& ctx) const;
  const std::string& text() const { return text_; }
  Expression() = default;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace bma
