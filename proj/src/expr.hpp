// SPDX-License-Identifier: Apache-2.0
//
// A small arithmetic expression language used to declare warping functions
// and scalar fields. Grammar and supported functions are documented in
// docs/expressions.md.
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "jet.hpp"

namespace warplab {

class Expression {
 public:
  enum class Op {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
  };

  /// Parses `text`; identifiers in `variables` become inputs in that order.
  /// Throws ParseError with the column of the first bad token.
  static Expression parse(std::string_view text, std::vector<std::string> variables);

  template <class T>
  T evaluate(std::span<const T> inputs) const {
    return eval_node<T>(root_, inputs);
  }

  const std::string& text() const { return text_; }
  const std::vector<std::string>& variables() const { return variables_; }

  /// True when no variable appears in the tree.
  bool is_constant() const;

 private:
  struct Node {
    Op op = Op::Constant;
    double constant = 0.0;
    int variable = -1;
    int lhs = -1;
    int rhs = -1;
  };

  friend class ExpressionParser;

  template <class T>
  static T lift(double c) {
    if constexpr (std::is_same_v<T, double>) {
      return c;
    } else {
      return T::constant(c);
    }
  }

  template <class T>
  T eval_node(int index, std::span<const T> in) const {
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sinh;
    using std::sqrt;
    using std::tanh;
    const Node& n = nodes_[static_cast<std::size_t>(index)];
    switch (n.op) {
      case Op::Constant: return lift<T>(n.constant);
      case Op::Variable: return in[static_cast<std::size_t>(n.variable)];
      case Op::Add: return eval_node<T>(n.lhs, in) + eval_node<T>(n.rhs, in);
      case Op::Sub: return eval_node<T>(n.lhs, in) - eval_node<T>(n.rhs, in);
      case Op::Mul: return eval_node<T>(n.lhs, in) * eval_node<T>(n.rhs, in);
      case Op::Div: return eval_node<T>(n.lhs, in) / eval_node<T>(n.rhs, in);
      case Op::Neg: return -eval_node<T>(n.lhs, in);
      case Op::Pow: {
        const Node& exponent = nodes_[static_cast<std::size_t>(n.rhs)];
        if (exponent.op == Op::Constant) {
          if constexpr (std::is_same_v<T, double>) {
            return std::pow(eval_node<T>(n.lhs, in), exponent.constant);
          } else {
            return pow(eval_node<T>(n.lhs, in), exponent.constant);
          }
        }
        return exp(eval_node<T>(n.rhs, in) * log(eval_node<T>(n.lhs, in)));
      }
      case Op::Sin: return sin(eval_node<T>(n.lhs, in));
      case Op::Cos: return cos(eval_node<T>(n.lhs, in));
      case Op::Sinh: return sinh(eval_node<T>(n.lhs, in));
      case Op::Cosh: return cosh(eval_node<T>(n.lhs, in));
      case Op::Tanh: return tanh(eval_node<T>(n.lhs, in));
      case Op::Exp: return exp(eval_node<T>(n.lhs, in));
      case Op::Log: return log(eval_node<T>(n.lhs, in));
      case Op::Sqrt: return sqrt(eval_node<T>(n.lhs, in));
    }
    return lift<T>(0.0);
  }

  std::string text_;
  std::vector<std::string> variables_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace warplab
