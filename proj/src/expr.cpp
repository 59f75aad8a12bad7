// SPDX-License-Identifier: Apache-2.0
#include "expr.hpp"

#include <cctype>
#include <cstdlib>
#include <numbers>
#include <utility>

#include "error.hpp"

namespace warplab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonPositiveWarp: return "NonPositiveWarp";
    case ErrorCode::HorizonError: return "HorizonError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::TangencyError: return "TangencyError";
    case ErrorCode::DegenerateTestFunction: return "DegenerateTestFunction";
    case ErrorCode::NonpositiveMeanCurvature: return "NonpositiveMeanCurvature";
    case ErrorCode::MissingSpectrum: return "MissingSpectrum";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Recursive-descent parser:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, Expression& out) : text_(text), out_(out) {}

  int parse_all() {
    const int root = parse_expr();
    skip_space();
    if (pos_ != text_.size()) error("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void error(const std::string& what) const {
    throw ParseError("expression: " + what, 1, static_cast<int>(pos_) + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(Expression::Node node) {
    out_.nodes_.push_back(node);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int binary(Op op, int lhs, int rhs) {
    Expression::Node n;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    return push(n);
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Op::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return binary(Op::Neg, parse_unary(), -1);
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (accept('^')) return binary(Op::Pow, base, parse_unary());
    return base;
  }

  int parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    error("unexpected character '" + std::string(1, c) + "'");
  }

  int parse_number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) error("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    Expression::Node n;
    n.op = Op::Constant;
    n.constant = v;
    return push(n);
  }

  int parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    static const std::pair<const char*, Op> functions[] = {
        {"sin", Op::Sin},   {"cos", Op::Cos}, {"sinh", Op::Sinh}, {"cosh", Op::Cosh},
        {"tanh", Op::Tanh}, {"exp", Op::Exp}, {"log", Op::Log},   {"sqrt", Op::Sqrt},
    };
    for (const auto& [fname, op] : functions) {
      if (name == fname) {
        if (!accept('(')) error("expected '(' after " + name);
        const int arg = parse_expr();
        if (!accept(')')) error("expected ')'");
        return binary(op, arg, -1);
      }
    }

    const auto& vars = out_.variables_;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == name) {
        Expression::Node n;
        n.op = Op::Variable;
        n.variable = static_cast<int>(i);
        return push(n);
      }
    }
    if (name == "pi" || name == "e") {
      Expression::Node n;
      n.op = Op::Constant;
      n.constant = name == "pi" ? std::numbers::pi : std::numbers::e;
      return push(n);
    }
    pos_ = start;
    error("unknown identifier '" + name + "'");
  }

  std::string_view text_;
  Expression& out_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  Expression e;
  e.text_ = std::string(text);
  e.variables_ = std::move(variables);
  ExpressionParser parser(e.text_, e);
  e.root_ = parser.parse_all();
  return e;
}

bool Expression::is_constant() const {
  for (const Node& n : nodes_)
    if (n.op == Op::Variable) return false;
  return true;
}

}  // namespace warplab
