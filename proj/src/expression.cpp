/* Copyright 2026 The plap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "plap/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace plap {

ExpressionError::ExpressionError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position)
{
}

struct Expression::Node {
  enum class Kind { Constant, Coordinate, Negate, Add, Sub, Mul, Div, Pow, Call, Length };
  Kind kind = Kind::Constant;
  double value = 0.0;
  int coordinate = 0;
  double (*function)(double) = nullptr;
  std::vector<std::shared_ptr<const Node>> args;

  [[nodiscard]] double eval(const Vec& x) const
  {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Coordinate:
        if (coordinate >= x.size()) throw std::out_of_range("expression references a coordinate beyond the point dimension");
        return x[coordinate];
      case Kind::Negate: return -args[0]->eval(x);
      case Kind::Add: return args[0]->eval(x) + args[1]->eval(x);
      case Kind::Sub: return args[0]->eval(x) - args[1]->eval(x);
      case Kind::Mul: return args[0]->eval(x) * args[1]->eval(x);
      case Kind::Div: return args[0]->eval(x) / args[1]->eval(x);
      case Kind::Pow: return std::pow(args[0]->eval(x), args[1]->eval(x));
      case Kind::Call: return function(args[0]->eval(x));
      case Kind::Length: {
        double s = 0.0;
        for (const auto& a : args) {
          const double v = a->eval(x);
          s += v * v;
        }
        return std::sqrt(s);
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {})
{
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

NodePtr constant(double v)
{
  auto n = std::make_shared<Expression::Node>();
  n->value = v;
  return n;
}

struct Function {
  std::string_view name;
  double (*fn)(double);
};

const Function kFunctions[] = {
    {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
    {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
    {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
    {"abs", [](double v) { return std::abs(v); }},
};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse()
  {
    NodePtr n = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character '" + std::string(1, s_[i_]) + "'");
    return n;
  }

  int arity = 0;

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ExpressionError(what, i_); }

  void skip()
  {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool accept(char c)
  {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  void expect(char c)
  {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr()
  {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Kind::Add, {lhs, term()});
      else if (accept('-'))
        lhs = make(Kind::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term()
  {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Kind::Mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make(Kind::Div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary()
  {
    if (accept('-')) return make(Kind::Negate, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power()
  {
    NodePtr base = atom();
    if (accept('^')) return make(Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr atom()
  {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    if (accept('(')) {
      NodePtr n = expr();
      expect(')');
      return n;
    }
    if (accept('|')) {
      std::vector<NodePtr> parts{expr()};
      while (accept(',')) parts.push_back(expr());
      expect('|');
      if (parts.size() == 1) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Call;
        n->function = [](double v) { return std::abs(v); };
        n->args = std::move(parts);
        return n;
      }
      return make(Kind::Length, std::move(parts));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number()
  {
    double v = 0.0;
    const char* first = s_.data() + i_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    i_ += static_cast<std::size_t>(ptr - first);
    return constant(v);
  }

  NodePtr word()
  {
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) ++i_;
    const std::string_view w = s_.substr(start, i_ - start);
    if (w == "x" || w == "y" || w == "z") {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Coordinate;
      n->coordinate = w[0] - 'x';
      arity = std::max(arity, n->coordinate + 1);
      return n;
    }
    if (w == "pi") return constant(std::numbers::pi);
    if (w == "e") return constant(std::numbers::e);
    for (const Function& f : kFunctions) {
      if (w != f.name) continue;
      expect('(');
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Call;
      n->function = f.fn;
      n->args = {expr()};
      expect(')');
      return n;
    }
    i_ = start;
    fail("unknown identifier '" + std::string(w) + "'");
  }
};

}  // namespace

Expression Expression::parse(std::string_view text)
{
  Parser parser(text);
  Expression e;
  e.root_ = parser.parse();
  e.arity_ = parser.arity;
  e.text_ = std::string(text);
  return e;
}

double Expression::operator()(const Vec& x) const
{
  return root_->eval(x);
}

}  // namespace plap
