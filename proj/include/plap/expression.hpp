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

#pragma once

#include "plap/types.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plap {

class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(const std::string& what, std::size_t position);
  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Closed-form scalar function of the coordinates x, y, z.
///
/// Grammar (usual precedence, ^ right-associative and binding tighter than unary minus):
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | '+' unary | power
///   power  := atom ('^' unary)?
///   atom   := number | x | y | z | pi | func '(' expr ')' | '(' expr ')' | '|' expr '|'
///   func   := sin | cos | tan | exp | log | sqrt | abs
///
/// Inside bars a coordinate list `|x, y|` denotes the Euclidean length; `|x|`
/// on its own is the absolute value.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text);

  [[nodiscard]] double operator()(const Vec& x) const;
  /// Highest coordinate index referenced plus one (0 for a constant).
  [[nodiscard]] int arity() const { return arity_; }
  [[nodiscard]] const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  int arity_ = 0;
  std::string text_;
};

}  // namespace plap
