// Copyright 2026 The csq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

#include "csq/quantize.hpp"

namespace csq {

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Compiles an observable such as "abs2(z)", "q^2/2 + p^2/2" or "j*cos(theta)".
///
/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | name '(' expr ')' | '(' expr ')'
///
/// Names: i, pi; q, p, z, zbar on the plane; theta, phi, j on the sphere.
/// Functions: exp, cos, sin, abs2.
PointFunction compile_expression(const std::string& text, const Manifold& manifold);

}  // namespace csq
