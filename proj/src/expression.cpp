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

#include "csq/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <vector>

namespace csq {

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Var { q, p, z, zbar, theta, phi };

struct Node {
  enum class Kind { number, variable, unary_minus, binary, call } kind;
  Complex value{};
  Var var{};
  char op = 0;
  std::string fn;
  NodePtr lhs, rhs;
};

Complex evaluate(const Node& n, PhasePoint x) {
  switch (n.kind) {
    case Node::Kind::number:
      return n.value;
    case Node::Kind::variable: {
      switch (n.var) {
        case Var::q: return x.c1;
        case Var::p: return x.c2;
        case Var::z: return plane_z(x);
        case Var::zbar: return std::conj(plane_z(x));
        case Var::theta: return x.c1;
        case Var::phi: return x.c2;
      }
      return 0.0;
    }
    case Node::Kind::unary_minus:
      return -evaluate(*n.lhs, x);
    case Node::Kind::binary: {
      const Complex a = evaluate(*n.lhs, x);
      const Complex b = evaluate(*n.rhs, x);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        default: {
          // Integer powers by repeated products keep real inputs exact.
          if (b.imag() == 0.0 && b.real() == std::round(b.real()) && std::abs(b.real()) <= 64) {
            const int k = static_cast<int>(b.real());
            Complex r = 1.0;
            for (int s = 0; s < std::abs(k); ++s) r *= a;
            return k >= 0 ? r : Complex(1.0) / r;
          }
          return std::pow(a, b);
        }
      }
    }
    case Node::Kind::call: {
      const Complex a = evaluate(*n.lhs, x);
      if (n.fn == "exp") return std::exp(a);
      if (n.fn == "cos") return std::cos(a);
      if (n.fn == "sin") return std::sin(a);
      return std::norm(a);
    }
  }
  return 0.0;
}

class Parser {
 public:
  Parser(const std::string& text, const Manifold& manifold) : text_(text), manifold_(manifold) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression \"" + text_ + "\" at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = binary('+', n, term());
      else if (accept('-')) n = binary('-', n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = binary('*', n, unary());
      else if (accept('/')) n = binary('/', n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('+')) return unary();
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::unary_minus;
      n->lhs = unary();
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr number_node(Complex v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::number;
    n->value = v;
    return n;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<size_t>(end - begin);
      return number_node(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "exp" || name == "cos" || name == "sin" || name == "abs2") {
        if (!accept('(')) fail("expected '(' after " + name);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->fn = name;
        n->lhs = expr();
        if (!accept(')')) fail("expected ')'");
        return n;
      }
      return name_node(name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr name_node(const std::string& name) {
    if (name == "i") return number_node(Complex(0.0, 1.0));
    if (name == "pi") return number_node(M_PI);
    const bool plane = manifold_.kind == ManifoldKind::plane;
    if (!plane && name == "j") return number_node(manifold_.j());
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::variable;
    if (plane && name == "q") n->var = Var::q;
    else if (plane && name == "p") n->var = Var::p;
    else if (plane && name == "z") n->var = Var::z;
    else if (plane && name == "zbar") n->var = Var::zbar;
    else if (!plane && name == "theta") n->var = Var::theta;
    else if (!plane && name == "phi") n->var = Var::phi;
    else fail("unknown name '" + name + "' on the " + std::string(plane ? "plane" : "sphere"));
    return n;
  }

  const std::string& text_;
  const Manifold& manifold_;
  size_t pos_ = 0;
};

}  // namespace

PointFunction compile_expression(const std::string& text, const Manifold& manifold) {
  NodePtr root = Parser(text, manifold).parse();
  return [root](PhasePoint x) { return evaluate(*root, x); };
}

}  // namespace csq
