#include "carleman/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "carleman/error.hpp"

namespace carleman {

struct Expression::Node {
  enum class Op { number, z, add, sub, mul, div, pow, neg, exp, log, sqrt } op = Op::number;
  long double value = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Complex = std::complex<long double>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr, long double v = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::weight_evaluation,
                "expression '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (eat('+')) n = make(Node::Op::add, n, term());
      else if (eat('-')) n = make(Node::Op::sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (eat('*')) n = make(Node::Op::mul, n, unary());
      else if (eat('/')) n = make(Node::Op::div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Node::Op::neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    auto base = primary();
    if (eat('^')) return make(Node::Op::pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      auto n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t q = pos_ + 1;
        if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
        if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
          pos_ = q;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
      }
      double v = 0;
      const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
      if (ec != std::errc() || ptr != s_.data() + pos_) fail("bad number");
      return make(Node::Op::number, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view name = s_.substr(start, pos_ - start);
      if (name == "z") return make(Node::Op::z);
      if (name == "e") return make(Node::Op::number, nullptr, nullptr, std::numbers::e_v<long double>);
      if (name == "pi") return make(Node::Op::number, nullptr, nullptr, std::numbers::pi_v<long double>);
      Node::Op op;
      if (name == "exp") op = Node::Op::exp;
      else if (name == "log") op = Node::Op::log;
      else if (name == "sqrt") op = Node::Op::sqrt;
      else fail("unknown identifier '" + std::string(name) + "'");
      if (!eat('(')) fail("expected '(' after " + std::string(name));
      auto arg = expr();
      if (!eat(')')) fail("expected ')'");
      return make(op, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// log of the argument; for z itself the sheet is given by theta.
Complex log_of(const Node& n, long double r, long double theta, Complex value) {
  if (n.op == Node::Op::z) return {std::log(r), theta};
  return std::log(value);
}

Complex eval(const Node& n, long double r, long double theta) {
  switch (n.op) {
    case Node::Op::number: return n.value;
    case Node::Op::z: return std::polar(r, theta);
    case Node::Op::add: return eval(*n.lhs, r, theta) + eval(*n.rhs, r, theta);
    case Node::Op::sub: return eval(*n.lhs, r, theta) - eval(*n.rhs, r, theta);
    case Node::Op::mul: return eval(*n.lhs, r, theta) * eval(*n.rhs, r, theta);
    case Node::Op::div: return eval(*n.lhs, r, theta) / eval(*n.rhs, r, theta);
    case Node::Op::neg: return -eval(*n.lhs, r, theta);
    case Node::Op::exp: return std::exp(eval(*n.lhs, r, theta));
    case Node::Op::log: {
      const Complex v = eval(*n.lhs, r, theta);
      return log_of(*n.lhs, r, theta, v);
    }
    case Node::Op::sqrt: {
      const Complex v = eval(*n.lhs, r, theta);
      return std::exp(log_of(*n.lhs, r, theta, v) / 2.0L);
    }
    case Node::Op::pow: {
      const Complex w = eval(*n.rhs, r, theta);
      if (n.lhs->op == Node::Op::z) {
        // z^w on the surface: exp(w (log r + i theta)).
        if (w.imag() == 0) return std::polar(std::pow(r, w.real()), w.real() * theta);
        return std::exp(w * Complex(std::log(r), theta));
      }
      const Complex b = eval(*n.lhs, r, theta);
      if (w.imag() == 0 && w.real() == std::floor(w.real()) && std::abs(w.real()) <= 64) {
        Complex acc = 1;
        const int k = static_cast<int>(std::abs(w.real()));
        for (int i = 0; i < k; ++i) acc *= b;
        return w.real() < 0 ? 1.0L / acc : acc;
      }
      return std::exp(w * std::log(b));
    }
  }
  return 0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  return Expression(Parser(text).parse(), std::string(text));
}

std::complex<long double> Expression::operator()(long double r, long double theta) const {
  const Complex v = eval(*root_, r, theta);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw Error(ErrorCode::weight_evaluation,
                "expression '" + text_ + "' is not finite at r=" + std::to_string(double(r)) +
                    ", theta=" + std::to_string(double(theta)));
  }
  return v;
}

}  // namespace carleman
