#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>

namespace carleman {

/// Arithmetic expression in the variable z, evaluated on the Riemann surface of the log.
///
/// Grammar: + - * / ^, unary minus, parentheses, numbers, z, e, pi, exp(), log(), sqrt().
/// Powers and logarithms of z itself use the unreduced argument theta; for any other
/// base the principal branch is used.
class Expression {
 public:
  static Expression parse(std::string_view text);

  [[nodiscard]] std::complex<long double> operator()(long double r, long double theta) const;
  [[nodiscard]] const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  Expression(std::shared_ptr<const Node> root, std::string text)
      : root_(std::move(root)), text_(std::move(text)) {}
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace carleman
