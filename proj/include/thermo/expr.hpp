#pragma once

#include <memory>
#include <string>

namespace thermo {

// Tiny arithmetic expression grammar over one variable:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary ('^' factor)?          (right associative)
//   unary  := '-' unary | primary
//   primary:= number | 'x' | 'log' '(' expr ')' | 'abs' '(' expr ')' | '(' expr ')'
// This grammar is part of the map/potential JSON contract.
class Expr {
public:
    static Expr parse(const std::string& text); // throws DomainError on syntax errors

    double eval(double x) const;
    Expr derivative() const; // symbolic d/dx

    const std::string& text() const { return text_; }

    struct Node; // exposed for the implementation's free helpers

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace thermo
