#pragma once

// Scalar field expressions for density and impedance profiles, e.g.
//   "0.5*gauss(0.5,0.5,0.5,0.2)"   "(2 + i) * exp(-x^2)"
//
// Grammar (precedence high to low): ^ (integer literal exponent), unary -,
// * /, + -. Identifiers: x y z i pi, functions exp sin cos sqrt abs and
// gauss(cx,cy,cz,w) = exp(-|r - c|^2 / w^2).

#include <string>
#include <string_view>
#include <vector>

#include "smallscat/types.hpp"

namespace smallscat {

class FieldExpr {
public:
    enum class Op { number, imag_unit, var_x, var_y, var_z, add, sub, mul, div, neg, pow, call };
    enum class Func { exp, sin, cos, sqrt, abs, gauss };

    struct Node {
        Op op = Op::number;
        double number = 0.0;
        int exponent = 0;
        Func func = Func::exp;
        std::vector<Node> args;

        bool operator==(const Node&) const = default;
    };

    /// Throws ParseError with the 1-based column of the first offending token.
    static FieldExpr parse(std::string_view source);

    /// Throws EvalError (carrying x) on division by zero.
    cplx evaluate(const Vec3& x) const;

    /// Fully parenthesized form that reparses to an equal tree.
    std::string to_string() const;

    /// True if the literal `i` occurs anywhere in the tree.
    bool uses_imaginary_unit() const;

    const Node& root() const noexcept { return root_; }

    bool operator==(const FieldExpr&) const = default;

private:
    explicit FieldExpr(Node root) : root_(std::move(root)) {}
    Node root_;
};

} // namespace smallscat
