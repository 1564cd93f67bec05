#include <gtest/gtest.h>

#include <random>
#include <string>

#include "smallscat/errors.hpp"
#include "smallscat/fieldexpr.hpp"

using namespace smallscat;

namespace {

std::size_t error_column(std::string_view src)
{
    try {
        FieldExpr::parse(src);
    } catch (const ParseError& e) {
        return e.column();
    }
    return 0;
}

TEST(FieldExprParse, ConstantOne)
{
    const FieldExpr e = FieldExpr::parse("1");
    EXPECT_EQ(e.root().op, FieldExpr::Op::number);
    EXPECT_EQ(e.root().number, 1.0);
    EXPECT_EQ(e.evaluate(Vec3(0.3, -2, 7)), cplx(1.0));
}

TEST(FieldExprParse, GaussIsOneAtItsCenter)
{
    EXPECT_EQ(FieldExpr::parse("0.5*gauss(0,0,0,1)").evaluate(Vec3::Zero()), cplx(0.5));
    const cplx off = FieldExpr::parse("gauss(0,0,0,2)").evaluate(Vec3(1, 1, 0));
    EXPECT_NEAR(off.real(), std::exp(-0.5), 1e-15);
}

TEST(FieldExprParse, ErrorColumns)
{
    EXPECT_EQ(error_column("x +* y"), 4u);
    EXPECT_EQ(error_column(""), 1u);
    EXPECT_EQ(error_column("x $ 1"), 3u);
    EXPECT_EQ(error_column("2*(x+1"), 3u);
    EXPECT_EQ(error_column("foo(x)"), 1u);
    EXPECT_GT(error_column("x^2.5"), 0u);
    EXPECT_GT(error_column("x^y"), 0u);
    EXPECT_GT(error_column("gauss(1,2)"), 0u);
    EXPECT_GT(error_column("x y"), 0u);
}

TEST(FieldExprEval, Polynomial)
{
    EXPECT_EQ(FieldExpr::parse("x*x+1").evaluate(Vec3(2, 0, 0)), cplx(5.0));
    EXPECT_EQ(FieldExpr::parse("x^2 - y^-1").evaluate(Vec3(3, 2, 0)), cplx(8.5));
    EXPECT_EQ(FieldExpr::parse("-z^2").evaluate(Vec3(0, 0, 3)), cplx(-9.0));
}

TEST(FieldExprEval, ImaginaryUnit)
{
    EXPECT_EQ(FieldExpr::parse("i").evaluate(Vec3(1, 2, 3)), cplx(0, 1));
    EXPECT_EQ(FieldExpr::parse("(2 + i) * (2 - i)").evaluate(Vec3::Zero()), cplx(5, 0));
}

TEST(FieldExprEval, EulerAtPi)
{
    const cplx v = FieldExpr::parse("exp(i*x)").evaluate(Vec3(kPi, 0, 0));
    EXPECT_LT(std::abs(v - cplx(-1, 0)), 1e-12);
}

TEST(FieldExprEval, FunctionsAndConstants)
{
    const Vec3 x(0.7, -0.2, 0.4);
    EXPECT_NEAR(FieldExpr::parse("sin(x)^2 + cos(x)^2").evaluate(x).real(), 1.0, 1e-15);
    EXPECT_NEAR(FieldExpr::parse("sqrt(4)*abs(y)").evaluate(x).real(), 0.4, 1e-15);
    EXPECT_NEAR(FieldExpr::parse("pi").evaluate(x).real(), kPi, 0.0);
}

TEST(FieldExprEval, DivisionByZeroCarriesPoint)
{
    const FieldExpr e = FieldExpr::parse("1/x");
    try {
        e.evaluate(Vec3(0, 0.5, 0.25));
        FAIL() << "expected EvalError";
    } catch (const EvalError& err) {
        EXPECT_EQ(err.point(), Vec3(0, 0.5, 0.25));
    }
}

TEST(FieldExprEval, RealWithoutImaginaryLiteral)
{
    const FieldExpr e = FieldExpr::parse("exp(-x^2)*cos(3*y) + sqrt(abs(z)) - 2/(1+x^2)");
    EXPECT_FALSE(e.uses_imaginary_unit());
    for (double t = -2; t <= 2; t += 0.37) {
        EXPECT_EQ(e.evaluate(Vec3(t, 0.5 * t, -t)).imag(), 0.0);
    }
    EXPECT_TRUE(FieldExpr::parse("x + 0*i").uses_imaginary_unit());
}

// Random expression strings for the print/reparse property.
std::string random_expr(std::mt19937_64& rng, int depth)
{
    static const char* leaves[] = {"x", "y", "z", "i", "pi", "1", "2.5", "0.125", "1e-3", "3"};
    static const char* unary[] = {"exp", "sin", "cos", "sqrt", "abs"};
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 7);
    switch (pick(rng)) {
    case 0: return leaves[rng() % 10];
    case 1: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
    case 3: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
    case 4: return "(" + random_expr(rng, depth - 1) + ")/(" + random_expr(rng, depth - 1) + ")";
    case 5: return "-" + random_expr(rng, depth - 1);
    case 6: return "(" + random_expr(rng, depth - 1) + ")^" + std::to_string(static_cast<int>(rng() % 7) - 3);
    default:
        if (rng() % 4 == 0) {
            return "gauss(" + random_expr(rng, 0) + "," + random_expr(rng, 0) + ",0.5," +
                   random_expr(rng, depth - 1) + ")";
        }
        return std::string(unary[rng() % 5]) + "(" + random_expr(rng, depth - 1) + ")";
    }
}

TEST(FieldExprProperty, PrintReparseIsIdentity)
{
    std::mt19937_64 rng(2024);
    for (int n = 0; n < 500; ++n) {
        const std::string src = random_expr(rng, 4);
        const FieldExpr e = FieldExpr::parse(src);
        const std::string printed = e.to_string();
        const FieldExpr again = FieldExpr::parse(printed);
        EXPECT_EQ(again, e) << src << "  ->  " << printed;
        EXPECT_EQ(again.to_string(), printed);
    }
}

TEST(FieldExprProperty, EvaluationIsDeterministic)
{
    const FieldExpr e = FieldExpr::parse("gauss(0.5,0.5,0.5,0.3)*(1 + i*x)/(2 + y^2)");
    const Vec3 x(0.1, 0.9, 0.4);
    const cplx first = e.evaluate(x);
    for (int n = 0; n < 10; ++n) {
        EXPECT_EQ(e.evaluate(x), first);
    }
}

} // namespace
