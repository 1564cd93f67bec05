#include "smallscat/fieldexpr.hpp"

#include <cctype>
#include <charconv>
#include <optional>

#include <fmt/format.h>

#include "smallscat/errors.hpp"

namespace smallscat {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t column; // 1-based
};

std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    std::size_t pos = 0;
    while (pos < src.size()) {
        const char c = src[pos];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
            continue;
        }
        const std::size_t start = pos;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            while (pos < src.size() &&
                   (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
                ++pos;
            if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
                std::size_t look = pos + 1;
                if (look < src.size() && (src[look] == '+' || src[look] == '-'))
                    ++look;
                if (look < src.size() && std::isdigit(static_cast<unsigned char>(src[look]))) {
                    pos = look;
                    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
                        ++pos;
                }
            }
            out.push_back({Tok::number, src.substr(start, pos - start), start + 1});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                ++pos;
            out.push_back({Tok::ident, src.substr(start, pos - start), start + 1});
            continue;
        }
        Tok kind;
        switch (c) {
        case '+': kind = Tok::plus; break;
        case '-': kind = Tok::minus; break;
        case '*': kind = Tok::star; break;
        case '/': kind = Tok::slash; break;
        case '^': kind = Tok::caret; break;
        case '(': kind = Tok::lparen; break;
        case ')': kind = Tok::rparen; break;
        case ',': kind = Tok::comma; break;
        default:
            throw ParseError(fmt::format("unexpected character '{}'", c), start + 1);
        }
        out.push_back({kind, src.substr(start, 1), start + 1});
        ++pos;
    }
    out.push_back({Tok::end, {}, src.size() + 1});
    return out;
}

using Node = FieldExpr::Node;
using Op = FieldExpr::Op;
using Func = FieldExpr::Func;

std::optional<Func> lookup_function(std::string_view name)
{
    if (name == "exp") return Func::exp;
    if (name == "sin") return Func::sin;
    if (name == "cos") return Func::cos;
    if (name == "sqrt") return Func::sqrt;
    if (name == "abs") return Func::abs;
    if (name == "gauss") return Func::gauss;
    return std::nullopt;
}

std::size_t arity(Func f)
{
    return f == Func::gauss ? 4 : 1;
}

const char* function_name(Func f)
{
    switch (f) {
    case Func::exp: return "exp";
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
    case Func::gauss: return "gauss";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Node parse_all()
    {
        if (peek().kind == Tok::end)
            throw ParseError("empty expression", peek().column);
        Node n = expression();
        if (peek().kind == Tok::rparen)
            throw ParseError("unbalanced parentheses: unexpected ')'", peek().column);
        if (peek().kind != Tok::end)
            throw ParseError(fmt::format("unexpected token '{}'", peek().text), peek().column);
        return n;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    static Node binary(Op op, Node lhs, Node rhs)
    {
        Node n;
        n.op = op;
        n.args.push_back(std::move(lhs));
        n.args.push_back(std::move(rhs));
        return n;
    }

    Node expression()
    {
        Node lhs = term();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Op op = next().kind == Tok::plus ? Op::add : Op::sub;
            lhs = binary(op, std::move(lhs), term());
        }
        return lhs;
    }

    Node term()
    {
        Node lhs = unary();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Op op = next().kind == Tok::star ? Op::mul : Op::div;
            lhs = binary(op, std::move(lhs), unary());
        }
        return lhs;
    }

    Node unary()
    {
        if (peek().kind == Tok::minus) {
            next();
            Node n;
            n.op = Op::neg;
            n.args.push_back(unary());
            return n;
        }
        if (peek().kind == Tok::plus) {
            next();
            return unary();
        }
        return power();
    }

    Node power()
    {
        Node base = primary();
        while (peek().kind == Tok::caret) {
            next();
            int sign = 1;
            if (peek().kind == Tok::minus || peek().kind == Tok::plus) {
                sign = next().kind == Tok::minus ? -1 : 1;
            }
            const Token& t = peek();
            if (t.kind != Tok::number || t.text.find_first_of(".eE") != std::string_view::npos)
                throw ParseError("non-integer exponent", t.column);
            int value = 0;
            const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
            if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
                throw ParseError("exponent out of range", t.column);
            next();
            Node n;
            n.op = Op::pow;
            n.exponent = sign * value;
            n.args.push_back(std::move(base));
            base = std::move(n);
        }
        return base;
    }

    Node primary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::number: {
            next();
            Node n;
            const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n.number);
            if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
                throw ParseError(fmt::format("malformed number '{}'", t.text), t.column);
            return n;
        }
        case Tok::ident:
            return identifier();
        case Tok::lparen: {
            const std::size_t open_column = t.column;
            next();
            Node inner = expression();
            if (peek().kind != Tok::rparen) {
                if (peek().kind == Tok::end)
                    throw ParseError("unbalanced parentheses: '(' is never closed", open_column);
                throw ParseError(fmt::format("expected ')' but found '{}'", peek().text), peek().column);
            }
            next();
            return inner;
        }
        case Tok::rparen:
            throw ParseError("unbalanced parentheses: unexpected ')'", t.column);
        case Tok::end:
            throw ParseError("unexpected end of expression", t.column);
        default:
            throw ParseError(fmt::format("unexpected token '{}'", t.text), t.column);
        }
    }

    Node identifier()
    {
        const Token& t = next();
        Node n;
        if (t.text == "x") { n.op = Op::var_x; return n; }
        if (t.text == "y") { n.op = Op::var_y; return n; }
        if (t.text == "z") { n.op = Op::var_z; return n; }
        if (t.text == "i") { n.op = Op::imag_unit; return n; }
        if (t.text == "pi") { n.number = kPi; return n; }

        const auto func = lookup_function(t.text);
        if (!func)
            throw ParseError(fmt::format("unknown identifier '{}'", t.text), t.column);
        if (peek().kind != Tok::lparen)
            throw ParseError(fmt::format("expected '(' after function '{}'", t.text), peek().column);
        const std::size_t open_column = next().column;
        n.op = Op::call;
        n.func = *func;
        n.args.push_back(expression());
        while (peek().kind == Tok::comma) {
            next();
            n.args.push_back(expression());
        }
        if (peek().kind != Tok::rparen) {
            if (peek().kind == Tok::end)
                throw ParseError("unbalanced parentheses: '(' is never closed", open_column);
            throw ParseError(fmt::format("expected ')' but found '{}'", peek().text), peek().column);
        }
        next();
        if (n.args.size() != arity(*func))
            throw ParseError(fmt::format("function '{}' takes {} argument(s), got {}", t.text,
                                         arity(*func), n.args.size()),
                             t.column);
        return n;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

cplx checked_div(cplx num, cplx den, const Vec3& x)
{
    if (den == cplx{0.0, 0.0})
        throw EvalError("division by zero", x);
    return num / den;
}

cplx int_power(cplx base, int exponent, const Vec3& x)
{
    unsigned n = exponent < 0 ? static_cast<unsigned>(-(long long)exponent) : static_cast<unsigned>(exponent);
    cplx result{1.0, 0.0};
    cplx b = base;
    while (n != 0) {
        if (n & 1u)
            result *= b;
        b *= b;
        n >>= 1u;
    }
    return exponent < 0 ? checked_div(1.0, result, x) : result;
}

cplx eval(const Node& n, const Vec3& x)
{
    switch (n.op) {
    case Op::number: return n.number;
    case Op::imag_unit: return kI;
    case Op::var_x: return x.x();
    case Op::var_y: return x.y();
    case Op::var_z: return x.z();
    case Op::add: return eval(n.args[0], x) + eval(n.args[1], x);
    case Op::sub: return eval(n.args[0], x) - eval(n.args[1], x);
    case Op::mul: return eval(n.args[0], x) * eval(n.args[1], x);
    case Op::div: return checked_div(eval(n.args[0], x), eval(n.args[1], x), x);
    case Op::neg: return -eval(n.args[0], x);
    case Op::pow: return int_power(eval(n.args[0], x), n.exponent, x);
    case Op::call: break;
    }

    const cplx a = eval(n.args[0], x);
    switch (n.func) {
    case Func::exp: return std::exp(a);
    case Func::sin: return std::sin(a);
    case Func::cos: return std::cos(a);
    case Func::sqrt: return std::sqrt(a);
    case Func::abs: return std::abs(a);
    case Func::gauss: {
        const cplx dx = x.x() - a;
        const cplx dy = x.y() - eval(n.args[1], x);
        const cplx dz = x.z() - eval(n.args[2], x);
        const cplx w = eval(n.args[3], x);
        return std::exp(-checked_div(dx * dx + dy * dy + dz * dz, w * w, x));
    }
    }
    return {};
}

void print(const Node& n, std::string& out)
{
    auto binop = [&](const char* sym) {
        out += '(';
        print(n.args[0], out);
        out += sym;
        print(n.args[1], out);
        out += ')';
    };
    switch (n.op) {
    case Op::number: out += fmt::format("{:.17g}", n.number); return;
    case Op::imag_unit: out += 'i'; return;
    case Op::var_x: out += 'x'; return;
    case Op::var_y: out += 'y'; return;
    case Op::var_z: out += 'z'; return;
    case Op::add: binop(" + "); return;
    case Op::sub: binop(" - "); return;
    case Op::mul: binop(" * "); return;
    case Op::div: binop(" / "); return;
    case Op::neg:
        out += "(-";
        print(n.args[0], out);
        out += ')';
        return;
    case Op::pow:
        out += '(';
        print(n.args[0], out);
        out += fmt::format("^{})", n.exponent);
        return;
    case Op::call:
        out += function_name(n.func);
        out += '(';
        for (std::size_t k = 0; k < n.args.size(); ++k) {
            if (k != 0)
                out += ", ";
            print(n.args[k], out);
        }
        out += ')';
        return;
    }
}

bool contains_imag(const Node& n)
{
    if (n.op == Op::imag_unit)
        return true;
    for (const auto& a : n.args)
        if (contains_imag(a))
            return true;
    return false;
}

} // namespace

FieldExpr FieldExpr::parse(std::string_view source)
{
    Parser parser(tokenize(source));
    return FieldExpr(parser.parse_all());
}

cplx FieldExpr::evaluate(const Vec3& x) const
{
    return eval(root_, x);
}

std::string FieldExpr::to_string() const
{
    std::string out;
    print(root_, out);
    return out;
}

bool FieldExpr::uses_imaginary_unit() const
{
    return contains_imag(root_);
}

} // namespace smallscat
