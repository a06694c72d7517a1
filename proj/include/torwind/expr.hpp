#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>

#include "torwind/errors.hpp"

namespace torwind {

/// Immutable arithmetic expression in the variables x, y, t.
///
/// Supported grammar: numeric literals, the constant `pi`, the variables
/// x/y/t, binary + - * /, unary -, power ^ (binds tighter than unary
/// minus, right-associative), and the functions sin, cos, tan, atan2,
/// exp, log, sqrt, abs. Parameters such as a, b, p, q must be substituted
/// as numeric literals before parsing.
///
/// Expressions are immutable after construction; evaluation is pure and
/// safe to call concurrently.
class Expr {
public:
    Expr() = default;

    /// Value of the expression with x, y, t bound. Throws EvalDomainError
    /// at poles instead of returning a non-finite value.
    double eval(double x, double y, double t = 0.0) const;

    /// Fully parenthesized form; parsing it back yields an expression that
    /// evaluates bit-identically.
    std::string to_string() const;

    /// True if the expression references the variable `name` ('x','y','t').
    bool uses_variable(char name) const;

    bool valid() const { return root_ != nullptr; }

    struct Node;
    using NodeRef = std::shared_ptr<const Node>;

    explicit Expr(NodeRef root) : root_(std::move(root)) {}

private:
    NodeRef root_;
};

/// Parses `source` into an Expr. Throws ParseError with the byte position
/// and a description of what was expected; unknown identifiers are
/// reported by name.
Expr parse_expr(std::string_view source);

// ---------------------------------------------------------------------------
// implementation

struct Expr::Node {
    enum class Kind {
        number, var_x, var_y, var_t, const_pi,
        neg, add, sub, mul, div, pow,
        sin, cos, tan, atan2, exp, log, sqrt, abs,
    };
    Kind kind;
    double number = 0.0;
    NodeRef lhs, rhs;
};

namespace detail {

inline void print_node(const Expr::Node& n, std::string& out) {
    using K = Expr::Node::Kind;
    auto binary = [&](const char* op) {
        out += '(';
        print_node(*n.lhs, out);
        out += op;
        print_node(*n.rhs, out);
        out += ')';
    };
    auto call = [&](const char* name) {
        out += name;
        out += '(';
        print_node(*n.lhs, out);
        if (n.rhs) {
            out += ',';
            print_node(*n.rhs, out);
        }
        out += ')';
    };
    switch (n.kind) {
    case K::number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.number);
        out += buf;
        break;
    }
    case K::var_x: out += 'x'; break;
    case K::var_y: out += 'y'; break;
    case K::var_t: out += 't'; break;
    case K::const_pi: out += "pi"; break;
    case K::neg:
        out += "(-";
        print_node(*n.lhs, out);
        out += ')';
        break;
    case K::add: binary("+"); break;
    case K::sub: binary("-"); break;
    case K::mul: binary("*"); break;
    case K::div: binary("/"); break;
    case K::pow: binary("^"); break;
    case K::sin: call("sin"); break;
    case K::cos: call("cos"); break;
    case K::tan: call("tan"); break;
    case K::atan2: call("atan2"); break;
    case K::exp: call("exp"); break;
    case K::log: call("log"); break;
    case K::sqrt: call("sqrt"); break;
    case K::abs: call("abs"); break;
    }
}

inline std::string node_text(const Expr::Node& n) {
    std::string s;
    print_node(n, s);
    return s;
}

[[noreturn]] inline void domain_error(const char* what, const Expr::Node& n) {
    throw EvalDomainError(std::string(what) + " in '" + node_text(n) + "'");
}

inline double eval_node(const Expr::Node& n, double x, double y, double t) {
    using K = Expr::Node::Kind;
    auto finite = [&](double v) {
        if (!std::isfinite(v))
            domain_error("non-finite result", n);
        return v;
    };
    switch (n.kind) {
    case K::number: return n.number;
    case K::var_x: return x;
    case K::var_y: return y;
    case K::var_t: return t;
    case K::const_pi: return 3.14159265358979323846264338327950288;
    case K::neg: return -eval_node(*n.lhs, x, y, t);
    case K::add: return finite(eval_node(*n.lhs, x, y, t) + eval_node(*n.rhs, x, y, t));
    case K::sub: return finite(eval_node(*n.lhs, x, y, t) - eval_node(*n.rhs, x, y, t));
    case K::mul: return finite(eval_node(*n.lhs, x, y, t) * eval_node(*n.rhs, x, y, t));
    case K::div: {
        const double den = eval_node(*n.rhs, x, y, t);
        if (den == 0.0)
            domain_error("division by zero", n);
        return finite(eval_node(*n.lhs, x, y, t) / den);
    }
    case K::pow: {
        const double base = eval_node(*n.lhs, x, y, t);
        const double expo = eval_node(*n.rhs, x, y, t);
        if (base == 0.0 && expo < 0.0)
            domain_error("zero raised to a negative power", n);
        if (base < 0.0 && expo != std::nearbyint(expo))
            domain_error("negative base with non-integer exponent", n);
        return finite(std::pow(base, expo));
    }
    case K::sin: return finite(std::sin(eval_node(*n.lhs, x, y, t)));
    case K::cos: return finite(std::cos(eval_node(*n.lhs, x, y, t)));
    case K::tan: return finite(std::tan(eval_node(*n.lhs, x, y, t)));
    case K::atan2: {
        const double a = eval_node(*n.lhs, x, y, t);
        const double b = eval_node(*n.rhs, x, y, t);
        if (a == 0.0 && b == 0.0)
            domain_error("atan2(0,0) is undefined", n);
        return std::atan2(a, b);
    }
    case K::exp: return finite(std::exp(eval_node(*n.lhs, x, y, t)));
    case K::log: {
        const double a = eval_node(*n.lhs, x, y, t);
        if (a <= 0.0)
            domain_error("log of a non-positive value", n);
        return finite(std::log(a));
    }
    case K::sqrt: {
        const double a = eval_node(*n.lhs, x, y, t);
        if (a < 0.0)
            domain_error("sqrt of a negative value", n);
        return std::sqrt(a);
    }
    case K::abs: return std::fabs(eval_node(*n.lhs, x, y, t));
    }
    domain_error("corrupt expression node", n); // unreachable
}

inline bool node_uses(const Expr::Node& n, char name) {
    using K = Expr::Node::Kind;
    if ((n.kind == K::var_x && name == 'x') ||
        (n.kind == K::var_y && name == 'y') ||
        (n.kind == K::var_t && name == 't'))
        return true;
    if (n.lhs && node_uses(*n.lhs, name)) return true;
    if (n.rhs && node_uses(*n.rhs, name)) return true;
    return false;
}

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : src_(src) {}

    Expr::NodeRef parse() {
        auto e = parse_sum();
        skip_ws();
        if (pos_ != src_.size())
            fail("end of expression", pos_);
        return e;
    }

private:
    using Node = Expr::Node;
    using K = Node::Kind;

    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected, std::size_t at) {
        std::string found = at < src_.size()
                                ? "'" + std::string(1, src_[at]) + "'"
                                : "end of input";
        throw ParseError("syntax error at position " + std::to_string(at) +
                             ": expected " + expected + ", found " + found,
                         at);
    }

    void skip_ws() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c))
            fail(what, pos_);
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    static Expr::NodeRef make(K kind, Expr::NodeRef lhs = nullptr,
                              Expr::NodeRef rhs = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    Expr::NodeRef parse_sum() {
        auto lhs = parse_product();
        for (;;) {
            if (accept('+'))
                lhs = make(K::add, lhs, parse_product());
            else if (accept('-'))
                lhs = make(K::sub, lhs, parse_product());
            else
                return lhs;
        }
    }

    Expr::NodeRef parse_product() {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = make(K::mul, lhs, parse_unary());
            else if (accept('/'))
                lhs = make(K::div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    // Power binds tighter than unary minus: -x^2 is -(x^2).
    Expr::NodeRef parse_unary() {
        if (accept('-'))
            return make(K::neg, parse_unary());
        return parse_power();
    }

    Expr::NodeRef parse_power() {
        auto base = parse_atom();
        if (accept('^'))
            return make(K::pow, base, parse_unary()); // right-associative
        return base;
    }

    Expr::NodeRef parse_atom() {
        skip_ws();
        if (pos_ >= src_.size())
            fail("an expression", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_sum();
            expect(')', "')'");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.')
            return parse_number();
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_')
            return parse_identifier();
        fail("a number, variable, function or '('", pos_);
    }

    Expr::NodeRef parse_number() {
        double value = 0.0;
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin)
            fail("a numeric literal", pos_);
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        auto n = std::make_shared<Node>();
        n->kind = K::number;
        n->number = value;
        return n;
    }

    Expr::NodeRef parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               ((src_[pos_] >= 'a' && src_[pos_] <= 'z') ||
                (src_[pos_] >= 'A' && src_[pos_] <= 'Z') ||
                (src_[pos_] >= '0' && src_[pos_] <= '9') || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        if (name == "x") return make(K::var_x);
        if (name == "y") return make(K::var_y);
        if (name == "t") return make(K::var_t);
        if (name == "pi") return make(K::const_pi);

        K fn;
        int arity = 1;
        if (name == "sin") fn = K::sin;
        else if (name == "cos") fn = K::cos;
        else if (name == "tan") fn = K::tan;
        else if (name == "exp") fn = K::exp;
        else if (name == "log") fn = K::log;
        else if (name == "sqrt") fn = K::sqrt;
        else if (name == "abs") fn = K::abs;
        else if (name == "atan2") { fn = K::atan2; arity = 2; }
        else
            throw ParseError("unknown identifier '" + std::string(name) +
                                 "' at position " + std::to_string(start),
                             start);

        expect('(', "'(' after function name");
        auto first = parse_sum();
        Expr::NodeRef second;
        if (arity == 2) {
            expect(',', "',' between function arguments");
            second = parse_sum();
        }
        expect(')', "')'");
        return make(fn, first, second);
    }
};

} // namespace detail

inline double Expr::eval(double x, double y, double t) const {
    if (!root_)
        throw ValidationError("evaluating an empty expression");
    return detail::eval_node(*root_, x, y, t);
}

inline std::string Expr::to_string() const {
    if (!root_)
        return "";
    return detail::node_text(*root_);
}

inline bool Expr::uses_variable(char name) const {
    return root_ && detail::node_uses(*root_, name);
}

inline Expr parse_expr(std::string_view source) {
    return Expr(detail::ExprParser(source).parse());
}

} // namespace torwind
