#include "thermo/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>

#include "thermo/errors.hpp"

namespace thermo {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Log, Abs };

struct Expr::Node {
    Op op;
    double value = 0.0; // Const only
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;

NodeP mk(Op op, NodeP a = nullptr, NodeP b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodeP num(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

bool is_const(const NodeP& n, double v) {
    return n->op == Op::Const && n->value == v;
}

struct Parser {
    const std::string& s;
    size_t i = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw DomainError("expression parse error at position " + std::to_string(i) + ": " + msg);
    }

    NodeP parse_expr() {
        NodeP lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = mk(Op::Add, lhs, parse_term());
            else if (eat('-'))
                lhs = mk(Op::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }
    NodeP parse_term() {
        NodeP lhs = parse_factor();
        for (;;) {
            if (eat('*'))
                lhs = mk(Op::Mul, lhs, parse_factor());
            else if (eat('/'))
                lhs = mk(Op::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }
    NodeP parse_factor() {
        // unary minus binds looser than '^', so -x^2 is -(x^2)
        if (eat('-')) return mk(Op::Neg, parse_factor());
        NodeP base = parse_primary();
        if (eat('^')) return mk(Op::Pow, base, parse_factor());
        return base;
    }
    NodeP parse_primary() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        char c = s[i];
        if (c == '(') {
            ++i;
            NodeP inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end = 0;
            double v = std::stod(s.substr(i), &end);
            i += end;
            return num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
            std::string word = s.substr(i, j - i);
            i = j;
            if (word == "x") return mk(Op::Var);
            if (word == "log" || word == "abs") {
                if (!eat('(')) fail("expected '(' after " + word);
                NodeP inner = parse_expr();
                if (!eat(')')) fail("expected ')'");
                return mk(word == "log" ? Op::Log : Op::Abs, inner);
            }
            fail("unknown identifier '" + word + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

double eval_node(const Expr::Node* n, double x) {
    switch (n->op) {
        case Op::Const: return n->value;
        case Op::Var: return x;
        case Op::Add: return eval_node(n->a.get(), x) + eval_node(n->b.get(), x);
        case Op::Sub: return eval_node(n->a.get(), x) - eval_node(n->b.get(), x);
        case Op::Mul: return eval_node(n->a.get(), x) * eval_node(n->b.get(), x);
        case Op::Div: return eval_node(n->a.get(), x) / eval_node(n->b.get(), x);
        case Op::Pow: return std::pow(eval_node(n->a.get(), x), eval_node(n->b.get(), x));
        case Op::Neg: return -eval_node(n->a.get(), x);
        case Op::Log: return std::log(eval_node(n->a.get(), x));
        case Op::Abs: return std::abs(eval_node(n->a.get(), x));
    }
    return 0.0;
}

NodeP diff(const NodeP& n) {
    switch (n->op) {
        case Op::Const: return num(0.0);
        case Op::Var: return num(1.0);
        case Op::Add: return mk(Op::Add, diff(n->a), diff(n->b));
        case Op::Sub: return mk(Op::Sub, diff(n->a), diff(n->b));
        case Op::Mul:
            return mk(Op::Add, mk(Op::Mul, diff(n->a), n->b), mk(Op::Mul, n->a, diff(n->b)));
        case Op::Div:
            return mk(Op::Div,
                      mk(Op::Sub, mk(Op::Mul, diff(n->a), n->b), mk(Op::Mul, n->a, diff(n->b))),
                      mk(Op::Mul, n->b, n->b));
        case Op::Pow:
            if (n->b->op == Op::Const) {
                // d/dx u^c = c u^(c-1) u'
                return mk(Op::Mul, num(n->b->value),
                          mk(Op::Mul, mk(Op::Pow, n->a, num(n->b->value - 1.0)), diff(n->a)));
            }
            // d/dx u^v = u^v (v' log u + v u'/u)
            return mk(Op::Mul, mk(Op::Pow, n->a, n->b),
                      mk(Op::Add, mk(Op::Mul, diff(n->b), mk(Op::Log, n->a)),
                         mk(Op::Div, mk(Op::Mul, n->b, diff(n->a)), n->a)));
        case Op::Neg: return mk(Op::Neg, diff(n->a));
        case Op::Log: return mk(Op::Div, diff(n->a), n->a);
        case Op::Abs:
            // d/dx |u| = u/|u| u'  (undefined at u = 0, evaluates to nan there)
            return mk(Op::Mul, mk(Op::Div, n->a, mk(Op::Abs, n->a)), diff(n->a));
    }
    return num(0.0);
}

NodeP simplify(const NodeP& n) {
    if (!n->a) return n;
    NodeP a = simplify(n->a);
    NodeP b = n->b ? simplify(n->b) : nullptr;
    if (a->op == Op::Const && (!b || b->op == Op::Const)) {
        Expr::Node tmp = *n;
        tmp.a = a;
        tmp.b = b;
        return num(eval_node(&tmp, 0.0));
    }
    switch (n->op) {
        case Op::Add:
            if (is_const(a, 0.0)) return b;
            if (is_const(b, 0.0)) return a;
            break;
        case Op::Sub:
            if (is_const(b, 0.0)) return a;
            break;
        case Op::Mul:
            if (is_const(a, 0.0) || is_const(b, 0.0)) return num(0.0);
            if (is_const(a, 1.0)) return b;
            if (is_const(b, 1.0)) return a;
            break;
        case Op::Div:
            if (is_const(a, 0.0)) return num(0.0);
            if (is_const(b, 1.0)) return a;
            break;
        case Op::Pow:
            if (is_const(b, 1.0)) return a;
            if (is_const(b, 0.0)) return num(1.0);
            break;
        default: break;
    }
    return mk(n->op, a, b);
}

} // namespace

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    NodeP root = p.parse_expr();
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    Expr e;
    e.root_ = root;
    e.text_ = text;
    return e;
}

double Expr::eval(double x) const { return eval_node(root_.get(), x); }

Expr Expr::derivative() const {
    Expr e;
    e.root_ = simplify(diff(root_));
    e.text_ = "d/dx(" + text_ + ")";
    return e;
}

} // namespace thermo
