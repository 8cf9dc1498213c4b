#include "bjorling/analytic.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace bjorling {

namespace {

ExprNodePtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

ExprNodePtr make_const(double v) { return make_node({ExprKind::Constant, v, 0, nullptr, nullptr}); }

bool is_const(const ExprNodePtr& n) { return n && n->kind == ExprKind::Constant; }

Complex ipow(Complex base, int e)
{
    Complex acc(1.0, 0.0);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

// Arithmetic on constant children folds at construction. Quotients with a
// denominator under the evaluation guard stay unfolded so the error surfaces
// at eval time; transcendental nodes are never folded.
ExprNodePtr make_binary(ExprKind kind, ExprNodePtr a, ExprNodePtr b)
{
    if (is_const(a) && is_const(b)) {
        switch (kind) {
            case ExprKind::Add: return make_const(a->value + b->value);
            case ExprKind::Sub: return make_const(a->value - b->value);
            case ExprKind::Mul: return make_const(a->value * b->value);
            case ExprKind::Div:
                if (std::abs(b->value) >= 1e-300) return make_const(a->value / b->value);
                break;
            default: break;
        }
    }
    return make_node({kind, 0.0, 0, std::move(a), std::move(b)});
}

ExprNodePtr make_unary(ExprKind kind, ExprNodePtr a)
{
    if (kind == ExprKind::Neg && is_const(a)) return make_const(-a->value);
    return make_node({kind, 0.0, 0, std::move(a), nullptr});
}

ExprNodePtr make_pow(ExprNodePtr a, int e)
{
    if (is_const(a)) return make_const(std::real(ipow(Complex(a->value, 0.0), e)));
    ExprNode n{ExprKind::Pow, 0.0, e, std::move(a), nullptr};
    return make_node(std::move(n));
}

Complex eval_node(const ExprNode* n, Complex w, BranchTracker* branch)
{
    switch (n->kind) {
        case ExprKind::Constant: return Complex(n->value, 0.0);
        case ExprKind::Variable: return w;
        case ExprKind::Add: return eval_node(n->a.get(), w, branch) + eval_node(n->b.get(), w, branch);
        case ExprKind::Sub: return eval_node(n->a.get(), w, branch) - eval_node(n->b.get(), w, branch);
        case ExprKind::Mul: return eval_node(n->a.get(), w, branch) * eval_node(n->b.get(), w, branch);
        case ExprKind::Div: {
            Complex num = eval_node(n->a.get(), w, branch);
            Complex den = eval_node(n->b.get(), w, branch);
            if (std::abs(den) < 1e-300) throw NumericError("division by zero in expression evaluation");
            return num / den;
        }
        case ExprKind::Pow: return ipow(eval_node(n->a.get(), w, branch), n->exponent);
        case ExprKind::Neg: return -eval_node(n->a.get(), w, branch);
        case ExprKind::Sin: return std::sin(eval_node(n->a.get(), w, branch));
        case ExprKind::Cos: return std::cos(eval_node(n->a.get(), w, branch));
        case ExprKind::Sinh: return std::sinh(eval_node(n->a.get(), w, branch));
        case ExprKind::Cosh: return std::cosh(eval_node(n->a.get(), w, branch));
        case ExprKind::Exp: return std::exp(eval_node(n->a.get(), w, branch));
        case ExprKind::Sqrt: {
            Complex r = eval_node(n->a.get(), w, branch);
            if (branch) return branch->continue_sqrt(n, r);
            return std::sqrt(r);
        }
    }
    throw Error("corrupt expression node");
}

ExprNodePtr diff_node(const ExprNodePtr& n);

ExprNodePtr chain(ExprNodePtr outer_derivative, const ExprNodePtr& inner)
{
    return make_binary(ExprKind::Mul, std::move(outer_derivative), diff_node(inner));
}

ExprNodePtr diff_node(const ExprNodePtr& n)
{
    switch (n->kind) {
        case ExprKind::Constant: return make_const(0.0);
        case ExprKind::Variable: return make_const(1.0);
        case ExprKind::Add: return make_binary(ExprKind::Add, diff_node(n->a), diff_node(n->b));
        case ExprKind::Sub: return make_binary(ExprKind::Sub, diff_node(n->a), diff_node(n->b));
        case ExprKind::Mul:
            return make_binary(ExprKind::Add, make_binary(ExprKind::Mul, diff_node(n->a), n->b),
                               make_binary(ExprKind::Mul, n->a, diff_node(n->b)));
        case ExprKind::Div:
            // (u/v)' = (u'v - uv') / v^2
            return make_binary(
                ExprKind::Div,
                make_binary(ExprKind::Sub, make_binary(ExprKind::Mul, diff_node(n->a), n->b),
                            make_binary(ExprKind::Mul, n->a, diff_node(n->b))),
                make_pow(n->b, 2));
        case ExprKind::Pow:
            if (n->exponent == 0) return make_const(0.0);
            return make_binary(ExprKind::Mul,
                               make_binary(ExprKind::Mul, make_const(double(n->exponent)),
                                           make_pow(n->a, n->exponent - 1)),
                               diff_node(n->a));
        case ExprKind::Neg: return make_unary(ExprKind::Neg, diff_node(n->a));
        case ExprKind::Sin: return chain(make_unary(ExprKind::Cos, n->a), n->a);
        case ExprKind::Cos: return chain(make_unary(ExprKind::Neg, make_unary(ExprKind::Sin, n->a)), n->a);
        case ExprKind::Sinh: return chain(make_unary(ExprKind::Cosh, n->a), n->a);
        case ExprKind::Cosh: return chain(make_unary(ExprKind::Sinh, n->a), n->a);
        case ExprKind::Exp: return chain(make_unary(ExprKind::Exp, n->a), n->a);
        case ExprKind::Sqrt:
            // u' / (2 sqrt(u)); the sqrt node is shared so both expressions
            // continue on one branch per tracker.
            return make_binary(ExprKind::Div, diff_node(n->a),
                               make_binary(ExprKind::Mul, make_const(2.0), n));
    }
    throw Error("corrupt expression node");
}

bool has_sqrt_node(const ExprNode* n)
{
    if (!n) return false;
    if (n->kind == ExprKind::Sqrt) return true;
    return has_sqrt_node(n->a.get()) || has_sqrt_node(n->b.get());
}

// Printing, precedence-aware. Levels: sum 1, product 2, prefix minus 3,
// power base 5 (atoms only).
void print_node(const ExprNode* n, int min_prec, std::string& out);

void print_func(const char* name, const ExprNode* arg, std::string& out)
{
    out += name;
    out += '(';
    print_node(arg, 0, out);
    out += ')';
}

int node_prec(const ExprNode* n)
{
    switch (n->kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Neg: return 3;
        case ExprKind::Pow: return 4;
        case ExprKind::Constant: return n->value < 0 ? 3 : 5;
        default: return 5;
    }
}

void print_node(const ExprNode* n, int min_prec, std::string& out)
{
    const bool wrap = node_prec(n) < min_prec;
    if (wrap) out += '(';
    switch (n->kind) {
        case ExprKind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n->value);
            out += buf;
            break;
        }
        case ExprKind::Variable: out += 't'; break;
        case ExprKind::Add:
            print_node(n->a.get(), 1, out);
            out += " + ";
            print_node(n->b.get(), 2, out);
            break;
        case ExprKind::Sub:
            print_node(n->a.get(), 1, out);
            out += " - ";
            print_node(n->b.get(), 2, out);
            break;
        case ExprKind::Mul:
            print_node(n->a.get(), 2, out);
            out += "*";
            print_node(n->b.get(), 3, out);
            break;
        case ExprKind::Div:
            print_node(n->a.get(), 2, out);
            out += "/";
            print_node(n->b.get(), 3, out);
            break;
        case ExprKind::Pow:
            print_node(n->a.get(), 5, out);
            out += '^';
            out += std::to_string(n->exponent);
            break;
        case ExprKind::Neg:
            out += '-';
            print_node(n->a.get(), 3, out);
            break;
        case ExprKind::Sin: print_func("sin", n->a.get(), out); break;
        case ExprKind::Cos: print_func("cos", n->a.get(), out); break;
        case ExprKind::Sinh: print_func("sinh", n->a.get(), out); break;
        case ExprKind::Cosh: print_func("cosh", n->a.get(), out); break;
        case ExprKind::Exp: print_func("exp", n->a.get(), out); break;
        case ExprKind::Sqrt: print_func("sqrt", n->a.get(), out); break;
    }
    if (wrap) out += ')';
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprNodePtr run()
    {
        ExprNodePtr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("syntax error: unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int peek()
    {
        skip_ws();
        return pos_ < src_.size() ? static_cast<unsigned char>(src_[pos_]) : -1;
    }

    ExprNodePtr parse_expr()
    {
        ExprNodePtr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = make_binary(ExprKind::Add, e, parse_term());
            else if (eat('-'))
                e = make_binary(ExprKind::Sub, e, parse_term());
            else
                return e;
        }
    }

    ExprNodePtr parse_term()
    {
        ExprNodePtr e = parse_factor();
        for (;;) {
            if (eat('*'))
                e = make_binary(ExprKind::Mul, e, parse_factor());
            else if (eat('/'))
                e = make_binary(ExprKind::Div, e, parse_factor());
            else
                return e;
        }
    }

    ExprNodePtr parse_factor()
    {
        ExprNodePtr base = parse_atom();
        if (eat('^')) return make_pow(base, parse_uint());
        return base;
    }

    int parse_uint()
    {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            throw ParseError("exponent must be a non-negative integer literal", start);
        long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + (src_[pos_] - '0');
            if (v > 1000000) throw ParseError("exponent too large", start);
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
            throw ParseError("exponent must be a non-negative integer literal", start);
        return static_cast<int>(v);
    }

    ExprNodePtr parse_atom()
    {
        int c = peek();
        if (c < 0) throw ParseError("syntax error: expected expression", pos_);
        if (c == '-') {
            ++pos_;
            return make_unary(ExprKind::Neg, parse_atom());
        }
        if (c == '(') {
            ++pos_;
            ExprNodePtr e = parse_expr();
            if (!eat(')')) throw ParseError("syntax error: expected ')'", pos_);
            return e;
        }
        if (std::isdigit(c) || c == '.') return parse_number();
        if (std::isalpha(c) || c == '_') return parse_identifier();
        throw ParseError(std::string("syntax error: unexpected character '") + char(c) + "'", pos_);
    }

    ExprNodePtr parse_number()
    {
        skip_ws();
        double v = 0.0;
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc()) throw ParseError("invalid number literal", pos_);
        pos_ += static_cast<std::size_t>(ptr - begin);
        return make_const(v);
    }

    ExprNodePtr parse_identifier()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "t") return make_node({ExprKind::Variable, 0.0, 0, nullptr, nullptr});
        if (name == "pi") return make_const(3.14159265358979323846);
        if (name == "e") return make_const(2.71828182845904523536);

        ExprKind kind;
        if (name == "sin") kind = ExprKind::Sin;
        else if (name == "cos") kind = ExprKind::Cos;
        else if (name == "sinh") kind = ExprKind::Sinh;
        else if (name == "cosh") kind = ExprKind::Cosh;
        else if (name == "exp") kind = ExprKind::Exp;
        else if (name == "sqrt") kind = ExprKind::Sqrt;
        else throw ParseError("unknown identifier '" + std::string(name) + "'", start);

        if (!eat('(')) throw ParseError("syntax error: expected '(' after function name", pos_);
        ExprNodePtr arg = parse_expr();
        if (!eat(')')) throw ParseError("syntax error: expected ')'", pos_);
        return make_unary(kind, arg);
    }
};

}  // namespace

namespace {

// Distance from the segment [a, b] to the origin.
double segment_distance_to_zero(Complex a, Complex b)
{
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(a);
    double s = -(a.real() * d.real() + a.imag() * d.imag()) / len2;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(a + s * d);
}

}  // namespace

Complex BranchTracker::continue_sqrt(const ExprNode* node, Complex radicand)
{
    const double mag = std::abs(radicand);
    if (mag < eps_) {
        if (mag == 0.0) return Complex(0.0, 0.0);
        throw BranchPointError("sqrt radicand within epsilon_branch of zero; branch continuation undefined");
    }
    Complex p = std::sqrt(radicand);
    auto it = last_.find(node);
    if (it != last_.end()) {
        const Complex prev = it->second.radicand;
        if (segment_distance_to_zero(prev, radicand) <
            0.02 * std::min(std::abs(prev), mag))
            throw BranchPointError("integration path steps over a sqrt branch point");
        if (std::abs(p - it->second.value) > std::abs(-p - it->second.value)) p = -p;
        it->second = {p, radicand};
    } else {
        last_.emplace(node, State{p, radicand});
    }
    return p;
}

AnalyticExpr AnalyticExpr::constant(double v) { return AnalyticExpr(make_const(v)); }

AnalyticExpr AnalyticExpr::variable()
{
    return AnalyticExpr(make_node({ExprKind::Variable, 0.0, 0, nullptr, nullptr}));
}

AnalyticExpr AnalyticExpr::from_node(ExprNodePtr node) { return AnalyticExpr(std::move(node)); }

Complex AnalyticExpr::eval(Complex w, BranchTracker* branch) const
{
    return eval_node(root_.get(), w, branch);
}

AnalyticExpr AnalyticExpr::derivative() const { return AnalyticExpr(diff_node(root_)); }

bool AnalyticExpr::has_sqrt() const { return has_sqrt_node(root_.get()); }

bool AnalyticExpr::is_zero() const
{
    return root_->kind == ExprKind::Constant && root_->value == 0.0;
}

std::string AnalyticExpr::str() const
{
    std::string out;
    print_node(root_.get(), 0, out);
    return out;
}

AnalyticExpr parse_expr(std::string_view source) { return AnalyticExpr::from_node(Parser(source).run()); }

AnalyticExpr operator+(const AnalyticExpr& x, const AnalyticExpr& y)
{
    return AnalyticExpr::from_node(make_binary(ExprKind::Add, x.root(), y.root()));
}

AnalyticExpr operator-(const AnalyticExpr& x, const AnalyticExpr& y)
{
    return AnalyticExpr::from_node(make_binary(ExprKind::Sub, x.root(), y.root()));
}

AnalyticExpr operator*(const AnalyticExpr& x, const AnalyticExpr& y)
{
    return AnalyticExpr::from_node(make_binary(ExprKind::Mul, x.root(), y.root()));
}

AnalyticExpr operator/(const AnalyticExpr& x, const AnalyticExpr& y)
{
    return AnalyticExpr::from_node(make_binary(ExprKind::Div, x.root(), y.root()));
}

AnalyticExpr operator-(const AnalyticExpr& x)
{
    return AnalyticExpr::from_node(make_unary(ExprKind::Neg, x.root()));
}

AnalyticExpr pow(const AnalyticExpr& x, int exponent)
{
    if (exponent < 0) throw InputError("integer power must have non-negative exponent");
    return AnalyticExpr::from_node(make_pow(x.root(), exponent));
}

AnalyticExpr sin(const AnalyticExpr& x) { return AnalyticExpr::from_node(make_unary(ExprKind::Sin, x.root())); }
AnalyticExpr cos(const AnalyticExpr& x) { return AnalyticExpr::from_node(make_unary(ExprKind::Cos, x.root())); }
AnalyticExpr sinh(const AnalyticExpr& x) { return AnalyticExpr::from_node(make_unary(ExprKind::Sinh, x.root())); }
AnalyticExpr cosh(const AnalyticExpr& x) { return AnalyticExpr::from_node(make_unary(ExprKind::Cosh, x.root())); }
AnalyticExpr exp(const AnalyticExpr& x) { return AnalyticExpr::from_node(make_unary(ExprKind::Exp, x.root())); }
AnalyticExpr sqrt(const AnalyticExpr& x) { return AnalyticExpr::from_node(make_unary(ExprKind::Sqrt, x.root())); }

}  // namespace bjorling
