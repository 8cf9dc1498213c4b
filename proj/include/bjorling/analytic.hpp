#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "bjorling/errors.hpp"

namespace bjorling {

using Complex = std::complex<double>;

enum class ExprKind {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // non-negative integer exponent
    Neg,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Sqrt,
};

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    double value = 0.0;  // Constant
    int exponent = 0;    // Pow
    ExprNodePtr a, b;    // children (a only for unary kinds)
};

/// Keeps sqrt evaluation single-valued along a path: for each sqrt node the
/// branch closest to the previously returned value is chosen. State is per
/// node (keyed by node identity), so a derivative sharing its parent's sqrt
/// subtree continues on the same branch. Copyable; copies snapshot the state.
class BranchTracker {
public:
    explicit BranchTracker(double epsilon_branch = 1e-12) : eps_(epsilon_branch) {}

    /// Returns the continued square root of `radicand` for `node`.
    /// An exact zero radicand yields 0 without touching the state.
    /// Throws BranchPointError when 0 < |radicand| < epsilon_branch, or when
    /// the radicand chord from the previous sample passes close to 0 relative
    /// to its endpoints: the path then steps over an odd-order zero and the
    /// continuation is ill-defined.
    Complex continue_sqrt(const ExprNode* node, Complex radicand);

    double epsilon_branch() const { return eps_; }

private:
    struct State {
        Complex value;
        Complex radicand;
    };
    double eps_;
    std::map<const ExprNode*, State> last_;
};

/// Immutable real-analytic expression of one variable, evaluable at complex
/// arguments. All literals are real; sqrt is the only multivalued node.
class AnalyticExpr {
public:
    AnalyticExpr() : AnalyticExpr(constant(0.0)) {}

    static AnalyticExpr constant(double v);
    static AnalyticExpr variable();
    static AnalyticExpr from_node(ExprNodePtr node);

    /// Holomorphic extension evaluated at w. A tracker is required to make
    /// sqrt single-valued along a path; without one the principal branch is
    /// taken.
    Complex eval(Complex w, BranchTracker* branch = nullptr) const;

    /// Exact symbolic derivative. sqrt subtrees are shared with the source
    /// expression so branch continuation stays coherent between the two.
    AnalyticExpr derivative() const;

    bool has_sqrt() const;
    bool is_zero() const;  // literal constant 0

    /// Grammar-conformant text; parse(str()) evaluates identically.
    std::string str() const;

    const ExprNodePtr& root() const { return root_; }

private:
    explicit AnalyticExpr(ExprNodePtr r) : root_(std::move(r)) {}
    ExprNodePtr root_;
};

/// Parses the expression grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' uint)?
///   atom   := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')' | '-' atom
///   func   := sin | cos | sinh | cosh | exp | sqrt
/// Whitespace is insignificant; numbers are decimal literals.
/// Throws ParseError with the byte offset on malformed input.
AnalyticExpr parse_expr(std::string_view source);

AnalyticExpr operator+(const AnalyticExpr& x, const AnalyticExpr& y);
AnalyticExpr operator-(const AnalyticExpr& x, const AnalyticExpr& y);
AnalyticExpr operator*(const AnalyticExpr& x, const AnalyticExpr& y);
AnalyticExpr operator/(const AnalyticExpr& x, const AnalyticExpr& y);
AnalyticExpr operator-(const AnalyticExpr& x);
AnalyticExpr pow(const AnalyticExpr& x, int exponent);
AnalyticExpr sin(const AnalyticExpr& x);
AnalyticExpr cos(const AnalyticExpr& x);
AnalyticExpr sinh(const AnalyticExpr& x);
AnalyticExpr cosh(const AnalyticExpr& x);
AnalyticExpr exp(const AnalyticExpr& x);
AnalyticExpr sqrt(const AnalyticExpr& x);

}  // namespace bjorling
