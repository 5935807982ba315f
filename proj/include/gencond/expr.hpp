#pragma once

#include <string>
#include <vector>

#include "gencond/taylor.hpp"

namespace gencond {
namespace expr {

enum class NodeKind {
    Constant,
    Variable,
    Negate,
    Add,
    Subtract,
    Multiply,
    Divide,
    PowInt,
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
};

struct Node {
    NodeKind kind;
    int left = -1;        // first child, or sole child of unary kinds
    int right = -1;       // second child of binary kinds
    double value = 0.0;   // Constant
    int var = -1;         // Variable: coordinate index
    int exponent = 0;     // PowInt
    int src_begin = 0;    // half-open span into the source text, for diagnostics
    int src_end = 0;
};

/// Parsed scalar formula over a chart's named coordinates. Immutable after
/// parsing; evaluation is const and thread-safe.
class Expression {
public:
    const std::vector<std::string>& coordinates() const { return coords_; }
    const std::string& source() const { return source_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    int root() const { return root_; }
    const std::vector<Node>& nodes() const { return nodes_; }

    double evaluate(const std::vector<double>& point) const;

    /// Taylor expansion of order k at p, computed by propagating truncated
    /// Taylor arithmetic through the tree (exact to order k; no differencing).
    TaylorJet evaluate_jet(const std::vector<double>& point, int order) const;

    std::string subexpression_text(int node) const;

private:
    friend class Parser;
    std::vector<std::string> coords_;
    std::string source_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

/// Parse a formula over the declared coordinates. Supported syntax:
/// numbers, coordinate names, + - * / ^ (integer exponents), parentheses,
/// and exp/log/sqrt/sin/cos/sinh/cosh. Precedence: ^ binds tightest, then
/// unary minus, then * /, then + -.
///
/// line_offset and column_offset shift reported error positions so that
/// formulas embedded in chart files point into the file.
Expression parse(const std::string& text, const std::vector<std::string>& coordinates,
                 int line_offset = 0, int column_offset = 0);

}  // namespace expr
}  // namespace gencond
