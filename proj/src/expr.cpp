#include "gencond/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "gencond/errors.hpp"

namespace gencond {
namespace expr {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

NodeKind function_kind(const std::string& name, bool& known) {
    known = true;
    if (name == "exp") return NodeKind::Exp;
    if (name == "log") return NodeKind::Log;
    if (name == "sqrt") return NodeKind::Sqrt;
    if (name == "sin") return NodeKind::Sin;
    if (name == "cos") return NodeKind::Cos;
    if (name == "sinh") return NodeKind::Sinh;
    if (name == "cosh") return NodeKind::Cosh;
    known = false;
    return NodeKind::Constant;
}

}  // namespace

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& coords,
           int line_offset, int column_offset)
        : text_(text), line_offset_(line_offset), column_offset_(column_offset) {
        expr_.coords_ = coords;
        expr_.source_ = text;
    }

    Expression run() {
        skip_ws();
        if (at_end()) fail("empty formula", pos_);
        expr_.root_ = parse_sum();
        skip_ws();
        if (!at_end()) fail("unexpected trailing input", pos_);
        return std::move(expr_);
    }

private:
    [[noreturn]] void fail(const std::string& msg, int at) {
        throw ParseError(msg, line_offset_ > 0 ? line_offset_ : 0, column_offset_ + at + 1);
    }

    bool at_end() const { return pos_ >= static_cast<int>(text_.size()); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (!at_end() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        skip_ws();
        if (at_end() || text_[pos_] != c) fail(std::string("expected ") + what, pos_);
        ++pos_;
    }

    int add_node(Node n) {
        expr_.nodes_.push_back(n);
        return static_cast<int>(expr_.nodes_.size()) - 1;
    }

    int span_begin(int node) const { return expr_.nodes_[node].src_begin; }

    int parse_sum() {
        int lhs = parse_term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            int rhs = parse_term();
            Node n;
            n.kind = (c == '+') ? NodeKind::Add : NodeKind::Subtract;
            n.left = lhs;
            n.right = rhs;
            n.src_begin = span_begin(lhs);
            n.src_end = expr_.nodes_[rhs].src_end;
            lhs = add_node(n);
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            int rhs = parse_unary();
            Node n;
            n.kind = (c == '*') ? NodeKind::Multiply : NodeKind::Divide;
            n.left = lhs;
            n.right = rhs;
            n.src_begin = span_begin(lhs);
            n.src_end = expr_.nodes_[rhs].src_end;
            lhs = add_node(n);
        }
    }

    int parse_unary() {
        skip_ws();
        if (peek() == '-') {
            int begin = pos_;
            ++pos_;
            int child = parse_unary();  // ^ binds tighter: -x^2 is -(x^2)
            Node n;
            n.kind = NodeKind::Negate;
            n.left = child;
            n.src_begin = begin;
            n.src_end = expr_.nodes_[child].src_end;
            return add_node(n);
        }
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        while (accept('^')) {
            int exp_at = pos_;
            int exponent = parse_int_exponent();
            Node n;
            n.kind = NodeKind::PowInt;
            n.left = base;
            n.exponent = exponent;
            n.src_begin = span_begin(base);
            n.src_end = pos_;
            base = add_node(n);
            (void)exp_at;
        }
        return base;
    }

    int parse_int_exponent() {
        skip_ws();
        bool paren = false;
        if (peek() == '(') {
            paren = true;
            ++pos_;
            skip_ws();
        }
        int sign = 1;
        if (peek() == '-') {
            sign = -1;
            ++pos_;
        }
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail("exponent must be an integer literal", pos_);
        long v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 64) fail("exponent out of range", pos_);
            ++pos_;
        }
        if (paren) expect(')', "')' after exponent");
        return static_cast<int>(sign * v);
    }

    int parse_primary() {
        skip_ws();
        if (at_end()) fail("unexpected end of formula", pos_);
        int begin = pos_;
        char c = peek();

        if (c == '(') {
            ++pos_;
            int inner = parse_sum();
            expect(')', "')'");
            expr_.nodes_[inner].src_begin = begin;
            expr_.nodes_[inner].src_end = pos_;
            return inner;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(text_.substr(pos_), &consumed);
            } catch (const std::exception&) {
                fail("malformed number", pos_);
            }
            pos_ += static_cast<int>(consumed);
            Node n;
            n.kind = NodeKind::Constant;
            n.value = v;
            n.src_begin = begin;
            n.src_end = pos_;
            return add_node(n);
        }

        if (is_ident_start(c)) {
            std::string name;
            while (!at_end() && is_ident_char(peek())) name.push_back(text_[pos_++]);
            skip_ws();
            if (peek() == '(') {
                bool known = false;
                NodeKind kind = function_kind(name, known);
                if (!known) fail("unknown function '" + name + "'", begin);
                ++pos_;
                int arg = parse_sum();
                expect(')', "')'");
                Node n;
                n.kind = kind;
                n.left = arg;
                n.src_begin = begin;
                n.src_end = pos_;
                return add_node(n);
            }
            for (std::size_t i = 0; i < expr_.coords_.size(); ++i) {
                if (expr_.coords_[i] == name) {
                    Node n;
                    n.kind = NodeKind::Variable;
                    n.var = static_cast<int>(i);
                    n.src_begin = begin;
                    n.src_end = begin + static_cast<int>(name.size());
                    return add_node(n);
                }
            }
            fail("unknown identifier '" + name + "'", begin);
        }

        fail(std::string("unexpected character '") + c + "'", pos_);
    }

    const std::string& text_;
    int line_offset_;
    int column_offset_;
    int pos_ = 0;
    Expression expr_;
};

Expression parse(const std::string& text, const std::vector<std::string>& coordinates,
                 int line_offset, int column_offset) {
    return Parser(text, coordinates, line_offset, column_offset).run();
}

std::string Expression::subexpression_text(int node) const {
    const Node& n = nodes_[node];
    int b = n.src_begin, e = n.src_end;
    if (b < 0 || e > static_cast<int>(source_.size()) || b >= e) return source_;
    return source_.substr(b, e - b);
}

double Expression::evaluate(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != dim())
        throw DimensionError("evaluation point dimension mismatch");
    std::vector<double> v(nodes_.size(), 0.0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        switch (n.kind) {
            case NodeKind::Constant: v[i] = n.value; break;
            case NodeKind::Variable: v[i] = point[n.var]; break;
            case NodeKind::Negate: v[i] = -v[n.left]; break;
            case NodeKind::Add: v[i] = v[n.left] + v[n.right]; break;
            case NodeKind::Subtract: v[i] = v[n.left] - v[n.right]; break;
            case NodeKind::Multiply: v[i] = v[n.left] * v[n.right]; break;
            case NodeKind::Divide:
                if (v[n.right] == 0.0)
                    throw DomainError("division by zero in '" + subexpression_text(static_cast<int>(i)) + "'");
                v[i] = v[n.left] / v[n.right];
                break;
            case NodeKind::PowInt:
                if (v[n.left] == 0.0 && n.exponent < 0)
                    throw DomainError("zero raised to negative power in '"
                                      + subexpression_text(static_cast<int>(i)) + "'");
                v[i] = std::pow(v[n.left], n.exponent);
                break;
            case NodeKind::Exp: v[i] = std::exp(v[n.left]); break;
            case NodeKind::Log:
                if (v[n.left] <= 0.0)
                    throw DomainError("log of non-positive value in '"
                                      + subexpression_text(static_cast<int>(i)) + "'");
                v[i] = std::log(v[n.left]);
                break;
            case NodeKind::Sqrt:
                if (v[n.left] < 0.0)
                    throw DomainError("sqrt of negative value in '"
                                      + subexpression_text(static_cast<int>(i)) + "'");
                v[i] = std::sqrt(v[n.left]);
                break;
            case NodeKind::Sin: v[i] = std::sin(v[n.left]); break;
            case NodeKind::Cos: v[i] = std::cos(v[n.left]); break;
            case NodeKind::Sinh: v[i] = std::sinh(v[n.left]); break;
            case NodeKind::Cosh: v[i] = std::cosh(v[n.left]); break;
        }
    }
    return v[root_];
}

TaylorJet Expression::evaluate_jet(const std::vector<double>& point, int order) const {
    if (static_cast<int>(point.size()) != dim())
        throw DimensionError("evaluation point dimension mismatch");
    const JetLayout& layout = JetLayout::of(dim(), order);
    std::vector<TaylorJet> v;
    v.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        try {
            switch (n.kind) {
                case NodeKind::Constant:
                    v.push_back(TaylorJet::constant(layout, point, n.value));
                    break;
                case NodeKind::Variable:
                    v.push_back(TaylorJet::coordinate(layout, point, n.var));
                    break;
                case NodeKind::Negate: v.push_back(-v[n.left]); break;
                case NodeKind::Add: v.push_back(v[n.left] + v[n.right]); break;
                case NodeKind::Subtract: v.push_back(v[n.left] - v[n.right]); break;
                case NodeKind::Multiply: v.push_back(v[n.left] * v[n.right]); break;
                case NodeKind::Divide: v.push_back(v[n.left] / v[n.right]); break;
                case NodeKind::PowInt: v.push_back(v[n.left].pow_int(n.exponent)); break;
                case NodeKind::Exp: v.push_back(v[n.left].exp()); break;
                case NodeKind::Log: v.push_back(v[n.left].log()); break;
                case NodeKind::Sqrt: v.push_back(v[n.left].sqrt()); break;
                case NodeKind::Sin: v.push_back(v[n.left].sin()); break;
                case NodeKind::Cos: v.push_back(v[n.left].cos()); break;
                case NodeKind::Sinh: v.push_back(v[n.left].sinh()); break;
                case NodeKind::Cosh: v.push_back(v[n.left].cosh()); break;
            }
        } catch (const DomainError& err) {
            throw DomainError(std::string(err.what()) + " in subexpression '"
                              + subexpression_text(static_cast<int>(i)) + "'");
        }
    }
    return v[root_];
}

}  // namespace expr
}  // namespace gencond
