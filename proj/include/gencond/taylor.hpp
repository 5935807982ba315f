#pragma once

#include <cstdint>
#include <vector>

#include "gencond/errors.hpp"

namespace gencond {

/// Exponent tuple of a multivariate monomial. alpha[i] is the power of
/// coordinate i.
using MultiIndex = std::vector<int>;

int multi_index_degree(const MultiIndex& alpha);
double multi_index_factorial(const MultiIndex& alpha);

/// Shared index bookkeeping for all jets of a given (dimension, order):
/// the graded-lexicographic enumeration of multi-indices with |alpha| <= k,
/// position lookup, and the truncated product table. Layouts are created
/// once per (dim, order) pair and live for the whole process, so jets can
/// hold plain pointers and be shared freely across threads.
class JetLayout {
public:
    static const JetLayout& of(int dim, int order);

    int dim() const { return dim_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(indices_.size()); }

    const MultiIndex& index_at(int pos) const { return indices_[pos]; }
    int degree_at(int pos) const { return degrees_[pos]; }

    /// Position of a multi-index in graded-lex order; -1 if |alpha| > order.
    int position(const MultiIndex& alpha) const;

    /// Position of the product monomial index_at(i) + index_at(j);
    /// -1 when the combined degree exceeds the order.
    int product_position(int i, int j) const { return product_[static_cast<std::size_t>(i) * indices_.size() + j]; }

    /// Number of multi-indices with |alpha| <= k in n variables: C(n+k, k).
    static long long coefficient_count(int dim, int order);

private:
    JetLayout(int dim, int order);

    int dim_;
    int order_;
    std::vector<MultiIndex> indices_;
    std::vector<int> degrees_;
    std::vector<std::uint64_t> keys_;       // sorted encoded indices
    std::vector<int> key_positions_;        // positions matching keys_
    std::vector<int> product_;
};

/// Truncated multivariate Taylor expansion of a scalar function at a base
/// point. Coefficient for multi-index alpha stores the Taylor value
/// d^alpha f / alpha!, so products are plain truncated convolutions.
/// Immutable in practice: arithmetic returns new values.
class TaylorJet {
public:
    TaylorJet(const JetLayout& layout, std::vector<double> base_point);

    static TaylorJet constant(const JetLayout& layout, std::vector<double> base_point, double value);
    /// Jet of the coordinate function x_var: base value plus unit linear term.
    static TaylorJet coordinate(const JetLayout& layout, std::vector<double> base_point, int var);

    int dim() const { return layout_->dim(); }
    int order() const { return layout_->order(); }
    const JetLayout& layout() const { return *layout_; }
    const std::vector<double>& base_point() const { return base_; }

    double value() const { return coeff_[0]; }
    double coefficient(int pos) const { return coeff_[pos]; }
    double coefficient(const MultiIndex& alpha) const;
    /// Raw partial derivative d^alpha f at the base point (coefficient times alpha!).
    double derivative(const MultiIndex& alpha) const;
    std::vector<double>& coefficients() { return coeff_; }
    const std::vector<double>& coefficients() const { return coeff_; }

    TaylorJet operator-() const;
    TaylorJet operator+(const TaylorJet& rhs) const;
    TaylorJet operator-(const TaylorJet& rhs) const;
    TaylorJet operator*(const TaylorJet& rhs) const;
    TaylorJet operator/(const TaylorJet& rhs) const;
    TaylorJet operator*(double s) const;
    TaylorJet operator+(double s) const;

    TaylorJet& operator+=(const TaylorJet& rhs);
    TaylorJet& operator-=(const TaylorJet& rhs);

    /// Integer power; negative exponents go through the reciprocal.
    TaylorJet pow_int(int exponent) const;

    TaylorJet exp() const;
    TaylorJet log() const;
    TaylorJet sqrt() const;
    TaylorJet sin() const;
    TaylorJet cos() const;
    TaylorJet sinh() const;
    TaylorJet cosh() const;

    /// Jet of the partial derivative with respect to coordinate var,
    /// one order lower.
    TaylorJet partial(int var) const;

    /// Same expansion truncated to a lower order.
    TaylorJet truncate(int new_order) const;

    /// Evaluate the stored polynomial at point x (absolute coordinates).
    double evaluate_polynomial(const std::vector<double>& x) const;

private:
    void require_compatible(const TaylorJet& rhs) const;
    /// Compose the univariate series sum_j outer[j] * (this - value())^j.
    TaylorJet recompose(const std::vector<double>& outer) const;

    const JetLayout* layout_;
    std::vector<double> base_;
    std::vector<double> coeff_;
};

inline TaylorJet operator*(double s, const TaylorJet& j) { return j * s; }

}  // namespace gencond
