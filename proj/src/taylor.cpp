#include "gencond/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace gencond {

namespace {

std::uint64_t encode(const MultiIndex& alpha) {
    // 8 bits per exponent, up to 8 variables; enforced in JetLayout::of.
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        key |= static_cast<std::uint64_t>(alpha[i] & 0xff) << (8 * i);
    return key;
}

void enumerate_grade(int dim, int grade, MultiIndex& scratch, int slot, int remaining,
                     std::vector<MultiIndex>& out) {
    if (slot == dim - 1) {
        scratch[slot] = remaining;
        out.push_back(scratch);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        scratch[slot] = e;
        enumerate_grade(dim, grade, scratch, slot + 1, remaining - e, out);
    }
}

}  // namespace

int multi_index_degree(const MultiIndex& alpha) {
    int d = 0;
    for (int a : alpha) d += a;
    return d;
}

double multi_index_factorial(const MultiIndex& alpha) {
    double f = 1.0;
    for (int a : alpha)
        for (int i = 2; i <= a; ++i) f *= i;
    return f;
}

long long JetLayout::coefficient_count(int dim, int order) {
    long long c = 1;
    for (int i = 1; i <= dim; ++i) c = c * (order + i) / i;
    return c;
}

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
    indices_.reserve(static_cast<std::size_t>(coefficient_count(dim, order)));
    MultiIndex scratch(dim, 0);
    for (int g = 0; g <= order; ++g)
        enumerate_grade(dim, g, scratch, 0, g, indices_);

    degrees_.resize(indices_.size());
    std::vector<std::pair<std::uint64_t, int>> keyed(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        degrees_[i] = multi_index_degree(indices_[i]);
        keyed[i] = {encode(indices_[i]), static_cast<int>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
    keys_.resize(keyed.size());
    key_positions_.resize(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        keys_[i] = keyed[i].first;
        key_positions_[i] = keyed[i].second;
    }

    const std::size_t count = indices_.size();
    product_.assign(count * count, -1);
    MultiIndex sum(dim, 0);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            if (degrees_[i] + degrees_[j] > order) continue;
            for (int v = 0; v < dim; ++v) sum[v] = indices_[i][v] + indices_[j][v];
            product_[i * count + j] = position(sum);
        }
    }
}

int JetLayout::position(const MultiIndex& alpha) const {
    if (static_cast<int>(alpha.size()) != dim_)
        throw DimensionError("multi-index dimension mismatch");
    if (multi_index_degree(alpha) > order_) return -1;
    const std::uint64_t key = encode(alpha);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key)
        throw DimensionError("malformed multi-index");
    return key_positions_[static_cast<std::size_t>(it - keys_.begin())];
}

const JetLayout& JetLayout::of(int dim, int order) {
    if (dim < 1 || dim > 8) throw DimensionError("jet dimension must be in [1, 8]");
    if (order < 0 || order > 16) throw JetOrderError("jet order must be in [0, 16]");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{dim, order}];
    if (!slot) slot.reset(new JetLayout(dim, order));
    return *slot;
}

TaylorJet::TaylorJet(const JetLayout& layout, std::vector<double> base_point)
    : layout_(&layout), base_(std::move(base_point)), coeff_(layout.size(), 0.0) {
    if (static_cast<int>(base_.size()) != layout.dim())
        throw DimensionError("base point dimension does not match jet layout");
}

TaylorJet TaylorJet::constant(const JetLayout& layout, std::vector<double> base_point, double value) {
    TaylorJet j(layout, std::move(base_point));
    j.coeff_[0] = value;
    return j;
}

TaylorJet TaylorJet::coordinate(const JetLayout& layout, std::vector<double> base_point, int var) {
    if (var < 0 || var >= layout.dim())
        throw DimensionError("coordinate index out of range");
    TaylorJet j(layout, std::move(base_point));
    j.coeff_[0] = j.base_[var];
    if (layout.order() >= 1) {
        MultiIndex e(layout.dim(), 0);
        e[var] = 1;
        j.coeff_[layout.position(e)] = 1.0;
    }
    return j;
}

double TaylorJet::coefficient(const MultiIndex& alpha) const {
    int pos = layout_->position(alpha);
    if (pos < 0) throw JetOrderError("multi-index degree exceeds jet order");
    return coeff_[pos];
}

double TaylorJet::derivative(const MultiIndex& alpha) const {
    return coefficient(alpha) * multi_index_factorial(alpha);
}

void TaylorJet::require_compatible(const TaylorJet& rhs) const {
    if (layout_ != rhs.layout_)
        throw DimensionError("jet arithmetic requires matching dimension and order");
    if (base_ != rhs.base_)
        throw DimensionError("jet arithmetic requires a common base point");
}

TaylorJet TaylorJet::operator-() const {
    TaylorJet r = *this;
    for (double& c : r.coeff_) c = -c;
    return r;
}

TaylorJet TaylorJet::operator+(const TaylorJet& rhs) const {
    TaylorJet r = *this;
    r += rhs;
    return r;
}

TaylorJet TaylorJet::operator-(const TaylorJet& rhs) const {
    TaylorJet r = *this;
    r -= rhs;
    return r;
}

TaylorJet& TaylorJet::operator+=(const TaylorJet& rhs) {
    require_compatible(rhs);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += rhs.coeff_[i];
    return *this;
}

TaylorJet& TaylorJet::operator-=(const TaylorJet& rhs) {
    require_compatible(rhs);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= rhs.coeff_[i];
    return *this;
}

TaylorJet TaylorJet::operator*(const TaylorJet& rhs) const {
    require_compatible(rhs);
    TaylorJet r(*layout_, base_);
    const int count = layout_->size();
    for (int i = 0; i < count; ++i) {
        const double a = coeff_[i];
        if (a == 0.0) continue;
        for (int j = 0; j < count; ++j) {
            const int p = layout_->product_position(i, j);
            if (p >= 0) r.coeff_[p] += a * rhs.coeff_[j];
        }
    }
    return r;
}

TaylorJet TaylorJet::operator*(double s) const {
    TaylorJet r = *this;
    for (double& c : r.coeff_) c *= s;
    return r;
}

TaylorJet TaylorJet::operator+(double s) const {
    TaylorJet r = *this;
    r.coeff_[0] += s;
    return r;
}

TaylorJet TaylorJet::recompose(const std::vector<double>& outer) const {
    // Horner evaluation of sum_j outer[j] w^j where w = this - value().
    // w has zero constant term, so the truncated result is exact to order k.
    TaylorJet w = *this;
    w.coeff_[0] = 0.0;
    TaylorJet r = TaylorJet::constant(*layout_, base_, outer.back());
    for (int j = static_cast<int>(outer.size()) - 2; j >= 0; --j) {
        r = r * w;
        r.coeff_[0] += outer[j];
    }
    return r;
}

TaylorJet TaylorJet::operator/(const TaylorJet& rhs) const {
    require_compatible(rhs);
    const double b0 = rhs.value();
    if (b0 == 0.0) throw DomainError("division by zero");
    const int k = layout_->order();
    std::vector<double> outer(k + 1);
    double p = 1.0 / b0;
    for (int j = 0; j <= k; ++j) {
        outer[j] = (j % 2 == 0) ? p : -p;  // (-1)^j / b0^{j+1}
        p /= b0;
    }
    return *this * rhs.recompose(outer);
}

TaylorJet TaylorJet::pow_int(int exponent) const {
    if (exponent < 0) {
        TaylorJet one = TaylorJet::constant(*layout_, base_, 1.0);
        return one / pow_int(-exponent);
    }
    TaylorJet r = TaylorJet::constant(*layout_, base_, 1.0);
    TaylorJet b = *this;
    int e = exponent;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

TaylorJet TaylorJet::exp() const {
    const int k = layout_->order();
    const double e0 = std::exp(value());
    std::vector<double> outer(k + 1);
    double f = 1.0;
    for (int j = 0; j <= k; ++j) {
        outer[j] = e0 / f;
        f *= (j + 1);
    }
    return recompose(outer);
}

TaylorJet TaylorJet::log() const {
    const double u0 = value();
    if (u0 <= 0.0) throw DomainError("log of non-positive value");
    const int k = layout_->order();
    std::vector<double> outer(k + 1);
    outer[0] = std::log(u0);
    double p = 1.0 / u0;
    for (int j = 1; j <= k; ++j) {
        outer[j] = ((j % 2 == 1) ? 1.0 : -1.0) * p / j;
        p /= u0;
    }
    return recompose(outer);
}

TaylorJet TaylorJet::sqrt() const {
    const double u0 = value();
    if (u0 <= 0.0) throw DomainError("sqrt of non-positive value");
    const int k = layout_->order();
    std::vector<double> outer(k + 1);
    // Binomial series: sum_j C(1/2, j) u0^{1/2 - j} w^j.
    double c = std::sqrt(u0);
    outer[0] = c;
    for (int j = 1; j <= k; ++j) {
        c *= (0.5 - (j - 1)) / j / u0;
        outer[j] = c;
    }
    return recompose(outer);
}

TaylorJet TaylorJet::sin() const {
    const int k = layout_->order();
    const double s = std::sin(value()), c = std::cos(value());
    std::vector<double> outer(k + 1);
    double f = 1.0;
    static const int sign[4] = {1, 1, -1, -1};
    for (int j = 0; j <= k; ++j) {
        outer[j] = sign[j % 4] * ((j % 2 == 0) ? s : c) / f;
        f *= (j + 1);
    }
    return recompose(outer);
}

TaylorJet TaylorJet::cos() const {
    const int k = layout_->order();
    const double s = std::sin(value()), c = std::cos(value());
    std::vector<double> outer(k + 1);
    double f = 1.0;
    static const int sign[4] = {1, -1, -1, 1};
    for (int j = 0; j <= k; ++j) {
        outer[j] = sign[j % 4] * ((j % 2 == 0) ? c : s) / f;
        f *= (j + 1);
    }
    return recompose(outer);
}

TaylorJet TaylorJet::sinh() const {
    const int k = layout_->order();
    const double s = std::sinh(value()), c = std::cosh(value());
    std::vector<double> outer(k + 1);
    double f = 1.0;
    for (int j = 0; j <= k; ++j) {
        outer[j] = ((j % 2 == 0) ? s : c) / f;
        f *= (j + 1);
    }
    return recompose(outer);
}

TaylorJet TaylorJet::cosh() const {
    const int k = layout_->order();
    const double s = std::sinh(value()), c = std::cosh(value());
    std::vector<double> outer(k + 1);
    double f = 1.0;
    for (int j = 0; j <= k; ++j) {
        outer[j] = ((j % 2 == 0) ? c : s) / f;
        f *= (j + 1);
    }
    return recompose(outer);
}

TaylorJet TaylorJet::partial(int var) const {
    if (var < 0 || var >= dim()) throw DimensionError("partial: coordinate index out of range");
    if (order() < 1) throw JetOrderError("partial derivative of an order-0 jet");
    const JetLayout& lower = JetLayout::of(dim(), order() - 1);
    TaylorJet r(lower, base_);
    MultiIndex shifted(dim());
    for (int pos = 0; pos < lower.size(); ++pos) {
        shifted = lower.index_at(pos);
        shifted[var] += 1;
        // d/dx_var of c_beta (x-p)^beta picks up the factor beta_var.
        r.coeff_[pos] = static_cast<double>(shifted[var]) * coeff_[layout_->position(shifted)];
    }
    return r;
}

TaylorJet TaylorJet::truncate(int new_order) const {
    if (new_order > order()) throw JetOrderError("truncate cannot raise the order");
    if (new_order == order()) return *this;
    const JetLayout& lower = JetLayout::of(dim(), new_order);
    TaylorJet r(lower, base_);
    // Graded ordering makes truncation a prefix copy.
    std::copy(coeff_.begin(), coeff_.begin() + lower.size(), r.coeff_.begin());
    return r;
}

double TaylorJet::evaluate_polynomial(const std::vector<double>& x) const {
    if (x.size() != base_.size()) throw DimensionError("evaluation point dimension mismatch");
    double sum = 0.0;
    for (int pos = 0; pos < layout_->size(); ++pos) {
        double term = coeff_[pos];
        if (term == 0.0) continue;
        const MultiIndex& alpha = layout_->index_at(pos);
        for (int v = 0; v < dim(); ++v)
            for (int e = 0; e < alpha[v]; ++e) term *= (x[v] - base_[v]);
        sum += term;
    }
    return sum;
}

}  // namespace gencond
