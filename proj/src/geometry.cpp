#include "gencond/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace gencond {
namespace geometry {

namespace {

std::size_t pow_size(int n, int rank) {
    std::size_t s = 1;
    for (int i = 0; i < rank; ++i) s *= static_cast<std::size_t>(n);
    return s;
}

}  // namespace

MetricJet MetricJet::from_components(int n, std::vector<TaylorJet> row_major) {
    if (n < 1) throw DimensionError("MetricJet: dimension must be positive");
    if (row_major.size() != static_cast<std::size_t>(n) * n)
        throw DimensionError("MetricJet: expected " + std::to_string(n * n) + " component jets");
    const JetLayout& layout = row_major[0].layout();
    const std::vector<double>& base = row_major[0].base_point();
    if (layout.dim() != n)
        throw DimensionError("MetricJet: jet variable count does not match dimension");

    double scale = 0.0;
    for (const TaylorJet& j : row_major) {
        if (&j.layout() != &layout || j.base_point() != base)
            throw DimensionError("MetricJet: component jets disagree on layout or base point");
        for (double c : j.coefficients()) scale = std::max(scale, std::abs(c));
    }
    // Store exactly mirrored pairs so downstream formulas see exact symmetry.
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            TaylorJet& ab = row_major[static_cast<std::size_t>(a) * n + b];
            TaylorJet& ba = row_major[static_cast<std::size_t>(b) * n + a];
            for (int pos = 0; pos < layout.size(); ++pos) {
                double d = ab.coefficients()[static_cast<std::size_t>(pos)] -
                           ba.coefficients()[static_cast<std::size_t>(pos)];
                if (std::abs(d) > 1e-9 * std::max(1.0, scale))
                    throw DimensionError("MetricJet: component jets are not symmetric in (a, b)");
                double avg = 0.5 * (ab.coefficients()[static_cast<std::size_t>(pos)] +
                                    ba.coefficients()[static_cast<std::size_t>(pos)]);
                ab.coefficients()[static_cast<std::size_t>(pos)] = avg;
                ba.coefficients()[static_cast<std::size_t>(pos)] = avg;
            }
        }

    MetricJet mj;
    mj.n_ = n;
    mj.order_ = layout.order();
    mj.base_ = base;
    mj.g_ = std::move(row_major);

    Eigen::MatrixXd g0(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g0(a, b) = mj.g_[static_cast<std::size_t>(a) * n + b].value();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g0);
    if (!lu.isInvertible())
        throw SignatureError("MetricJet: metric base value is not invertible");
    Eigen::MatrixXd inv0 = lu.inverse();

    // G0 and the residual D = g - g(p); D has zero base value, so each
    // fixed-point pass G <- G0 - (G0 D) G adds one exact order.
    std::vector<TaylorJet> G0;
    std::vector<TaylorJet> A;  // G0 * D
    G0.reserve(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            G0.push_back(TaylorJet::constant(layout, base, inv0(a, b)));
    A.reserve(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            TaylorJet sum(layout, base);
            for (int c = 0; c < n; ++c) {
                TaylorJet d = mj.g_[static_cast<std::size_t>(c) * n + b] +
                              (-mj.g_[static_cast<std::size_t>(c) * n + b].value());
                sum += G0[static_cast<std::size_t>(a) * n + c] * d;
            }
            A.push_back(std::move(sum));
        }
    std::vector<TaylorJet> X = G0;
    for (int pass = 0; pass < mj.order_; ++pass) {
        std::vector<TaylorJet> next;
        next.reserve(static_cast<std::size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                TaylorJet sum = G0[static_cast<std::size_t>(a) * n + b];
                for (int c = 0; c < n; ++c)
                    sum -= A[static_cast<std::size_t>(a) * n + c] * X[static_cast<std::size_t>(c) * n + b];
                next.push_back(std::move(sum));
            }
        X = std::move(next);
    }
    mj.ginv_ = std::move(X);
    return mj;
}

tensor::Sym2 MetricJet::base_value() const {
    tensor::Sym2 g(n_);
    for (int a = 0; a < n_; ++a)
        for (int b = a; b < n_; ++b) g.set(a, b, g_[static_cast<std::size_t>(a) * n_ + b].value());
    return g;
}

double MetricJet::base_max_abs() const { return base_value().max_abs(); }

MetricJet MetricJet::truncated(int new_order) const {
    MetricJet mj;
    mj.n_ = n_;
    mj.order_ = new_order;
    mj.base_ = base_;
    mj.g_.reserve(g_.size());
    mj.ginv_.reserve(ginv_.size());
    for (const TaylorJet& j : g_) mj.g_.push_back(j.truncate(new_order));
    for (const TaylorJet& j : ginv_) mj.ginv_.push_back(j.truncate(new_order));
    mj.signature_verified_ = signature_verified_;
    return mj;
}

namespace {

MetricJet metric_jet_impl(const expr::Chart& chart, const std::vector<double>& p, int order) {
    chart.require_in_region(p);
    int n = chart.dim();
    std::vector<TaylorJet> table;
    table.reserve(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int i = std::max(a, b);
            int j = std::min(a, b);
            table.push_back(chart.component_jet(i, j, p, order));
        }
    return MetricJet::from_components(n, std::move(table));
}

}  // namespace

MetricJet metric_jet(const expr::Chart& chart, const std::vector<double>& p, int order) {
    MetricJet mj = metric_jet_impl(chart, p, order);
    tensor::LorentzSym2::verify(mj.base_value());
    mj.signature_verified_ = true;
    return mj;
}

MetricJet metric_jet_unverified(const expr::Chart& chart, const std::vector<double>& p, int order) {
    return metric_jet_impl(chart, p, order);
}

ChristoffelJet christoffel_jet(const MetricJet& mj) {
    if (mj.order() < 1) throw JetOrderError("christoffel_jet needs metric jets of order >= 1");
    int n = mj.dim();
    int out_order = mj.order() - 1;
    ChristoffelJet cj;
    cj.n_ = n;
    cj.order_ = out_order;
    cj.base_ = mj.base_point();

    std::vector<TaylorJet> dpart;  // d_b g_dc at [(b*n + d)*n + c]
    dpart.reserve(pow_size(n, 3));
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
            for (int c = 0; c < n; ++c) dpart.push_back(mj.component(d, c).partial(b));
    std::vector<TaylorJet> ginv_t;
    ginv_t.reserve(pow_size(n, 2));
    for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d) ginv_t.push_back(mj.inverse_component(a, d).truncate(out_order));

    cj.gamma_.reserve(pow_size(n, 3));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                TaylorJet sum(JetLayout::of(n, out_order), mj.base_point());
                for (int d = 0; d < n; ++d) {
                    TaylorJet inner = dpart[(static_cast<std::size_t>(b) * n + d) * n + c] +
                                      dpart[(static_cast<std::size_t>(c) * n + d) * n + b] -
                                      dpart[(static_cast<std::size_t>(d) * n + b) * n + c];
                    sum += ginv_t[static_cast<std::size_t>(a) * n + d] * inner;
                }
                cj.gamma_.push_back(sum * 0.5);
            }
    return cj;
}

TensorFieldJet::TensorFieldJet(int n, int rank, const JetLayout& layout, std::vector<double> base_point)
    : n_(n), rank_(rank) {
    if (n < 1) throw DimensionError("TensorFieldJet: dimension must be positive");
    if (rank < 0) throw DimensionError("TensorFieldJet: rank must be non-negative");
    comp_.assign(pow_size(n, rank), TaylorJet(layout, std::move(base_point)));
}

int TensorFieldJet::order() const { return comp_[0].order(); }

std::size_t TensorFieldJet::flat(const std::vector<int>& idx) const {
    if (idx.size() != static_cast<std::size_t>(rank_))
        throw DimensionError("TensorFieldJet: wrong index count");
    std::size_t f = 0;
    for (int v : idx) {
        if (v < 0 || v >= n_) throw DimensionError("TensorFieldJet: index out of range");
        f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    }
    return f;
}

std::vector<double> TensorFieldJet::base_values() const {
    std::vector<double> vals;
    vals.reserve(comp_.size());
    for (const TaylorJet& j : comp_) vals.push_back(j.value());
    return vals;
}

TensorFieldJet covariant_derivative_jet(const TensorFieldJet& T, const ChristoffelJet& gamma) {
    int n = T.dim();
    if (gamma.dim() != n) throw DimensionError("covariant_derivative_jet: dimension mismatch");
    if (T.order() < 1) throw JetOrderError("covariant_derivative_jet: tensor jet order exhausted");
    int out_order = T.order() - 1;
    if (gamma.order() < out_order)
        throw JetOrderError("covariant_derivative_jet: Christoffel jets of order >= " +
                            std::to_string(out_order) + " required");
    const std::vector<double>& base = T.at_flat(0).base_point();
    if (gamma.base_point() != base)
        throw DimensionError("covariant_derivative_jet: base point mismatch");

    const JetLayout& layout = JetLayout::of(n, out_order);
    int rank = T.rank();
    TensorFieldJet out(n, rank + 1, layout, base);

    std::vector<TaylorJet> T_trunc;
    T_trunc.reserve(T.component_count());
    for (std::size_t f = 0; f < T.component_count(); ++f)
        T_trunc.push_back(T.at_flat(f).truncate(out_order));
    std::vector<TaylorJet> gamma_trunc;
    gamma_trunc.reserve(pow_size(n, 3));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) gamma_trunc.push_back(gamma.at(a, b, c).truncate(out_order));
    auto gamma_at = [&](int a, int b, int c) -> const TaylorJet& {
        return gamma_trunc[(static_cast<std::size_t>(a) * n + b) * n + c];
    };

    std::vector<int> idx(static_cast<std::size_t>(rank), 0);
    std::size_t in_count = T.component_count();
    for (std::size_t f = 0; f < in_count; ++f) {
        std::size_t rest = f;
        for (int s = rank - 1; s >= 0; --s) {
            idx[static_cast<std::size_t>(s)] = static_cast<int>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
        }
        for (int e = 0; e < n; ++e) {
            TaylorJet d = T.at_flat(f).partial(e);
            for (int s = 0; s < rank; ++s) {
                int original = idx[static_cast<std::size_t>(s)];
                // stride of slot s in the flat index
                std::size_t stride = pow_size(n, rank - 1 - s);
                for (int rep = 0; rep < n; ++rep) {
                    std::size_t g = static_cast<std::size_t>(
                        static_cast<long long>(f) +
                        static_cast<long long>(rep - original) * static_cast<long long>(stride));
                    d -= gamma_at(rep, e, original) * T_trunc[g];
                }
            }
            out.at_flat(f * static_cast<std::size_t>(n) + static_cast<std::size_t>(e)) = std::move(d);
        }
    }
    return out;
}

TensorFieldJet riemann_field_jet(const MetricJet& mj) {
    if (mj.order() < 2) throw JetOrderError("riemann_field_jet needs metric jets of order >= 2");
    int n = mj.dim();
    int out_order = mj.order() - 2;
    const JetLayout& layout = JetLayout::of(n, out_order);
    const std::vector<double>& base = mj.base_point();

    ChristoffelJet gamma = christoffel_jet(mj);
    std::vector<TaylorJet> gamma_trunc;
    gamma_trunc.reserve(pow_size(n, 3));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) gamma_trunc.push_back(gamma.at(a, b, c).truncate(out_order));
    auto gam = [&](int a, int b, int c) -> const TaylorJet& {
        return gamma_trunc[(static_cast<std::size_t>(a) * n + b) * n + c];
    };

    // second partials: spp[((a n + d) n + b) n + c] = d_b d_c g_ad
    std::vector<TaylorJet> first;
    first.reserve(pow_size(n, 3));
    for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d)
            for (int b = 0; b < n; ++b) first.push_back(mj.component(a, d).partial(b));
    std::vector<TaylorJet> spp;
    spp.reserve(pow_size(n, 4));
    for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    spp.push_back(first[(static_cast<std::size_t>(a) * n + d) * n + b].partial(c));
    auto dd = [&](int a, int d, int b, int c) -> const TaylorJet& {
        return spp[((static_cast<std::size_t>(a) * n + d) * n + b) * n + c];
    };

    std::vector<TaylorJet> g_trunc;
    g_trunc.reserve(pow_size(n, 2));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g_trunc.push_back(mj.component(a, b).truncate(out_order));

    TensorFieldJet R(n, 4, layout, base);
    std::vector<int> idx(4);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    TaylorJet sum = (dd(a, d, b, c) + dd(b, c, a, d) - dd(a, c, b, d) - dd(b, d, a, c)) * 0.5;
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q)
                            sum += g_trunc[static_cast<std::size_t>(p) * n + q] *
                                   (gam(p, b, c) * gam(q, a, d) - gam(p, b, d) * gam(q, a, c));
                    idx[0] = a; idx[1] = b; idx[2] = c; idx[3] = d;
                    R.at_flat(R.flat(idx)) = std::move(sum);
                }
    return R;
}

namespace {

tensor::CurvTensor curv_from_values(int n, const std::vector<double>& vals) {
    tensor::CurvTensor T(n);
    T.data() = vals;
    return T;
}

}  // namespace

tensor::CurvTensor riemann_from_jet(const MetricJet& mj) {
    TensorFieldJet R = riemann_field_jet(mj);
    tensor::CurvTensor T = curv_from_values(mj.dim(), R.base_values());
    double res = tensor::riemann_symmetry_residual(T);
    if (res > 1e-10)
        throw Error("riemann_from_jet: symmetry residual " + std::to_string(res) + " exceeds 1e-10");
    return T;
}

const char* causal_class_name(CausalClass c) {
    switch (c) {
        case CausalClass::Timelike: return "timelike";
        case CausalClass::Null: return "null";
        case CausalClass::Spacelike: return "spacelike";
    }
    return "unknown";
}

TangentVector TangentVector::classify(std::vector<double> point, std::vector<double> components,
                                      const tensor::Sym2& g) {
    if (components.size() != static_cast<std::size_t>(g.dim()) ||
        point.size() != components.size())
        throw DimensionError("TangentVector: dimension mismatch");
    double xmax = 0.0;
    for (double v : components) xmax = std::max(xmax, std::abs(v));
    if (xmax == 0.0) throw DomainError("TangentVector: tangent vector must be nonzero");

    TangentVector X;
    X.point = std::move(point);
    X.components = std::move(components);
    X.norm_squared = tensor::bilinear(g, X.components, X.components);
    double band = 1e-9 * g.max_abs() * xmax * xmax;
    if (std::abs(X.norm_squared) <= band)
        X.causal_class = CausalClass::Null;
    else
        X.causal_class = X.norm_squared < 0.0 ? CausalClass::Timelike : CausalClass::Spacelike;
    return X;
}

namespace {

/// Contract the trailing `count` slots of a dense rank-(4+count) value
/// array with X, leaving a rank-4 array.
std::vector<double> contract_trailing(std::vector<double> vals, int n,
                                      const std::vector<double>& X, int count) {
    for (int c = 0; c < count; ++c) {
        std::size_t out_size = vals.size() / static_cast<std::size_t>(n);
        std::vector<double> next(out_size, 0.0);
        for (std::size_t i = 0; i < out_size; ++i) {
            double s = 0.0;
            for (int e = 0; e < n; ++e)
                s += vals[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(e)] *
                     X[static_cast<std::size_t>(e)];
            next[i] = s;
        }
        vals = std::move(next);
    }
    return vals;
}

}  // namespace

AlphaImage alpha_r(const TangentVector& X, const MetricJet& mj, int r) {
    if (r < 1) throw DomainError("alpha_r: derivative count r must be >= 1");
    if (mj.order() < 1 + r)
        throw JetOrderError("alpha_r: metric jet order " + std::to_string(mj.order()) +
                            " is below the required " + std::to_string(1 + r));
    int n = mj.dim();
    if (static_cast<int>(X.components.size()) != n)
        throw DimensionError("alpha_r: vector dimension mismatch");
    double pscale = 0.0;
    for (int i = 0; i < n; ++i) {
        pscale = std::max(pscale, std::abs(mj.base_point()[static_cast<std::size_t>(i)]));
        pscale = std::max(pscale, std::abs(X.point[static_cast<std::size_t>(i)]));
    }
    for (int i = 0; i < n; ++i)
        if (std::abs(X.point[static_cast<std::size_t>(i)] - mj.base_point()[static_cast<std::size_t>(i)]) >
            1e-12 * std::max(1.0, pscale))
            throw DimensionError("alpha_r: vector is not based at the jet's base point");

    AlphaImage img{X, mj.truncated(1), {}};
    img.derivatives.reserve(static_cast<std::size_t>(r));
    ChristoffelJet gamma = christoffel_jet(mj);
    TensorFieldJet current = riemann_field_jet(mj);
    double xmax = 0.0;
    for (double v : X.components) xmax = std::max(xmax, std::abs(v));
    double gam0 = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) gam0 = std::max(gam0, std::abs(gamma.at(a, b, c).value()));
    // Magnitude the k-th derivative was computed at; rates a tensor that is
    // zero up to rounding (constant curvature) without dividing noise by
    // noise.
    double r0max = 0.0;
    double growth = std::max(1.0, gam0) * std::max(1.0, xmax);
    for (int k = 0; k < r; ++k) {
        if (k > 0) current = covariant_derivative_jet(current, gamma);
        tensor::CurvTensor T = curv_from_values(n, contract_trailing(current.base_values(), n,
                                                                     X.components, k));
        if (k == 0) r0max = T.max_abs();
        double res = tensor::riemann_symmetry_residual(T, r0max * std::pow(growth, k));
        if (res > 1e-10)
            throw Error("alpha_r: derivative " + std::to_string(k) + " symmetry residual " +
                        std::to_string(res) + " exceeds 1e-10");
        img.derivatives.push_back(std::move(T));
    }
    return img;
}

namespace {

struct StageEval {
    bool ok = false;
    std::vector<double> accel;
};

StageEval geodesic_accel(const expr::Chart& chart, const std::vector<double>& x,
                         const std::vector<double>& v) {
    StageEval out;
    if (!chart.in_region(x)) return out;
    int n = chart.dim();
    try {
        MetricJet mj = metric_jet_unverified(chart, x, 1);
        ChristoffelJet gamma = christoffel_jet(mj);
        out.accel.assign(static_cast<std::size_t>(n), 0.0);
        for (int a = 0; a < n; ++a) {
            double s = 0.0;
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    s += gamma.value(a, b, c) * v[static_cast<std::size_t>(b)] * v[static_cast<std::size_t>(c)];
            out.accel[static_cast<std::size_t>(a)] = -s;
        }
        out.ok = true;
    } catch (const Error&) {
        out.ok = false;
    }
    return out;
}

}  // namespace

GeodesicTrace geodesic_flow(const expr::Chart& chart, const TangentVector& X0, double t_end,
                            double step, const SampleAnnotator& annotate) {
    if (step <= 0.0) throw DomainError("geodesic_flow: step must be positive");
    if (t_end < 0.0) throw DomainError("geodesic_flow: t_end must be non-negative");
    double step_count = t_end / step;
    if (step_count > 2e8) throw DomainError("geodesic_flow: step underflow (too many steps)");
    long long nsteps = static_cast<long long>(std::llround(step_count));
    chart.require_in_region(X0.point);

    int n = chart.dim();
    GeodesicTrace trace;
    trace.step = step;
    trace.samples.reserve(static_cast<std::size_t>(nsteps) + 1);

    std::vector<double> x = X0.point;
    std::vector<double> v = X0.components;

    auto norm_squared_at = [&](const std::vector<double>& xs, const std::vector<double>& vs) {
        std::vector<double> gm = chart.metric_value(xs);
        double q = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                q += gm[static_cast<std::size_t>(i) * n + j] * vs[static_cast<std::size_t>(i)] *
                     vs[static_cast<std::size_t>(j)];
        return q;
    };
    auto classify_at = [&](const std::vector<double>& xs, const std::vector<double>& vs) {
        std::vector<double> gm = chart.metric_value(xs);
        double gmax = 0.0, vmax = 0.0, q = 0.0;
        for (double g : gm) gmax = std::max(gmax, std::abs(g));
        for (double w : vs) vmax = std::max(vmax, std::abs(w));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                q += gm[static_cast<std::size_t>(i) * n + j] * vs[static_cast<std::size_t>(i)] *
                     vs[static_cast<std::size_t>(j)];
        if (std::abs(q) <= 1e-9 * gmax * vmax * vmax) return CausalClass::Null;
        return q < 0.0 ? CausalClass::Timelike : CausalClass::Spacelike;
    };

    trace.initial_norm_squared = norm_squared_at(x, v);
    double drift_scale = std::max(1.0, std::abs(trace.initial_norm_squared));

    auto push_sample = [&](double t) {
        GeodesicSample s;
        s.t = t;
        s.x = x;
        s.xdot = v;
        s.causal_class = classify_at(x, v);
        if (annotate) s.magnitude = annotate(x, v);
        trace.samples.push_back(std::move(s));
        double q = norm_squared_at(x, v);
        trace.max_norm_drift =
            std::max(trace.max_norm_drift, std::abs(q - trace.initial_norm_squared) / drift_scale);
    };
    push_sample(0.0);

    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> vs(static_cast<std::size_t>(n));
    for (long long i = 0; i < nsteps; ++i) {
        // Classic RK4 on the first-order system (x, v).
        StageEval k1 = geodesic_accel(chart, x, v);
        if (!k1.ok) { trace.truncated = true; break; }
        for (int j = 0; j < n; ++j) {
            xs[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + 0.5 * step * v[static_cast<std::size_t>(j)];
            vs[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)] + 0.5 * step * k1.accel[static_cast<std::size_t>(j)];
        }
        StageEval k2 = geodesic_accel(chart, xs, vs);
        if (!k2.ok) { trace.truncated = true; break; }
        std::vector<double> v2 = vs;
        for (int j = 0; j < n; ++j) {
            xs[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + 0.5 * step * v2[static_cast<std::size_t>(j)];
            vs[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)] + 0.5 * step * k2.accel[static_cast<std::size_t>(j)];
        }
        StageEval k3 = geodesic_accel(chart, xs, vs);
        if (!k3.ok) { trace.truncated = true; break; }
        std::vector<double> v3 = vs;
        for (int j = 0; j < n; ++j) {
            xs[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + step * v3[static_cast<std::size_t>(j)];
            vs[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)] + step * k3.accel[static_cast<std::size_t>(j)];
        }
        StageEval k4 = geodesic_accel(chart, xs, vs);
        if (!k4.ok) { trace.truncated = true; break; }

        for (int j = 0; j < n; ++j) {
            std::size_t u = static_cast<std::size_t>(j);
            double dx = v[u] + 2.0 * (v2[u] + v3[u]) + vs[u];
            double dv = k1.accel[u] + 2.0 * (k2.accel[u] + k3.accel[u]) + k4.accel[u];
            x[u] += step / 6.0 * dx;
            v[u] += step / 6.0 * dv;
        }
        if (!chart.in_region(x)) { trace.truncated = true; break; }
        trace.steps_taken = i + 1;
        push_sample(static_cast<double>(i + 1) * step);
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const GeodesicTrace& trace,
                     const std::vector<std::string>& coordinate_names) {
    out << "t";
    for (const std::string& c : coordinate_names) out << "," << c;
    for (const std::string& c : coordinate_names) out << ",xdot_" << c;
    out << ",genericity_magnitude,causal_character\n";
    char buf[32];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (const GeodesicSample& s : trace.samples) {
        emit(s.t);
        for (double c : s.x) { out << ","; emit(c); }
        for (double c : s.xdot) { out << ","; emit(c); }
        out << ",";
        emit(s.magnitude);
        out << "," << causal_class_name(s.causal_class) << "\n";
    }
}

}  // namespace geometry
}  // namespace gencond
