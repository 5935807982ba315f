#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gencond/chart.hpp"
#include "gencond/errors.hpp"
#include "gencond/taylor.hpp"
#include "gencond/tensor.hpp"

namespace gencond {
namespace geometry {

/// Jets of all metric components at one point, with the inverse-metric jet
/// computed on construction. The inverse is exact to the truncation order:
/// writing g = g0 + D with D vanishing at the base point, the fixed-point
/// iteration G <- g0^{-1} - (g0^{-1} D) G gains one exact order per pass.
class MetricJet {
public:
    /// Build from the full row-major n*n table of component jets. Checks
    /// symmetry and base-value invertibility only; use metric_jet() to also
    /// verify Lorentzian signature.
    static MetricJet from_components(int n, std::vector<TaylorJet> row_major);

    int dim() const { return n_; }
    int order() const { return order_; }
    const std::vector<double>& base_point() const { return base_; }

    const TaylorJet& component(int a, int b) const { return g_[static_cast<std::size_t>(a) * n_ + b]; }
    const TaylorJet& inverse_component(int a, int b) const { return ginv_[static_cast<std::size_t>(a) * n_ + b]; }

    tensor::Sym2 base_value() const;
    double base_max_abs() const;

    /// True when the base value passed the Lorentzian signature check
    /// (set by metric_jet; from_components leaves it false).
    bool signature_verified() const { return signature_verified_; }

    MetricJet truncated(int new_order) const;

private:
    MetricJet() = default;
    friend MetricJet metric_jet(const expr::Chart& chart, const std::vector<double>& p, int order);
    friend MetricJet metric_jet_unverified(const expr::Chart& chart, const std::vector<double>& p,
                                           int order);

    int n_ = 0;
    int order_ = 0;
    std::vector<double> base_;
    std::vector<TaylorJet> g_;     // row-major n*n
    std::vector<TaylorJet> ginv_;  // row-major n*n
    bool signature_verified_ = false;
};

/// Component jets of the chart metric at p, with the base value verified
/// Lorentzian. Throws RegionError outside the declared region and
/// SignatureError when the signature check fails.
MetricJet metric_jet(const expr::Chart& chart, const std::vector<double>& p, int order);

/// Same without the signature check (hot paths that evaluate the metric
/// along a curve whose starting point was already verified).
MetricJet metric_jet_unverified(const expr::Chart& chart, const std::vector<double>& p, int order);

/// Christoffel symbol jets, one order below the metric jets.
class ChristoffelJet {
public:
    int dim() const { return n_; }
    int order() const { return order_; }
    const std::vector<double>& base_point() const { return base_; }
    /// Gamma^a_bc; symmetric in b, c.
    const TaylorJet& at(int a, int b, int c) const {
        return gamma_[(static_cast<std::size_t>(a) * n_ + b) * n_ + c];
    }
    double value(int a, int b, int c) const { return at(a, b, c).value(); }

private:
    friend ChristoffelJet christoffel_jet(const MetricJet& mj);
    int n_ = 0;
    int order_ = 0;
    std::vector<double> base_;
    std::vector<TaylorJet> gamma_;
};

/// Gamma^a_bc = (1/2) g^{ad} (d_b g_dc + d_c g_db - d_d g_bc) in jet
/// arithmetic. Requires metric order >= 1.
ChristoffelJet christoffel_jet(const MetricJet& mj);

/// Dense covariant tensor field jet: n^rank component jets sharing one
/// layout and base point.
class TensorFieldJet {
public:
    TensorFieldJet(int n, int rank, const JetLayout& layout, std::vector<double> base_point);

    int dim() const { return n_; }
    int rank() const { return rank_; }
    int order() const;
    std::size_t component_count() const { return comp_.size(); }

    const TaylorJet& at_flat(std::size_t f) const { return comp_[f]; }
    TaylorJet& at_flat(std::size_t f) { return comp_[f]; }
    std::size_t flat(const std::vector<int>& idx) const;

    /// Base-point values of all components, same flat order.
    std::vector<double> base_values() const;

private:
    int n_;
    int rank_;
    std::vector<TaylorJet> comp_;
};

/// (nabla T)_{i1..im;e} = d_e T_{i1..im} - sum_s Gamma^f_{e i_s} T_{..f..},
/// with the new covariant slot appended last. Output order is one lower.
TensorFieldJet covariant_derivative_jet(const TensorFieldJet& T, const ChristoffelJet& gamma);

/// Riemann tensor component jets R_abcd, order k-2:
/// R_abcd = (1/2)(g_ad,bc + g_bc,ad - g_ac,bd - g_bd,ac)
///          + g_np (Gamma^n_bc Gamma^p_ad - Gamma^n_bd Gamma^p_ac).
/// This formula fixes the sign convention for the whole library.
TensorFieldJet riemann_field_jet(const MetricJet& mj);

/// Riemann tensor value at the base point. Requires metric order >= 2.
tensor::CurvTensor riemann_from_jet(const MetricJet& mj);

enum class CausalClass { Timelike, Null, Spacelike };
const char* causal_class_name(CausalClass c);

/// Nonzero tangent vector with cached causal character. Classification
/// calls X null when |g(X,X)| <= 1e-9 * max|g| * max|X|^2.
struct TangentVector {
    std::vector<double> point;
    std::vector<double> components;
    CausalClass causal_class = CausalClass::Spacelike;
    double norm_squared = 0.0;

    static TangentVector classify(std::vector<double> point, std::vector<double> components,
                                  const tensor::Sym2& g);
};

/// Curvature and its first r-1 iterated covariant derivatives at the base
/// point, each fully contracted with X in the derivative slots. Along the
/// geodesic through X this equals the iterated directional derivative of R
/// with respect to the parallel extension of X, because the parallel
/// extension satisfies nabla_X X = 0; no numerical transport is involved.
struct AlphaImage {
    TangentVector X;
    MetricJet g1;  // the order-1 part of the input jet
    /// derivatives[k] = (nabla^k R)(.,.,.,.;X,...,X), k = 0 .. r-1.
    std::vector<tensor::CurvTensor> derivatives;
};

/// Requires mj.order() >= 1 + r and r >= 1. Every emitted tensor is checked
/// against the curvature symmetries (residual <= 1e-10).
AlphaImage alpha_r(const TangentVector& X, const MetricJet& mj, int r);

struct GeodesicSample {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> xdot;
    /// Genericity magnitude when an annotator was supplied, else 0.
    double magnitude = 0.0;
    CausalClass causal_class = CausalClass::Spacelike;
};

struct GeodesicTrace {
    std::vector<GeodesicSample> samples;
    double step = 0.0;
    /// True when integration stopped early (region exit or evaluation
    /// failure at a stage point).
    bool truncated = false;
    long long steps_taken = 0;
    double initial_norm_squared = 0.0;
    /// max_t |g(xdot,xdot)(t) - g(xdot,xdot)(0)| / max(1, |g(xdot,xdot)(0)|).
    double max_norm_drift = 0.0;
};

using SampleAnnotator =
    std::function<double(const std::vector<double>& x, const std::vector<double>& xdot)>;

/// Fixed-step RK4 for x''^a + Gamma^a_bc x'^b x'^c = 0 from t = 0 to
/// t_end, sampling every step. Stops early with the truncated flag set if
/// the trajectory leaves the chart region.
GeodesicTrace geodesic_flow(const expr::Chart& chart, const TangentVector& X0, double t_end,
                            double step, const SampleAnnotator& annotate = nullptr);

/// Columns: t, coordinates, velocities, genericity_magnitude, causal_character.
void write_trace_csv(std::ostream& out, const GeodesicTrace& trace,
                     const std::vector<std::string>& coordinate_names);

}  // namespace geometry
}  // namespace gencond
