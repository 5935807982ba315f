#include "gencond/genericity.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <utility>

namespace gencond {
namespace genericity {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

tensor::Sym2 contracted_2_4(const tensor::CurvTensor& R, const std::vector<double>& X) {
    int n = R.dim();
    tensor::Sym2 M(n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double s = 0.0;
            for (int e = 0; e < n; ++e)
                for (int f = 0; f < n; ++f)
                    s += R(a, e, b, f) * X[static_cast<std::size_t>(e)] * X[static_cast<std::size_t>(f)];
            M.set(a, b, s);
        }
    return M;
}

// zero_floor: magnitude below which D counts as exactly zero. The verdict
// functions pass the rounding scale of the derivative computation so a
// curvature derivative that vanishes identically (constant curvature) is
// not rated by its own noise.
double order_k_magnitude(const geometry::TangentVector& X, const tensor::Sym2& g,
                         const tensor::CurvTensor& D, double zero_floor = 0.0) {
    double dmax = D.max_abs();
    if (dmax <= std::max(kCurvatureFloor, zero_floor)) return 0.0;
    tensor::Sym2 xx(g.dim());
    std::vector<double> flat = tensor::lower_index(g, X.components);
    for (int a = 0; a < g.dim(); ++a)
        for (int b = a; b < g.dim(); ++b)
            xx.set(a, b, flat[static_cast<std::size_t>(a)] * flat[static_cast<std::size_t>(b)]);
    tensor::CurvTensor q = tensor::kulkarni_nomizu(xx, contracted_2_4(D, X.components));
    double gmax = g.max_abs();
    double xmax = max_abs(X.components);
    return q.max_abs() / (gmax * gmax * xmax * xmax * xmax * xmax * dmax);
}

}  // namespace

tensor::CurvTensor generic_quantity(const geometry::TangentVector& X, const tensor::Sym2& g,
                                    const tensor::CurvTensor& R) {
    if (g.dim() != R.dim() || static_cast<int>(X.components.size()) != g.dim())
        throw DimensionError("generic_quantity: dimension mismatch");
    std::vector<double> flat = tensor::lower_index(g, X.components);
    tensor::Sym2 xx(g.dim());
    for (int a = 0; a < g.dim(); ++a)
        for (int b = a; b < g.dim(); ++b)
            xx.set(a, b, flat[static_cast<std::size_t>(a)] * flat[static_cast<std::size_t>(b)]);
    return tensor::kulkarni_nomizu(xx, contracted_2_4(R, X.components));
}

double normalized_magnitude(const geometry::TangentVector& X, const tensor::Sym2& g,
                            const tensor::CurvTensor& R) {
    if (g.dim() != R.dim() || static_cast<int>(X.components.size()) != g.dim())
        throw DimensionError("normalized_magnitude: dimension mismatch");
    return order_k_magnitude(X, g, R);
}

GenericityVerdict is_generic(const geometry::TangentVector& X, const geometry::MetricJet& mj,
                             double tol) {
    tensor::CurvTensor R = geometry::riemann_from_jet(mj);
    tensor::Sym2 g = mj.base_value();
    GenericityVerdict v;
    v.magnitudes.push_back(order_k_magnitude(X, g, R));
    v.generic = v.magnitudes[0] > tol;
    v.r = 0;
    v.tol = tol;
    v.causal_class = X.causal_class;
    v.vector_components = X.components;
    return v;
}

GenericityVerdict is_r_nongeneric(const geometry::TangentVector& X, const geometry::MetricJet& mj,
                                  int r, double tol) {
    if (r < 0) throw DomainError("is_r_nongeneric: r must be >= 0");
    geometry::AlphaImage img = geometry::alpha_r(X, mj, r + 1);
    tensor::Sym2 g = mj.base_value();
    GenericityVerdict v;
    v.magnitudes.reserve(static_cast<std::size_t>(r) + 1);
    // Per-order rounding scale: the k-th derivative is built from curvature
    // contracted with Christoffel values and X, so a result below 1e-12 of
    // that scale is zero up to rounding.
    double xmax = max_abs(X.components);
    double gam0 = 0.0;
    {
        geometry::ChristoffelJet gamma = geometry::christoffel_jet(img.g1);
        int n = g.dim();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    gam0 = std::max(gam0, std::abs(gamma.at(a, b, c).value()));
    }
    double growth = std::max(1.0, gam0) * std::max(1.0, xmax);
    double r0max = img.derivatives.empty() ? 0.0 : img.derivatives.front().max_abs();
    double scale = r0max;
    for (const tensor::CurvTensor& D : img.derivatives) {
        v.magnitudes.push_back(order_k_magnitude(X, g, D, 1e-12 * scale));
        scale *= growth;
    }
    v.generic = v.magnitudes[0] > tol;
    v.r_nongeneric = std::all_of(v.magnitudes.begin(), v.magnitudes.end(),
                                 [&](double m) { return m <= tol; });
    v.r = r;
    v.tol = tol;
    v.causal_class = X.causal_class;
    v.vector_components = X.components;
    return v;
}

std::vector<std::vector<double>> orthogonal_complement_basis(const tensor::Sym2& g,
                                                             const std::vector<double>& X) {
    int n = g.dim();
    if (static_cast<int>(X.size()) != n)
        throw DimensionError("orthogonal_complement_basis: dimension mismatch");
    std::vector<double> flat = tensor::lower_index(g, X);
    int pivot = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(flat[static_cast<std::size_t>(i)]) > std::abs(flat[static_cast<std::size_t>(pivot)]))
            pivot = i;
    if (flat[static_cast<std::size_t>(pivot)] == 0.0)
        throw DomainError("orthogonal_complement_basis: g*X vanishes (degenerate metric)");
    std::vector<std::vector<double>> basis;
    basis.reserve(static_cast<std::size_t>(n) - 1);
    for (int i = 0; i < n; ++i) {
        if (i == pivot) continue;
        std::vector<double> a(static_cast<std::size_t>(n), 0.0);
        a[static_cast<std::size_t>(i)] = 1.0;
        a[static_cast<std::size_t>(pivot)] =
            -flat[static_cast<std::size_t>(i)] / flat[static_cast<std::size_t>(pivot)];
        basis.push_back(std::move(a));
    }
    return basis;
}

bool beem_harris_test(const geometry::TangentVector& X, const tensor::Sym2& g,
                      const tensor::CurvTensor& R, double tol) {
    double rmax = R.max_abs();
    if (rmax <= kCurvatureFloor) return true;
    double xmax = max_abs(X.components);
    std::vector<std::vector<double>> basis = orthogonal_complement_basis(g, X.components);
    int n = g.dim();
    tensor::Sym2 M = contracted_2_4(R, X.components);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    s += basis[i][static_cast<std::size_t>(a)] * basis[j][static_cast<std::size_t>(b)] *
                         M(a, b);
            double bound = tol * rmax * xmax * xmax * max_abs(basis[i]) * max_abs(basis[j]);
            if (std::abs(s) > bound) return false;
        }
    return true;
}

ScanResult scan_geodesic(const expr::Chart& chart, const geometry::TangentVector& X0, double t_end,
                         double step, int r, double tol) {
    if (r < 0) throw DomainError("scan_geodesic: r must be >= 0");
    geometry::SampleAnnotator annotate = [&](const std::vector<double>& x,
                                             const std::vector<double>& xdot) {
        geometry::MetricJet mj = geometry::metric_jet_unverified(chart, x, 2);
        tensor::CurvTensor R = geometry::riemann_from_jet(mj);
        geometry::TangentVector X;
        X.point = x;
        X.components = xdot;
        return order_k_magnitude(X, mj.base_value(), R);
    };

    ScanResult result;
    result.trace = geometry::geodesic_flow(chart, X0, t_end, step, annotate);
    ScanReport& rep = result.report;
    rep.sample_count = static_cast<int>(result.trace.samples.size());
    rep.r = r;
    rep.tol = tol;

    for (int i = 0; i < rep.sample_count; ++i) {
        bool sub = result.trace.samples[static_cast<std::size_t>(i)].magnitude <= tol;
        if (!sub) {
            ++rep.generic_count;
            continue;
        }
        if (!rep.runs.empty() &&
            rep.runs.back().begin + rep.runs.back().length == i)
            ++rep.runs.back().length;
        else
            rep.runs.push_back(SubTolRun{i, 1, false});
    }
    rep.any_generic = rep.generic_count > 0;
    for (SubTolRun& run : rep.runs) {
        run.plateau = run.length >= 3;
        if (run.plateau)
            ++rep.plateau_count;
        else
            ++rep.dip_count;
    }

    if (r >= 1) {
        rep.r_nongeneric_count = 0;
        for (const geometry::GeodesicSample& s : result.trace.samples) {
            geometry::MetricJet mj = geometry::metric_jet_unverified(chart, s.x, r + 2);
            geometry::TangentVector X;
            X.point = s.x;
            X.components = s.xdot;
            X.causal_class = s.causal_class;
            GenericityVerdict v = is_r_nongeneric(X, mj, r, tol);
            if (v.r_nongeneric) ++rep.r_nongeneric_count;
        }
    }

    char note[160];
    std::snprintf(note, sizeof note,
                  "verdict restricted to the sampled window t in [0, %g] at step %g; says nothing "
                  "about inextendible geodesics",
                  t_end, step);
    rep.window_note = note;
    return result;
}

}  // namespace genericity
}  // namespace gencond
