#pragma once

#include <string>
#include <vector>

#include "gencond/geometry.hpp"
#include "gencond/tensor.hpp"

namespace gencond {
namespace genericity {

inline constexpr double kDefaultTol = 1e-10;
/// Curvature magnitudes at or below this floor are treated as exactly zero:
/// the vector is reported nongeneric with magnitude 0.
inline constexpr double kCurvatureFloor = 1e-300;

/// Verdict for one vector. magnitudes[k] is the normalized size of the
/// order-k quantity; magnitudes.size() is 1 for a plain genericity test and
/// r+1 after an r-nongenericity test.
struct GenericityVerdict {
    std::vector<double> magnitudes;
    double magnitude() const { return magnitudes[0]; }
    bool generic = false;
    bool r_nongeneric = false;
    int r = 0;
    double tol = kDefaultTol;
    geometry::CausalClass causal_class = geometry::CausalClass::Spacelike;
    std::vector<double> vector_components;
};

/// (X_flat (x) X_flat) KN-product R(.,X,.,X), where R(.,X,.,X)_ab =
/// R_aebf X^e X^f contracts slots 2 and 4. Vanishes exactly when X fails
/// to be generic for R.
tensor::CurvTensor generic_quantity(const geometry::TangentVector& X, const tensor::Sym2& g,
                                    const tensor::CurvTensor& R);

/// max-norm of generic_quantity divided by max|g|^2 * max|X|^4 * max(max|R|,
/// floor). Scale-invariant in X and g; 0 when R is below the floor.
double normalized_magnitude(const geometry::TangentVector& X, const tensor::Sym2& g,
                            const tensor::CurvTensor& R);

GenericityVerdict is_generic(const geometry::TangentVector& X, const geometry::MetricJet& mj,
                             double tol = kDefaultTol);

/// Tests the order-k quantities for k = 0..r; nongeneric at order r iff all
/// of them stay at or below tol. Needs metric jets of order r+2.
GenericityVerdict is_r_nongeneric(const geometry::TangentVector& X, const geometry::MetricJet& mj,
                                  int r, double tol = kDefaultTol);

/// Basis of the g-orthogonal complement of X (n-1 vectors; contains X in
/// its span exactly when X is null). Built by pivoted elimination on g*X,
/// deterministic for a given (g, X).
std::vector<std::vector<double>> orthogonal_complement_basis(const tensor::Sym2& g,
                                                             const std::vector<double>& X);

/// True iff R(A, X, B, X) vanishes for all A, B in the g-orthogonal
/// complement of X (threshold tol * max|R| * max|X|^2 * basis scale).
/// Equivalent to the vanishing of generic_quantity.
bool beem_harris_test(const geometry::TangentVector& X, const tensor::Sym2& g,
                      const tensor::CurvTensor& R, double tol = kDefaultTol);

/// One maximal run of consecutive samples with magnitude <= tol.
struct SubTolRun {
    int begin = 0;   // first sample index in the run
    int length = 0;  // number of samples
    bool plateau = false;  // length >= 3
};

struct ScanReport {
    bool any_generic = false;
    int generic_count = 0;
    int sample_count = 0;
    std::vector<SubTolRun> runs;
    int dip_count = 0;
    int plateau_count = 0;
    /// Samples where all order-k magnitudes (k <= r) stay at or below tol;
    /// -1 when the scan ran with r = 0.
    int r_nongeneric_count = -1;
    int r = 0;
    double tol = kDefaultTol;
    /// Every report is window-relative; this string states the window.
    std::string window_note;
};

struct ScanResult {
    geometry::GeodesicTrace trace;
    ScanReport report;
};

/// Integrates the geodesic and annotates every sample with the order-0
/// genericity magnitude; classifies sub-tol intervals into isolated dips
/// (<= 2 samples) and plateaus (>= 3 consecutive samples, a discreteness
/// violation at this resolution). With r >= 1 additionally counts samples
/// that are r-nongeneric.
ScanResult scan_geodesic(const expr::Chart& chart, const geometry::TangentVector& X0, double t_end,
                         double step, int r = 0, double tol = kDefaultTol);

}  // namespace genericity
}  // namespace gencond
