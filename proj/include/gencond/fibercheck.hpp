#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gencond/geometry.hpp"
#include "gencond/rng.hpp"
#include "gencond/tensor.hpp"

namespace gencond {
namespace fibercheck {

/// Row-major dense matrix, just enough for rank reports.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
};

DenseMatrix make_matrix(int rows, int cols);

/// Singular values above rel_tol times the largest.
int matrix_rank(const DenseMatrix& m, double rel_tol = 1e-8);

/// The fiber map takes a symmetric-pair tensor Q (the (1+r)-derivative data
/// of a metric component, distinguished direction fixed to coordinate 1) to
/// the curvature-shaped tensor
///   alpha(Q)_abcd = (1/2)(Q_{adbc1..1} + Q_{bcad1..1} - Q_{acbd1..1} - Q_{bdac1..1}),
/// with r-1 trailing ones. The output always satisfies the curvature
/// symmetries.
tensor::CurvTensor alpha_apply(const tensor::SymPairTensor& Q);

/// Matrix of alpha in the canonical SymPairTensor coordinates (columns)
/// and the orthonormal curvature basis (rows). Requires n >= 2, r >= 1.
DenseMatrix alpha_fiber_matrix(int n, int r);

/// Explicit right inverse: places Q_{abcd1..1} = -(1/3)(P_acbd + P_adbc) on
/// the coordinates whose trailing multiset contains at least r-1 ones, zero
/// elsewhere. Satisfies alpha_apply(right_inverse(P)) = P for P with the
/// curvature symmetries. P with symmetry residual above 1e-8 is rejected.
tensor::SymPairTensor right_inverse(const tensor::CurvTensor& P, int n, int r);

enum class FiberClass { NonNull, Null };
const char* fiber_class_name(FiberClass c);
FiberClass fiber_class_of(geometry::CausalClass c);

struct FiberMapReport {
    int n = 0;
    int r = 1;
    FiberClass causal_class = FiberClass::NonNull;
    int rows = 0;
    int cols = 0;
    int rank = 0;
    int expected_rank = 0;
    int codim_computed = 0;
    int codim_expected = 0;
    bool pass = false;
};

/// Rank of the map R -> (A_i, A_j) -> R(A_i, X, A_j, X) over the curvature
/// basis, where {A_i} is a basis of the g-orthogonal complement of X
/// (non-null X) or of that complement modulo X itself (null X). The rank is
/// a property of the causal class alone; r only scales the codimension
/// bookkeeping in the report.
FiberMapReport c_map_rank(int n, const tensor::LorentzSym2& g, const geometry::TangentVector& X,
                          int r = 1);

/// rn(n-1)/2 for the non-null class, r(n-1)(n-2)/2 + 1 for the null class.
int codim_nongen(int n, int r, FiberClass cls);

/// Smallest integer r with r(n-1)(n-2) > 4n-2. Requires n >= 3.
int r_threshold(int n);

struct DimCheckReport {
    int n = 0;
    int r = 0;
    int tangent_dim = 0;  // dim of the punctured tangent bundle, 2n
    int codim_non_null = 0;
    int codim_null = 0;
    bool pass_non_null = false;
    bool pass_null = false;
    bool pass = false;
};

/// Compares 2n against both codimensions; pass needs both strict
/// inequalities. Guaranteed to pass for r >= r_threshold(n).
DimCheckReport dim_check(int n, int r);

/// Fiber dimension of the k-jet space of metrics:
/// (n(n+1)/2) * sum_{j=0}^{k} C(n+j-1, j).
long long jet_fiber_dim(int n, int k);

struct SurjectivityReport {
    int n = 0;
    int r = 0;
    int rows = 0;
    int cols = 0;
    int rank = 0;
    int expected_rank = 0;
    int trials = 0;
    double max_right_inverse_residual = 0.0;  // relative to max|P|
    bool pass = false;
};

/// Rank check of alpha_fiber_matrix plus the right-inverse identity on
/// `trials` random curvature tensors (pass thresholds: rank equality and
/// residual <= 1e-12).
SurjectivityReport verify_surjectivity(int n, int r, int trials = 100, std::uint64_t seed = 1);

/// Random Lorentzian metric g = A^T diag(-1,1,...,1) A with a
/// well-conditioned random A; verified by the signature check.
tensor::LorentzSym2 random_lorentz_metric(int n, SplitMix64& rng);

/// Vector of the requested causal class built in an orthonormal eigenframe
/// of g; null vectors are exact up to rounding.
std::vector<double> sample_vector_of_class(const tensor::Sym2& g, geometry::CausalClass cls,
                                           SplitMix64& rng);

/// c_map_rank over `trials` random (g, X) per causal class; every draw must
/// reproduce the expected rank.
std::vector<FiberMapReport> verify_codim(int n, int r, int trials = 20, std::uint64_t seed = 1);

}  // namespace fibercheck
}  // namespace gencond
