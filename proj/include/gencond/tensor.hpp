#pragma once

#include <utility>
#include <vector>

#include "gencond/errors.hpp"

namespace gencond {
namespace tensor {

/// Symmetric (0,2)-tensor value. Storage keeps the full matrix but the only
/// mutator writes both mirror entries, so symmetry is exact by construction.
class Sym2 {
public:
    explicit Sym2(int n);

    int dim() const { return n_; }
    double operator()(int i, int j) const { return m_[i * n_ + j]; }
    void set(int i, int j, double v) {
        m_[i * n_ + j] = v;
        m_[j * n_ + i] = v;
    }

    const std::vector<double>& data() const { return m_; }
    double max_abs() const;

    static Sym2 from_row_major(int n, const std::vector<double>& values, double symmetry_tol = 0.0);
    static Sym2 diagonal(const std::vector<double>& diag);
    static Sym2 minkowski(int n);

private:
    int n_;
    std::vector<double> m_;
};

/// g(x, y).
double bilinear(const Sym2& g, const std::vector<double>& x, const std::vector<double>& y);
/// Index lowering: (g x)_a.
std::vector<double> lower_index(const Sym2& g, const std::vector<double>& x);

/// A Sym2 together with a verified Lorentzian signature certificate:
/// exactly one negative eigenvalue and none within 1e-10 (relative to the
/// largest magnitude) of zero.
class LorentzSym2 {
public:
    static LorentzSym2 verify(const Sym2& g);

    const Sym2& value() const { return g_; }
    int dim() const { return g_.dim(); }
    /// Ascending eigenvalues recorded at verification time.
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

private:
    LorentzSym2(Sym2 g, std::vector<double> ev) : g_(std::move(g)), eigenvalues_(std::move(ev)) {}
    Sym2 g_;
    std::vector<double> eigenvalues_;
};

/// Dense (0,4)-tensor value. Candidate member of the space of algebraic
/// curvature tensors; the symmetry invariants are enforced by
/// riemann_symmetry_residual checks, not by packing.
class CurvTensor {
public:
    explicit CurvTensor(int n);

    int dim() const { return n_; }
    double operator()(int a, int b, int c, int d) const {
        return t_[((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d];
    }
    double& at(int a, int b, int c, int d) {
        return t_[((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d];
    }

    const std::vector<double>& data() const { return t_; }
    std::vector<double>& data() { return t_; }
    double max_abs() const;

    CurvTensor& operator+=(const CurvTensor& rhs);
    CurvTensor& operator-=(const CurvTensor& rhs);
    CurvTensor& operator*=(double s);

private:
    int n_;
    std::vector<double> t_;
};

double frobenius_dot(const CurvTensor& a, const CurvTensor& b);

/// Kulkarni-Nomizu product of symmetric 2-tensors:
/// (h ^o k)(x,y,u,v) = h(x,u)k(y,v) + h(y,v)k(x,u) - h(x,v)k(y,u) - h(y,u)k(x,v).
CurvTensor kulkarni_nomizu(const Sym2& h, const Sym2& k);

/// Worst violation of the two antisymmetries and the first Bianchi
/// identity, max-norm, normalized by max(max |T|, scale_floor) (0 when
/// both vanish). The floor lets callers rate a tensor that is zero up to
/// rounding: pass the magnitude the computation worked at, so noise is not
/// divided by noise.
double riemann_symmetry_residual(const CurvTensor& T, double scale_floor = 0.0);

/// Dimension of the space of algebraic curvature tensors: n^2(n^2-1)/12.
int curv_space_dim(int n);

/// Orthonormal basis of the algebraic curvature space, built by projecting
/// elementary tensors onto the symmetry class and keeping a maximal
/// independent subset. Cached per dimension; the returned reference stays
/// valid for the whole process.
const std::vector<CurvTensor>& curv_space_basis(int n);

/// Coordinates of T in curv_space_basis(n) (orthogonal projection).
std::vector<double> curv_coordinates(const CurvTensor& T);
CurvTensor curv_from_coordinates(int n, const std::vector<double>& coords);

/// (0, 3+r) tensor with index groups (a b | c i1 ... ir): symmetric under
/// the a,b swap and under any permutation of the trailing r+1 indices.
/// Dense storage of size n^(3+r); writes go through symmetrized placement.
class SymPairTensor {
public:
    SymPairTensor(int n, int r);

    int dim() const { return n_; }
    int order() const { return r_; }
    int rank() const { return 3 + r_; }

    double at(const std::vector<int>& idx) const { return data_[flat(idx)]; }
    const std::vector<double>& data() const { return data_; }
    double max_abs() const;

    /// Value at index (x, y | z, w, 1, ..., 1) with r-1 trailing ones: the
    /// lookup pattern used by the fiber map. Requires r >= 1.
    double at4_ones(int x, int y, int z, int w) const;

    /// Number of independent components: n(n+1)/2 * C(n+r, r+1).
    static long long coordinate_count(int n, int r);

    static SymPairTensor from_coordinates(int n, int r, const std::vector<double>& coords);
    std::vector<double> coordinates() const;

private:
    friend SymPairTensor sympair_tensor_from_dense(int n, int r, std::vector<double> dense);
    std::size_t flat(const std::vector<int>& idx) const;

    int n_;
    int r_;
    std::vector<double> data_;
};

/// Wrap a dense n^(3+r) array that already has the required symmetries.
SymPairTensor sympair_tensor_from_dense(int n, int r, std::vector<double> dense);

/// Unordered index pairs (a <= b) in lexicographic order.
const std::vector<std::pair<int, int>>& sym_pairs(int n);
/// Non-decreasing index tuples of the given size in lexicographic order.
const std::vector<std::vector<int>>& index_multisets(int n, int size);
int multiset_position(int n, const std::vector<int>& sorted_tuple);
int sym_pair_position(int n, int a, int b);

}  // namespace tensor
}  // namespace gencond
