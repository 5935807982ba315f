#include "gencond/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <string>

#include <Eigen/Dense>

namespace gencond {
namespace tensor {

namespace {

void require_dim(int n, const char* what) {
    if (n < 1) throw DimensionError(std::string(what) + ": dimension must be positive");
}

}  // namespace

Sym2::Sym2(int n) : n_(n), m_(static_cast<std::size_t>(n) * n, 0.0) {
    require_dim(n, "Sym2");
}

double Sym2::max_abs() const {
    double m = 0.0;
    for (double v : m_) m = std::max(m, std::abs(v));
    return m;
}

Sym2 Sym2::from_row_major(int n, const std::vector<double>& values, double symmetry_tol) {
    require_dim(n, "Sym2");
    if (values.size() != static_cast<std::size_t>(n) * n)
        throw DimensionError("Sym2: expected " + std::to_string(n * n) + " entries, got " +
                             std::to_string(values.size()));
    Sym2 g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double a = values[static_cast<std::size_t>(i) * n + j];
            double b = values[static_cast<std::size_t>(j) * n + i];
            if (std::abs(a - b) > symmetry_tol)
                throw DimensionError("Sym2: input matrix is not symmetric at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
            g.set(i, j, 0.5 * (a + b));
        }
    return g;
}

Sym2 Sym2::diagonal(const std::vector<double>& diag) {
    Sym2 g(static_cast<int>(diag.size()));
    for (int i = 0; i < g.dim(); ++i) g.set(i, i, diag[static_cast<std::size_t>(i)]);
    return g;
}

Sym2 Sym2::minkowski(int n) {
    std::vector<double> d(static_cast<std::size_t>(n), 1.0);
    d[0] = -1.0;
    return diagonal(d);
}

double bilinear(const Sym2& g, const std::vector<double>& x, const std::vector<double>& y) {
    int n = g.dim();
    if (x.size() != static_cast<std::size_t>(n) || y.size() != static_cast<std::size_t>(n))
        throw DimensionError("bilinear: vector length does not match tensor dimension");
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += g(i, j) * x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    return s;
}

std::vector<double> lower_index(const Sym2& g, const std::vector<double>& x) {
    int n = g.dim();
    if (x.size() != static_cast<std::size_t>(n))
        throw DimensionError("lower_index: vector length does not match tensor dimension");
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += g(i, j) * x[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

LorentzSym2 LorentzSym2::verify(const Sym2& g) {
    int n = g.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw SignatureError("signature check: eigenvalue computation failed");
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);

    double largest = 0.0;
    for (double v : ev) largest = std::max(largest, std::abs(v));
    if (largest == 0.0) throw SignatureError("signature check: matrix is zero");
    int negatives = 0;
    for (double v : ev) {
        if (std::abs(v) <= 1e-10 * largest)
            throw SignatureError("signature check: eigenvalue too close to zero (" +
                                 std::to_string(v) + ")");
        if (v < 0.0) ++negatives;
    }
    if (negatives != 1)
        throw SignatureError("signature check: expected exactly one negative eigenvalue, found " +
                             std::to_string(negatives));
    return LorentzSym2(g, std::move(ev));
}

CurvTensor::CurvTensor(int n) : n_(n) {
    require_dim(n, "CurvTensor");
    t_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
}

double CurvTensor::max_abs() const {
    double m = 0.0;
    for (double v : t_) m = std::max(m, std::abs(v));
    return m;
}

CurvTensor& CurvTensor::operator+=(const CurvTensor& rhs) {
    if (rhs.n_ != n_) throw DimensionError("CurvTensor: dimension mismatch");
    for (std::size_t i = 0; i < t_.size(); ++i) t_[i] += rhs.t_[i];
    return *this;
}

CurvTensor& CurvTensor::operator-=(const CurvTensor& rhs) {
    if (rhs.n_ != n_) throw DimensionError("CurvTensor: dimension mismatch");
    for (std::size_t i = 0; i < t_.size(); ++i) t_[i] -= rhs.t_[i];
    return *this;
}

CurvTensor& CurvTensor::operator*=(double s) {
    for (double& v : t_) v *= s;
    return *this;
}

double frobenius_dot(const CurvTensor& a, const CurvTensor& b) {
    if (a.dim() != b.dim()) throw DimensionError("frobenius_dot: dimension mismatch");
    double s = 0.0;
    const std::vector<double>& x = a.data();
    const std::vector<double>& y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

CurvTensor kulkarni_nomizu(const Sym2& h, const Sym2& k) {
    int n = h.dim();
    if (k.dim() != n) throw DimensionError("kulkarni_nomizu: dimension mismatch");
    CurvTensor out(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v)
                    out.at(x, y, u, v) = h(x, u) * k(y, v) + h(y, v) * k(x, u) -
                                         h(x, v) * k(y, u) - h(y, u) * k(x, v);
    return out;
}

double riemann_symmetry_residual(const CurvTensor& T, double scale_floor) {
    int n = T.dim();
    double scale = std::max(T.max_abs(), scale_floor);
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double v = T(a, b, c, d);
                    worst = std::max(worst, std::abs(v + T(b, a, c, d)));
                    worst = std::max(worst, std::abs(v + T(a, b, d, c)));
                    worst = std::max(worst, std::abs(v + T(a, c, d, b) + T(a, d, b, c)));
                }
    return worst / scale;
}

int curv_space_dim(int n) {
    require_dim(n, "curv_space_dim");
    return n * n * (n * n - 1) / 12;
}

namespace {

/// Orthogonal projection onto tensors antisymmetric in (a,b), antisymmetric
/// in (c,d), and symmetric under the pair swap.
CurvTensor project_pair_class(const CurvTensor& T) {
    int n = T.dim();
    CurvTensor out(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    out.at(a, b, c, d) =
                        (T(a, b, c, d) - T(b, a, c, d) - T(a, b, d, c) + T(b, a, d, c) +
                         T(c, d, a, b) - T(d, c, a, b) - T(c, d, b, a) + T(d, c, b, a)) /
                        8.0;
    return out;
}

/// Cyclic average over the last three slots. On the pair class this is the
/// orthogonal projection onto fully antisymmetric tensors, so subtracting it
/// enforces the first Bianchi identity exactly.
CurvTensor bianchi_part(const CurvTensor& T) {
    int n = T.dim();
    CurvTensor out(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    out.at(a, b, c, d) =
                        (T(a, b, c, d) + T(a, c, d, b) + T(a, d, b, c)) / 3.0;
    return out;
}

std::vector<CurvTensor> build_curv_basis(int n) {
    int target = curv_space_dim(n);
    std::vector<CurvTensor> basis;
    basis.reserve(static_cast<std::size_t>(target));
    for (int a = 0; a < n && static_cast<int>(basis.size()) < target; ++a)
        for (int b = 0; b < n && static_cast<int>(basis.size()) < target; ++b) {
            if (a == b) continue;
            for (int c = 0; c < n && static_cast<int>(basis.size()) < target; ++c)
                for (int d = 0; d < n && static_cast<int>(basis.size()) < target; ++d) {
                    if (c == d) continue;
                    CurvTensor e(n);
                    e.at(a, b, c, d) = 1.0;
                    CurvTensor p = project_pair_class(e);
                    p -= bianchi_part(p);
                    // Two orthogonalization passes keep the basis orthonormal
                    // to machine precision.
                    for (int pass = 0; pass < 2; ++pass)
                        for (const CurvTensor& q : basis) {
                            double c0 = frobenius_dot(q, p);
                            CurvTensor scaled = q;
                            scaled *= c0;
                            p -= scaled;
                        }
                    double norm = std::sqrt(frobenius_dot(p, p));
                    if (norm > 1e-6) {
                        p *= 1.0 / norm;
                        basis.push_back(std::move(p));
                    }
                }
        }
    if (static_cast<int>(basis.size()) != target)
        throw Error("curv_space_basis: found " + std::to_string(basis.size()) +
                    " independent tensors, expected " + std::to_string(target));
    for (const CurvTensor& q : basis)
        if (riemann_symmetry_residual(q) > 1e-13)
            throw Error("curv_space_basis: basis element violates curvature symmetries");
    return basis;
}

}  // namespace

const std::vector<CurvTensor>& curv_space_basis(int n) {
    require_dim(n, "curv_space_basis");
    static std::mutex mutex;
    static std::map<int, std::vector<CurvTensor>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_curv_basis(n)).first;
    return it->second;
}

std::vector<double> curv_coordinates(const CurvTensor& T) {
    const std::vector<CurvTensor>& basis = curv_space_basis(T.dim());
    std::vector<double> coords;
    coords.reserve(basis.size());
    for (const CurvTensor& q : basis) coords.push_back(frobenius_dot(q, T));
    return coords;
}

CurvTensor curv_from_coordinates(int n, const std::vector<double>& coords) {
    const std::vector<CurvTensor>& basis = curv_space_basis(n);
    if (coords.size() != basis.size())
        throw DimensionError("curv_from_coordinates: expected " + std::to_string(basis.size()) +
                             " coordinates, got " + std::to_string(coords.size()));
    CurvTensor out(n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        CurvTensor scaled = basis[i];
        scaled *= coords[i];
        out += scaled;
    }
    return out;
}

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct MultisetTable {
    std::vector<std::vector<int>> tuples;
    std::map<std::vector<int>, int> position;
};

const MultisetTable& multiset_table(int n, int size) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, MultisetTable> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(n, size);
    auto it = cache.find(key);
    if (it == cache.end()) {
        MultisetTable table;
        std::vector<int> current(static_cast<std::size_t>(size), 0);
        // Lexicographic enumeration of non-decreasing tuples.
        auto recurse = [&](auto&& self, int slot, int low) -> void {
            if (slot == size) {
                table.position.emplace(current, static_cast<int>(table.tuples.size()));
                table.tuples.push_back(current);
                return;
            }
            for (int v = low; v < n; ++v) {
                current[static_cast<std::size_t>(slot)] = v;
                self(self, slot + 1, v);
            }
        };
        recurse(recurse, 0, 0);
        it = cache.emplace(key, std::move(table)).first;
    }
    return it->second;
}

}  // namespace

const std::vector<std::pair<int, int>>& sym_pairs(int n) {
    static std::mutex mutex;
    static std::map<int, std::vector<std::pair<int, int>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) pairs.emplace_back(a, b);
        it = cache.emplace(n, std::move(pairs)).first;
    }
    return it->second;
}

const std::vector<std::vector<int>>& index_multisets(int n, int size) {
    return multiset_table(n, size).tuples;
}

int multiset_position(int n, const std::vector<int>& sorted_tuple) {
    const MultisetTable& table = multiset_table(n, static_cast<int>(sorted_tuple.size()));
    auto it = table.position.find(sorted_tuple);
    if (it == table.position.end())
        throw DimensionError("multiset_position: tuple is not sorted or out of range");
    return it->second;
}

int sym_pair_position(int n, int a, int b) {
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= n) throw DimensionError("sym_pair_position: index out of range");
    // Pairs (a, a..n-1) start after sum of the previous rows' lengths.
    return a * n - a * (a - 1) / 2 + (b - a);
}

SymPairTensor::SymPairTensor(int n, int r) : n_(n), r_(r) {
    require_dim(n, "SymPairTensor");
    if (r < 0) throw DimensionError("SymPairTensor: derivative count must be non-negative");
    std::size_t size = 1;
    for (int i = 0; i < 3 + r; ++i) size *= static_cast<std::size_t>(n);
    data_.assign(size, 0.0);
}

std::size_t SymPairTensor::flat(const std::vector<int>& idx) const {
    if (idx.size() != static_cast<std::size_t>(3 + r_))
        throw DimensionError("SymPairTensor: expected " + std::to_string(3 + r_) +
                             " indices, got " + std::to_string(idx.size()));
    std::size_t f = 0;
    for (int v : idx) {
        if (v < 0 || v >= n_) throw DimensionError("SymPairTensor: index out of range");
        f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    }
    return f;
}

double SymPairTensor::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double SymPairTensor::at4_ones(int x, int y, int z, int w) const {
    if (r_ < 1) throw DimensionError("SymPairTensor::at4_ones: needs at least one trailing index");
    if (n_ < 2) throw DimensionError("SymPairTensor::at4_ones: index 1 needs dimension >= 2");
    std::vector<int> idx(static_cast<std::size_t>(3 + r_), 1);
    idx[0] = x;
    idx[1] = y;
    idx[2] = z;
    idx[3] = w;
    return data_[flat(idx)];
}

long long SymPairTensor::coordinate_count(int n, int r) {
    return static_cast<long long>(n) * (n + 1) / 2 * binomial(n + r, r + 1);
}

SymPairTensor SymPairTensor::from_coordinates(int n, int r, const std::vector<double>& coords) {
    long long expected = coordinate_count(n, r);
    if (coords.size() != static_cast<std::size_t>(expected))
        throw DimensionError("SymPairTensor: expected " + std::to_string(expected) +
                             " coordinates, got " + std::to_string(coords.size()));
    SymPairTensor q(n, r);
    long long tail_count = binomial(n + r, r + 1);
    std::vector<int> idx(static_cast<std::size_t>(3 + r), 0);
    std::vector<int> tail(static_cast<std::size_t>(r + 1), 0);
    std::size_t total = q.data_.size();
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rest = f;
        for (int slot = 3 + r - 1; slot >= 0; --slot) {
            idx[static_cast<std::size_t>(slot)] = static_cast<int>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
        }
        int pair = sym_pair_position(n, idx[0], idx[1]);
        for (int j = 0; j <= r; ++j) tail[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(2 + j)];
        std::sort(tail.begin(), tail.end());
        int tail_pos = multiset_position(n, tail);
        q.data_[f] = coords[static_cast<std::size_t>(pair) * static_cast<std::size_t>(tail_count) +
                            static_cast<std::size_t>(tail_pos)];
    }
    return q;
}

std::vector<double> SymPairTensor::coordinates() const {
    const std::vector<std::pair<int, int>>& pairs = sym_pairs(n_);
    const std::vector<std::vector<int>>& tails = index_multisets(n_, r_ + 1);
    std::vector<double> coords;
    coords.reserve(pairs.size() * tails.size());
    std::vector<int> idx(static_cast<std::size_t>(3 + r_));
    for (const std::pair<int, int>& p : pairs)
        for (const std::vector<int>& tail : tails) {
            idx[0] = p.first;
            idx[1] = p.second;
            for (int j = 0; j <= r_; ++j) idx[static_cast<std::size_t>(2 + j)] = tail[static_cast<std::size_t>(j)];
            coords.push_back(data_[flat(idx)]);
        }
    return coords;
}

SymPairTensor sympair_tensor_from_dense(int n, int r, std::vector<double> dense) {
    SymPairTensor q(n, r);
    if (dense.size() != q.data_.size())
        throw DimensionError("sympair_tensor_from_dense: expected " + std::to_string(q.data_.size()) +
                             " entries, got " + std::to_string(dense.size()));
    q.data_ = std::move(dense);
    return q;
}

}  // namespace tensor
}  // namespace gencond
