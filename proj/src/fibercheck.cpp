#include "gencond/fibercheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "gencond/genericity.hpp"

namespace gencond {
namespace fibercheck {

DenseMatrix make_matrix(int rows, int cols) {
    DenseMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.a.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    return m;
}

int matrix_rank(const DenseMatrix& m, double rel_tol) {
    if (m.rows == 0 || m.cols == 0) return 0;
    Eigen::MatrixXd em(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) em(i, j) = m.at(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(em);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double cutoff = rel_tol * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

tensor::CurvTensor alpha_apply(const tensor::SymPairTensor& Q) {
    int n = Q.dim();
    if (Q.order() < 1) throw DomainError("alpha_apply: tensor needs at least one trailing index");
    tensor::CurvTensor out(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    out.at(a, b, c, d) = 0.5 * (Q.at4_ones(a, d, b, c) + Q.at4_ones(b, c, a, d) -
                                                Q.at4_ones(a, c, b, d) - Q.at4_ones(b, d, a, c));
    return out;
}

DenseMatrix alpha_fiber_matrix(int n, int r) {
    if (n < 2) throw DomainError("alpha_fiber_matrix: n must be >= 2");
    if (r < 1) throw DomainError("alpha_fiber_matrix: r must be >= 1");
    const std::vector<std::pair<int, int>>& pairs = tensor::sym_pairs(n);
    const std::vector<std::vector<int>>& tails = tensor::index_multisets(n, r + 1);
    int tail_count = static_cast<int>(tails.size());
    int cols = static_cast<int>(pairs.size()) * tail_count;
    int dim = tensor::curv_space_dim(n);

    // Column position of the coordinate hit by index pattern
    // (x, y | z, w, 1...1): tail_of[z][w] caches the trailing multiset.
    std::vector<int> tail_of(static_cast<std::size_t>(n) * n);
    {
        std::vector<int> tuple;
        for (int z = 0; z < n; ++z)
            for (int w = 0; w < n; ++w) {
                tuple.assign(static_cast<std::size_t>(r) + 1, 1);
                tuple[0] = z;
                tuple[1] = w;
                std::sort(tuple.begin(), tuple.end());
                tail_of[static_cast<std::size_t>(z) * n + w] = tensor::multiset_position(n, tuple);
            }
    }
    auto column_of = [&](int x, int y, int z, int w) {
        return tensor::sym_pair_position(n, x, y) * tail_count +
               tail_of[static_cast<std::size_t>(z) * n + w];
    };

    // Scatter alpha into the elementary n^4 row space, then project the rows
    // onto the curvature basis.
    std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
    std::vector<double> elementary(n4 * static_cast<std::size_t>(cols), 0.0);
    std::size_t f = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d, ++f) {
                    double* row = elementary.data() + f * static_cast<std::size_t>(cols);
                    row[column_of(a, d, b, c)] += 0.5;
                    row[column_of(b, c, a, d)] += 0.5;
                    row[column_of(a, c, b, d)] -= 0.5;
                    row[column_of(b, d, a, c)] -= 0.5;
                }

    const std::vector<tensor::CurvTensor>& basis = tensor::curv_space_basis(n);
    DenseMatrix m = make_matrix(dim, cols);
    for (int i = 0; i < dim; ++i) {
        const std::vector<double>& bi = basis[static_cast<std::size_t>(i)].data();
        double* out_row = m.a.data() + static_cast<std::size_t>(i) * cols;
        for (std::size_t g = 0; g < n4; ++g) {
            double w = bi[g];
            if (w == 0.0) continue;
            const double* row = elementary.data() + g * static_cast<std::size_t>(cols);
            for (int j = 0; j < cols; ++j) out_row[j] += w * row[j];
        }
    }
    return m;
}

tensor::SymPairTensor right_inverse(const tensor::CurvTensor& P, int n, int r) {
    if (P.dim() != n) throw DimensionError("right_inverse: dimension mismatch");
    if (r < 1) throw DomainError("right_inverse: r must be >= 1");
    double res = tensor::riemann_symmetry_residual(P);
    if (res > 1e-8)
        throw DomainError("right_inverse: input symmetry residual " + std::to_string(res) +
                          " exceeds 1e-8");
    const std::vector<std::pair<int, int>>& pairs = tensor::sym_pairs(n);
    const std::vector<std::vector<int>>& tails = tensor::index_multisets(n, r + 1);
    std::vector<double> coords;
    coords.reserve(pairs.size() * tails.size());
    std::vector<int> leftover;
    for (const std::pair<int, int>& p : pairs)
        for (const std::vector<int>& tail : tails) {
            int ones = static_cast<int>(std::count(tail.begin(), tail.end(), 1));
            if (ones < r - 1) {
                coords.push_back(0.0);
                continue;
            }
            // Strip r-1 ones; the two survivors are the c, d slots.
            leftover.clear();
            int to_remove = r - 1;
            for (int v : tail) {
                if (v == 1 && to_remove > 0) {
                    --to_remove;
                    continue;
                }
                leftover.push_back(v);
            }
            int c = leftover[0];
            int d = leftover[1];
            coords.push_back(-(P(p.first, c, p.second, d) + P(p.first, d, p.second, c)) / 3.0);
        }
    return tensor::SymPairTensor::from_coordinates(n, r, coords);
}

const char* fiber_class_name(FiberClass c) {
    return c == FiberClass::Null ? "null" : "non-null";
}

FiberClass fiber_class_of(geometry::CausalClass c) {
    return c == geometry::CausalClass::Null ? FiberClass::Null : FiberClass::NonNull;
}

namespace {

/// Basis of the orthogonal complement modulo X: representatives with the
/// dominant X-component eliminated, pruned to an independent set.
std::vector<std::vector<double>> null_quotient_basis(const tensor::Sym2& g,
                                                     const std::vector<double>& X) {
    int n = g.dim();
    std::vector<std::vector<double>> perp = genericity::orthogonal_complement_basis(g, X);
    int mu = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(X[static_cast<std::size_t>(i)]) > std::abs(X[static_cast<std::size_t>(mu)])) mu = i;
    for (std::vector<double>& a : perp) {
        double s = a[static_cast<std::size_t>(mu)] / X[static_cast<std::size_t>(mu)];
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] -= s * X[static_cast<std::size_t>(i)];
    }
    // Greedy Gram-Schmidt; the quotient has dimension n-2.
    std::vector<std::vector<double>> kept;
    for (const std::vector<double>& a : perp) {
        std::vector<double> v = a;
        for (const std::vector<double>& k : kept) {
            double num = 0.0, den = 0.0;
            for (int i = 0; i < n; ++i) {
                num += v[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
                den += k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
            }
            double s = num / den;
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= s * k[static_cast<std::size_t>(i)];
        }
        double norm = 0.0, orig = 0.0;
        for (int i = 0; i < n; ++i) {
            norm += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            orig += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
        }
        if (orig > 0.0 && std::sqrt(norm) > 1e-10 * std::sqrt(orig) && norm > 0.0) kept.push_back(std::move(v));
    }
    if (static_cast<int>(kept.size()) != n - 2)
        throw Error("null quotient basis: expected " + std::to_string(n - 2) +
                    " independent vectors, found " + std::to_string(kept.size()));
    return kept;
}

}  // namespace

FiberMapReport c_map_rank(int n, const tensor::LorentzSym2& g, const geometry::TangentVector& X,
                          int r) {
    if (g.dim() != n || static_cast<int>(X.components.size()) != n)
        throw DimensionError("c_map_rank: dimension mismatch");
    if (r < 1) throw DomainError("c_map_rank: r must be >= 1");
    FiberMapReport rep;
    rep.n = n;
    rep.r = r;
    rep.causal_class = fiber_class_of(X.causal_class);

    std::vector<std::vector<double>> basis =
        rep.causal_class == FiberClass::Null
            ? null_quotient_basis(g.value(), X.components)
            : genericity::orthogonal_complement_basis(g.value(), X.components);
    int s = static_cast<int>(basis.size());

    const std::vector<tensor::CurvTensor>& curv = tensor::curv_space_basis(n);
    int cols = static_cast<int>(curv.size());
    rep.rows = s * (s + 1) / 2;
    rep.cols = cols;
    DenseMatrix m = make_matrix(rep.rows, rep.cols);
    for (int k = 0; k < cols; ++k) {
        // M_ab = Q_k(e_a, X, e_b, X), then rows are M(A_i, A_j) for i <= j.
        const tensor::CurvTensor& Q = curv[static_cast<std::size_t>(k)];
        tensor::Sym2 M(n);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double sum = 0.0;
                for (int e = 0; e < n; ++e)
                    for (int f2 = 0; f2 < n; ++f2)
                        sum += Q(a, e, b, f2) * X.components[static_cast<std::size_t>(e)] *
                               X.components[static_cast<std::size_t>(f2)];
                M.set(a, b, sum);
            }
        int row = 0;
        for (int i = 0; i < s; ++i)
            for (int j = i; j < s; ++j, ++row) {
                double sum = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        sum += basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] *
                               basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)] * M(a, b);
                m.at(row, k) = sum;
            }
    }
    rep.rank = matrix_rank(m);
    rep.expected_rank = rep.causal_class == FiberClass::Null ? (n - 1) * (n - 2) / 2 : n * (n - 1) / 2;
    rep.codim_computed = r * rep.rank + (rep.causal_class == FiberClass::Null ? 1 : 0);
    rep.codim_expected = codim_nongen(n, r, rep.causal_class);
    rep.pass = rep.rank == rep.expected_rank && rep.codim_computed == rep.codim_expected;
    return rep;
}

int codim_nongen(int n, int r, FiberClass cls) {
    if (n < 2) throw DomainError("codim_nongen: n must be >= 2");
    if (r < 1) throw DomainError("codim_nongen: r must be >= 1");
    if (cls == FiberClass::Null) return r * (n - 1) * (n - 2) / 2 + 1;
    return r * n * (n - 1) / 2;
}

int r_threshold(int n) {
    if (n < 3) throw DomainError("r_threshold: n must be >= 3");
    int num = 4 * n - 2;
    int den = (n - 1) * (n - 2);
    return num / den + 1;
}

DimCheckReport dim_check(int n, int r) {
    if (n < 3) throw DomainError("dim_check: n must be >= 3");
    if (r < 1) throw DomainError("dim_check: r must be >= 1");
    DimCheckReport rep;
    rep.n = n;
    rep.r = r;
    rep.tangent_dim = 2 * n;
    rep.codim_non_null = codim_nongen(n, r, FiberClass::NonNull);
    rep.codim_null = codim_nongen(n, r, FiberClass::Null);
    rep.pass_non_null = rep.tangent_dim < rep.codim_non_null;
    rep.pass_null = rep.tangent_dim < rep.codim_null;
    rep.pass = rep.pass_non_null && rep.pass_null;
    if (r >= r_threshold(n) && !rep.pass)
        throw Error("dim_check: threshold arithmetic is inconsistent");
    return rep;
}

long long jet_fiber_dim(int n, int k) {
    if (n < 1) throw DomainError("jet_fiber_dim: n must be >= 1");
    if (k < 0) throw DomainError("jet_fiber_dim: k must be >= 0");
    auto binom = [](long long a, long long b) {
        if (b < 0 || b > a) return 0LL;
        long long r = 1;
        for (long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    long long coeffs = 0;
    for (int j = 0; j <= k; ++j) coeffs += binom(n + j - 1, j);
    return static_cast<long long>(n) * (n + 1) / 2 * coeffs;
}

SurjectivityReport verify_surjectivity(int n, int r, int trials, std::uint64_t seed) {
    SurjectivityReport rep;
    rep.n = n;
    rep.r = r;
    rep.trials = trials;
    DenseMatrix m = alpha_fiber_matrix(n, r);
    rep.rows = m.rows;
    rep.cols = m.cols;
    rep.rank = matrix_rank(m);
    rep.expected_rank = tensor::curv_space_dim(n);

    SplitMix64 rng(seed);
    int dim = tensor::curv_space_dim(n);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> coords(static_cast<std::size_t>(dim));
        for (double& c : coords) c = rng.symmetric();
        tensor::CurvTensor P = tensor::curv_from_coordinates(n, coords);
        tensor::SymPairTensor Q = right_inverse(P, n, r);
        tensor::CurvTensor A = alpha_apply(Q);
        A -= P;
        double pmax = P.max_abs();
        if (pmax > 0.0)
            rep.max_right_inverse_residual =
                std::max(rep.max_right_inverse_residual, A.max_abs() / pmax);
    }
    rep.pass = rep.rank == rep.expected_rank && rep.max_right_inverse_residual <= 1e-12;
    return rep;
}

tensor::LorentzSym2 random_lorentz_metric(int n, SplitMix64& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                A(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * rng.symmetric();
        Eigen::MatrixXd eta = Eigen::MatrixXd::Identity(n, n);
        eta(0, 0) = -1.0;
        Eigen::MatrixXd gm = A.transpose() * eta * A;
        tensor::Sym2 g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) g.set(i, j, 0.5 * (gm(i, j) + gm(j, i)));
        try {
            return tensor::LorentzSym2::verify(g);
        } catch (const SignatureError&) {
            continue;  // nearly singular draw
        }
    }
    throw Error("random_lorentz_metric: no well-conditioned draw in 100 attempts");
}

std::vector<double> sample_vector_of_class(const tensor::Sym2& g, geometry::CausalClass cls,
                                           SplitMix64& rng) {
    int n = g.dim();
    if (n < 2) throw DimensionError("sample_vector_of_class: needs dimension >= 2");
    Eigen::MatrixXd gm(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gm(i, j) = g(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gm);
    if (solver.info() != Eigen::Success)
        throw SignatureError("sample_vector_of_class: eigenvalue computation failed");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    if (!(ev(0) < 0.0 && ev(1) > 0.0))
        throw SignatureError("sample_vector_of_class: metric is not Lorentzian");

    // Orthonormal frame: E0 timelike (g(E0,E0) = -1), E1..E_{n-1} unit
    // spacelike.
    Eigen::VectorXd e0 = solver.eigenvectors().col(0) / std::sqrt(-ev(0));
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    while (true) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        double norm2 = 0.0;
        for (int i = 1; i < n; ++i) {
            double c = rng.symmetric();
            w += c * (solver.eigenvectors().col(i) / std::sqrt(ev(i)));
            norm2 += c * c;
        }
        // norm2 is the g-norm of w since the frame directions are
        // g-orthonormal.
        if (norm2 > 1e-4) {
            u = w / std::sqrt(norm2);
            break;
        }
    }

    double s = rng.uniform(0.0, 1.5);
    Eigen::VectorXd x;
    switch (cls) {
        case geometry::CausalClass::Timelike: x = std::cosh(s) * e0 + std::sinh(s) * u; break;
        case geometry::CausalClass::Null: x = e0 + u; break;
        case geometry::CausalClass::Spacelike: x = std::sinh(s) * e0 + std::cosh(s) * u; break;
        default: throw DomainError("sample_vector_of_class: unknown class");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = x(i);
    return out;
}

std::vector<FiberMapReport> verify_codim(int n, int r, int trials, std::uint64_t seed) {
    std::vector<FiberMapReport> out;
    SplitMix64 rng(seed);
    std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
    for (FiberClass cls : {FiberClass::NonNull, FiberClass::Null}) {
        FiberMapReport agg;
        bool first = true;
        for (int t = 0; t < trials; ++t) {
            tensor::LorentzSym2 g = random_lorentz_metric(n, rng);
            geometry::CausalClass want =
                cls == FiberClass::Null
                    ? geometry::CausalClass::Null
                    : (t % 2 == 0 ? geometry::CausalClass::Timelike : geometry::CausalClass::Spacelike);
            std::vector<double> xc = sample_vector_of_class(g.value(), want, rng);
            geometry::TangentVector X = geometry::TangentVector::classify(origin, xc, g.value());
            if (X.causal_class != want)
                throw Error("verify_codim: constructed vector landed in the wrong causal class");
            FiberMapReport rep = c_map_rank(n, g, X, r);
            if (first) {
                agg = rep;
                first = false;
            } else {
                agg.pass = agg.pass && rep.pass && rep.rank == agg.rank;
            }
        }
        out.push_back(agg);
    }
    return out;
}

}  // namespace fibercheck
}  // namespace gencond
