#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "doctest.h"
#include "gencond/fibercheck.hpp"
#include "gencond/geometry.hpp"
#include "gencond/rng.hpp"
#include "gencond/tensor.hpp"

using namespace gencond;
using geometry::CausalClass;
using geometry::TangentVector;

namespace {

tensor::CurvTensor random_curv(int n, SplitMix64& rng) {
    std::vector<double> coords(static_cast<std::size_t>(tensor::curv_space_dim(n)));
    for (double& c : coords) c = rng.symmetric();
    return tensor::curv_from_coordinates(n, coords);
}

}  // namespace

TEST_SUITE("fibercheck") {

TEST_CASE("fiber matrix reaches full rank for every tested pair") {
    for (int n = 2; n <= 5; ++n)
        for (int r = 1; r <= 3; ++r) {
            fibercheck::DenseMatrix m = fibercheck::alpha_fiber_matrix(n, r);
            CHECK(m.rows == tensor::curv_space_dim(n));
            CHECK(m.cols == static_cast<int>(tensor::SymPairTensor::coordinate_count(n, r)));
            CHECK(fibercheck::matrix_rank(m) == tensor::curv_space_dim(n));
        }
}

TEST_CASE("right inverse reproduces every random curvature tensor") {
    SplitMix64 rng(41);
    const std::vector<std::pair<int, int>> pairs{{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {5, 1}};
    for (auto [n, r] : pairs) {
        for (int trial = 0; trial < 20; ++trial) {
            tensor::CurvTensor P = random_curv(n, rng);
            tensor::SymPairTensor Q = fibercheck::right_inverse(P, n, r);
            CHECK(Q.dim() == n);
            CHECK(Q.order() == r);
            tensor::CurvTensor A = fibercheck::alpha_apply(Q);
            A -= P;
            CHECK(A.max_abs() <= 1e-12 * std::max(1.0, P.max_abs()));
        }
    }
}

TEST_CASE("right inverse rejects tensors without the curvature symmetries") {
    tensor::CurvTensor bad(3);
    bad.at(0, 0, 1, 2) = 1.0;  // nonzero with equal first pair: not antisymmetric
    CHECK_THROWS_AS(fibercheck::right_inverse(bad, 3, 1), DomainError);
}

TEST_CASE("fiber map matches its closed formula") {
    SplitMix64 rng(43);
    const int n = 3, r = 2;
    std::vector<double> coords(
        static_cast<std::size_t>(tensor::SymPairTensor::coordinate_count(n, r)));
    for (double& c : coords) c = rng.symmetric();
    tensor::SymPairTensor Q = tensor::SymPairTensor::from_coordinates(n, r, coords);
    tensor::CurvTensor A = fibercheck::alpha_apply(Q);
    CHECK(tensor::riemann_symmetry_residual(A) <= 1e-13);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double want = 0.5 * (Q.at4_ones(a, d, b, c) + Q.at4_ones(b, c, a, d) -
                                         Q.at4_ones(a, c, b, d) - Q.at4_ones(b, d, a, c));
                    CHECK(A(a, b, c, d) == doctest::Approx(want).epsilon(1e-14));
                }
}

TEST_CASE("fiber matrix has no unreachable output direction") {
    fibercheck::DenseMatrix m = fibercheck::alpha_fiber_matrix(4, 1);
    for (int i = 0; i < m.rows; ++i) {
        double row_max = 0.0;
        for (int j = 0; j < m.cols; ++j) row_max = std::max(row_max, std::abs(m.at(i, j)));
        CHECK(row_max > 1e-8);
    }
}

TEST_CASE("pointwise rank of the complement pairing by causal class") {
    tensor::LorentzSym2 eta4 = tensor::LorentzSym2::verify(tensor::Sym2::minkowski(4));
    std::vector<double> origin4(4, 0.0);

    TangentVector Xt = TangentVector::classify(origin4, {1, 0, 0, 0}, eta4.value());
    fibercheck::FiberMapReport rt = fibercheck::c_map_rank(4, eta4, Xt, 1);
    CHECK(rt.rank == 6);
    CHECK(rt.expected_rank == 6);
    CHECK(rt.codim_computed == 6);
    CHECK(rt.codim_expected == fibercheck::codim_nongen(4, 1, fibercheck::FiberClass::NonNull));
    CHECK(rt.pass);

    TangentVector Xn = TangentVector::classify(origin4, {1, 1, 0, 0}, eta4.value());
    fibercheck::FiberMapReport rn = fibercheck::c_map_rank(4, eta4, Xn, 1);
    CHECK(rn.causal_class == fibercheck::FiberClass::Null);
    CHECK(rn.rank == 3);
    CHECK(rn.codim_computed == 4);
    CHECK(rn.codim_expected == fibercheck::codim_nongen(4, 1, fibercheck::FiberClass::Null));
    CHECK(rn.pass);

    tensor::LorentzSym2 eta3 = tensor::LorentzSym2::verify(tensor::Sym2::minkowski(3));
    std::vector<double> origin3(3, 0.0);
    TangentVector Xn3 = TangentVector::classify(origin3, {1, 1, 0}, eta3.value());
    CHECK(fibercheck::c_map_rank(3, eta3, Xn3, 1).rank == 1);
}

TEST_CASE("randomized codimension verification passes in every dimension") {
    for (int n : {3, 4, 5}) {
        std::vector<fibercheck::FiberMapReport> reports = fibercheck::verify_codim(n, 1, 20, 1);
        REQUIRE(reports.size() == 2);
        CHECK(reports[0].causal_class == fibercheck::FiberClass::NonNull);
        CHECK(reports[1].causal_class == fibercheck::FiberClass::Null);
        for (const auto& rep : reports) {
            CHECK(rep.pass);
            CHECK(rep.n == n);
            CHECK(rep.codim_computed == rep.codim_expected);
        }
    }
}

TEST_CASE("codimension formulas and their order-r growth") {
    CHECK(fibercheck::codim_nongen(4, 1, fibercheck::FiberClass::NonNull) == 6);
    CHECK(fibercheck::codim_nongen(4, 1, fibercheck::FiberClass::Null) == 4);
    CHECK(fibercheck::codim_nongen(5, 1, fibercheck::FiberClass::NonNull) == 10);
    for (int n : {3, 4, 5})
        for (int r : {1, 2, 3}) {
            CHECK(fibercheck::codim_nongen(n, r, fibercheck::FiberClass::NonNull) ==
                  r * n * (n - 1) / 2);
            CHECK(fibercheck::codim_nongen(n, r, fibercheck::FiberClass::Null) ==
                  r * (n - 1) * (n - 2) / 2 + 1);
        }
}

TEST_CASE("threshold order and the dimension comparison") {
    CHECK(fibercheck::r_threshold(3) == 6);
    CHECK(fibercheck::r_threshold(4) == 3);
    CHECK(fibercheck::r_threshold(5) == 2);
    CHECK(fibercheck::r_threshold(6) == 2);
    CHECK(fibercheck::r_threshold(7) == 1);
    CHECK_THROWS_AS(fibercheck::r_threshold(2), DomainError);

    fibercheck::DimCheckReport ok = fibercheck::dim_check(4, 3);
    CHECK(ok.pass);
    CHECK(ok.tangent_dim == 8);
    CHECK(ok.codim_non_null == 18);
    CHECK(ok.codim_null == 10);
    CHECK(fibercheck::dim_check(3, 6).pass);
    fibercheck::DimCheckReport low = fibercheck::dim_check(4, 2);
    CHECK_FALSE(low.pass);
    CHECK(low.pass_non_null);
    CHECK_FALSE(low.pass_null);

    for (int n = 3; n <= 6; ++n) {
        int rt = fibercheck::r_threshold(n);
        CHECK(fibercheck::dim_check(n, rt).pass);
        if (rt > 1) CHECK_FALSE(fibercheck::dim_check(n, rt - 1).pass);
    }
}

TEST_CASE("jet fiber dimensions") {
    CHECK(fibercheck::jet_fiber_dim(4, 0) == 10);
    CHECK(fibercheck::jet_fiber_dim(4, 1) == 50);
    CHECK(fibercheck::jet_fiber_dim(2, 2) == 18);
}

TEST_CASE("rank computation on known matrices") {
    fibercheck::DenseMatrix m = fibercheck::make_matrix(3, 3);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 2.0;
    m.at(2, 0) = 1.0;  // row 2 duplicates row 0
    CHECK(fibercheck::matrix_rank(m) == 2);
    CHECK(fibercheck::matrix_rank(fibercheck::make_matrix(4, 2)) == 0);
    m.at(2, 2) = 1e-12;  // far below the relative cutoff
    CHECK(fibercheck::matrix_rank(m) == 2);
    CHECK(fibercheck::matrix_rank(m, 1e-14) == 3);
}

TEST_CASE("sampled vectors land in the requested causal class") {
    SplitMix64 rng(23);
    for (int n : {2, 3, 4, 5})
        for (int trial = 0; trial < 10; ++trial) {
            tensor::LorentzSym2 cert = fibercheck::random_lorentz_metric(n, rng);
            const tensor::Sym2& g = cert.value();
            for (CausalClass cls :
                 {CausalClass::Timelike, CausalClass::Null, CausalClass::Spacelike}) {
                std::vector<double> v = fibercheck::sample_vector_of_class(g, cls, rng);
                double q = tensor::bilinear(g, v, v);
                double vmax = 0.0;
                for (double c : v) vmax = std::max(vmax, std::abs(c));
                REQUIRE(vmax > 0.0);
                if (cls == CausalClass::Null)
                    CHECK(std::abs(q) <= 1e-12 * g.max_abs() * vmax * vmax);
                else if (cls == CausalClass::Timelike)
                    CHECK(q < 0.0);
                else
                    CHECK(q > 0.0);
                std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
                CHECK(TangentVector::classify(origin, v, g).causal_class == cls);
            }
        }
}

TEST_CASE("surjectivity verification reports and passes") {
    fibercheck::SurjectivityReport rep = fibercheck::verify_surjectivity(4, 1, 100, 1);
    CHECK(rep.pass);
    CHECK(rep.rank == 20);
    CHECK(rep.expected_rank == 20);
    CHECK(rep.trials == 100);
    CHECK(rep.rows == 20);
    CHECK(rep.cols == 100);
    CHECK(rep.max_right_inverse_residual <= 1e-12);
    CHECK(fibercheck::verify_surjectivity(3, 2, 50, 9).pass);
}

TEST_CASE("argument guards") {
    CHECK_THROWS_AS(fibercheck::alpha_fiber_matrix(1, 1), DomainError);
    CHECK_THROWS_AS(fibercheck::alpha_fiber_matrix(4, 0), DomainError);
    CHECK_THROWS_AS(fibercheck::codim_nongen(4, 0, fibercheck::FiberClass::Null), DomainError);
    CHECK_THROWS_AS(fibercheck::dim_check(2, 1), DomainError);
    tensor::CurvTensor p2(2);
    CHECK_THROWS_AS(fibercheck::right_inverse(p2, 3, 1), DimensionError);
    CHECK_THROWS_AS(fibercheck::right_inverse(p2, 2, 0), DomainError);
}

}  // TEST_SUITE
