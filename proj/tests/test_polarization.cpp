#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resobem/polarization.hpp"

using namespace resobem;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("zero contrast short-circuits to the area tensor") {
    auto g = build_grid(ParametricCurve::circle(1.0), 64);
    auto p = compute_polarization(g, 2.0, 2.0);
    CHECK(std::abs(p.m(0, 0) - kPi) < 1e-12);
    CHECK(std::abs(p.m(1, 1) - kPi) < 1e-12);
    CHECK(p.m(0, 1) == 0.0);
}

TEST_CASE("unit disk closed form 2 pi tr / (gamma + tr)") {
    auto g = build_grid(ParametricCurve::circle(1.0), 128);
    auto p = compute_polarization(g, 1.0, 3.0);
    CHECK(std::abs(p.m(0, 0) - 1.5 * kPi) < 1e-8);
    CHECK(std::abs(p.m(1, 1) - 1.5 * kPi) < 1e-8);
    CHECK(std::abs(p.m(0, 1)) < 1e-12);
    CHECK(p.quad_error < 1e-10); // includes the mean-zero density defect

    SUBCASE("monotonicity in the inclusion trace at fixed shape") {
        double prev = 0.0;
        for (double tr : {0.5, 1.5, 3.0, 6.0, 12.0}) {
            double val = compute_polarization(g, 1.0, tr).m(0, 0);
            CHECK(val > prev);
            CHECK(val == doctest::Approx(2.0 * kPi * tr / (1.0 + tr)).epsilon(1e-10));
            prev = val;
        }
    }
}

TEST_CASE("2:1 ellipse: anisotropic diagonal tensor") {
    // Depolarization-factor closed form (uniform interior gradient ansatz):
    // M_jj = |B| k / (1 + L_j (k - 1)), L_1 = b/(a+b), L_2 = a/(a+b).
    // For a = 2, b = 1, gamma = 1, tr = 5: M_11 = 2 pi 15/7, M_22 = 2 pi 15/11.
    auto g = build_grid(ParametricCurve::ellipse(2.0, 1.0), 128);
    auto p = compute_polarization(g, 1.0, 5.0);
    CHECK(std::abs(p.m(0, 0) - 2.0 * kPi * 15.0 / 7.0) < 1e-10);
    CHECK(std::abs(p.m(1, 1) - 2.0 * kPi * 15.0 / 11.0) < 1e-10);
    CHECK(p.m(0, 0) != p.m(1, 1));
    CHECK(std::abs(p.m(0, 1)) < 1e-12);

    SUBCASE("self-convergence under grid doubling") {
        auto g2 = build_grid(ParametricCurve::ellipse(2.0, 1.0), 256);
        auto p2 = compute_polarization(g2, 1.0, 5.0);
        CHECK((p.m - p2.m).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("rotation equivariance M(RB) = R M(B) R^T") {
        double th = kPi / 6.0;
        auto gr = build_grid(ParametricCurve::ellipse(2.0, 1.0).rotated(th), 128);
        auto pr = compute_polarization(gr, 1.0, 5.0);
        Mat2 r;
        r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        CHECK((pr.m - r * p.m * r.transpose()).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("shape scaling law M(sB) = s^2 M(B)") {
    auto g = build_grid(ParametricCurve::circle(1.0), 128);
    auto p = compute_polarization(g, 1.0, 3.0);
    CHECK((polarization_shape_scaling(p, 1.0).m - p.m).cwiseAbs().maxCoeff() == 0.0);

    auto scaled = polarization_shape_scaling(p, 2.0);
    CHECK(std::abs(scaled.m(0, 0) - 4.0 * 1.5 * kPi) < 1e-8);
    auto direct = compute_polarization(build_grid(ParametricCurve::circle(2.0), 128), 1.0, 3.0);
    CHECK((scaled.m - direct.m).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("symmetry and positive definiteness across contrasts") {
    auto g = build_grid(ParametricCurve::kite(), 128);
    for (double ratio : {0.1, 0.5, 2.0, 10.0}) {
        auto p = compute_polarization(g, 1.0, ratio);
        CHECK(std::abs(p.m(0, 1) - p.m(1, 0)) < 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (p.m + p.m.transpose()));
        CHECK(es.eigenvalues()(0) > 0.0);
    }
}

TEST_CASE("parameter validation") {
    auto g = build_grid(ParametricCurve::circle(1.0), 64);
    CHECK_THROWS_AS((void)compute_polarization(g, -1.0, 2.0), DomainError);
    CHECK_THROWS_AS((void)compute_polarization(g, 1.0, 0.0), DomainError);
    auto p = compute_polarization(g, 1.0, 3.0);
    CHECK_THROWS_AS((void)polarization_shape_scaling(p, 0.0), DomainError);
}
