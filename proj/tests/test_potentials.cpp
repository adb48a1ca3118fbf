#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "resobem/potentials.hpp"

using namespace resobem;

namespace {
constexpr double pi = std::numbers::pi;

Eigen::VectorXcd fourier_mode(const BoundaryGrid& g, int m) {
    Eigen::VectorXcd f(g.n);
    for (int k = 0; k < g.n; ++k) f(k) = std::exp(Cplx(0.0, m * g.t[k]));
    return f;
}
} // namespace

TEST_CASE("Laplace single layer on the unit circle: Fourier diagonalization") {
    auto g = build_grid(ParametricCurve::circle(1.0), 64);
    auto s = assemble_single_layer(g, g, Kernel::laplace(1.0));

    // constant density is in the kernel of the log potential on the unit circle
    Eigen::VectorXcd one = Eigen::VectorXcd::Ones(g.n);
    CHECK((s.mat * one).cwiseAbs().maxCoeff() < 1e-12);

    // cos(m t) -> (1/2m) cos(m t)
    for (int m = 1; m <= 4; ++m) {
        Eigen::VectorXcd f(g.n);
        for (int k = 0; k < g.n; ++k) f(k) = std::cos(m * g.t[k]);
        CHECK((s.mat * f - f / (2.0 * m)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("Gauss identity: Laplace double layer on density 1 gives -1/2") {
    for (auto curve : {ParametricCurve::kite(), ParametricCurve::ellipse(1.4, 0.6),
                       ParametricCurve::star(1.0, 0.25, 4)}) {
        auto g = build_grid(curve, 128);
        auto d = assemble_double_layer(g, g, Kernel::laplace(1.0));
        Eigen::VectorXcd one = Eigen::VectorXcd::Ones(g.n);
        CHECK((d.mat * one + 0.5 * one).cwiseAbs().maxCoeff() < 1e-10);
    }
    // with conductivity gamma, the jump scales as 1/gamma
    auto g = build_grid(ParametricCurve::kite(), 128);
    auto d = assemble_double_layer(g, g, Kernel::laplace(2.5));
    Eigen::VectorXcd one = Eigen::VectorXcd::Ones(g.n);
    CHECK((d.mat * one + (0.5 / 2.5) * one).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Laplace double layer on the circle kills oscillatory modes") {
    auto g = build_grid(ParametricCurve::circle(1.0), 64);
    auto d = assemble_double_layer(g, g, Kernel::laplace(1.0));
    for (int m = 1; m <= 3; ++m) {
        Eigen::VectorXcd f(g.n);
        for (int k = 0; k < g.n; ++k) f(k) = std::cos(m * g.t[k]);
        CHECK((d.mat * f).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("Helmholtz single layer on the circle matches the Bessel oracle") {
    // S e^{imt} = (i pi / 2) J_m(k) H^(1)_m(k) e^{imt} / gamma on the unit circle
    auto g = build_grid(ParametricCurve::circle(1.0), 64);
    double gamma = 2.0;
    Cplx omega(1.3, -0.4);
    Cplx k = omega / std::sqrt(gamma);
    auto s = assemble_single_layer(g, g, Kernel::helmholtz(omega, gamma));
    auto h = bessel::h1n_array(k, 3);
    for (int m = 0; m <= 3; ++m) {
        Cplx lam = Cplx(0.0, pi / 2.0) * bessel::j(m, k) * h[m] / gamma;
        CHECK((s.mat * fourier_mode(g, m) - lam * fourier_mode(g, m)).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("Helmholtz single layer matrix is symmetric on equal grids") {
    // kernel symmetry G(x,y) = G(y,x); constant speed makes the matrix itself
    // symmetric on a circle grid
    auto g = build_grid(ParametricCurve::circle(1.3), 64);
    auto s = assemble_single_layer(g, g, Kernel::helmholtz(Cplx(1.5, -0.3), 1.0));
    CHECK((s.mat - s.mat.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("discrete adjoint relation for the double layer pair") {
    // bilinear pairing <u,v> = sum u_k v_k ds_k matches D and D'
    auto g = build_grid(ParametricCurve::kite(), 96);
    auto ker = Kernel::helmholtz(Cplx(1.1, -0.2), 1.4);
    auto d = assemble_double_layer(g, g, ker);
    auto dadj = assemble_adjoint_double_layer(g, g, ker);
    Eigen::VectorXd w = quadrature_weights(g);
    Eigen::VectorXcd f(g.n), h(g.n);
    for (int k = 0; k < g.n; ++k) {
        f(k) = std::exp(std::cos(g.t[k]));
        h(k) = Cplx(std::sin(2.0 * g.t[k]), 0.2 * std::cos(g.t[k]));
    }
    Cplx lhs = (d.mat * f).cwiseProduct(h).dot(w.cast<Cplx>().conjugate());
    Cplx rhs = (dadj.mat * h).cwiseProduct(f).dot(w.cast<Cplx>().conjugate());
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("Calderon commutation residual S D' = D S") {
    auto circle64 = build_grid(ParametricCurve::circle(1.0), 64);
    CHECK(calderon_residual(circle64, Kernel::laplace(1.0)) < 1e-10);

    auto circle128 = build_grid(ParametricCurve::circle(1.0), 128);
    CHECK(calderon_residual(circle128, Kernel::helmholtz(1.5, 1.0)) < 1e-8);

    // spectral decay with N on a non-symmetric curve
    auto kite32 = build_grid(ParametricCurve::kite(), 32);
    auto kite64 = build_grid(ParametricCurve::kite(), 64);
    double r32 = calderon_residual(kite32, Kernel::helmholtz(1.5, 1.0));
    double r64 = calderon_residual(kite64, Kernel::helmholtz(1.5, 1.0));
    CHECK(r64 * 10.0 < r32);

    // anisotropic family obeys the same identity
    Mat2 a;
    a << 2.0, 0.4, 0.4, 1.1;
    auto ell = build_grid(ParametricCurve::ellipse(1.3, 0.8), 96);
    CHECK(calderon_residual(ell, Kernel::anisotropic(Cplx(1.2, -0.2), a)) < 1e-8);
}

TEST_CASE("self-convergence of assembled operators under grid refinement") {
    auto ker = Kernel::helmholtz(1.5, 1.0);
    auto run = [&](const ParametricCurve& curve, int n) {
        auto g1 = build_grid(curve, n);
        auto g2 = build_grid(curve, 2 * n);
        Eigen::VectorXcd f1(n), f2(2 * n);
        for (int k = 0; k < n; ++k)
            f1(k) = Cplx(std::cos(g1.t[k]), 0.5 * std::sin(2.0 * g1.t[k]));
        for (int k = 0; k < 2 * n; ++k)
            f2(k) = Cplx(std::cos(g2.t[k]), 0.5 * std::sin(2.0 * g2.t[k]));
        auto restrict_even = [&](const Eigen::VectorXcd& v) {
            Eigen::VectorXcd r(n);
            for (int k = 0; k < n; ++k) r(k) = v(2 * k);
            return r;
        };
        auto s1 = assemble_single_layer(g1, g1, ker), s2 = assemble_single_layer(g2, g2, ker);
        auto d1 = assemble_double_layer(g1, g1, ker), d2 = assemble_double_layer(g2, g2, ker);
        CHECK((s1.mat * f1 - restrict_even(s2.mat * f2)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((d1.mat * f1 - restrict_even(d2.mat * f2)).cwiseAbs().maxCoeff() < 1e-9);
    };
    run(ParametricCurve::ellipse(1.3, 0.8), 128);
    // the kite needs one more doubling before the log-kernel quadrature
    // reaches the same tolerance
    run(ParametricCurve::kite(), 256);
}

TEST_CASE("off-diagonal blocks: single layer reproduces the interior field") {
    // potential of a known density evaluated on an interior test curve equals
    // the direct quadrature of the kernel (trapezoid, smooth integrand)
    auto src = build_grid(ParametricCurve::circle(1.0), 64);
    auto tgt = build_grid(ParametricCurve::circle(0.4), 32);
    auto ker = Kernel::helmholtz(1.2, 1.0);
    auto s = assemble_single_layer(src, tgt, ker);
    // against the circle addition theorem: for density e^{imt} the potential at
    // radius r < 1 is (i pi/2) J_m(k r) H^(1)_m(k) e^{im t}
    Cplx k = ker.wavenumber();
    for (int m = 0; m <= 2; ++m) {
        Eigen::VectorXcd f = fourier_mode(src, m);
        Cplx lam = Cplx(0.0, pi / 2.0) * bessel::j(m, k * 0.4) * bessel::h1n_array(k, m)[m];
        CHECK((s.mat * f - lam * fourier_mode(tgt, m)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("kress log weights integrate ln(4 sin^2) against trig polynomials") {
    // exact values: integral of ln(4 sin^2((t-s)/2)) cos(m s) ds = -2 pi/m cos(m t), 0 for m=0
    int n = 32;
    auto r = kress_log_weights(n);
    for (int m = 0; m <= 4; ++m) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += r(j) * std::cos(m * (2.0 * pi * j / n));
        double expect = (m == 0) ? 0.0 : -2.0 * pi / m;
        CHECK(std::abs(acc - expect) < 1e-12);
    }
}

TEST_CASE("point-source flux certificate for the Laplace family") {
    auto ker = Kernel::laplace(1.7);
    auto outer = build_grid(ParametricCurve::circle(1.0), 128);
    auto inner = build_grid(ParametricCurve::circle(0.4), 64);

    SUBCASE("enclosed source carries unit flux") {
        CHECK(std::abs(source_flux(outer, ker, Vec2(0.2, 0.1)) + 1.0) < 1e-12);
        CHECK(std::abs(source_flux(outer, ker, Vec2(-0.6, 0.3)) + 1.0) < 1e-12);
    }
    SUBCASE("exterior source carries none") {
        CHECK(std::abs(source_flux(inner, ker, Vec2(0.7, 0.0))) < 1e-12);
    }
    SUBCASE("annulus: fluxes through both walls agree for a source in the hole") {
        Cplx in = source_flux(inner, ker, Vec2(0.1, -0.05));
        Cplx out = source_flux(outer, ker, Vec2(0.1, -0.05));
        CHECK(std::abs(in + 1.0) < 1e-12);
        CHECK(std::abs(out - in) < 1e-12);
    }
    SUBCASE("kite geometry") {
        auto kite = build_grid(ParametricCurve::kite(), 128);
        CHECK(std::abs(source_flux(kite, ker, Vec2(0.0, 0.0)) + 1.0) < 1e-10);
    }
}
