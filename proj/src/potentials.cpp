#include "resobem/potentials.hpp"

#include <cmath>
#include <numbers>

namespace resobem {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286060651209008240243;
const Cplx iu(0.0, 1.0);

bool same_grid(const BoundaryGrid& a, const BoundaryGrid& b) {
    if (&a == &b) return true;
    if (a.n != b.n) return false;
    for (int k = 0; k < a.n; ++k)
        if (a.node[k].x() != b.node[k].x() || a.node[k].y() != b.node[k].y()) return false;
    return true;
}

// Distance in the kernel metric: |L (y - x)|, L = identity except anisotropic.
double metric_dist(const Kernel& kernel, const Vec2& x, const Vec2& y) {
    if (kernel.family == KernelFamily::Anisotropic2d) return (kernel.metric() * (y - x)).norm();
    return (y - x).norm();
}

// Double-layer kernel value d G / d nu at v, i.e. nu . grad_v G(u, v), with
// the conormal nu . A grad_v G in the anisotropic case.  G is symmetric, so
// the adjoint kernel is the same expression with the roles of x and y swapped.
Cplx dl_kernel(const Kernel& kernel, const Vec2& u, const Vec2& v, const Vec2& nu) {
    Vec2 d = v - u;
    if (kernel.family == KernelFamily::Laplace2d)
        return Cplx(-nu.dot(d) / (2.0 * pi * kernel.gamma * d.squaredNorm()), 0.0);
    Cplx k = kernel.wavenumber();
    double rho = metric_dist(kernel, u, v);
    return -kernel.amplitude() * k * hankel1(1, k * rho) * (nu.dot(d) / rho);
}

Eigen::MatrixXcd assemble_offdiag(const BoundaryGrid& src, const BoundaryGrid& tgt,
                                  const Kernel& kernel, bool dbl, bool adjoint) {
    Eigen::MatrixXcd m(tgt.n, src.n);
    for (int i = 0; i < tgt.n; ++i)
        for (int j = 0; j < src.n; ++j) {
            Cplx v;
            if (!dbl)
                v = green(kernel, tgt.node[i], src.node[j]);
            else if (!adjoint)
                v = dl_kernel(kernel, tgt.node[i], src.node[j], src.normal[j]);
            else
                v = dl_kernel(kernel, src.node[j], tgt.node[i], tgt.normal[i]);
            m(i, j) = v * src.ds(j);
        }
    return m;
}

double log4sin2(double ti, double tj) {
    double s = 2.0 * std::sin(0.5 * (ti - tj));
    return std::log(s * s);
}

// Smooth part of the squared-chord factor: rho(t,s) / (2 |sin((t-s)/2)|),
// which tends to the metric speed |L p'(t)| on the diagonal.
double chord_factor(double rho, double ti, double tj) {
    return rho / std::abs(2.0 * std::sin(0.5 * (ti - tj)));
}

Eigen::MatrixXcd assemble_self_single(const BoundaryGrid& g, const Kernel& kernel) {
    const int n = g.n;
    const Eigen::VectorXd R = kress_log_weights(n);
    const double w = 2.0 * pi / n;
    Eigen::MatrixXcd m(n, n);

    if (kernel.family == KernelFamily::Laplace2d) {
        const double c = -1.0 / (2.0 * pi * kernel.gamma);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double m1 = 0.5 * c * g.speed[j];
                double m2;
                if (i == j)
                    m2 = c * std::log(g.speed[i]) * g.speed[i];
                else {
                    double r = (g.node[i] - g.node[j]).norm();
                    m2 = c * std::log(chord_factor(r, g.t[i], g.t[j])) * g.speed[j];
                }
                m(i, j) = R(std::abs(i - j)) * m1 + w * m2;
            }
        return m;
    }

    const Cplx c0 = kernel.amplitude();
    const Cplx k = kernel.wavenumber();
    for (int i = 0; i < n; ++i) {
        double lsp_i = (kernel.family == KernelFamily::Anisotropic2d)
                           ? (kernel.metric() * (g.speed[i] * g.tangent[i])).norm()
                           : g.speed[i];
        m(i, i) = R(0) * c0 * (iu / pi) * g.speed[i] +
                  w * c0 * g.speed[i] *
                      (1.0 + (2.0 * iu / pi) * (std::log(k * lsp_i / 2.0) + euler_gamma));
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double rho = metric_dist(kernel, g.node[i], g.node[j]);
            auto c = bessel::cyl01(k * rho);
            Cplx m1 = c0 * (iu / pi) * c.j0 * g.speed[j];
            Cplx full = c0 * c.h10 * g.speed[j];
            double lg = log4sin2(g.t[i], g.t[j]);
            m(i, j) = R(std::abs(i - j)) * m1 + w * (full - m1 * lg);
        }
    }
    return m;
}

Eigen::MatrixXcd assemble_self_double(const BoundaryGrid& g, const Kernel& kernel, bool adjoint) {
    const int n = g.n;
    const double w = 2.0 * pi / n;
    Eigen::MatrixXcd m(n, n);

    if (kernel.family == KernelFamily::Laplace2d) {
        // kernel is smooth on analytic curves; trapezoid with curvature diagonal
        const double c = -1.0 / (2.0 * pi * kernel.gamma);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v;
                if (i == j)
                    v = c * 0.5 * g.curvature[i];
                else {
                    Vec2 d = adjoint ? (g.node[i] - g.node[j]).eval()
                                     : (g.node[j] - g.node[i]).eval();
                    const Vec2& nu = adjoint ? g.normal[i] : g.normal[j];
                    v = c * nu.dot(d) / d.squaredNorm();
                }
                m(i, j) = v * g.speed[j] * w;
            }
        return m;
    }

    const Eigen::VectorXd R = kress_log_weights(n);
    const Cplx c0 = kernel.amplitude();
    const Cplx k = kernel.wavenumber();
    for (int i = 0; i < n; ++i) {
        double lsp_i = (kernel.family == KernelFamily::Anisotropic2d)
                           ? (kernel.metric() * (g.speed[i] * g.tangent[i])).norm()
                           : g.speed[i];
        double spd2 = g.speed[i] * g.speed[i];
        m(i, i) = w * (2.0 * iu * c0 / pi) * (0.5 * g.curvature[i]) * (spd2 / (lsp_i * lsp_i)) *
                  g.speed[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Vec2 d = adjoint ? (g.node[i] - g.node[j]).eval() : (g.node[j] - g.node[i]).eval();
            const Vec2& nu = adjoint ? g.normal[i] : g.normal[j];
            double rho = metric_dist(kernel, g.node[i], g.node[j]);
            auto c = bessel::cyl01(k * rho);
            Cplx q = nu.dot(d) / rho * g.speed[j];
            Cplx l1 = -c0 * k * (iu / pi) * c.j1 * q;
            Cplx full = -c0 * k * c.h11 * q;
            double lg = log4sin2(g.t[i], g.t[j]);
            m(i, j) = R(std::abs(i - j)) * l1 + w * (full - l1 * lg);
        }
    }
    return m;
}

} // namespace

Eigen::VectorXd kress_log_weights(int n) {
    if (n < 2 || n % 2 != 0) throw Error("kress_log_weights: N must be even and >= 2");
    const int half = n / 2;
    Eigen::VectorXd r(n);
    for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int k = 1; k < half; ++k) s += std::cos(k * m * pi / half) / k;
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        r(m) = -(2.0 * pi / half) * s - (pi / (half * half)) * sign;
    }
    return r;
}

Eigen::VectorXd quadrature_weights(const BoundaryGrid& grid) {
    Eigen::VectorXd w(grid.n);
    for (int k = 0; k < grid.n; ++k) w(k) = grid.ds(k);
    return w;
}

BoundaryOperator assemble_single_layer(const BoundaryGrid& src, const BoundaryGrid& tgt,
                                       const Kernel& kernel) {
    BoundaryOperator op;
    op.kernel = kernel;
    op.n_src = src.n;
    op.n_tgt = tgt.n;
    if (same_grid(src, tgt)) {
        if (src.n < 32) throw Error("assemble_single_layer: self block needs N >= 32");
        op.mat = assemble_self_single(src, kernel);
    } else {
        op.mat = assemble_offdiag(src, tgt, kernel, false, false);
    }
    return op;
}

BoundaryOperator assemble_double_layer(const BoundaryGrid& src, const BoundaryGrid& tgt,
                                       const Kernel& kernel) {
    BoundaryOperator op;
    op.kernel = kernel;
    op.n_src = src.n;
    op.n_tgt = tgt.n;
    if (same_grid(src, tgt)) {
        if (src.n < 32) throw Error("assemble_double_layer: self block needs N >= 32");
        op.mat = assemble_self_double(src, kernel, false);
    } else {
        op.mat = assemble_offdiag(src, tgt, kernel, true, false);
    }
    return op;
}

BoundaryOperator assemble_adjoint_double_layer(const BoundaryGrid& src, const BoundaryGrid& tgt,
                                               const Kernel& kernel) {
    BoundaryOperator op;
    op.kernel = kernel;
    op.n_src = src.n;
    op.n_tgt = tgt.n;
    if (same_grid(src, tgt)) {
        if (src.n < 32) throw Error("assemble_adjoint_double_layer: self block needs N >= 32");
        op.mat = assemble_self_double(src, kernel, true);
    } else {
        op.mat = assemble_offdiag(src, tgt, kernel, true, true);
    }
    return op;
}

Cplx source_flux(const BoundaryGrid& grid, const Kernel& kernel, Vec2 z) {
    Cplx flux = 0.0;
    double factor = kernel.family == KernelFamily::Anisotropic2d ? 1.0 : kernel.gamma;
    for (int i = 0; i < grid.n; ++i)
        flux += factor * dl_kernel(kernel, z, grid.node[i], grid.normal[i]) * grid.ds(i);
    return flux;
}

double calderon_residual(const BoundaryGrid& grid, const Kernel& kernel) {
    auto s = assemble_single_layer(grid, grid, kernel);
    auto d = assemble_double_layer(grid, grid, kernel);
    auto dadj = assemble_adjoint_double_layer(grid, grid, kernel);
    Eigen::MatrixXcd res = s.mat * dadj.mat - d.mat * s.mat;
    return res.cwiseAbs().maxCoeff();
}

} // namespace resobem
