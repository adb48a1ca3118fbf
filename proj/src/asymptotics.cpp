#include "resobem/asymptotics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace resobem {

namespace {

// grad wrt z of G(y, z) for a radial Helmholtz kernel G = c0 H0(k|y - z|).
Eigen::Vector2cd grad_source(const Kernel& k, Vec2 y, Vec2 z) {
    const Vec2 d = y - z;
    const double r = d.norm();
    if (r == 0.0) throw CoincidentPoints("grad_source: y == z");
    const Cplx kk = k.wavenumber();
    const Cplx h1 = bessel::cyl01(kk * r).h1();
    return k.amplitude() * kk * h1 / r * Eigen::Vector2cd(d.x(), d.y());
}

// grad wrt z of dG/dnu_y (y, z): with d = y - z, h(r) = H1(kr)/r,
//   dG/dnu = -c0 k h(r) (nu . d),
//   grad_z = c0 k [ (k H0(kr)/r - 2 H1(kr)/r^2) (nu . d) d / r + h(r) nu ].
Eigen::Vector2cd grad_dipole(const Kernel& k, Vec2 y, Vec2 nu, Vec2 z) {
    const Vec2 d = y - z;
    const double r = d.norm();
    if (r == 0.0) throw CoincidentPoints("grad_dipole: y == z");
    const Cplx kk = k.wavenumber();
    const auto c = bessel::cyl01(kk * r);
    const Cplx h = c.h1() / r;
    const Cplx hp = kk * c.h0() / r - 2.0 * c.h1() / (r * r);
    const double nud = nu.dot(d);
    return k.amplitude() * kk *
           (hp * nud / r * Eigen::Vector2cd(d.x(), d.y()) +
            h * Eigen::Vector2cd(nu.x(), nu.y()));
}

void check_interior_distance(const BoundaryGrid& g, Vec2 z) {
    double mind = std::numeric_limits<double>::max();
    double maxsp = 0.0;
    for (int j = 0; j < g.n; ++j) {
        mind = std::min(mind, (g.node[j] - z).norm());
        maxsp = std::max(maxsp, g.ds(j));
    }
    if (mind <= 5.0 * maxsp)
        throw TooCloseToBoundary("interior evaluation point within 5 node spacings of the boundary");
}

// d/domega of the continued transfer operator by central differences.
Eigen::MatrixXcd transfer_derivative(const BoundaryGrid& grid, Cplx lambda, double gamma1,
                                     double gamma2) {
    const double h = 1e-5 * (1.0 + std::abs(lambda));
    return (assemble_T_continued(grid, lambda + h, gamma1, gamma2).mat -
            assemble_T_continued(grid, lambda - h, gamma1, gamma2).mat) /
           (2.0 * h);
}

} // namespace

DualBasis dual_basis(const BoundaryGrid& grid, const Eigen::MatrixXcd& null_vectors,
                     Cplx lambda, double gamma2) {
    const int m = static_cast<int>(null_vectors.cols());
    const Eigen::MatrixXcd s =
        assemble_single_layer(grid, grid, Kernel::helmholtz(lambda, gamma2)).mat;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> slu(s);
    Eigen::MatrixXcd siu(grid.n, m);
    for (int k = 0; k < m; ++k) siu.col(k) = slu.solve(null_vectors.col(k));

    const Eigen::VectorXd w = quadrature_weights(grid);
    // A_li = <conj(S^{-1} u^l), u^i> with the weighted sesquilinear pairing.
    Eigen::MatrixXcd a(m, m);
    for (int l = 0; l < m; ++l)
        for (int i = 0; i < m; ++i) {
            Cplx acc = 0.0;
            for (int x = 0; x < grid.n; ++x)
                acc += std::conj(siu(x, l)) * std::conj(null_vectors(x, i)) * w(x);
            a(l, i) = acc;
        }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(m - 1);
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw SingularGram("dual basis pairing matrix is numerically singular");

    DualBasis out;
    out.lambda = lambda;
    out.gram = a;
    out.coeff = a.inverse();
    out.vectors = siu.conjugate() * out.coeff.transpose();
    return out;
}

Cplx interior_value(const BoundaryGrid& grid, const Eigen::VectorXcd& f, Cplx omega,
                    double gamma1, Vec2 z) {
    check_interior_distance(grid, z);
    const Kernel k1 = Kernel::helmholtz(omega, gamma1);
    const Eigen::VectorXcd q = dtn_homogeneous(grid, omega, gamma1).mat * f;
    const Cplx kk = k1.wavenumber();
    Cplx v = 0.0;
    for (int j = 0; j < grid.n; ++j) {
        const Vec2 d = grid.node[j] - z;
        const double r = d.norm();
        const auto c = bessel::cyl01(kk * r);
        const Cplx g = k1.amplitude() * c.h0();
        // dG/dnu_y with d = y - z: -c0 k H1(kr) (nu . d)/r.
        const Cplx dg = -k1.amplitude() * kk * c.h1() * grid.normal[j].dot(d) / r;
        v += gamma1 * (g * q(j) - dg * f(j)) * grid.ds(j);
    }
    return v;
}

Eigen::Vector2cd interior_gradient(const BoundaryGrid& grid, const Eigen::VectorXcd& f,
                                   Cplx omega, double gamma1, Vec2 z) {
    check_interior_distance(grid, z);
    const Kernel k1 = Kernel::helmholtz(omega, gamma1);
    const Eigen::VectorXcd q = dtn_homogeneous(grid, omega, gamma1).mat * f;
    Eigen::Vector2cd grad = Eigen::Vector2cd::Zero();
    for (int j = 0; j < grid.n; ++j) {
        grad += gamma1 * grid.ds(j) *
                (grad_source(k1, grid.node[j], z) * q(j) -
                 grad_dipole(k1, grid.node[j], grid.normal[j], z) * f(j));
    }
    return grad;
}

namespace {

// Shared core of the two prediction entry points.
AsymptoticPrediction predict_core(const Scene& scene, const BoundaryGrid& outer, Cplx lambda,
                                  const Eigen::MatrixXcd& u, const DualBasis& dual,
                                  const std::vector<PolarizationTensor>& tensors) {
    if (tensors.size() != scene.inclusions.size())
        throw ConfigError("one polarization tensor per inclusion is required");
    const int m = static_cast<int>(u.cols());
    const double g1 = scene.gamma1;
    const double eps2 = scene.epsilon * scene.epsilon;
    const Eigen::VectorXd w = quadrature_weights(outer);

    const Eigen::MatrixXcd tp = transfer_derivative(outer, lambda, g1, scene.gamma2);
    const Eigen::MatrixXcd a =
        dual.vectors.conjugate().transpose() * (w.asDiagonal() * (tp * u));
    const Eigen::PartialPivLU<Eigen::MatrixXcd> alu(a);
    const Eigen::MatrixXcd p = u * dual.coeff.adjoint();

    AsymptoticPrediction out;
    out.lambda = lambda;
    out.epsilon = scene.epsilon;
    Eigen::MatrixXcd b_total = Eigen::MatrixXcd::Zero(m, m);
    for (size_t i = 0; i < scene.inclusions.size(); ++i) {
        const InclusionSpec& inc = scene.inclusions[i];
        const double tr = inc.contrast_scalar();
        const double contrast = g1 * (1.0 - g1 / tr);
        const Mat2& mi = tensors[i].m;
        std::vector<Eigen::Vector2cd> gv(m), gt(m);
        for (int l = 0; l < m; ++l) {
            gv[l] = interior_gradient(outer, u.col(l), lambda, g1, inc.center);
            gt[l] = interior_gradient(outer, p.col(l), lambda, g1, inc.center);
            out.gradients.push_back(gv[l]);
        }
        Eigen::MatrixXcd bi(m, m);
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
                const Eigen::Vector2cd mg = mi.cast<Cplx>() * gv[l];
                bi(k, l) = gt[k](0) * mg(0) + gt[k](1) * mg(1);
            }
        bi *= eps2 * contrast;
        out.per_inclusion.push_back(-alu.solve(bi).trace() / static_cast<double>(m));
        b_total += bi;
    }
    const Eigen::MatrixXcd d = -alu.solve(b_total);
    out.delta_mean = d.trace() / static_cast<double>(m);
    // Stash D in branches temporarily; entry points interpret it.
    out.branches.assign(d.data(), d.data() + d.size());
    return out;
}

} // namespace

AsymptoticPrediction predict_shift_simple(const Scene& scene, const BoundaryGrid& outer,
                                          Cplx lambda, const Eigen::MatrixXcd& null_vectors,
                                          const DualBasis& dual,
                                          const std::vector<PolarizationTensor>& tensors,
                                          int ascent) {
    if (ascent != 1)
        throw AscentMismatch("first-order shift formula requires ascent 1");
    AsymptoticPrediction out = predict_core(scene, outer, lambda, null_vectors, dual, tensors);
    const int m = static_cast<int>(null_vectors.cols());
    Eigen::MatrixXcd d = Eigen::Map<Eigen::MatrixXcd>(out.branches.data(), m, m);
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(d, false);
    out.branches.clear();
    for (int j = 0; j < m; ++j) out.branches.push_back(lambda + es.eigenvalues()(j));
    out.ascent = 1;
    return out;
}

AsymptoticPrediction predict_shift_general(const Scene& scene, const BoundaryGrid& outer,
                                           Cplx lambda, const Eigen::MatrixXcd& null_vectors,
                                           const DualBasis& dual,
                                           const std::vector<PolarizationTensor>& tensors,
                                           int ascent) {
    if (ascent < 1) throw ConfigError("ascent must be >= 1");
    AsymptoticPrediction out = predict_core(scene, outer, lambda, null_vectors, dual, tensors);
    const int m = static_cast<int>(null_vectors.cols());
    Eigen::MatrixXcd d = Eigen::Map<Eigen::MatrixXcd>(out.branches.data(), m, m);
    out.branches.clear();
    for (int j = 0; j < m; ++j) {
        const Cplx r = d(j, j);
        const Cplx root = std::pow(r, 1.0 / static_cast<double>(ascent));
        for (int q = 0; q < ascent; ++q) {
            const double th = 2.0 * M_PI * q / ascent;
            out.branches.push_back(lambda + root * Cplx(std::cos(th), std::sin(th)));
        }
    }
    out.ascent = ascent;
    return out;
}

std::vector<ExpansionSample> verify_boundary_expansion(Scene scene, const BoundaryGrid& outer,
                                                       Cplx omega, const Eigen::VectorXcd& f,
                                                       const std::vector<double>& eps_list,
                                                       int inclusion_n) {
    const double g1 = scene.gamma1;
    const double g2 = scene.gamma2;
    const Kernel k1 = Kernel::helmholtz(omega, g1);
    const Eigen::MatrixXcd t = assemble_T(outer, omega, g1, g2).mat;
    const Eigen::MatrixXcd nmat = dtn_homogeneous(outer, omega, g1).mat;
    const Eigen::MatrixXcd s2 =
        assemble_single_layer(outer, outer, Kernel::helmholtz(omega, g2)).mat;

    // eps-independent dipole response summed over inclusions:
    //   vec(x) = sum_i (1 - g1/tr_i) grad_z dG_D/dnu_x (x, z_i) . M_i grad v(z_i),
    // with grad_z dG_D/dnu = (free-space dipole) - N [trace of grad_z G].
    Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(outer.n);
    for (const InclusionSpec& inc : scene.inclusions) {
        const double tr = inc.contrast_scalar();
        if (std::abs(g1 - tr) < 1e-12 * (g1 + tr)) continue; // transparent: no response
        const Mat2 mi = compute_polarization(build_grid(inc.shape, 128), g1, tr).m;
        const Eigen::Vector2cd mg =
            mi.cast<Cplx>() * interior_gradient(outer, f, omega, g1, inc.center);
        Eigen::MatrixXcd trace_g(outer.n, 2);
        for (int j = 0; j < outer.n; ++j) {
            const Eigen::Vector2cd gs = grad_source(k1, outer.node[j], inc.center);
            trace_g(j, 0) = gs(0);
            trace_g(j, 1) = gs(1);
        }
        const Eigen::MatrixXcd ncorr = nmat * trace_g;
        for (int j = 0; j < outer.n; ++j) {
            const Eigen::Vector2cd a =
                grad_dipole(k1, outer.node[j], outer.normal[j], inc.center) -
                Eigen::Vector2cd(ncorr(j, 0), ncorr(j, 1));
            vec(j) += (1.0 - g1 / tr) * (a(0) * mg(0) + a(1) * mg(1));
        }
    }
    const Eigen::VectorXcd rhs_unit = g1 * g1 * (s2 * vec);

    std::vector<ExpansionSample> out;
    for (double eps : eps_list) {
        scene.epsilon = eps;
        std::vector<BoundaryGrid> grids;
        for (size_t i = 0; i < scene.inclusions.size(); ++i)
            grids.push_back(build_grid(scene.scaled_inclusion(static_cast<int>(i)), inclusion_n));
        const Eigen::VectorXcd lhs =
            (t - assemble_T_eps(scene, outer, grids, omega, g2).mat) * f;
        const Eigen::VectorXcd diff = lhs - eps * eps * rhs_unit;
        out.push_back({eps, lhs.lpNorm<Eigen::Infinity>(), diff.lpNorm<Eigen::Infinity>()});
    }
    return out;
}

double sobolev_norm(const Eigen::VectorXcd& f, double s) {
    const int n = static_cast<int>(f.size());
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        Cplx hat = 0.0;
        for (int j = 0; j < n; ++j) {
            const double t = 2.0 * M_PI * j / n;
            hat += f(j) * std::exp(Cplx(0.0, -k * t));
        }
        hat /= static_cast<double>(n);
        const int kk = (k <= n / 2) ? k : k - n; // signed frequency
        acc += std::pow(1.0 + double(kk) * double(kk), s) * std::norm(hat);
    }
    return std::sqrt(acc);
}

} // namespace resobem
