#include "resobem/dtn.hpp"

#include <Eigen/LU>

namespace resobem {

namespace {

// Rejects solves at (numerically) interior eigenvalues of the medium before
// the answer degrades: the smallest-singular-value estimate rcond * |A|_1
// vanishes exactly when the boundary system loses injectivity.
double checked_rcond(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, const Eigen::MatrixXcd& a) {
    double rc = lu.rcond();
    double sigma_min_est = rc * a.cwiseAbs().colwise().sum().maxCoeff();
    if (!(sigma_min_est > 1e-10))
        throw NearSingularSystem("boundary system is numerically singular (sigma_min estimate " +
                                 std::to_string(sigma_min_est) + "); omega is too close to an interior eigenvalue");
    return rc;
}

} // namespace

DtnMap dtn_homogeneous(const BoundaryGrid& grid, Cplx omega, double gamma1) {
    if (!(gamma1 > 0.0)) throw DomainError("gamma1 must be positive");
    const Kernel k1 = Kernel::helmholtz(omega, gamma1);

    // Interior Green representation v = S(gamma1 dv/dnu) - W v with the
    // gamma1-weighted potentials; the interior trace of the double-layer
    // potential is D - 1/(2 gamma1), so with f = v|_boundary and q = dv/dnu:
    //   gamma1 S q = (1/2 I + gamma1 D) f.
    Eigen::MatrixXcd s = gamma1 * assemble_single_layer(grid, grid, k1).mat;
    Eigen::MatrixXcd rhs = gamma1 * assemble_double_layer(grid, grid, k1).mat;
    rhs.diagonal().array() += 0.5;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(s);
    DtnMap out;
    out.rcond = checked_rcond(lu, s);
    out.mat = lu.solve(rhs);
    out.omega = omega;
    out.variant = DtnVariant::Homogeneous;
    return out;
}

DtnMap dtn_perturbed(const Scene& scene, const BoundaryGrid& outer,
                     const std::vector<BoundaryGrid>& inclusion_grids, Cplx omega) {
    if (scene.epsilon == 0.0 || scene.inclusions.empty())
        return dtn_homogeneous(outer, omega, scene.gamma1);
    if (inclusion_grids.size() != scene.inclusions.size())
        throw CountMismatch("one grid per inclusion required");

    const double g1 = scene.gamma1;
    const Kernel k1 = Kernel::helmholtz(omega, g1);
    const int m = static_cast<int>(scene.inclusions.size());
    const int n0 = outer.n;

    // Unknown layout: [q ; u_1 ; phi_1 ; ... ; u_m ; phi_m] where q is the
    // outer normal derivative, u_i the Dirichlet trace on the i-th interface
    // and phi_i = nu . gamma_{D_i} grad u |_inside the conormal flux (equal to
    // gamma1 dv/dnu from outside by the transmission conditions).
    std::vector<int> u_off(m), p_off(m);
    int total = n0;
    for (int i = 0; i < m; ++i) {
        u_off[i] = total;
        p_off[i] = total + inclusion_grids[i].n;
        total += 2 * inclusion_grids[i].n;
    }

    Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(total, total);
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(total, n0);

    // Row block (A): trace of the exterior-region representation on the outer
    // boundary.  v = gamma1 S_O q - gamma1 W_O f - sum_i [S_i phi_i - gamma1 W_i u_i]
    // and the interior trace of gamma1 W_O contributes the -1/2 jump:
    //   gamma1 S q - sum_i S_{i->O} phi_i + gamma1 sum_i W_{i->O} u_i
    //     = (1/2 I + gamma1 D) f.
    sys.block(0, 0, n0, n0) = g1 * assemble_single_layer(outer, outer, k1).mat;
    {
        Eigen::MatrixXcd a = g1 * assemble_double_layer(outer, outer, k1).mat;
        a.diagonal().array() += 0.5;
        rhs.block(0, 0, n0, n0) = a;
    }
    for (int i = 0; i < m; ++i) {
        const int ni = inclusion_grids[i].n;
        sys.block(0, p_off[i], n0, ni) = -assemble_single_layer(inclusion_grids[i], outer, k1).mat;
        sys.block(0, u_off[i], n0, ni) = g1 * assemble_double_layer(inclusion_grids[i], outer, k1).mat;
    }

    // Row blocks (B_j): the same representation evaluated on the j-th
    // interface from outside the inclusion; the exterior trace of the
    // self double-layer potential contributes the +1/2 jump:
    //   -gamma1 S_{O->j} q + (1/2 I - gamma1 D_jj) u_j + S_jj phi_j
    //     + sum_{i != j} [S_{i->j} phi_i - gamma1 W_{i->j} u_i]
    //     = -gamma1 W_{O->j} f.
    for (int j = 0; j < m; ++j) {
        const BoundaryGrid& gj = inclusion_grids[j];
        const int nj = gj.n;
        sys.block(u_off[j], 0, nj, n0) = -g1 * assemble_single_layer(outer, gj, k1).mat;
        Eigen::MatrixXcd djj = -g1 * assemble_double_layer(gj, gj, k1).mat;
        djj.diagonal().array() += 0.5;
        sys.block(u_off[j], u_off[j], nj, nj) = djj;
        sys.block(u_off[j], p_off[j], nj, nj) = assemble_single_layer(gj, gj, k1).mat;
        for (int i = 0; i < m; ++i) {
            if (i == j) continue;
            sys.block(u_off[j], p_off[i], nj, inclusion_grids[i].n) =
                assemble_single_layer(inclusion_grids[i], gj, k1).mat;
            sys.block(u_off[j], u_off[i], nj, inclusion_grids[i].n) =
                -g1 * assemble_double_layer(inclusion_grids[i], gj, k1).mat;
        }
        rhs.block(u_off[j], 0, nj, n0) = -g1 * assemble_double_layer(outer, gj, k1).mat;
    }

    // Row blocks (C_j): interior representation inside the j-th inclusion with
    // the anisotropic kernel, u = S^A phi_j - W^A u_j, whose interior trace
    // (conormal double layer jump -1/2) gives
    //   (1/2 I + D^A_jj) u_j - S^A_jj phi_j = 0.
    for (int j = 0; j < m; ++j) {
        const BoundaryGrid& gj = inclusion_grids[j];
        const int nj = gj.n;
        const Kernel ka = Kernel::anisotropic(omega, scene.inclusions[j].gamma);
        Eigen::MatrixXcd wa = assemble_double_layer(gj, gj, ka).mat;
        wa.diagonal().array() += 0.5;
        sys.block(p_off[j], u_off[j], nj, nj) = wa;
        sys.block(p_off[j], p_off[j], nj, nj) = -assemble_single_layer(gj, gj, ka).mat;
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys);
    DtnMap out;
    out.rcond = checked_rcond(lu, sys);
    out.mat = lu.solve(rhs).topRows(n0);
    out.omega = omega;
    out.variant = DtnVariant::Perturbed;
    return out;
}

} // namespace resobem
