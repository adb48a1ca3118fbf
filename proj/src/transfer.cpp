#include "resobem/transfer.hpp"

namespace resobem {

double jump_constant(double gamma2, JumpMode mode) {
    return mode == JumpMode::Derived ? 0.5 : 1.0 - 0.5 * gamma2;
}

TransferOperator assemble_T(const BoundaryGrid& grid, Cplx omega, double gamma1, double gamma2,
                            JumpMode mode) {
    const Kernel k2 = Kernel::helmholtz(omega, gamma2);
    Eigen::MatrixXcd s = assemble_single_layer(grid, grid, k2).mat;
    Eigen::MatrixXcd n = dtn_homogeneous(grid, omega, gamma1).mat;
    TransferOperator t;
    t.mat = -gamma2 * assemble_double_layer(grid, grid, k2).mat + gamma1 * (s * n);
    t.mat.diagonal().array() += jump_constant(gamma2, mode);
    t.omega = omega;
    t.variant = TransferVariant::Unperturbed;
    t.mode = mode;
    return t;
}

TransferOperator assemble_T_continued(const BoundaryGrid& grid, Cplx omega, double gamma1,
                                      double gamma2, JumpMode mode) {
    if (omega.real() >= 0.0) return assemble_T(grid, omega, gamma1, gamma2, mode);
    TransferOperator t = assemble_T(grid, -std::conj(omega), gamma1, gamma2, mode);
    t.mat = t.mat.conjugate();
    t.omega = omega;
    return t;
}

TransferOperator assemble_T_eps(const Scene& scene, const BoundaryGrid& outer,
                                const std::vector<BoundaryGrid>& inclusion_grids, Cplx omega,
                                double gamma2, JumpMode mode) {
    const Kernel k2 = Kernel::helmholtz(omega, gamma2);
    Eigen::MatrixXcd s = assemble_single_layer(outer, outer, k2).mat;
    Eigen::MatrixXcd n = dtn_perturbed(scene, outer, inclusion_grids, omega).mat;
    TransferOperator t;
    t.mat = -gamma2 * assemble_double_layer(outer, outer, k2).mat + scene.gamma1 * (s * n);
    t.mat.diagonal().array() += jump_constant(gamma2, mode);
    t.omega = omega;
    t.variant = TransferVariant::Perturbed;
    t.mode = mode;
    return t;
}

TransferOperator assemble_T_dual(const BoundaryGrid& grid, Cplx omega, double gamma1,
                                 double gamma2, JumpMode mode) {
    const Kernel k2 = Kernel::helmholtz(omega, gamma2);
    Eigen::VectorXd w = quadrature_weights(grid);
    Eigen::VectorXd winv = w.cwiseInverse();

    // weighted conjugate transpose X -> W^{-1} X^H W
    auto star = [&](const Eigen::MatrixXcd& x) -> Eigen::MatrixXcd {
        return winv.asDiagonal() * x.adjoint() * w.asDiagonal().toDenseMatrix();
    };

    Eigen::MatrixXcd s_star = star(assemble_single_layer(grid, grid, k2).mat);
    Eigen::MatrixXcd d_star = star(assemble_double_layer(grid, grid, k2).mat);
    Eigen::MatrixXcd n_conj = dtn_homogeneous(grid, std::conj(omega), gamma1).mat;

    TransferOperator t;
    t.mat = -gamma2 * d_star + gamma1 * (n_conj * s_star);
    t.mat.diagonal().array() += jump_constant(gamma2, mode);
    t.omega = omega;
    t.variant = TransferVariant::Dual;
    t.mode = mode;
    return t;
}

} // namespace resobem
