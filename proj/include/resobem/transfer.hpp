#ifndef RESOBEM_TRANSFER_HPP
#define RESOBEM_TRANSFER_HPP

#include "resobem/dtn.hpp"

namespace resobem {

/// Coefficient of the identity in the transfer operator.
///   Derived (default): c = 1/2, the exterior trace jump of the normalized
///     gamma2-weighted double-layer potential (independent of gamma2).
///   Legacy: c = 1 - gamma2/2, kept for comparison; coincides at gamma2 = 1.
enum class JumpMode { Derived, Legacy };

enum class TransferVariant { Unperturbed, Perturbed, Dual };

/// T(omega) = c I - gamma2 D + gamma1 S N on the outer boundary, with S, D
/// assembled from the gamma2-Helmholtz kernel and N the interior DtN map.
/// A trace u of a resonance state satisfies T(lambda) u = 0, so resonances
/// are the frequencies where T loses injectivity.
struct TransferOperator {
    Eigen::MatrixXcd mat;
    Cplx omega = 0.0;
    TransferVariant variant = TransferVariant::Unperturbed;
    JumpMode mode = JumpMode::Derived;
};

double jump_constant(double gamma2, JumpMode mode);

TransferOperator assemble_T(const BoundaryGrid& grid, Cplx omega, double gamma1, double gamma2,
                            JumpMode mode = JumpMode::Derived);

/// Transfer operator continued across the negative real frequency axis.
/// The principal-branch Hankel kernel is the physical continuation only for
/// Re omega >= 0; for Re omega < 0 the continued operator is obtained from
/// the Schwarz reflection T_cont(omega) = conj(T(-conj(omega))), valid for
/// real gamma1, gamma2.  This is what resonance searches evaluate, and it
/// makes the detected resonance set symmetric about the imaginary axis.
TransferOperator assemble_T_continued(const BoundaryGrid& grid, Cplx omega, double gamma1,
                                      double gamma2, JumpMode mode = JumpMode::Derived);

/// Perturbed transfer operator: the interior DtN is replaced by the map of
/// the inclusion-bearing medium.  Satisfies, exactly at the discrete level,
///   T_eps - T = gamma1 S (N_eps - N).
TransferOperator assemble_T_eps(const Scene& scene, const BoundaryGrid& outer,
                                const std::vector<BoundaryGrid>& inclusion_grids, Cplx omega,
                                double gamma2, JumpMode mode = JumpMode::Derived);

/// Dual of T with respect to the quadrature-weighted L^2 pairing on the
/// boundary: c I - gamma2 D^#W + gamma1 N(conj omega) S^#W, where X^#W is the
/// weighted conjugate transpose W^{-1} X^H W.  Agrees with W^{-1} T^H W up to
/// discretization error.
TransferOperator assemble_T_dual(const BoundaryGrid& grid, Cplx omega, double gamma1,
                                 double gamma2, JumpMode mode = JumpMode::Derived);

} // namespace resobem

#endif
