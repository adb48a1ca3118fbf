#ifndef RESOBEM_DTN_HPP
#define RESOBEM_DTN_HPP

#include <vector>

#include "resobem/potentials.hpp"

namespace resobem {

enum class DtnVariant { Homogeneous, Perturbed };

/// Interior Dirichlet-to-Neumann map on the outer boundary grid: maps the
/// Dirichlet trace f to the (plain) normal derivative of the interior
/// solution.
struct DtnMap {
    Eigen::MatrixXcd mat;
    Cplx omega = 0.0;
    DtnVariant variant = DtnVariant::Homogeneous;
    double rcond = 0.0; // reciprocal condition estimate of the solved system
};

/// DtN of  gamma1 laplacian v + omega^2 v = 0  in the region bounded by the
/// grid.  Solves the interior Calderon equation
///   gamma1 S q = (1/2 I + gamma1 D) f,   q = N f,
/// with the gamma1-Helmholtz kernel.  Throws NearSingularSystem near an
/// interior Dirichlet eigenvalue.
DtnMap dtn_homogeneous(const BoundaryGrid& grid, Cplx omega, double gamma1);

/// DtN of  div gamma_eps grad v + omega^2 v = 0  where gamma_eps equals
/// gamma1 outside the inclusions and the constant SPD matrix gamma_{D_i}
/// inside the i-th inclusion.  Direct multi-domain formulation: Green
/// representation with the gamma1 kernel in the exterior region, anisotropic
/// kernel representation inside each inclusion; unknowns are the Dirichlet
/// trace and the interior conormal trace on each interface, eliminated by a
/// dense LU.  inclusion_grids[i] must discretize scene.scaled_inclusion(i).
/// For eps = 0 this reduces to dtn_homogeneous.
DtnMap dtn_perturbed(const Scene& scene, const BoundaryGrid& outer,
                     const std::vector<BoundaryGrid>& inclusion_grids, Cplx omega);

} // namespace resobem

#endif
