#ifndef RESOBEM_POTENTIALS_HPP
#define RESOBEM_POTENTIALS_HPP

#include <Eigen/Dense>

#include "resobem/geometry.hpp"
#include "resobem/specfun.hpp"

namespace resobem {

/// Dense Nystrom discretization of a boundary integral operator.
/// Row index runs over target nodes, column index over source nodes.
/// Self-interaction blocks (same grid object, or node-identical grids) are
/// assembled with log-splitting quadrature; disjoint blocks with the plain
/// trapezoid rule.
struct BoundaryOperator {
    Eigen::MatrixXcd mat;
    Kernel kernel;
    int n_src = 0;
    int n_tgt = 0;
};

/// Weights R_j, j = 0..N-1, for the periodic quadrature
///   integral over [0,2pi) of ln(4 sin^2((t_i - s)/2)) f(s) ds
///     ~ sum_j R_{|i-j| mod N} f(t_j)
/// exact for trigonometric polynomials of degree < N/2.  N even.
Eigen::VectorXd kress_log_weights(int n);

/// S: g -> integral of G(x,y) g(y) dsigma_y over the source curve.
BoundaryOperator assemble_single_layer(const BoundaryGrid& src, const BoundaryGrid& tgt,
                                       const Kernel& kernel);

/// D: f -> PV integral of dG/dnu_y (x,y) f(y) dsigma_y for the scalar families.
/// For the anisotropic family the conormal derivative nu_y . A grad_y G is
/// used (the only trace that enters transmission conditions).
/// Interior/exterior traces of the associated potential are
/// D -/+ (1/(2 gamma)) I (scalar families) resp. D -/+ (1/2) I (anisotropic).
BoundaryOperator assemble_double_layer(const BoundaryGrid& src, const BoundaryGrid& tgt,
                                       const Kernel& kernel);

/// D': g -> PV integral of dG/dnu_x (x,y) g(y) dsigma_y (real-transpose
/// convention, no conjugation).  For the Laplace family this is the
/// Neumann-Poincare operator K* entering the polarization system.
BoundaryOperator assemble_adjoint_double_layer(const BoundaryGrid& src, const BoundaryGrid& tgt,
                                               const Kernel& kernel);

/// Quadrature certificate: max-norm residual of the Calderon commutation
/// relation S D' = D S on the given grid.  Decays spectrally with N on
/// analytic curves.
double calderon_residual(const BoundaryGrid& grid, const Kernel& kernel);

/// Total conormal flux of a point source at z through the curve:
///   contour-integral of gamma dG/dnu_x (x, z) ds(x)
/// (nu . A grad for the anisotropic family).  For the Laplace family this is
/// exactly -1 when z lies inside the curve and 0 when outside, which makes it
/// a global quadrature certificate; z must stay off the boundary.
Cplx source_flux(const BoundaryGrid& grid, const Kernel& kernel, Vec2 z);

/// Diagonal quadrature weight matrix entries ds_k = (2pi/N)|p'(t_k)| as a
/// vector; the discrete L^2 pairing is <u,v> = sum_k u_k conj(v_k) ds_k.
Eigen::VectorXd quadrature_weights(const BoundaryGrid& grid);

} // namespace resobem

#endif
