#ifndef RESOBEM_POLARIZATION_HPP
#define RESOBEM_POLARIZATION_HPP

#include <string>

#include "resobem/potentials.hpp"

namespace resobem {

/// Polarization tensor of a shape B with scalar background conductivity
/// gamma_bg and scalar inclusion contrast trace_gd (the trace-mean of the
/// inclusion's material matrix):
///   M_jl = |B| delta_jl + (gamma_bg/trace_gd - 1) * contour-integral of
///          y_j d phi_l^+ / d nu  over the boundary of B,
/// where phi_l is the exterior-decaying corrector of the transmission problem
/// with flux jump -trace_gd nu_l across the boundary.
struct PolarizationTensor {
    Mat2 m = Mat2::Zero();
    std::string shape;
    double gamma_bg = 1.0;
    double trace_gd = 1.0;
    int grid_n = 0;
    double quad_error = 0.0; // density-mean + symmetry-defect estimate
};

/// Solves the second-kind Neumann-Poincare system
///   (lambda_c I - K*) psi_l = (trace_gd / (gamma_bg - trace_gd)) nu_l,
///   lambda_c = (gamma_bg + trace_gd) / (2 (gamma_bg - trace_gd)),
/// with K* the Laplace adjoint double layer (K* 1 = -1/2 on closed curves in
/// this kernel normalization), then reconstructs d phi^+/d nu = (K* - 1/2) psi
/// from the single-layer jump relations.  lambda_c lies outside the NP
/// spectrum [-1/2, 1/2) for positive contrasts, so the system is well posed;
/// IllConditioned guards the solve regardless.  Zero contrast short-circuits
/// to M = |B| I.
PolarizationTensor compute_polarization(const BoundaryGrid& b, double gamma_bg, double trace_gd,
                                        const std::string& shape_id = "");

/// Tensor of the scaled shape s*B: both terms of M scale with area, so
/// M(sB) = s^2 M(B).
PolarizationTensor polarization_shape_scaling(const PolarizationTensor& m, double s);

} // namespace resobem

#endif
