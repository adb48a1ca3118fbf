#ifndef RESOBEM_ASYMPTOTICS_HPP
#define RESOBEM_ASYMPTOTICS_HPP

#include <vector>

#include "resobem/dtn.hpp"
#include "resobem/polarization.hpp"
#include "resobem/transfer.hpp"

namespace resobem {

/// Dual basis of a resonance null space: u^{j*} = c_jk (S^{-conj(lambda)})^{-1}
/// conj(u^k), where S is the exterior-kernel single layer continued to
/// -conj(lambda) (elementwise conjugate of S at lambda, by Schwarz reflection)
/// and c = A^{-1} normalizes the weighted pairing so that
/// <u^j, u^{i*}> = delta_ji.  The columns of `vectors` span the null space of
/// the dual transfer operator at lambda.
struct DualBasis {
    Eigen::MatrixXcd vectors; // columns u^{j*} on the outer grid
    Eigen::MatrixXcd gram;    // A_li = <(S^{-conj(lambda)})^{-1} conj(u^l), u^i>
    Eigen::MatrixXcd coeff;   // c = A^{-1}
    Cplx lambda = 0.0;
};

/// Builds the dual basis from the primal null vectors (columns).  Throws
/// SingularGram if the pairing matrix is numerically singular
/// (cond > 1e12), which signals a nearly defective resonance.
DualBasis dual_basis(const BoundaryGrid& grid, const Eigen::MatrixXcd& null_vectors,
                     Cplx lambda, double gamma2);

/// Value of the interior Helmholtz extension v of the boundary trace f
/// (gamma1 laplacian v + omega^2 v = 0 in Omega, v = f on the boundary),
/// evaluated by the Green representation with the interior DtN flux.
Cplx interior_value(const BoundaryGrid& grid, const Eigen::VectorXcd& f, Cplx omega,
                    double gamma1, Vec2 z);

/// Gradient of the interior extension at z, differentiating the Green
/// representation kernels analytically.  Throws TooCloseToBoundary when
/// dist(z, boundary) <= 5x the largest arc spacing of the grid (the plain
/// trapezoid rule loses accuracy there).
Eigen::Vector2cd interior_gradient(const BoundaryGrid& grid, const Eigen::VectorXcd& f,
                                   Cplx omega, double gamma1, Vec2 z);

/// First-order resonance perturbation by small inclusions.
///
/// The cluster of perturbed resonances near a resonance lambda of geometric
/// multiplicity m shifts, to leading order eps^2, by the eigenvalues of the
/// m x m matrix
///     D = -A^{-1} B,
///     A_kl = <T'(lambda) u^l, dual^k>,
///     B_kl = eps^2 sum_i gamma1 (1 - gamma1/tr_i) grad vt^k(z_i) . M_i grad v^l(z_i),
/// where v^l (resp. vt^k) is the interior extension of the primal null vector
/// u^l (resp. of the primal shadow of the dual vector), M_i the polarization
/// tensor of the unit inclusion shape, tr_i the scalar contrast, and z_i the
/// inclusion centers.  The pairing against T'(lambda) makes the coefficient
/// exactly one; this normalization was anchored against directly tracked
/// perturbed resonances (relative error O(eps)) and is invariant under any
/// change of basis of the null space.
struct AsymptoticPrediction {
    Cplx lambda = 0.0;                            // unperturbed resonance
    Cplx delta_mean = 0.0;                        // averaged shift, O(eps^2)
    std::vector<Cplx> branches;                   // predicted perturbed resonances
    std::vector<Cplx> per_inclusion;              // contribution of each inclusion to delta_mean
    std::vector<Eigen::Vector2cd> gradients;      // grad v^l(z_i), inclusion-major
    double epsilon = 0.0;
    int ascent = 1;
};

/// Semisimple case (ascent 1): mean shift and per-branch predictions as the
/// eigenvalues of D.  tensors[i] must be the polarization tensor of the
/// *unit* shape of scene.inclusions[i] with background scene.gamma1 and
/// contrast inclusions[i].contrast_scalar(); the eps^2 area scaling is
/// applied here.  Throws AscentMismatch if ascent != 1.
AsymptoticPrediction predict_shift_simple(const Scene& scene, const BoundaryGrid& outer,
                                          Cplx lambda, const Eigen::MatrixXcd& null_vectors,
                                          const DualBasis& dual,
                                          const std::vector<PolarizationTensor>& tensors,
                                          int ascent = 1);

/// Ascent-alpha variant: the alpha-th power of each branch shift equals the
/// per-branch right-hand side R_j (the j-th diagonal entry of D), so each
/// branch expands into all alpha-th roots lambda + R_j^{1/alpha}.  alpha = 1
/// reduces to the per-branch terms of predict_shift_simple.
AsymptoticPrediction predict_shift_general(const Scene& scene, const BoundaryGrid& outer,
                                           Cplx lambda, const Eigen::MatrixXcd& null_vectors,
                                           const DualBasis& dual,
                                           const std::vector<PolarizationTensor>& tensors,
                                           int ascent);

/// Pointwise boundary form of the leading perturbation term.  For omega away
/// from resonances,
///   (T - T_eps) f = eps^2 gamma1^2 sum_i (1 - gamma1/tr_i)
///                   [ S_2 ( grad_z dG_D/dnu(., z_i) . M_i grad v(z_i) ) ] + o(eps^2),
/// where G_D is the Green function of the interior gamma1-Helmholtz Dirichlet
/// problem (free-space kernel minus its interior Dirichlet correction, so the
/// inclusion responds as a point dipole propagated to the boundary flux) and
/// S_2 the exterior-kernel single layer.  Returns, per eps, the max norm of
/// the left side and of the difference between the two sides.
struct ExpansionSample {
    double epsilon = 0.0;
    double lhs_norm = 0.0;  // max norm of (T - T_eps) f
    double residual = 0.0;  // max norm of LHS - RHS
};
std::vector<ExpansionSample> verify_boundary_expansion(Scene scene, const BoundaryGrid& outer,
                                                       Cplx omega, const Eigen::VectorXcd& f,
                                                       const std::vector<double>& eps_list,
                                                       int inclusion_n = 48);

/// Discrete Sobolev norm of a periodic grid function via its Fourier
/// coefficients: ||f||_{H^s}^2 = sum_k (1 + k^2)^s |fhat_k|^2 with
/// fhat_k = (1/N) sum_j f_j exp(-i k t_j).  s = 1/2 gives the trace-space
/// surrogate used by the perturbation bounds; s = 0 is the root-mean-square.
double sobolev_norm(const Eigen::VectorXcd& f, double s);

} // namespace resobem

#endif
