#ifndef RESOBEM_NEP_HPP
#define RESOBEM_NEP_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "resobem/transfer.hpp"

namespace resobem {

/// Analytic matrix family z -> T(z); resonances are the z where T(z) is
/// singular (poles of T^{-1}).
using OperatorFn = std::function<Eigen::MatrixXcd(Cplx)>;

struct ContourSpec {
    Cplx center = 0.0;
    double radius = 1.0;
    int n_nodes = 64;      // trapezoid nodes on the circle
    int probe_rank = 8;    // columns of the random probe block
    std::uint64_t seed = 0x5eed;
};

/// Trapezoid-rule contour moments of the resolvent applied to a random probe
/// block V:  A_k = (1/2pi i) contour-integral z^k T^{-1}(z) V dz,  k = 0, 1.
/// rank(A_0) equals the total algebraic count of resonances inside.
struct ContourMoments {
    Eigen::MatrixXcd a0, a1;
    Eigen::MatrixXcd probe;
    int rank = 0;
    double drop = 0.0; // singular value ratio at the rank cut
};

struct ResonanceResult {
    Cplx lambda = 0.0;
    int m_geo = 0;              // dim of the numerical null space of T(lambda)
    int alg_count = 0;          // eigenvalue count in the contour moments
    int ascent = 1;             // 1 when alg_count == m_geo, else flagged >= 2
    Eigen::MatrixXcd null_vectors; // weighted-orthonormal columns
    double residual = 0.0;      // sigma_min(T(lambda)) / sigma_max(T(lambda))
};

ContourMoments spectral_projector(const OperatorFn& t_fn, const ContourSpec& contour);

/// Raw eigenvalue candidates (with algebraic counts) linearized from the
/// contour moments, before Newton refinement.
struct BeynCandidate {
    Cplx lambda;
    int count = 1;
};
std::vector<BeynCandidate> beyn_candidates(const ContourMoments& moments,
                                           const ContourSpec& contour);

/// Beyn-style extraction from the contour moments, followed by Newton
/// refinement of each candidate on sigma_min(T(z)) using the two-sided
/// singular-vector derivative  d sigma/dz = u^H T'(z) v.  Returns converged
/// results only (residual < 1e-8), deduplicated; null vectors are
/// orthonormalized in the weighted inner product diag(weights).
/// If the contour passes within 1e-3 of a detected resonance the radius is
/// grown by 5% and the search repeated (up to three attempts).
/// An optional keep predicate discards raw candidates before the (costly)
/// Newton refinement; candidates it rejects are silently dropped, so it must
/// only exclude points the caller would filter out of the results anyway.
std::vector<ResonanceResult> find_resonances(const OperatorFn& t_fn,
                                             const Eigen::VectorXd& weights, ContourSpec contour,
                                             const std::function<bool(Cplx)>& keep = {});

/// Follows one resonance lambda0 of the unperturbed family through a
/// perturbation sweep: for each eps, searches a contour of the given radius
/// centered at lambda0 and insists the recovered count equals
/// expected_count (throws CountMismatch otherwise).
std::vector<ResonanceResult> track_resonance(
    const std::function<OperatorFn(double)>& family, Cplx lambda0,
    const std::vector<double>& eps_list, const std::vector<double>& radii,
    const Eigen::VectorXd& weights, int expected_count, int n_nodes = 64);

} // namespace resobem

#endif
