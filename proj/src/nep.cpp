#include "resobem/nep.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <random>

namespace resobem {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXcd random_probe(int n, int r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd v(n, r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) v(i, j) = Cplx(gauss(rng), gauss(rng));
    return v;
}

struct SigmaMin {
    double sigma = 0.0, sigma_max = 0.0;
    Eigen::VectorXcd u, v; // left/right singular vectors of sigma_min
    int null_dim = 0;
    Eigen::MatrixXcd null_basis;
};

SigmaMin smallest_singular_triplet(const Eigen::MatrixXcd& a) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const int n = static_cast<int>(sv.size());
    SigmaMin s;
    s.sigma = sv(n - 1);
    s.sigma_max = sv(0);
    s.u = svd.matrixU().col(n - 1);
    s.v = svd.matrixV().col(n - 1);
    while (s.null_dim < n && sv(n - 1 - s.null_dim) < 1e-6 * s.sigma_max) ++s.null_dim;
    if (s.null_dim > 0) s.null_basis = svd.matrixV().rightCols(s.null_dim);
    return s;
}

// Modified Gram-Schmidt in the inner product <a,b> = sum a_i conj(b_i) w_i.
Eigen::MatrixXcd weighted_orthonormalize(Eigen::MatrixXcd v, const Eigen::VectorXd& w) {
    for (int j = 0; j < v.cols(); ++j) {
        for (int i = 0; i < j; ++i) {
            Cplx proj = (v.col(i).adjoint() * w.asDiagonal() * v.col(j))(0);
            v.col(j) -= proj * v.col(i);
        }
        double norm = std::sqrt(std::real((v.col(j).adjoint() * w.asDiagonal() * v.col(j))(0)));
        v.col(j) /= norm;
    }
    return v;
}

} // namespace

// Beyn linearization: eigenvalues of U0^H A1 W0 S0^{-1} are the resonances
// enclosed by the contour, clustered to merge multiple copies.
std::vector<BeynCandidate> beyn_candidates(const ContourMoments& m, const ContourSpec& contour) {
    const int k = m.rank;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m.a0, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXcd u0 = svd.matrixU().leftCols(k);
    Eigen::MatrixXcd w0 = svd.matrixV().leftCols(k);
    Eigen::VectorXd s0 = svd.singularValues().head(k);
    Eigen::MatrixXcd b = u0.adjoint() * m.a1 * w0 * s0.cwiseInverse().asDiagonal();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(b, false);

    std::vector<BeynCandidate> out;
    for (int i = 0; i < k; ++i) {
        Cplx lam = eig.eigenvalues()(i);
        if (std::abs(lam - contour.center) > contour.radius * (1.0 + 1e-8)) continue;
        bool merged = false;
        for (auto& c : out)
            if (std::abs(c.lambda - lam) < 1e-6 * (1.0 + std::abs(lam))) {
                c.count += 1;
                merged = true;
                break;
            }
        if (!merged) out.push_back({lam, 1});
    }
    return out;
}

namespace {

// Newton iteration on sigma_min(T(z)) with the analytic-root update
// dz = -sigma / (u^H T'(z) v); T' by central finite difference.  Iterates
// escaping twice the contour radius are abandoned: such candidates are
// quadrature noise, and following them risks evaluating the family far
// outside its safe domain.
bool refine(const OperatorFn& t_fn, Cplx& lambda, SigmaMin& final_svd, Cplx center,
            double max_dist) {
    double best_sigma = std::numeric_limits<double>::max();
    int stagnant = 0;
    for (int it = 0; it < 30; ++it) {
        if (std::abs(lambda - center) > max_dist) return false;
        Eigen::MatrixXcd t = t_fn(lambda);
        SigmaMin s = smallest_singular_triplet(t);
        final_svd = s;
        if (s.sigma < 1e-13 * s.sigma_max) return true;
        // noise candidates make no progress; genuine roots contract by at
        // least ~1/2 per step even when the root is multiple
        stagnant = (s.sigma > 0.7 * best_sigma) ? stagnant + 1 : 0;
        best_sigma = std::min(best_sigma, s.sigma);
        if (stagnant >= 3) break;
        // one-sided difference reusing t: the O(h) derivative error only
        // perturbs the Newton step, not the converged root (sigma decides)
        double h = 1e-6 * (1.0 + std::abs(lambda));
        Eigen::MatrixXcd dt = (t_fn(lambda + h) - t) / h;
        Cplx deriv = (s.u.adjoint() * dt * s.v)(0);
        if (std::abs(deriv) == 0.0) return false;
        Cplx step = -s.sigma / deriv;
        lambda += step;
        if (std::abs(step) < 1e-12 * (1.0 + std::abs(lambda))) {
            final_svd = smallest_singular_triplet(t_fn(lambda));
            return true;
        }
    }
    return final_svd.sigma < 1e-8 * final_svd.sigma_max;
}

} // namespace

ContourMoments spectral_projector(const OperatorFn& t_fn, const ContourSpec& contour) {
    if (contour.radius <= 0.0 || contour.n_nodes < 8) throw ConfigError("invalid contour");
    ContourMoments m;
    const int nodes = contour.n_nodes;
    for (int j = 0; j < nodes; ++j) {
        double theta = 2.0 * kPi * j / nodes;
        Cplx e = std::exp(Cplx(0, theta));
        Cplx z = contour.center + contour.radius * e;
        Eigen::MatrixXcd t = t_fn(z);
        if (m.probe.size() == 0) {
            m.probe = random_probe(static_cast<int>(t.rows()), contour.probe_rank, contour.seed);
            m.a0 = Eigen::MatrixXcd::Zero(t.rows(), contour.probe_rank);
            m.a1 = m.a0;
        }
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(t);
        double rc = lu.rcond();
        if (!(rc > 1e-14))
            throw ContourThroughPole("resolvent solve on the contour has condition > 1e14");
        Eigen::MatrixXcd x = lu.solve(m.probe);
        Cplx factor = contour.radius * e / double(nodes);
        m.a0 += factor * x;
        m.a1 += factor * z * x;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m.a0);
    const auto& sv = svd.singularValues();
    if (sv(0) >= 1e-8) {
        while (m.rank < sv.size() && sv(m.rank) > 1e-8 * sv(0)) ++m.rank;
        m.drop = m.rank < sv.size() ? sv(m.rank) / sv(m.rank - 1) : 0.0;
    }
    return m;
}

std::vector<ResonanceResult> find_resonances(const OperatorFn& t_fn,
                                             const Eigen::VectorXd& weights, ContourSpec contour,
                                             const std::function<bool(Cplx)>& keep) {
    for (int attempt = 0; attempt < 3; ++attempt) {
        ContourMoments moments = spectral_projector(t_fn, contour);
        // probe block must strictly dominate the enclosed count
        while (moments.rank == contour.probe_rank &&
               contour.probe_rank < weights.size()) {
            contour.probe_rank = std::min<int>(2 * contour.probe_rank, static_cast<int>(weights.size()));
            moments = spectral_projector(t_fn, contour);
        }
        if (moments.rank == 0) return {};

        std::vector<ResonanceResult> results;
        bool contact = false;
        for (const BeynCandidate& cand : beyn_candidates(moments, contour)) {
            if (keep && !keep(cand.lambda)) continue;
            Cplx lambda = cand.lambda;
            SigmaMin s;
            if (!refine(t_fn, lambda, s, contour.center, 2.0 * contour.radius))
                continue; // no convergence: drop candidate
            if (s.sigma >= 1e-8 * s.sigma_max) continue;
            if (std::abs(std::abs(lambda - contour.center) - contour.radius) < 1e-3) {
                contact = true;
                break;
            }
            bool merged = false;
            for (auto& r : results)
                if (std::abs(r.lambda - lambda) < 1e-8 * (1.0 + std::abs(lambda))) {
                    r.alg_count += cand.count;
                    merged = true;
                    break;
                }
            if (merged) continue;
            ResonanceResult r;
            r.lambda = lambda;
            r.alg_count = cand.count;
            r.m_geo = s.null_dim;
            r.residual = s.sigma / s.sigma_max;
            r.null_vectors = weighted_orthonormalize(s.null_basis, weights);
            results.push_back(std::move(r));
        }
        if (contact) {
            contour.radius *= 1.05; // re-run clear of the detected pole
            continue;
        }
        for (auto& r : results) r.ascent = r.alg_count == r.m_geo ? 1 : 2;
        return results;
    }
    throw NoConvergence("contour could not be separated from the resonance set");
}

std::vector<ResonanceResult> track_resonance(
    const std::function<OperatorFn(double)>& family, Cplx lambda0,
    const std::vector<double>& eps_list, const std::vector<double>& radii,
    const Eigen::VectorXd& weights, int expected_count, int n_nodes) {
    if (eps_list.size() != radii.size()) throw CountMismatch("eps_list and radii sizes differ");
    std::vector<ResonanceResult> out;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        ContourSpec contour;
        contour.center = lambda0;
        contour.radius = radii[i];
        contour.n_nodes = n_nodes;
        auto found = find_resonances(family(eps_list[i]), weights, contour);
        int count = 0;
        for (const auto& r : found) count += r.m_geo;
        if (count != expected_count)
            throw CountMismatch("recovered " + std::to_string(count) + " resonances near the tracked pole, expected " +
                                std::to_string(expected_count) + " at eps = " + std::to_string(eps_list[i]));
        for (auto& r : found) out.push_back(std::move(r));
    }
    return out;
}

} // namespace resobem
