#ifndef RESOBEM_HARNESS_HPP
#define RESOBEM_HARNESS_HPP

#include <string>
#include <vector>

#include "resobem/nep.hpp"

namespace resobem {

/// Closed rectangle in the complex frequency plane.
struct Region {
    double re_min = 0.0, re_max = 0.0;
    double im_min = 0.0, im_max = 0.0;
    bool contains(Cplx z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
               z.imag() <= im_max;
    }
};

/// Roots of the disk dispersion relation
///   f_m(w) = gamma1 k1 J_m'(k1 R) H_m(k2 R) - gamma2 k2 J_m(k1 R) H_m'(k2 R),
///   k_i = w / sqrt(gamma_i),
/// inside the region, found by complex Newton from a seed grid and polished to
/// |f_m| < 1e-12, deduplicated.  The relation is continued across the negative
/// real axis by the reflection f(-conj(w)) = conj(f(w)) (real coefficients),
/// so for regions with re_min < 0 the root set is closed under w -> -conj(w).
/// Returns an empty list when the region holds no roots.
std::vector<Cplx> disk_dispersion_oracle(double gamma1, double gamma2, double radius, int m,
                                         const Region& region);

/// Covers the rectangle with a row of overlapping circular contours and runs
/// find_resonances on each, deduplicating and keeping only resonances inside
/// the region.  Contours may reach across the real axis; real-axis poles of
/// the discretized family (exterior-kernel breakdown frequencies) are
/// excluded by the region's im_max < 0.
std::vector<ResonanceResult> find_resonances_region(const OperatorFn& t_fn,
                                                    const Eigen::VectorXd& weights,
                                                    const Region& region,
                                                    double contour_radius, int n_nodes,
                                                    int probe_rank = 8,
                                                    std::uint64_t seed = 0x5eed);

/// Run configuration for the command-line driver, mirrored in JSON.
struct RunConfig {
    // scene
    double gamma1 = 1.0;
    double gamma2 = 2.0;
    double outer_radius = 1.0;
    struct Inclusion {
        double cx = 0.0, cy = 0.0;
        std::string shape = "circle"; // circle | ellipse | kite
        double a = 1.0, b = 1.0;      // shape parameters (ellipse semi-axes)
        double contrast = 2.0;        // scalar material value (gamma_D = contrast * I)
    };
    std::vector<Inclusion> inclusions;
    // solver
    int outer_n = 128;
    int inclusion_n = 48;
    int contour_nodes = 32;
    double contour_radius = 1.0;
    std::uint64_t seed = 0x5eed;
    // task parameters
    Region region{0.5, 4.0, -1.5, -0.01};
    std::vector<double> eps_list{0.2, 0.1, 0.05};

    Scene scene() const; // throws ConfigError on unknown shapes / bad values
};

/// Parses a JSON config document; throws ConfigError naming the offending
/// field.  Missing fields keep their defaults.
RunConfig parse_config(const std::string& json_text);

/// Serializes the full effective configuration (defaults included) so a run
/// manifest can reproduce it byte for byte.
std::string config_to_json(const RunConfig& cfg);

} // namespace resobem

#endif
