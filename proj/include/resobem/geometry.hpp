#ifndef RESOBEM_GEOMETRY_HPP
#define RESOBEM_GEOMETRY_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "resobem/errors.hpp"

namespace resobem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class CurveKind { Circle, Ellipse, Kite, Star };

/// Analytic closed curve p(t), t in [0, 2pi).  All shapes are C-infinity and
/// parametrized counterclockwise before the rigid transform is applied.
///
///   circle : (R cos t, R sin t)
///   ellipse: (a cos t, b sin t)
///   kite   : (cos t + delta (cos 2t - 1), sin t)       (standard BEM test shape)
///   star   : r(t) = R (1 + delta cos(arms * t)) radial perturbation
class ParametricCurve {
  public:
    static ParametricCurve circle(double radius);
    static ParametricCurve ellipse(double a, double b);
    static ParametricCurve kite(double delta = 0.65);
    static ParametricCurve star(double radius, double delta, int arms);

    /// Rigid transform applied after the base parametrization.
    ParametricCurve translated(const Vec2& offset) const;
    ParametricCurve rotated(double radians) const;
    ParametricCurve scaled(double factor) const;

    Vec2 position(double t) const;
    Vec2 derivative(double t) const;
    Vec2 second_derivative(double t) const;

    CurveKind kind() const { return kind_; }
    const Vec2& center() const { return center_; }
    double rotation() const { return rotation_; }
    double scale() const { return scale_; }
    double param(int i) const { return p_[i]; }
    int arms() const { return arms_; }
    std::string describe() const;

  private:
    ParametricCurve(CurveKind k, double p0, double p1, int arms);
    Vec2 base_position(double t) const;
    Vec2 base_derivative(double t) const;
    Vec2 base_second_derivative(double t) const;

    CurveKind kind_;
    double p_[2] = {0.0, 0.0}; // radius / semi-axes / perturbation amplitude
    int arms_ = 0;
    Vec2 center_ = Vec2::Zero();
    double rotation_ = 0.0;
    double scale_ = 1.0;
};

/// Nystrom grid on a closed curve: N equispaced parameter nodes with the
/// exact analytic tangents/normals and the uniform trapezoid weight 2pi/N.
struct BoundaryGrid {
    int n = 0;
    std::vector<double> t;            // parameter values 2 pi k / N
    std::vector<Vec2> node;           // p(t_k)
    std::vector<Vec2> tangent;        // unit tangent
    std::vector<Vec2> normal;         // outward unit normal
    std::vector<double> speed;        // |p'(t_k)|
    std::vector<double> curvature;    // signed curvature at t_k
    double weight = 0.0;              // 2 pi / N

    /// Quadrature measure at node k: weight * speed[k].
    double ds(int k) const { return weight * speed[k]; }

    double length() const;
    double enclosed_area() const;
    double min_node_spacing() const;
};

/// Builds a grid with N nodes.  N must be even and >= 4 (the self-interaction
/// quadrature needs an even count); throws NonRegularCurve if |p'| degenerates.
BoundaryGrid build_grid(const ParametricCurve& curve, int n);

/// One small inclusion D_i = z_i + eps * B_i with constant SPD material matrix.
struct InclusionSpec {
    Vec2 center = Vec2::Zero();
    ParametricCurve shape = ParametricCurve::circle(1.0);
    Mat2 gamma = Mat2::Identity();

    /// Throws if gamma is not symmetric positive definite.
    void validate() const;
    /// Scalar contrast used by the polarization tensor and the shift formulas:
    /// the mean of the eigenvalues, so an isotropic c*I inclusion has contrast c.
    double contrast_scalar() const { return 0.5 * (gamma(0, 0) + gamma(1, 1)); }
};

struct Scene {
    ParametricCurve outer = ParametricCurve::circle(1.0);
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double epsilon = 0.0;
    std::vector<InclusionSpec> inclusions;

    /// Curve of the scaled inclusion z_i + eps * B_i.
    ParametricCurve scaled_inclusion(int i) const;
};

struct SceneReport {
    double min_pair_distance = 0.0;   // between scaled inclusion boundaries
    double min_boundary_distance = 0; // centers to outer boundary
    double safety_margin = 0.0;       // 3 x max node spacing used in the check
};

/// Numerically validates pairwise disjointness and the d_0 margin to the outer
/// boundary; throws OverlapError / BoundaryTooClose.  eps = 0 always passes.
SceneReport validate_scene(const Scene& scene, int check_n = 128);

} // namespace resobem

#endif
