#include "resobem/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace resobem {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

Mat2 rot(double a) {
    Mat2 r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}
} // namespace

ParametricCurve::ParametricCurve(CurveKind k, double p0, double p1, int arms)
    : kind_(k), arms_(arms) {
    p_[0] = p0;
    p_[1] = p1;
}

ParametricCurve ParametricCurve::circle(double radius) {
    if (radius <= 0) throw NonRegularCurve("circle radius must be positive");
    return {CurveKind::Circle, radius, 0.0, 0};
}

ParametricCurve ParametricCurve::ellipse(double a, double b) {
    if (a <= 0 || b <= 0) throw NonRegularCurve("ellipse semi-axes must be positive");
    return {CurveKind::Ellipse, a, b, 0};
}

ParametricCurve ParametricCurve::kite(double delta) {
    return {CurveKind::Kite, delta, 0.0, 0};
}

ParametricCurve ParametricCurve::star(double radius, double delta, int arms) {
    if (radius <= 0) throw NonRegularCurve("star radius must be positive");
    if (std::abs(delta) >= 1.0) throw NonRegularCurve("star amplitude must satisfy |delta| < 1");
    return {CurveKind::Star, radius, delta, arms};
}

ParametricCurve ParametricCurve::translated(const Vec2& offset) const {
    ParametricCurve c = *this;
    c.center_ += offset;
    return c;
}

ParametricCurve ParametricCurve::rotated(double radians) const {
    ParametricCurve c = *this;
    c.rotation_ += radians;
    return c;
}

ParametricCurve ParametricCurve::scaled(double factor) const {
    if (factor < 0) throw NonRegularCurve("scale factor must be nonnegative");
    ParametricCurve c = *this;
    c.scale_ *= factor;
    return c;
}

Vec2 ParametricCurve::base_position(double t) const {
    switch (kind_) {
    case CurveKind::Circle:
        return {p_[0] * std::cos(t), p_[0] * std::sin(t)};
    case CurveKind::Ellipse:
        return {p_[0] * std::cos(t), p_[1] * std::sin(t)};
    case CurveKind::Kite:
        return {std::cos(t) + p_[0] * (std::cos(2 * t) - 1.0), std::sin(t)};
    case CurveKind::Star: {
        double r = p_[0] * (1.0 + p_[1] * std::cos(arms_ * t));
        return {r * std::cos(t), r * std::sin(t)};
    }
    }
    return Vec2::Zero();
}

Vec2 ParametricCurve::base_derivative(double t) const {
    switch (kind_) {
    case CurveKind::Circle:
        return {-p_[0] * std::sin(t), p_[0] * std::cos(t)};
    case CurveKind::Ellipse:
        return {-p_[0] * std::sin(t), p_[1] * std::cos(t)};
    case CurveKind::Kite:
        return {-std::sin(t) - 2.0 * p_[0] * std::sin(2 * t), std::cos(t)};
    case CurveKind::Star: {
        double r = p_[0] * (1.0 + p_[1] * std::cos(arms_ * t));
        double dr = -p_[0] * p_[1] * arms_ * std::sin(arms_ * t);
        return {dr * std::cos(t) - r * std::sin(t), dr * std::sin(t) + r * std::cos(t)};
    }
    }
    return Vec2::Zero();
}

Vec2 ParametricCurve::base_second_derivative(double t) const {
    switch (kind_) {
    case CurveKind::Circle:
        return {-p_[0] * std::cos(t), -p_[0] * std::sin(t)};
    case CurveKind::Ellipse:
        return {-p_[0] * std::cos(t), -p_[1] * std::sin(t)};
    case CurveKind::Kite:
        return {-std::cos(t) - 4.0 * p_[0] * std::cos(2 * t), -std::sin(t)};
    case CurveKind::Star: {
        double r = p_[0] * (1.0 + p_[1] * std::cos(arms_ * t));
        double dr = -p_[0] * p_[1] * arms_ * std::sin(arms_ * t);
        double ddr = -p_[0] * p_[1] * arms_ * arms_ * std::cos(arms_ * t);
        return {ddr * std::cos(t) - 2 * dr * std::sin(t) - r * std::cos(t),
                ddr * std::sin(t) + 2 * dr * std::cos(t) - r * std::sin(t)};
    }
    }
    return Vec2::Zero();
}

Vec2 ParametricCurve::position(double t) const {
    return center_ + scale_ * (rot(rotation_) * base_position(t));
}

Vec2 ParametricCurve::derivative(double t) const {
    return scale_ * (rot(rotation_) * base_derivative(t));
}

Vec2 ParametricCurve::second_derivative(double t) const {
    return scale_ * (rot(rotation_) * base_second_derivative(t));
}

std::string ParametricCurve::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case CurveKind::Circle: os << "circle(r=" << p_[0]; break;
    case CurveKind::Ellipse: os << "ellipse(a=" << p_[0] << ",b=" << p_[1]; break;
    case CurveKind::Kite: os << "kite(delta=" << p_[0]; break;
    case CurveKind::Star: os << "star(r=" << p_[0] << ",delta=" << p_[1] << ",arms=" << arms_; break;
    }
    os << ",scale=" << scale_ << ")";
    return os.str();
}

double BoundaryGrid::length() const {
    double s = 0;
    for (int k = 0; k < n; ++k) s += ds(k);
    return s;
}

double BoundaryGrid::enclosed_area() const {
    // divergence theorem: |A| = 1/2 oint x . nu ds
    double a = 0;
    for (int k = 0; k < n; ++k) a += 0.5 * node[k].dot(normal[k]) * ds(k);
    return a;
}

double BoundaryGrid::min_node_spacing() const {
    double m = std::numeric_limits<double>::max();
    for (int k = 0; k < n; ++k) m = std::min(m, (node[(k + 1) % n] - node[k]).norm());
    return m;
}

BoundaryGrid build_grid(const ParametricCurve& curve, int n) {
    if (n < 4 || n % 2 != 0)
        throw NonRegularCurve("grid size must be even and >= 4, got " + std::to_string(n));
    BoundaryGrid g;
    g.n = n;
    g.weight = two_pi / n;
    g.t.resize(n);
    g.node.resize(n);
    g.tangent.resize(n);
    g.normal.resize(n);
    g.speed.resize(n);
    g.curvature.resize(n);
    for (int k = 0; k < n; ++k) {
        double t = two_pi * k / n;
        g.t[k] = t;
        g.node[k] = curve.position(t);
        Vec2 d1 = curve.derivative(t);
        Vec2 d2 = curve.second_derivative(t);
        double sp = d1.norm();
        if (sp < 1e-12) throw NonRegularCurve("curve derivative vanishes at t=" + std::to_string(t));
        g.speed[k] = sp;
        Vec2 tau = d1 / sp;
        g.tangent[k] = tau;
        g.normal[k] = Vec2(tau.y(), -tau.x()); // outward for ccw parametrization
        g.curvature[k] = (d1.x() * d2.y() - d1.y() * d2.x()) / (sp * sp * sp);
    }
    if (g.enclosed_area() <= 0)
        throw NonRegularCurve("curve is not positively oriented (enclosed area <= 0)");

    // simplicity check: non-adjacent nodes must stay farther apart than the
    // local arc steps they subtend
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            double d = (g.node[i] - g.node[j]).norm();
            double harc = 0.5 * g.weight * (g.speed[i] + g.speed[j]);
            if (d < 0.5 * harc)
                throw SelfIntersectingCurve("curve self-intersects near nodes " +
                                            std::to_string(i) + "," + std::to_string(j));
        }
    }
    return g;
}

void InclusionSpec::validate() const {
    if (std::abs(gamma(0, 1) - gamma(1, 0)) > 1e-14 * (1.0 + gamma.cwiseAbs().maxCoeff()))
        throw Error("inclusion material matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat2> es(gamma);
    if (es.eigenvalues().minCoeff() <= 0)
        throw Error("inclusion material matrix must be positive definite");
}

ParametricCurve Scene::scaled_inclusion(int i) const {
    return inclusions[i].shape.scaled(epsilon).translated(inclusions[i].center);
}

SceneReport validate_scene(const Scene& scene, int check_n) {
    SceneReport rep;
    rep.min_pair_distance = std::numeric_limits<double>::max();
    rep.min_boundary_distance = std::numeric_limits<double>::max();

    if (scene.gamma1 <= 0 || scene.gamma2 <= 0) throw Error("background constants must be positive");
    if (scene.epsilon < 0) throw Error("epsilon must be nonnegative");
    for (const auto& inc : scene.inclusions) inc.validate();

    BoundaryGrid outer = build_grid(scene.outer, check_n);
    double margin = 3.0 * outer.weight * *std::max_element(outer.speed.begin(), outer.speed.end());
    rep.safety_margin = margin;

    // distance of each center to the outer boundary (the separation margin)
    for (size_t i = 0; i < scene.inclusions.size(); ++i) {
        double d = std::numeric_limits<double>::max();
        for (int k = 0; k < check_n; ++k)
            d = std::min(d, (outer.node[k] - scene.inclusions[i].center).norm());
        rep.min_boundary_distance = std::min(rep.min_boundary_distance, d);
        if (d < margin)
            throw BoundaryTooClose("inclusion " + std::to_string(i) +
                                   " center too close to outer boundary: dist=" + std::to_string(d));
    }

    if (scene.epsilon == 0.0) return rep; // degenerate inclusions are always disjoint

    std::vector<BoundaryGrid> grids;
    for (size_t i = 0; i < scene.inclusions.size(); ++i)
        grids.push_back(build_grid(scene.scaled_inclusion(int(i)), check_n));

    for (size_t i = 0; i < grids.size(); ++i) {
        // inclusion boundary vs outer boundary
        for (int a = 0; a < check_n; ++a)
            for (int b = 0; b < check_n; ++b) {
                double d = (grids[i].node[a] - outer.node[b]).norm();
                rep.min_boundary_distance = std::min(rep.min_boundary_distance, d);
                if (d < margin)
                    throw BoundaryTooClose("inclusion " + std::to_string(i) +
                                           " too close to outer boundary: dist=" + std::to_string(d));
            }
        for (size_t j = i + 1; j < grids.size(); ++j) {
            double d = std::numeric_limits<double>::max();
            for (int a = 0; a < check_n; ++a)
                for (int b = 0; b < check_n; ++b)
                    d = std::min(d, (grids[i].node[a] - grids[j].node[b]).norm());
            // also reject nested boundaries: signed test via winding of centers
            bool overlap = d < margin ||
                           (scene.inclusions[j].center - scene.inclusions[i].center).norm() <
                               0.5 * (grids[i].min_node_spacing() + grids[j].min_node_spacing());
            rep.min_pair_distance = std::min(rep.min_pair_distance, d);
            if (overlap)
                throw OverlapError("inclusions " + std::to_string(i) + " and " + std::to_string(j) +
                                   " overlap or nearly touch: dist=" + std::to_string(d));
        }
    }
    if (grids.size() < 2) rep.min_pair_distance = std::numeric_limits<double>::infinity();
    return rep;
}

} // namespace resobem
