#include "resobem/harness.hpp"

#include <cmath>

#include <json.hpp>

namespace resobem {

namespace {

using json = nlohmann::json;

// Dispersion relation continued across the negative real axis by Schwarz
// reflection (real gamma1, gamma2).
Cplx dispersion_f(double g1, double g2, double radius, int m, Cplx w) {
    if (w.real() < 0.0)
        return std::conj(dispersion_f(g1, g2, radius, m, -std::conj(w)));
    const Cplx k1 = w / std::sqrt(g1);
    const Cplx k2 = w / std::sqrt(g2);
    const Cplx z1 = k1 * radius, z2 = k2 * radius;
    return g1 * k1 * bessel::j_deriv(m, z1) * hankel1(m, z2) -
           g2 * k2 * bessel::j(m, z1) * bessel::h1_deriv(m, z2);
}

} // namespace

std::vector<Cplx> disk_dispersion_oracle(double gamma1, double gamma2, double radius, int m,
                                         const Region& region) {
    if (gamma1 <= 0 || gamma2 <= 0 || radius <= 0 || m < 0)
        throw DomainError("disk_dispersion_oracle: parameters must be positive, m >= 0");
    std::vector<Cplx> roots;
    if (std::abs(gamma1 - gamma2) < 1e-14) return roots; // transparent: Wronskian, no roots

    auto f = [&](Cplx w) { return dispersion_f(gamma1, gamma2, radius, m, w); };
    const double w_re = region.re_max - region.re_min;
    const double w_im = region.im_max - region.im_min;
    const int nx = std::max(8, static_cast<int>(std::ceil(w_re / 0.12)));
    const int ny = std::max(8, static_cast<int>(std::ceil(w_im / 0.12)));
    for (int ix = 0; ix <= nx; ++ix)
        for (int iy = 0; iy <= ny; ++iy) {
            Cplx w(region.re_min + w_re * ix / nx, region.im_min + w_im * iy / ny);
            if (std::abs(w) < 1e-3) continue; // branch point
            bool converged = false;
            for (int it = 0; it < 60; ++it) {
                const double h = 1e-6 * (1.0 + std::abs(w));
                const Cplx fw = f(w);
                const Cplx df = (f(w + h) - f(w - h)) / (2.0 * h);
                if (std::abs(df) == 0.0) break;
                const Cplx step = fw / df;
                w -= step;
                if (std::abs(w) < 1e-6) break;
                if (std::abs(step) < 1e-14 * (1.0 + std::abs(w))) {
                    converged = true;
                    break;
                }
            }
            if (!converged || std::abs(f(w)) > 1e-12) continue;
            if (!region.contains(w)) continue;
            bool dup = false;
            for (Cplx r : roots)
                if (std::abs(r - w) < 1e-8 * (1.0 + std::abs(r))) dup = true;
            if (!dup) roots.push_back(w);
        }
    std::sort(roots.begin(), roots.end(),
              [](Cplx a, Cplx b) { return a.real() != b.real() ? a.real() < b.real()
                                                               : a.imag() < b.imag(); });
    return roots;
}

std::vector<ResonanceResult> find_resonances_region(const OperatorFn& t_fn,
                                                    const Eigen::VectorXd& weights,
                                                    const Region& region,
                                                    double contour_radius, int n_nodes,
                                                    int probe_rank, std::uint64_t seed) {
    const double width = region.re_max - region.re_min;
    const double height = region.im_max - region.im_min;
    const double center_im = 0.5 * (region.im_min + region.im_max);
    if (contour_radius <= height / 2.0)
        throw ConfigError("find_resonances_region: contour radius must exceed half the "
                          "region height");
    // horizontal reach of one contour while still covering the full height
    const double dx = std::sqrt(contour_radius * contour_radius - height * height / 4.0);
    const int n_cont = std::max(1, static_cast<int>(std::ceil(width / (1.8 * dx))));
    const double spacing = width / n_cont;

    // Skip Newton refinement of candidates clearly outside the region: they
    // would be filtered afterwards anyway, and chasing them dominates the
    // cost.  Pad by 0.01 so displaced estimates of near-boundary roots are
    // kept; keep the top pad below |im_max| so real-axis artifacts (where the
    // exterior kernel degenerates) are never refined.
    const double pad = 0.01;
    const double top_pad = std::min(pad, 0.5 * std::abs(region.im_max));
    auto keep = [&](Cplx z) {
        return z.real() >= region.re_min - pad && z.real() <= region.re_max + pad &&
               z.imag() >= region.im_min - pad && z.imag() <= region.im_max + top_pad;
    };

    std::vector<ResonanceResult> out;
    for (int k = 0; k < n_cont; ++k) {
        ContourSpec c;
        c.center = Cplx(region.re_min + spacing * (k + 0.5), center_im);
        c.radius = contour_radius;
        c.n_nodes = n_nodes;
        c.probe_rank = probe_rank;
        c.seed = seed;
        for (const ResonanceResult& r : find_resonances(t_fn, weights, c, keep)) {
            if (!region.contains(r.lambda)) continue;
            bool dup = false;
            for (const ResonanceResult& q : out)
                if (std::abs(q.lambda - r.lambda) < 1e-8 * (1.0 + std::abs(q.lambda)))
                    dup = true;
            if (!dup) out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end(), [](const ResonanceResult& a, const ResonanceResult& b) {
        return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real()
                                                  : a.lambda.imag() < b.lambda.imag();
    });
    return out;
}

Scene RunConfig::scene() const {
    Scene sc;
    if (outer_radius <= 0) throw ConfigError("outer_radius must be positive");
    if (gamma1 <= 0) throw ConfigError("gamma1 must be positive");
    if (gamma2 <= 0) throw ConfigError("gamma2 must be positive");
    sc.outer = ParametricCurve::circle(outer_radius);
    sc.gamma1 = gamma1;
    sc.gamma2 = gamma2;
    for (const Inclusion& i : inclusions) {
        InclusionSpec spec;
        spec.center = Vec2(i.cx, i.cy);
        if (i.shape == "circle")
            spec.shape = ParametricCurve::circle(i.a);
        else if (i.shape == "ellipse")
            spec.shape = ParametricCurve::ellipse(i.a, i.b);
        else if (i.shape == "kite")
            spec.shape = ParametricCurve::kite();
        else
            throw ConfigError("inclusions[].shape: unknown shape '" + i.shape + "'");
        if (i.contrast <= 0) throw ConfigError("inclusions[].contrast must be positive");
        spec.gamma = Mat2::Identity() * i.contrast;
        spec.validate();
        sc.inclusions.push_back(spec);
    }
    return sc;
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    auto get = [&](const json& obj, const char* key, auto& field) {
        if (!obj.contains(key)) return;
        try {
            field = obj.at(key).get<std::decay_t<decltype(field)>>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("config field '") + key + "' has the wrong type");
        }
    };
    get(j, "gamma1", cfg.gamma1);
    get(j, "gamma2", cfg.gamma2);
    get(j, "outer_radius", cfg.outer_radius);
    get(j, "outer_n", cfg.outer_n);
    get(j, "inclusion_n", cfg.inclusion_n);
    get(j, "contour_nodes", cfg.contour_nodes);
    get(j, "contour_radius", cfg.contour_radius);
    get(j, "seed", cfg.seed);
    get(j, "eps_list", cfg.eps_list);
    if (j.contains("region")) {
        const json& r = j.at("region");
        if (!r.is_object()) throw ConfigError("config field 'region' must be an object");
        get(r, "re_min", cfg.region.re_min);
        get(r, "re_max", cfg.region.re_max);
        get(r, "im_min", cfg.region.im_min);
        get(r, "im_max", cfg.region.im_max);
    }
    if (j.contains("inclusions")) {
        if (!j.at("inclusions").is_array())
            throw ConfigError("config field 'inclusions' must be an array");
        cfg.inclusions.clear();
        for (const json& ji : j.at("inclusions")) {
            RunConfig::Inclusion inc;
            get(ji, "cx", inc.cx);
            get(ji, "cy", inc.cy);
            get(ji, "shape", inc.shape);
            get(ji, "a", inc.a);
            get(ji, "b", inc.b);
            get(ji, "contrast", inc.contrast);
            cfg.inclusions.push_back(inc);
        }
    }
    cfg.scene(); // validate eagerly so errors surface at parse time
    if (cfg.outer_n < 4 || cfg.outer_n % 2 != 0)
        throw ConfigError("config field 'outer_n' must be even and >= 4");
    if (cfg.inclusion_n < 4 || cfg.inclusion_n % 2 != 0)
        throw ConfigError("config field 'inclusion_n' must be even and >= 4");
    return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["gamma1"] = cfg.gamma1;
    j["gamma2"] = cfg.gamma2;
    j["outer_radius"] = cfg.outer_radius;
    j["outer_n"] = cfg.outer_n;
    j["inclusion_n"] = cfg.inclusion_n;
    j["contour_nodes"] = cfg.contour_nodes;
    j["contour_radius"] = cfg.contour_radius;
    j["seed"] = cfg.seed;
    j["eps_list"] = cfg.eps_list;
    j["region"] = {{"re_min", cfg.region.re_min},
                   {"re_max", cfg.region.re_max},
                   {"im_min", cfg.region.im_min},
                   {"im_max", cfg.region.im_max}};
    j["inclusions"] = json::array();
    for (const RunConfig::Inclusion& i : cfg.inclusions)
        j["inclusions"].push_back({{"cx", i.cx},
                                   {"cy", i.cy},
                                   {"shape", i.shape},
                                   {"a", i.a},
                                   {"b", i.b},
                                   {"contrast", i.contrast}});
    return j.dump(2);
}

} // namespace resobem
