// Command-line driver: resonance searches, polarization tensors,
// perturbation sweeps, invariant validation, and the disk dispersion oracle,
// with CSV artifacts and a JSON run manifest.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "resobem/asymptotics.hpp"
#include "resobem/harness.hpp"
#include "resobem/polarization.hpp"

using namespace resobem;
using nlohmann::json;

namespace {

// '.' decimal, round-trip precision, locale-free
std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct CsvWriter {
    std::ofstream out;
    CsvWriter(const std::filesystem::path& p, const std::string& header) : out(p) {
        out << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
    }
};

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    // least-squares slope of log y against log x
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

json threshold_block() {
    return {{"newton_sigma_rel", 1e-13},
            {"resonance_accept_rel", 1e-8},
            {"moment_rank_drop", 1e-8},
            {"dedupe_rel", 1e-8},
            {"oracle_abs", 1e-12}};
}

void write_manifest(const std::filesystem::path& dir, const std::string& task,
                    const RunConfig& cfg, double seconds, json extra) {
    json m;
    m["task"] = task;
    m["versions"] = {{"resobem", "0.1.0"},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                     {"cli11", CLI11_VERSION}};
    m["seed"] = cfg.seed;
    m["thresholds"] = threshold_block();
    m["timing_seconds"] = seconds;
    m["config"] = json::parse(config_to_json(cfg));
    if (!extra.is_null()) m["results"] = std::move(extra);
    std::ofstream(dir / "manifest.json") << m.dump(2) << "\n";
}

OperatorFn unperturbed_family(const BoundaryGrid& outer, const RunConfig& cfg) {
    return [&outer, g1 = cfg.gamma1, g2 = cfg.gamma2](Cplx w) {
        return assemble_T_continued(outer, w, g1, g2).mat;
    };
}

int run_resonances(const RunConfig& cfg, const std::filesystem::path& dir) {
    auto t0 = std::chrono::steady_clock::now();
    Scene scene = cfg.scene();
    auto outer = build_grid(scene.outer, cfg.outer_n);
    auto w = quadrature_weights(outer);
    auto found = find_resonances_region(unperturbed_family(outer, cfg), w, cfg.region,
                                        cfg.contour_radius, cfg.contour_nodes, 8, cfg.seed);
    CsvWriter csv(dir / "resonances.csv",
                  "lambda_re,lambda_im,multiplicity,alg_count,residual,grid_n,tolerance");
    for (const auto& r : found)
        csv.row({num(r.lambda.real()), num(r.lambda.imag()), std::to_string(r.m_geo),
                 std::to_string(r.alg_count), num(r.residual), std::to_string(cfg.outer_n),
                 num(1e-8)});
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, "resonances", cfg, dt, {{"count", found.size()}});
    return 0;
}

int run_polarization(const RunConfig& cfg, const std::filesystem::path& dir) {
    auto t0 = std::chrono::steady_clock::now();
    Scene scene = cfg.scene();
    CsvWriter csv(dir / "polarization.csv",
                  "index,shape,param_a,param_b,gamma_bg,contrast,m11,m12,m21,m22,grid_n,"
                  "quad_error");
    for (std::size_t i = 0; i < scene.inclusions.size(); ++i) {
        const auto& spec = cfg.inclusions[i];
        auto grid = build_grid(scene.inclusions[i].shape, cfg.inclusion_n);
        auto p = compute_polarization(grid, cfg.gamma1,
                                      scene.inclusions[i].contrast_scalar(), spec.shape);
        csv.row({std::to_string(i), spec.shape, num(spec.a), num(spec.b), num(cfg.gamma1),
                 num(spec.contrast), num(p.m(0, 0)), num(p.m(0, 1)), num(p.m(1, 0)),
                 num(p.m(1, 1)), std::to_string(cfg.inclusion_n), num(p.quad_error)});
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, "polarization", cfg, dt, {{"count", scene.inclusions.size()}});
    return 0;
}

int run_oracle(const RunConfig& cfg, const std::filesystem::path& dir) {
    auto t0 = std::chrono::steady_clock::now();
    CsvWriter csv(dir / "oracle.csv", "mode,lambda_re,lambda_im,tolerance");
    std::size_t count = 0;
    for (int m = 0; m <= 5; ++m)
        for (Cplx w :
             disk_dispersion_oracle(cfg.gamma1, cfg.gamma2, cfg.outer_radius, m, cfg.region)) {
            csv.row({std::to_string(m), num(w.real()), num(w.imag()), num(1e-12)});
            ++count;
        }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, "oracle-disk", cfg, dt, {{"count", count}});
    return 0;
}

int run_sweep(const RunConfig& cfg, const std::filesystem::path& dir) {
    auto t0 = std::chrono::steady_clock::now();
    Scene scene = cfg.scene();
    if (scene.inclusions.empty()) throw ConfigError("sweep requires at least one inclusion");
    auto outer = build_grid(scene.outer, cfg.outer_n);
    auto w = quadrature_weights(outer);

    auto found = find_resonances_region(unperturbed_family(outer, cfg), w, cfg.region,
                                        cfg.contour_radius, cfg.contour_nodes, 8, cfg.seed);
    CsvWriter csv(dir / "sweep.csv",
                  "eps,branch,lambda_eps_re,lambda_eps_im,delta_pred_re,delta_pred_im,"
                  "residual,residual_over_eps2,slope,grid_n,tolerance");
    if (found.empty()) {
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(dir, "sweep", cfg, dt, {{"count", 0}});
        return 0;
    }
    // the least-damped resonance in the region, as the physically dominant pole
    const auto& base = *std::min_element(
        found.begin(), found.end(),
        [](const auto& a, const auto& b) { return -a.lambda.imag() < -b.lambda.imag(); });
    Cplx lambda0 = base.lambda;

    auto dual = dual_basis(outer, base.null_vectors, lambda0, cfg.gamma2);
    std::vector<PolarizationTensor> tensors;
    for (std::size_t i = 0; i < scene.inclusions.size(); ++i)
        tensors.push_back(compute_polarization(build_grid(scene.inclusions[i].shape,
                                                          cfg.inclusion_n),
                                               cfg.gamma1,
                                               scene.inclusions[i].contrast_scalar(),
                                               cfg.inclusions[i].shape));

    std::vector<std::vector<Cplx>> predicted;
    std::vector<double> radii;
    for (double eps : cfg.eps_list) {
        scene.epsilon = eps;
        auto pred = base.m_geo == 1
                        ? predict_shift_simple(scene, outer, lambda0, base.null_vectors, dual,
                                               tensors, base.ascent)
                        : predict_shift_general(scene, outer, lambda0, base.null_vectors, dual,
                                                tensors, base.ascent);
        predicted.push_back(pred.branches);
        double reach = 0.0;
        for (Cplx b : pred.branches) reach = std::max(reach, std::abs(b - lambda0));
        radii.push_back(std::max(5.0 * reach, 1e-3));
    }

    auto family = [&](double eps) -> OperatorFn {
        return [&, eps](Cplx omega) {
            Scene s = cfg.scene();
            s.epsilon = eps;
            std::vector<BoundaryGrid> grids;
            for (std::size_t i = 0; i < s.inclusions.size(); ++i)
                grids.push_back(build_grid(s.scaled_inclusion(static_cast<int>(i)),
                                           cfg.inclusion_n));
            return assemble_T_eps(s, outer, grids, omega, cfg.gamma2).mat;
        };
    };
    auto tracked = track_resonance(family, lambda0, cfg.eps_list, radii, w,
                                   base.m_geo, cfg.contour_nodes);

    // rows grouped by eps; each measured branch is matched to its nearest
    // predicted branch
    std::vector<double> eps_flat, resid_flat;
    std::size_t cursor = 0;
    std::vector<std::array<std::string, 9>> pending;
    for (std::size_t e = 0; e < cfg.eps_list.size(); ++e) {
        double eps = cfg.eps_list[e];
        std::vector<const ResonanceResult*> here;
        while (cursor < tracked.size() &&
               here.size() < static_cast<std::size_t>(base.m_geo))
            here.push_back(&tracked[cursor++]);
        int branch = 0;
        for (const auto* r : here) {
            Cplx best = predicted[e][0];
            for (Cplx p : predicted[e])
                if (std::abs(r->lambda - p) < std::abs(r->lambda - best)) best = p;
            double resid = std::abs(r->lambda - best);
            eps_flat.push_back(eps);
            resid_flat.push_back(resid);
            pending.push_back({num(eps), std::to_string(branch++), num(r->lambda.real()),
                               num(r->lambda.imag()), num(best.real() - lambda0.real()),
                               num(best.imag() - lambda0.imag()), num(resid),
                               num(resid / (eps * eps)), num(r->residual)});
        }
    }
    double slope = eps_flat.size() >= 2 ? fitted_slope(eps_flat, resid_flat) : 0.0;
    for (const auto& p : pending)
        csv.row({p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], num(slope),
                 std::to_string(cfg.outer_n), p[8]});

    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, "sweep", cfg, dt,
                   {{"lambda0_re", lambda0.real()},
                    {"lambda0_im", lambda0.imag()},
                    {"multiplicity", base.m_geo},
                    {"residual_slope", slope}});
    return 0;
}

int run_validate(const RunConfig& cfg, const std::filesystem::path& dir) {
    auto t0 = std::chrono::steady_clock::now();
    Scene scene = cfg.scene();
    json report = json::array();
    bool ok = true;
    auto check = [&](const std::string& name, double value, double bound) {
        bool pass = value < bound;
        ok = ok && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << name << "  (" << value << " vs " << bound
                  << ")\n";
        report.push_back({{"name", name}, {"value", value}, {"bound", bound}, {"pass", pass}});
    };

    auto disk = build_grid(ParametricCurve::circle(1.0), 256);
    check("calderon_commutation", calderon_residual(disk, Kernel::helmholtz(2.0, cfg.gamma2)),
          1e-8);

    auto lap = Kernel::laplace(cfg.gamma1);
    auto d = assemble_double_layer(disk, disk, lap);
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(disk.n);
    check("gauss_identity",
          ((d.mat * ones).array() + 1.0 / (2.0 * cfg.gamma1)).abs().maxCoeff(), 1e-10);

    auto inner = build_grid(ParametricCurve::circle(0.4), 128);
    Cplx fi = source_flux(inner, lap, Vec2(0.1, 0.0));
    Cplx fo = source_flux(disk, lap, Vec2(0.1, 0.0));
    check("source_flux_normalization", std::abs(fi + 1.0), 1e-10);
    check("annulus_flux_balance", std::abs(fo - fi), 1e-10);

    for (std::size_t i = 0; i < scene.inclusions.size(); ++i) {
        auto g = build_grid(scene.inclusions[i].shape, std::max(cfg.inclusion_n, 64));
        auto p = compute_polarization(g, cfg.gamma1, scene.inclusions[i].contrast_scalar(),
                                      cfg.inclusions[i].shape);
        std::string tag = "inclusion_" + std::to_string(i);
        check(tag + "_tensor_symmetry", std::abs(p.m(0, 1) - p.m(1, 0)), 1e-8);
        Eigen::SelfAdjointEigenSolver<Mat2> eig(p.m);
        check(tag + "_tensor_definiteness", -eig.eigenvalues().minCoeff(), 0.0 + 1e-12);
    }

    check("config_roundtrip",
          config_to_json(parse_config(config_to_json(cfg))) == config_to_json(cfg) ? 0.0 : 1.0,
          0.5);

    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, "validate", cfg, dt, {{"checks", report}, {"all_pass", ok}});
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-integral resonance solver for 2D transmission problems"};
    app.require_subcommand(1);
    app.fallthrough(true); // let subcommands accept the global flags

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory for CSV/manifest artifacts");
    app.add_option("--seed", seed, "override the RNG seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--threads", threads, "worker threads (affects speed only)");

    auto* c_res = app.add_subcommand("resonances", "search a frequency region for resonances");
    auto* c_pol = app.add_subcommand("polarization", "polarization tensors of the inclusions");
    auto* c_swp = app.add_subcommand("sweep", "epsilon sweep: measured vs predicted shifts");
    auto* c_val = app.add_subcommand("validate", "run the invariant suite");
    auto* c_ora = app.add_subcommand("oracle-disk", "semi-analytic disk dispersion roots");

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) Eigen::setNbThreads(threads);

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file: " + config_path);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            cfg = parse_config(text);
        }
        if (seed_set) cfg.seed = seed;
        std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);

        if (c_res->parsed()) return run_resonances(cfg, dir);
        if (c_pol->parsed()) return run_polarization(cfg, dir);
        if (c_swp->parsed()) return run_sweep(cfg, dir);
        if (c_val->parsed()) return run_validate(cfg, dir);
        if (c_ora->parsed()) return run_oracle(cfg, dir);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}
