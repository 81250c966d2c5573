#pragma once

#include "curve_spec.hpp"
#include "export.hpp"
#include "framing.hpp"
#include "geometry.hpp"
#include "smarandache.hpp"
#include "verification.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ruledframe::cli {

inline constexpr const char* kOutputEnv = "RULEDFRAME_OUT";

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kRegularityError = 3, kOutputError = 4 };

inline int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Regularity: return kRegularityError;
    case ErrorKind::Output: return kOutputError;
    default: return kConfigError;
    }
}

struct RunConfig {
    std::string config_path;
    CurveSpec curve;
    std::vector<SurfaceKind> kinds{SurfaceKind::TN1, SurfaceKind::TN2, SurfaceKind::N1N2};
    std::optional<Interval> s_range;  // arclength window; the whole curve when absent
    Interval v_range{-1.0, 1.0};
    std::size_t ns = 201;
    std::size_t nv = 41;
    double quad_tol = 1e-10;
    double kappa_eps = kDefaultKappaEps;
    double rel_tol = 1e-6;
    double theta0 = 0.0;
    double v_eval = 0.5;
    double relative_floor = 1e-3;
    std::filesystem::path out_dir = "out";
};

/// Command-line values that take precedence over the file.
struct Overrides {
    std::optional<std::string> out;
    std::optional<std::string> kinds;
    std::optional<std::size_t> ns, nv;
    std::optional<double> theta0;
};

inline std::vector<SurfaceKind> parse_kinds(const std::string& list)
{
    std::vector<SurfaceKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) {
            const SurfaceKind k = parse_surface_kind(item);
            if (!is_named(k))
                throw Error(ErrorKind::Input, "kinds must be tn1, tn2 or n1n2");
            out.push_back(k);
        }
    if (out.empty())
        throw Error(ErrorKind::Input, "no surface kinds requested");
    return out;
}

/// The config file holds the curve spec, either at the top level or under
/// "curve", plus optional run settings under "run":
///   kinds, s_range, v_range, ns, nv, quad_tol, kappa_eps, rel_tol, theta0, v_eval,
///   relative_floor, out.
/// The output directory comes from --out, then $RULEDFRAME_OUT, then run.out.
inline RunConfig load_run_config(const std::string& path, const Overrides& ov = {})
{
    const nlohmann::json doc = read_json_file(path);
    if (!doc.is_object())
        throw Error(ErrorKind::Input, "config must be a JSON object");
    RunConfig cfg;
    cfg.config_path = path;
    cfg.curve = parse_curve_spec(doc.contains("curve") ? doc.at("curve") : doc);

    if (doc.contains("run")) {
        const auto& r = doc.at("run");
        if (!r.is_object())
            throw Error(ErrorKind::Input, "'run' must be an object");
        try {
            if (r.contains("kinds")) {
                std::string joined;
                for (const auto& k : r.at("kinds"))
                    joined += k.get<std::string>() + ",";
                cfg.kinds = parse_kinds(joined);
            }
            if (r.contains("s_range"))
                cfg.s_range = detail::interval(r.at("s_range"), "s_range");
            if (r.contains("v_range"))
                cfg.v_range = detail::interval(r.at("v_range"), "v_range");
            if (r.contains("ns"))
                cfg.ns = r.at("ns").get<std::size_t>();
            if (r.contains("nv"))
                cfg.nv = r.at("nv").get<std::size_t>();
            cfg.quad_tol = detail::number(r, "quad_tol", cfg.quad_tol);
            cfg.kappa_eps = detail::number(r, "kappa_eps", cfg.kappa_eps);
            cfg.rel_tol = detail::number(r, "rel_tol", cfg.rel_tol);
            cfg.theta0 = detail::number(r, "theta0", cfg.theta0);
            cfg.v_eval = detail::number(r, "v_eval", cfg.v_eval);
            cfg.relative_floor = detail::number(r, "relative_floor", cfg.relative_floor);
            if (r.contains("out"))
                cfg.out_dir = r.at("out").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::Input, std::string("bad run settings: ") + e.what());
        }
    }

    if (ov.kinds)
        cfg.kinds = parse_kinds(*ov.kinds);
    if (ov.ns)
        cfg.ns = *ov.ns;
    if (ov.nv)
        cfg.nv = *ov.nv;
    if (ov.theta0)
        cfg.theta0 = *ov.theta0;
    if (const char* env = std::getenv(kOutputEnv); env && *env)
        cfg.out_dir = env;
    if (ov.out)
        cfg.out_dir = *ov.out;

    if (cfg.ns < 2 || cfg.nv < 2)
        throw Error(ErrorKind::Input, "ns and nv must be at least 2");
    if (!(cfg.quad_tol > 0) || !(cfg.kappa_eps > 0) || !(cfg.rel_tol > 0) || !(cfg.relative_floor > 0))
        throw Error(ErrorKind::Input, "tolerances must be positive");
    return cfg;
}

/// Frame-grid size: at least 401 samples and a multiple of the output
/// spacing, so every output s lands on a frame sample.
inline std::size_t frame_samples(std::size_t ns)
{
    const std::size_t cells = ns - 1;
    const std::size_t factor = (400 + cells - 1) / cells;
    return cells * factor + 1;
}

struct Pipeline {
    FramedCurve framed;
    std::vector<RuledSurface> surfaces;
    std::vector<double> s_values, v_values;
};

/// Largest frame-grid step; longer curves get a finer frame grid.
inline constexpr double kMaxFrameStep = 0.02;

inline Pipeline prepare(const RunConfig& cfg)
{
    std::size_t n = frame_samples(cfg.ns);
    Pipeline p{frame_curve(cfg.curve, n, cfg.quad_tol, cfg.theta0), {}, {}, {}};
    if (const double step = p.framed.bishop.grid.step; step > kMaxFrameStep) {
        const auto factor = static_cast<std::size_t>(std::ceil(step / kMaxFrameStep));
        n = (n - 1) * factor + 1;
        p.framed = frame_curve(cfg.curve, n, cfg.quad_tol, cfg.theta0);
    }
    const Interval full = p.framed.bishop.grid.range();
    const Interval s = cfg.s_range.value_or(full);
    if (!full.contains(s.lo, 1e-9) || !full.contains(s.hi, 1e-9))
        throw Error(ErrorKind::Domain, "s_range lies outside the curve's arclength range");
    p.s_values = linspace(s.lo, s.hi, cfg.ns);
    p.v_values = linspace(cfg.v_range.lo, cfg.v_range.hi, cfg.nv);
    for (SurfaceKind k : cfg.kinds)
        p.surfaces.push_back(build_surface(p.framed.bishop, k, cfg.v_range));
    return p;
}

inline std::string base_name(SurfaceKind kind) { return to_string(kind); }

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out)
{
    const Pipeline p = prepare(cfg);
    AtomicWriter w(cfg.out_dir);
    std::ostringstream frames;
    write_frame_csv(frames, p.framed.bishop);
    w.add("frames.csv", frames.str());
    for (const auto& surf : p.surfaces) {
        const auto vs = classification_v_values(surf.kind, p.v_values, VerifyOptions{}.n1n2_v_gap);
        const SurfaceReport r = classify_surface(surf, p.s_values, vs, cfg.kappa_eps);
        w.add("report_" + base_name(surf.kind) + ".json", to_json(r).dump(2) + "\n");
        out << to_string(surf.kind) << ": developable=" << r.developable << " minimal=" << r.minimal
            << " cmc=" << (r.cmc ? format_double(*r.cmc) : std::string("none")) << " maxAbsK=" << r.max_abs_K
            << " maxAbsH=" << r.max_abs_H << " singular=" << r.singular_points.size() << "\n";
    }
    for (const auto& path : w.commit())
        out << "wrote " << path.string() << "\n";
    return kOk;
}

inline int cmd_mesh(const RunConfig& cfg, std::ostream& out)
{
    const Pipeline p = prepare(cfg);
    AtomicWriter w(cfg.out_dir);
    for (const auto& surf : p.surfaces) {
        const MeshGrid m = build_mesh(surf, p.s_values, p.v_values, cfg.kappa_eps);
        std::ostringstream os;
        write_obj(os, m, std::string(to_string(surf.kind)) + " ruled surface, " + std::to_string(m.ns) + " x " +
                             std::to_string(m.nv) + " lattice");
        w.add("surface_" + base_name(surf.kind) + ".obj", os.str());
    }
    for (const auto& path : w.commit())
        out << "wrote " << path.string() << "\n";
    return kOk;
}

inline int cmd_grid(const RunConfig& cfg, std::ostream& out)
{
    const Pipeline p = prepare(cfg);
    AtomicWriter w(cfg.out_dir);
    for (const auto& surf : p.surfaces) {
        const auto samples = evaluate_grid(surf, p.s_values, p.v_values, JetMode::Numeric, cfg.kappa_eps);
        std::ostringstream os;
        write_grid_csv(os, samples);
        w.add("grid_" + base_name(surf.kind) + ".csv", os.str());
    }
    for (const auto& path : w.commit())
        out << "wrote " << path.string() << "\n";
    return kOk;
}

inline VerificationReport run_verification(const RunConfig& cfg, const Pipeline& p)
{
    VerifyOptions opt;
    opt.kappa_eps = cfg.kappa_eps;
    opt.rel_tol = cfg.rel_tol;
    opt.v_eval = cfg.v_eval;
    opt.relative_floor = cfg.relative_floor;
    VerificationReport report;
    for (const auto& surf : p.surfaces)
        verify_surface(report, surf, p.s_values, p.v_values, opt);
    return report;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const Pipeline p = prepare(cfg);
    const VerificationReport report = run_verification(cfg, p);
    AtomicWriter w(cfg.out_dir);
    auto j = to_json(report);
    j["curve"] = cfg.curve.kind == "builtin" ? cfg.curve.name : cfg.curve.kind;
    j["frame_construction"] = p.framed.construction;
    w.add("verify.json", j.dump(2) + "\n");
    for (const auto& c : report.checks) {
        const char* tag = !c.asserted ? "INFO" : c.passed ? "PASS" : "FAIL";
        out << tag << "  " << c.name << ": " << format_double(c.measured) << " (tol " << c.tolerance << ")";
        if (!c.note.empty())
            out << "  [" << c.note << "]";
        out << "\n";
    }
    for (const auto& path : w.commit())
        out << "wrote " << path.string() << "\n";
    out << (report.passed() ? "verification passed" : "verification FAILED") << "\n";
    return report.passed() ? kOk : kVerifyFailed;
}

/// Runs one command and maps errors to exit codes.
inline int run(const std::string& command, const std::string& config_path, const Overrides& ov, std::ostream& out,
               std::ostream& err)
{
    try {
        const RunConfig cfg = load_run_config(config_path, ov);
        if (command == "analyze")
            return cmd_analyze(cfg, out);
        if (command == "mesh")
            return cmd_mesh(cfg, out);
        if (command == "grid")
            return cmd_grid(cfg, out);
        if (command == "verify")
            return cmd_verify(cfg, out);
        err << "unknown command '" << command << "'\n";
        return kConfigError;
    } catch (const Error& e) {
        err << "ruledframe: " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
}

} // namespace ruledframe::cli
