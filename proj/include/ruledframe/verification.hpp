#pragma once

#include "closedform.hpp"
#include "framing.hpp"
#include "geometry.hpp"
#include "smarandache.hpp"

#include <json.hpp>

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace ruledframe {

/// One verification line. Asserted checks decide the verdict; the others
/// only report the measured deviation.
struct CheckResult {
    std::string name;
    SurfaceKind kind = SurfaceKind::GENERIC;
    bool asserted = true;
    bool closed_form = false;  // compares a closed-form expression with the numeric oracle
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    double at_s = NAN;
    double at_v = NAN;
    std::size_t compared = 0;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool passed() const
    {
        for (const auto& c : checks)
            if (c.asserted && !c.passed)
                return false;
        return true;
    }

    const CheckResult* find(const std::string& name) const
    {
        for (const auto& c : checks)
            if (c.name == name)
                return &c;
        return nullptr;
    }
};

struct VerifyOptions {
    double kappa_eps = kDefaultKappaEps;
    double rel_tol = 1e-6;        // slant-helix ratio variation
    double v_eval = 0.5;          // ruling parameter for the base-curve invariants
    double n1n2_v_gap = 0.05;     // n1n2 grids skip |v| below this
    double relative_floor = 1e-8;  // denominator floor for relative K, H deviations
};

namespace detail {

/// Running maximum with its location.
struct Worst {
    double value = 0.0;
    double s = NAN, v = NAN;
    std::size_t count = 0;

    void add(double dev, double at_s, double at_v)
    {
        ++count;
        if (!(dev <= value)) {  // NaN propagates as a failure
            value = dev;
            s = at_s;
            v = at_v;
        }
    }
};

inline CheckResult make_check(std::string name, SurfaceKind kind, const Worst& w, double tol, bool asserted = true,
                              bool closed_form = false, std::string note = {})
{
    CheckResult c;
    c.name = std::move(name);
    c.kind = kind;
    c.asserted = asserted;
    c.closed_form = closed_form;
    c.measured = w.value;
    c.tolerance = tol;
    c.at_s = w.s;
    c.at_v = w.v;
    c.compared = w.count;
    c.passed = w.value <= tol;
    c.note = std::move(note);
    return c;
}

inline std::string prefix(SurfaceKind kind) { return std::string(to_string(kind)) + ": "; }

} // namespace detail

/// The v samples used for classification: n1n2 drops the band around its
/// singular line.
inline std::vector<double> classification_v_values(SurfaceKind kind, std::span<const double> v_values, double gap)
{
    std::vector<double> out;
    for (double v : v_values)
        if (kind != SurfaceKind::N1N2 || std::abs(v) >= gap)
            out.push_back(v);
    return out;
}

/// Cross-validates one surface: closed forms against the numeric pipeline,
/// the structural properties, striction and base-curve invariants.
inline void verify_surface(VerificationReport& report, const RuledSurface& surf, std::span<const double> s_values,
                           std::span<const double> v_values_in, const VerifyOptions& opt)
{
    using detail::Worst;
    const SurfaceKind kind = surf.kind;
    const std::string pre = detail::prefix(kind);
    const auto v_values = classification_v_values(kind, v_values_in, opt.n1n2_v_gap);

    Worst dK, dH, dN, dJet, orth, maxK, maxH, posK;
    std::size_t singular = 0;
    for (double s : s_values) {
        const auto b = bishop_sample(surf, s);
        const auto jet = jet1(b);
        for (double v : v_values) {
            PointAnalysis a;
            try {
                a = analyze_point(surf, s, v, JetMode::Numeric, opt.kappa_eps);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SingularPoint)
                    throw;
                ++singular;
                continue;
            }
            maxK.add(std::abs(a.K), s, v);
            maxH.add(std::abs(a.H), s, v);
            posK.add(a.K, s, v);
            const SurfaceJet jn = surface_jet(surf, s, v, JetMode::Numeric);
            const SurfaceJet jc = surface_jet(surf, s, v, JetMode::ClosedForm);
            double dj = 0.0;
            for (const auto& [x, y] : {std::pair{jn.s, jc.s}, {jn.v, jc.v}, {jn.ss, jc.ss}, {jn.sv, jc.sv}})
                dj = std::max(dj, (x - y).cwiseAbs().maxCoeff());
            dJet.add(dj, s, v);
            try {
                const auto kh = closedform::K_H(jet, v, kind);
                const double h = closedform::mean_curvature_orientation(kind, v) * kh.H;
                dK.add(std::abs(a.K - kh.K) / std::max(std::abs(kh.K), opt.relative_floor), s, v);
                dH.add(std::abs(a.H - h) / std::max(std::abs(h), opt.relative_floor), s, v);
                const Vec3 n = unit_normal(surf, s, v, JetMode::ClosedForm);
                dN.add((n - a.normal).norm(), s, v);
                orth.add(std::max(std::abs(n.dot(jn.s)), std::abs(n.dot(jn.v))), s, v);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SingularPoint)
                    throw;
            }
        }
    }
    const std::string sing = std::to_string(singular) + " singular points skipped";
    report.checks.push_back(detail::make_check(pre + "closed-form K matches numeric (relative)", kind, dK, 1e-4, true,
                                               true, sing));
    report.checks.push_back(detail::make_check(pre + "closed-form H matches numeric (relative, oriented)", kind, dH,
                                               1e-4, true, true));
    report.checks.push_back(
        detail::make_check(pre + "closed-form normal matches numeric (oriented)", kind, dN, 1e-5, true, true));
    report.checks.push_back(detail::make_check(pre + "closed-form normal orthogonal to chi_s, chi_v", kind, orth, 1e-7));
    report.checks.push_back(detail::make_check(pre + "closed-form and numeric jets agree", kind, dJet, 1e-4));
    if (kind == SurfaceKind::N1N2) {
        report.checks.push_back(detail::make_check(pre + "K == 0", kind, maxK, 1e-8));
        // minimal exactly when k1/k2 is constant
        bool slant = false;
        std::string note;
        bool decidable = true;
        try {
            const auto sh = slant_helix_test(*surf.bishop, opt.rel_tol);
            slant = sh.slant;
            note = std::string("slant helix: ") + (slant ? "yes" : "no");
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Indeterminate)
                throw;
            decidable = false;
            note = e.what();
        }
        CheckResult c = detail::make_check(pre + "minimal iff slant helix", kind, maxH, opt.kappa_eps, decidable);
        c.passed = (maxH.value <= opt.kappa_eps) == slant;
        c.note = note + ", max |H| = " + std::to_string(maxH.value);
        report.checks.push_back(c);
    } else {
        report.checks.push_back(detail::make_check(pre + "K <= 0", kind, posK, opt.kappa_eps));
    }

    // striction
    const StrictionCurve st = striction_curve(surf);
    if (kind == SurfaceKind::N1N2) {
        Worst d;
        for (std::size_t i = 0; i < st.points.size(); ++i)
            d.add((st.points[i] - surf.base[i]).norm(), st.grid.at(i), NAN);
        report.checks.push_back(detail::make_check(pre + "striction equals base curve", kind, d, 1e-8));
    } else {
        const auto def = striction_defect(st, surf);
        Worst d;
        d.count = def.checked;
        d.value = def.max_relative;
        d.s = def.at_s;
        report.checks.push_back(detail::make_check(pre + "striction satisfies <g', X'> = 0 (relative)", kind, d, 1e-4,
                                                   true, false,
                                                   std::to_string(def.checked) + " samples with a valid stencil"));
        Worst pub, der;
        for (std::size_t i = 0; i < st.points.size(); ++i) {
            if (!st.valid[i])
                continue;
            const double s = st.grid.at(i);
            const auto coeff = closedform::striction(jet1(bishop_sample(surf, s)), kind);
            pub.add(std::abs(coeff.stated - st.offset[i]), s, NAN);
            if (coeff.derived_valid)
                der.add(std::abs(coeff.derived - st.offset[i]) / std::max(1.0, std::abs(coeff.derived)), s, NAN);
        }
        report.checks.push_back(detail::make_check(pre + "striction offset, derived closed form vs numeric", kind, der,
                                                   1e-4, true, true));
        report.checks.push_back(detail::make_check(pre + "striction offset, stated formula vs numeric", kind, pub,
                                                   1e-4, false, true, "reported only"));
    }

    // base-curve invariants at v_eval
    if (surf.v_range.contains(opt.v_eval)) {
        const auto inv = base_curve_invariants(surf, opt.v_eval);
        Worst kn, kg, tg;
        const double orient = closedform::normal_orientation(kind, opt.v_eval);
        for (std::size_t i = 0; i < inv.valid.size(); ++i) {
            if (!inv.valid[i])
                continue;
            const double s = inv.grid.at(i);
            try {
                const auto c = closedform::curve_invariants(jet1(bishop_sample(surf, s)), opt.v_eval, kind);
                kn.add(std::abs(orient * inv.normal_curvature[i] - c.normal_curvature), s, opt.v_eval);
                kg.add(std::abs(orient * inv.geodesic_curvature[i] - c.geodesic_curvature), s, opt.v_eval);
                tg.add(std::abs(inv.geodesic_torsion[i] - c.geodesic_torsion), s, opt.v_eval);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SingularPoint)
                    throw;
            }
        }
        const bool assert_it = kind == SurfaceKind::N1N2;
        const std::string note = assert_it ? "" : "reported only";
        report.checks.push_back(
            detail::make_check(pre + "normal curvature, closed form vs numeric", kind, kn, 1e-5, assert_it, true, note));
        report.checks.push_back(detail::make_check(pre + "geodesic curvature, closed form vs numeric", kind, kg, 1e-5,
                                                   assert_it, true, note));
        report.checks.push_back(detail::make_check(pre + "geodesic torsion, closed form vs numeric", kind, tg, 1e-5,
                                                   assert_it, true, note));
    }
}

inline nlohmann::ordered_json to_json(const CheckResult& c)
{
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["kind"] = to_string(c.kind);
    j["asserted"] = c.asserted;
    j["passed"] = c.passed;
    j["max_deviation"] = std::isfinite(c.measured) ? nlohmann::ordered_json(c.measured) : nullptr;
    j["tolerance"] = c.tolerance;
    j["at"] = {{"s", std::isfinite(c.at_s) ? nlohmann::ordered_json(c.at_s) : nullptr},
               {"v", std::isfinite(c.at_v) ? nlohmann::ordered_json(c.at_v) : nullptr}};
    j["compared"] = c.compared;
    if (!c.note.empty())
        j["note"] = c.note;
    return j;
}

/// {"passed": ..., "checks": [...], "discrepancies": [...]} where the
/// discrepancies are the closed-form comparisons.
inline nlohmann::ordered_json to_json(const VerificationReport& r)
{
    nlohmann::ordered_json j;
    j["passed"] = r.passed();
    auto checks = nlohmann::ordered_json::array();
    auto disc = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        checks.push_back(to_json(c));
        if (c.closed_form)
            disc.push_back({{"name", c.name},
                            {"kind", to_string(c.kind)},
                            {"max_deviation", std::isfinite(c.measured) ? nlohmann::ordered_json(c.measured)
                                                                            : nlohmann::ordered_json(nullptr)},
                            {"at", to_json(c)["at"]},
                            {"asserted", c.asserted}});
    }
    j["checks"] = checks;
    j["discrepancies"] = disc;
    return j;
}

} // namespace ruledframe
