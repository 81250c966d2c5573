#pragma once

#include "curve.hpp"
#include "framing.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ruledframe {

/// Curve description read from JSON:
///   {"kind": "builtin", "name": "helix", "params": {"a": 1, "b": 1}, "domain": [a, b]}
///   {"kind": "bishop_profile", "samples": [[s, k1, k2], ...]}
///   {"kind": "bishop_profile", "params": {"k1": 0.4, "k2": {"a0": 0, "a1": 1, "omega": 1, "phi": 0}},
///    "domain": [a, b]}
/// Profiles may add "initial_frame": {"T": [..], "N1": [..], "N2": [..]} and "initial_point".
struct CurveSpec {
    std::string kind;
    std::string name;
    nlohmann::json params = nlohmann::json::object();
    std::optional<Interval> domain;
    std::vector<std::array<double, 3>> samples;
    Frame initial_frame;
    Vec3 initial_point = Vec3::Zero();
};

namespace detail {

inline double number(const nlohmann::json& j, const char* key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw Error(ErrorKind::Input, std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

inline Vec3 vec3(const nlohmann::json& j, const char* what)
{
    if (!j.is_array() || j.size() != 3)
        throw Error(ErrorKind::Input, std::string(what) + " must be an array of three numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number())
            throw Error(ErrorKind::Input, std::string(what) + " must be an array of three numbers");
        out[i] = j[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
}

inline Interval interval(const nlohmann::json& j, const char* what)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorKind::Input, std::string(what) + " must be [lo, hi]");
    Interval r{j[0].get<double>(), j[1].get<double>()};
    if (r.degenerate())
        throw Error(ErrorKind::Input, std::string(what) + " must satisfy lo < hi");
    return r;
}

/// A curvature term: a number, or {"a0", "a1", "omega", "phi"} for a0 + a1 sin(omega s + phi).
inline CurvatureProfile::Fn curvature_term(const nlohmann::json& j, const char* what)
{
    if (j.is_number()) {
        const double c = j.get<double>();
        return [c](double) { return c; };
    }
    if (j.is_object()) {
        const double a0 = number(j, "a0", 0.0);
        const double a1 = number(j, "a1", 0.0);
        const double w = number(j, "omega", 1.0);
        const double phi = number(j, "phi", 0.0);
        return [=](double s) { return a0 + a1 * std::sin(w * s + phi); };
    }
    throw Error(ErrorKind::Input, std::string(what) + " must be a number or a sinusoid object");
}

} // namespace detail

inline CurveSpec parse_curve_spec(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error(ErrorKind::Input, "curve spec must be a JSON object");
    CurveSpec spec;
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw Error(ErrorKind::Input, "curve spec needs a string 'kind'");
    spec.kind = j.at("kind").get<std::string>();
    if (j.contains("name")) {
        if (!j.at("name").is_string())
            throw Error(ErrorKind::Input, "'name' must be a string");
        spec.name = j.at("name").get<std::string>();
    }
    if (j.contains("params")) {
        if (!j.at("params").is_object())
            throw Error(ErrorKind::Input, "'params' must be an object");
        spec.params = j.at("params");
    }
    if (j.contains("domain"))
        spec.domain = detail::interval(j.at("domain"), "domain");

    if (spec.kind == "builtin") {
        if (spec.name.empty())
            throw Error(ErrorKind::Input, "builtin curve needs a 'name'");
    } else if (spec.kind == "bishop_profile") {
        if (j.contains("samples")) {
            const auto& rows = j.at("samples");
            if (!rows.is_array())
                throw Error(ErrorKind::Input, "'samples' must be an array of [s, k1, k2]");
            for (const auto& row : rows) {
                const Vec3 r = detail::vec3(row, "sample row");
                spec.samples.push_back({r[0], r[1], r[2]});
            }
        } else if (!spec.params.contains("k1") || !spec.params.contains("k2") || !spec.domain) {
            throw Error(ErrorKind::Input, "bishop_profile needs 'samples' or params k1, k2 with a domain");
        }
        if (j.contains("initial_frame")) {
            const auto& f = j.at("initial_frame");
            if (!f.is_object() || !f.contains("T") || !f.contains("N1") || !f.contains("N2"))
                throw Error(ErrorKind::Input, "'initial_frame' needs T, N1 and N2");
            spec.initial_frame = {detail::vec3(f.at("T"), "T"), detail::vec3(f.at("N1"), "N1"),
                                  detail::vec3(f.at("N2"), "N2")};
        }
        if (j.contains("initial_point"))
            spec.initial_point = detail::vec3(j.at("initial_point"), "initial_point");
    } else {
        throw Error(ErrorKind::Input, "unknown curve kind '" + spec.kind + "'");
    }
    return spec;
}

/// Reads the file and parses it; the whole document is the spec, unknown keys
/// are left to the caller.
inline nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Input, "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Input, "'" + path + "' is not valid JSON: " + e.what());
    }
}

inline ParamCurve make_builtin(const CurveSpec& spec)
{
    const auto& p = spec.params;
    const double pi = std::numbers::pi;
    if (spec.name == "helix") {
        const double a = detail::number(p, "a", kHalfSqrt2);
        const double b = detail::number(p, "b", kHalfSqrt2);
        return builtin::helix(a, b, spec.domain.value_or(Interval{-pi, pi}));
    }
    if (spec.name == "circle")
        return builtin::circle(detail::number(p, "radius", 1.0), spec.domain.value_or(Interval{-pi, pi}));
    if (spec.name == "line") {
        const Vec3 o = p.contains("origin") ? detail::vec3(p.at("origin"), "origin") : Vec3::Zero();
        const Vec3 d = p.contains("direction") ? detail::vec3(p.at("direction"), "direction") : Vec3::UnitX();
        return builtin::line(o, d, spec.domain.value_or(Interval{0.0, 1.0}));
    }
    if (spec.name == "parabola")
        return builtin::parabola(detail::number(p, "a", 1.0), spec.domain.value_or(Interval{-1.0, 1.0}));
    if (spec.name == "trefoil")
        return builtin::trefoil(spec.domain.value_or(Interval{0.0, 2 * pi}));
    throw Error(ErrorKind::Input, "unknown builtin curve '" + spec.name + "'");
}

inline CurvatureProfile make_profile(const CurveSpec& spec)
{
    if (!spec.samples.empty()) {
        std::vector<double> s, k1, k2;
        for (const auto& row : spec.samples) {
            s.push_back(row[0]);
            k1.push_back(row[1]);
            k2.push_back(row[2]);
        }
        return CurvatureProfile::from_table(std::move(s), std::move(k1), std::move(k2));
    }
    return {detail::curvature_term(spec.params.at("k1"), "k1"), detail::curvature_term(spec.params.at("k2"), "k2"),
            *spec.domain};
}

/// A unit-speed curve with its Bishop frame field and the construction used.
struct FramedCurve {
    ArcLengthCurve curve;
    BishopData bishop;
    std::string construction;  // "frenet", "transport" or "synthesis"
};

/// Builtin curves go through arclength resampling and the Frenet frame, with
/// parallel transport when the Frenet frame is undefined; profiles are
/// integrated directly. theta0 shifts the gauge in every case.
inline FramedCurve frame_curve(const CurveSpec& spec, std::size_t n_samples, double quad_tol, double theta0)
{
    if (spec.kind == "bishop_profile") {
        const CurvatureProfile profile = make_profile(spec);
        const Interval range = spec.domain.value_or(profile.range());
        auto syn = curve_from_bishop_curvatures(profile, spec.initial_frame, spec.initial_point, range, n_samples);
        BishopData b = theta0 == 0.0 ? std::move(syn.bishop) : rotate_gauge(std::move(syn.bishop), theta0);
        return {std::move(syn.curve), std::move(b), "synthesis"};
    }
    const ParamCurve curve = make_builtin(spec);
    ArcLengthCurve al = reparametrize_arclength(curve, n_samples, quad_tol);
    try {
        BishopData b = bishop_from_frenet(frenet_frame(al), theta0);
        return {std::move(al), std::move(b), "frenet"};
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::FrameUndefined)
            throw;
    }
    const Vec3 n1 = detail::some_normal(al.d1[al.anchor_index].normalized());
    BishopData b = rotate_gauge(bishop_parallel_transport(al, n1), theta0);
    return {std::move(al), std::move(b), "transport"};
}

} // namespace ruledframe
