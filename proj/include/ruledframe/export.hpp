#pragma once

#include "geometry.hpp"
#include "smarandache.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <system_error>
#include <vector>

namespace ruledframe {

/// %.17g, with "nan" for non-finite values.
inline std::string format_double(double x)
{
    if (!std::isfinite(x))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// n_s x n_v lattice of surface points, s-major, with per-vertex K, H and
/// point-class code (-1 for singular vertices, whose K and H are NaN).
struct MeshGrid {
    std::size_t ns = 0, nv = 0;
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;  // zero at singular vertices
    std::vector<double> K, H;
    std::vector<int> point_class;

    std::size_t index(std::size_t i, std::size_t j) const { return i * nv + j; }
};

inline MeshGrid build_mesh(const RuledSurface& surf, std::span<const double> s_values,
                           std::span<const double> v_values, double kappa_eps = kDefaultKappaEps)
{
    if (s_values.size() < 2 || v_values.size() < 2)
        throw Error(ErrorKind::Input, "a mesh needs at least 2 x 2 samples");
    const auto samples = evaluate_grid(surf, s_values, v_values, JetMode::Numeric, kappa_eps);
    MeshGrid m;
    m.ns = s_values.size();
    m.nv = v_values.size();
    for (const auto& p : samples) {
        m.vertices.push_back(surface_point(surf, p.s, p.v));
        m.normals.push_back(p.singular ? Vec3::Zero() : p.analysis.normal);
        m.K.push_back(p.singular ? NAN : p.analysis.K);
        m.H.push_back(p.singular ? NAN : p.analysis.H);
        m.point_class.push_back(point_class_code(p.analysis.point_class));
    }
    return m;
}

/// `v` lines in s-major order, then two triangles per lattice cell, wound
/// counterclockwise when seen from the normal at the cell's first vertex.
inline void write_obj(std::ostream& os, const MeshGrid& m, const std::string& comment = {})
{
    if (!comment.empty())
        os << "# " << comment << "\n";
    for (const auto& p : m.vertices)
        os << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
    auto face = [&](const Vec3& ref, std::size_t a, std::size_t b, std::size_t c) {
        const Vec3 tri = (m.vertices[b] - m.vertices[a]).cross(m.vertices[c] - m.vertices[a]);
        if (tri.dot(ref) < 0)
            std::swap(b, c);
        os << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << '\n';
    };
    for (std::size_t i = 0; i + 1 < m.ns; ++i)
        for (std::size_t j = 0; j + 1 < m.nv; ++j) {
            const std::size_t p00 = m.index(i, j), p10 = m.index(i + 1, j);
            const std::size_t p11 = m.index(i + 1, j + 1), p01 = m.index(i, j + 1);
            // normal at the first vertex, or the next corner when that one is singular
            Vec3 ref = Vec3::Zero();
            for (std::size_t k : {p00, p10, p11, p01})
                if (ref.isZero() && !m.normals[k].isZero())
                    ref = m.normals[k];
            face(ref, p00, p10, p11);
            face(ref, p00, p11, p01);
        }
}

inline void write_grid_csv(std::ostream& os, std::span<const PointSample> samples)
{
    os << "s,v,K,H,class,singular\n";
    for (const auto& p : samples) {
        os << format_double(p.s) << ',' << format_double(p.v) << ','
           << format_double(p.singular ? NAN : p.analysis.K) << ',' << format_double(p.singular ? NAN : p.analysis.H)
           << ',' << to_string(p.analysis.point_class) << ',' << (p.singular ? 1 : 0) << '\n';
    }
}

inline nlohmann::ordered_json to_json(const SurfaceReport& r)
{
    nlohmann::ordered_json j;
    j["kind"] = to_string(r.kind);
    j["developable"] = r.developable;
    j["minimal"] = r.minimal;
    j["cmc"] = r.cmc ? nlohmann::ordered_json(*r.cmc) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json hist;
    for (auto c : kAllPointClasses)
        hist[to_string(c)] = r.count(c);
    j["histogram"] = hist;
    j["maxAbsK"] = r.max_abs_K;
    j["maxAbsH"] = r.max_abs_H;
    j["minH"] = r.min_H;
    j["maxH"] = r.max_H;
    j["meanH"] = r.mean_H;
    j["regular_points"] = r.regular_points;
    auto sp = nlohmann::ordered_json::array();
    for (const auto& [s, v] : r.singular_points)
        sp.push_back({s, v});
    j["singular_points"] = sp;
    return j;
}

/// Collects outputs in memory and publishes them together: every file is
/// written to a temporary name first and renamed only when all writes worked.
class AtomicWriter {
public:
    explicit AtomicWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) { files_[name] = std::move(content); }
    const std::map<std::string, std::string>& files() const { return files_; }

    std::vector<std::filesystem::path> commit() const
    {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_))
            throw Error(ErrorKind::Output, "cannot create output directory '" + dir_.string() + "'");
        std::vector<fs::path> temps;
        auto cleanup = [&] {
            for (const auto& t : temps)
                fs::remove(t, ec);
        };
        for (const auto& [name, content] : files_) {
            const fs::path tmp = dir_ / (name + ".tmp");
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (out)
                temps.push_back(tmp);
            out << content;
            out.close();
            if (!out) {
                cleanup();
                throw Error(ErrorKind::Output, "cannot write '" + tmp.string() + "'");
            }
        }
        std::vector<fs::path> written;
        for (const auto& [name, content] : files_) {
            const fs::path final_path = dir_ / name;
            fs::rename(dir_ / (name + ".tmp"), final_path, ec);
            if (ec) {
                cleanup();
                throw Error(ErrorKind::Output, "cannot rename into '" + final_path.string() + "'");
            }
            written.push_back(final_path);
        }
        return written;
    }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> files_;
};

} // namespace ruledframe
