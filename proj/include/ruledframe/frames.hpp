#pragma once

#include "numeric.hpp"

#include <cstddef>
#include <vector>

namespace ruledframe {

/// Orthonormal adapted frame {T, N1, N2}.
struct Frame {
    Vec3 t = Vec3::UnitX();
    Vec3 n1 = Vec3::UnitY();
    Vec3 n2 = Vec3::UnitZ();

    /// Largest deviation of the Gram matrix from the identity, and |det - 1|.
    double orthonormality_defect() const
    {
        Eigen::Matrix3d m;
        m << t, n1, n2;
        const double gram = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
        return std::max(gram, std::abs(m.determinant() - 1.0));
    }

    /// Gram-Schmidt in the order T, N1; N2 completes a right-handed triple.
    void reorthonormalize()
    {
        t.normalize();
        n1 = (n1 - n1.dot(t) * t).normalized();
        n2 = t.cross(n1);
    }
};

/// Sampled Frenet apparatus on a uniform arclength grid.
struct FrenetData {
    UniformGrid grid;
    std::vector<Vec3> tangent, normal, binormal;
    std::vector<double> curvature, torsion;
    std::vector<bool> degenerate;  // curvature below the floor
    std::size_t anchor_index = 0;

    std::size_t size() const { return grid.count; }
};

/// Sampled Bishop frame field with its curvatures. k1' and k2' are cached
/// from finite differences of the sampled curvatures.
struct BishopData {
    UniformGrid grid;
    std::vector<Vec3> tangent, normal1, normal2;
    std::vector<double> k1, k2, theta;
    std::vector<double> dk1, dk2;
    std::vector<bool> degenerate;
    std::size_t anchor_index = 0;

    std::size_t size() const { return grid.count; }

    Frame frame(std::size_t i) const { return {tangent[i], normal1[i], normal2[i]}; }
    double kappa(std::size_t i) const { return std::hypot(k1[i], k2[i]); }

    /// Recompute dk1, dk2 from the curvature samples.
    void update_curvature_derivatives()
    {
        dk1 = fd::sample_derivatives(k1, grid.step, 1);
        dk2 = fd::sample_derivatives(k2, grid.step, 1);
    }

    /// Frame and curvatures at an arbitrary s inside the grid. Frame vectors are
    /// cubic-Hermite interpolated with the Bishop derivative formulas as node
    /// slopes, then re-orthonormalized; k1, k2 use k1', k2' as slopes.
    struct Sample {
        Frame frame;
        double k1, k2, dk1, dk2;
    };

    Sample at(double s) const
    {
        const auto [i, u] = grid.locate(s);
        if (u == 0.0)
            return {frame(i), k1[i], k2[i], dk1[i], dk2[i]};
        if (u == 1.0)
            return {frame(i + 1), k1[i + 1], k2[i + 1], dk1[i + 1], dk2[i + 1]};
        const std::size_t j = i + 1;
        const double h = grid.step;
        auto dt = [&](std::size_t k) -> Vec3 { return k1[k] * normal1[k] + k2[k] * normal2[k]; };
        Frame f;
        f.t = hermite<Vec3>(tangent[i], dt(i), tangent[j], dt(j), h, u);
        f.n1 = hermite<Vec3>(normal1[i], -k1[i] * tangent[i], normal1[j], -k1[j] * tangent[j], h, u);
        f.n2 = hermite<Vec3>(normal2[i], -k2[i] * tangent[i], normal2[j], -k2[j] * tangent[j], h, u);
        f.reorthonormalize();
        return {f,
                hermite(k1[i], dk1[i], k1[j], dk1[j], h, u),
                hermite(k2[i], dk2[i], k2[j], dk2[j], h, u),
                (1 - u) * dk1[i] + u * dk1[j],
                (1 - u) * dk2[i] + u * dk2[j]};
    }
};

} // namespace ruledframe
