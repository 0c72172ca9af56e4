#pragma once

#include "tacsim/common.hpp"

namespace tacsim {

// Closest-feature classification. PT: which feature of the triangle carries
// the minimum; EE: boundary structure of the (s,t) segment parameters.
enum class PTRegion { Vertex0, Vertex1, Vertex2, Edge01, Edge12, Edge20, Interior };
enum class EERegion { A0B0, A0B1, A1B0, A1B1, A0Interior, A1Interior, B0Interior, B1Interior, Interior };

struct PTResult {
    double d2;
    PTRegion region;
    Vec12 grad;  // wrt (p, t0, t1, t2)
    Mat12 hess;
};

struct EEResult {
    double d2;
    EERegion region;
    Vec12 grad;  // wrt (a0, a1, b0, b1)
    Mat12 hess;
    bool parallel = false;
};

// Squared distance from p to the closed triangle, with exact first and second
// derivatives of the region-restricted squared-distance function.
// Throws ConfigError for degenerate triangles (area^2 below 1e-28 * scale^4).
PTResult point_triangle_d2(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2);

// Squared distance between closed segments. Nearly parallel pairs (cross
// product squared norm < 1e-12 |a|^2|b|^2) are flagged and classified via the
// clamped endpoint cases. Throws ConfigError for zero-length edges.
EEResult edge_edge_d2(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

// Value-only variants for hot paths (CCD, broad sampling).
double point_triangle_d2_value(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2);
double edge_edge_d2_value(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

// Closest points realizing the minimum (used for contact frames).
void point_triangle_closest(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2,
                            Vec3& bary_out);
void edge_edge_closest(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1,
                       double& s_out, double& t_out);

}  // namespace tacsim
