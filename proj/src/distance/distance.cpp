#include "tacsim/distance/distance.hpp"

#include <algorithm>
#include <cmath>

namespace tacsim {
namespace {

// ---------------------------------------------------------------------------
// Second-order forward-mode scalar over the 12 stacked coordinates. The
// region-restricted squared distances are rational in the positions, so
// +,-,*,/ suffice and the derivatives are exact to machine precision.
// ---------------------------------------------------------------------------
struct Dual {
    double v = 0;
    Vec12 g = Vec12::Zero();
    Mat12 h = Mat12::Zero();
};

Dual operator+(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v + b.v;
    r.g = a.g + b.g;
    r.h = a.h + b.h;
    return r;
}
Dual operator-(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v - b.v;
    r.g = a.g - b.g;
    r.h = a.h - b.h;
    return r;
}
Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    r.g = a.g * b.v + b.g * a.v;
    r.h = a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
    return r;
}
Dual operator/(const Dual& a, const Dual& b) {
    // a/b = a * b^{-1}; inv'' = 2 g g^T / v^3 - h / v^2
    Dual inv;
    inv.v = 1.0 / b.v;
    inv.g = -b.g / (b.v * b.v);
    inv.h = -b.h / (b.v * b.v) + 2.0 * (b.g * b.g.transpose()) / (b.v * b.v * b.v);
    return a * inv;
}

using DVec3 = std::array<Dual, 3>;

DVec3 make_var(const Vec3& p, int base) {
    DVec3 r;
    for (int i = 0; i < 3; ++i) {
        r[i].v = p[i];
        r[i].g[base + i] = 1.0;
    }
    return r;
}

DVec3 operator-(const DVec3& a, const DVec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
Dual dot(const DVec3& a, const DVec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
DVec3 cross(const DVec3& a, const DVec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Dual pp_d2(const DVec3& a, const DVec3& b) {
    DVec3 u = a - b;
    return dot(u, u);
}
Dual pe_d2(const DVec3& p, const DVec3& e0, const DVec3& e1) {
    DVec3 e = e1 - e0;
    DVec3 c = cross(e, p - e0);
    return dot(c, c) / dot(e, e);
}
Dual pt_plane_d2(const DVec3& p, const DVec3& t0, const DVec3& t1, const DVec3& t2) {
    DVec3 n = cross(t1 - t0, t2 - t0);
    Dual w = dot(p - t0, n);
    return w * w / dot(n, n);
}
Dual ee_line_d2(const DVec3& a0, const DVec3& a1, const DVec3& b0, const DVec3& b1) {
    DVec3 n = cross(a1 - a0, b1 - b0);
    Dual w = dot(b0 - a0, n);
    return w * w / dot(n, n);
}

// ---------------------------------------------------------------------------
// Classification (plain doubles).
// ---------------------------------------------------------------------------
struct PTClass {
    PTRegion region;
    Vec3 bary;
};

// Ericson, Real-Time Collision Detection, 5.1.5.
PTClass classify_pt(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) return {PTRegion::Vertex0, {1, 0, 0}};

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) return {PTRegion::Vertex1, {0, 1, 0}};

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) return {PTRegion::Vertex2, {0, 0, 1}};

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        const double v = d1 / (d1 - d3);
        return {PTRegion::Edge01, {1 - v, v, 0}};
    }
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        const double w = d2 / (d2 - d6);
        return {PTRegion::Edge20, {1 - w, 0, w}};
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return {PTRegion::Edge12, {0, 1 - w, w}};
    }
    const double denom = va + vb + vc;
    const double v = vb / denom, w = vc / denom;
    return {PTRegion::Interior, {1 - v - w, v, w}};
}

struct EEClass {
    EERegion region;
    double s, t;
    bool parallel;
};

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Exact symmetry under swapping the two edges: evaluate in a canonical order.
bool ee_needs_swap(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    const double ka[6] = {a0.x(), a0.y(), a0.z(), a1.x(), a1.y(), a1.z()};
    const double kb[6] = {b0.x(), b0.y(), b0.z(), b1.x(), b1.y(), b1.z()};
    return std::lexicographical_compare(kb, kb + 6, ka, ka + 6);
}

EERegion ee_swap_region(EERegion r) {
    switch (r) {
        case EERegion::A0B0: return EERegion::A0B0;
        case EERegion::A0B1: return EERegion::A1B0;
        case EERegion::A1B0: return EERegion::A0B1;
        case EERegion::A1B1: return EERegion::A1B1;
        case EERegion::A0Interior: return EERegion::B0Interior;
        case EERegion::A1Interior: return EERegion::B1Interior;
        case EERegion::B0Interior: return EERegion::A0Interior;
        case EERegion::B1Interior: return EERegion::A1Interior;
        case EERegion::Interior: return EERegion::Interior;
    }
    return r;
}

EEClass classify_ee(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    const Vec3 da = a1 - a0, db = b1 - b0, r = a0 - b0;
    const double a = da.squaredNorm(), e = db.squaredNorm();
    if (a == 0 || e == 0) throw ConfigError("edge_edge_d2: zero-length edge");
    const double b = da.dot(db);
    const double f = db.dot(r);
    const double c = da.dot(r);
    const double cross2 = da.cross(db).squaredNorm();
    const bool parallel = cross2 < 1e-12 * a * e;

    double s, t;
    if (parallel) {
        // Closest pair degenerates to an endpoint case; pick the best of the
        // four clamped endpoint-edge projections.
        struct Cand {
            double d2, s, t;
        };
        auto point_on_b = [&](double sv) {
            double tv = clamp01(db.dot(a0 + sv * da - b0) / e);
            Vec3 pa = a0 + sv * da, pb = b0 + tv * db;
            return Cand{(pa - pb).squaredNorm(), sv, tv};
        };
        auto point_on_a = [&](double tv) {
            double sv = clamp01(da.dot(b0 + tv * db - a0) / a);
            Vec3 pa = a0 + sv * da, pb = b0 + tv * db;
            return Cand{(pa - pb).squaredNorm(), sv, tv};
        };
        Cand best = point_on_b(0.0);
        for (const Cand& cand : {point_on_b(1.0), point_on_a(0.0), point_on_a(1.0)})
            if (cand.d2 < best.d2) best = cand;
        s = best.s;
        t = best.t;
    } else {
        s = clamp01((b * f - c * e) / (a * e - b * b));
        t = (b * s + f) / e;
        if (t < 0) {
            t = 0;
            s = clamp01(-c / a);
        } else if (t > 1) {
            t = 1;
            s = clamp01((b - c) / a);
        }
    }

    const bool s0 = s <= 0, s1 = s >= 1, t0 = t <= 0, t1 = t >= 1;
    EERegion region;
    if (s0 && t0) region = EERegion::A0B0;
    else if (s0 && t1) region = EERegion::A0B1;
    else if (s1 && t0) region = EERegion::A1B0;
    else if (s1 && t1) region = EERegion::A1B1;
    else if (s0) region = EERegion::A0Interior;
    else if (s1) region = EERegion::A1Interior;
    else if (t0) region = EERegion::B0Interior;
    else if (t1) region = EERegion::B1Interior;
    else region = EERegion::Interior;
    return {region, s, t, parallel};
}

void check_triangle(const Vec3& t0, const Vec3& t1, const Vec3& t2) {
    const Vec3 ab = t1 - t0, ac = t2 - t0;
    const double L2 = std::max({ab.squaredNorm(), ac.squaredNorm(), (t2 - t1).squaredNorm()});
    if (ab.cross(ac).squaredNorm() < 1e-28 * L2 * L2)
        throw ConfigError("point_triangle_d2: degenerate triangle");
}

}  // namespace

PTResult point_triangle_d2(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2) {
    check_triangle(t0, t1, t2);
    const PTClass cls = classify_pt(p, t0, t1, t2);
    const DVec3 P = make_var(p, 0), A = make_var(t0, 3), B = make_var(t1, 6), C = make_var(t2, 9);
    Dual d2;
    switch (cls.region) {
        case PTRegion::Vertex0: d2 = pp_d2(P, A); break;
        case PTRegion::Vertex1: d2 = pp_d2(P, B); break;
        case PTRegion::Vertex2: d2 = pp_d2(P, C); break;
        case PTRegion::Edge01: d2 = pe_d2(P, A, B); break;
        case PTRegion::Edge12: d2 = pe_d2(P, B, C); break;
        case PTRegion::Edge20: d2 = pe_d2(P, C, A); break;
        case PTRegion::Interior: d2 = pt_plane_d2(P, A, B, C); break;
    }
    return {d2.v, cls.region, d2.g, d2.h};
}

EEResult edge_edge_d2(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    if (ee_needs_swap(a0, a1, b0, b1)) {
        EEResult r = edge_edge_d2(b0, b1, a0, a1);
        r.region = ee_swap_region(r.region);
        Vec12 g;
        g.segment<6>(0) = r.grad.segment<6>(6);
        g.segment<6>(6) = r.grad.segment<6>(0);
        Mat12 h;
        h.block<6, 6>(0, 0) = r.hess.block<6, 6>(6, 6);
        h.block<6, 6>(6, 6) = r.hess.block<6, 6>(0, 0);
        h.block<6, 6>(0, 6) = r.hess.block<6, 6>(6, 0);
        h.block<6, 6>(6, 0) = r.hess.block<6, 6>(0, 6);
        r.grad = g;
        r.hess = h;
        return r;
    }
    const EEClass cls = classify_ee(a0, a1, b0, b1);
    const DVec3 A0 = make_var(a0, 0), A1 = make_var(a1, 3), B0 = make_var(b0, 6), B1 = make_var(b1, 9);
    Dual d2;
    switch (cls.region) {
        case EERegion::A0B0: d2 = pp_d2(A0, B0); break;
        case EERegion::A0B1: d2 = pp_d2(A0, B1); break;
        case EERegion::A1B0: d2 = pp_d2(A1, B0); break;
        case EERegion::A1B1: d2 = pp_d2(A1, B1); break;
        case EERegion::A0Interior: d2 = pe_d2(A0, B0, B1); break;
        case EERegion::A1Interior: d2 = pe_d2(A1, B0, B1); break;
        case EERegion::B0Interior: d2 = pe_d2(B0, A0, A1); break;
        case EERegion::B1Interior: d2 = pe_d2(B1, A0, A1); break;
        case EERegion::Interior: d2 = ee_line_d2(A0, A1, B0, B1); break;
    }
    return {d2.v, cls.region, d2.g, d2.h, cls.parallel};
}

double point_triangle_d2_value(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2) {
    const PTClass cls = classify_pt(p, t0, t1, t2);
    const Vec3 q = cls.bary[0] * t0 + cls.bary[1] * t1 + cls.bary[2] * t2;
    return (p - q).squaredNorm();
}

double edge_edge_d2_value(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    if (ee_needs_swap(a0, a1, b0, b1)) return edge_edge_d2_value(b0, b1, a0, a1);
    const EEClass cls = classify_ee(a0, a1, b0, b1);
    const Vec3 pa = a0 + cls.s * (a1 - a0);
    const Vec3 pb = b0 + cls.t * (b1 - b0);
    return (pa - pb).squaredNorm();
}

void point_triangle_closest(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2,
                            Vec3& bary_out) {
    bary_out = classify_pt(p, t0, t1, t2).bary;
}

void edge_edge_closest(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1,
                       double& s_out, double& t_out) {
    const EEClass cls = classify_ee(a0, a1, b0, b1);
    s_out = cls.s;
    t_out = cls.t;
}

}  // namespace tacsim
