#pragma once

#include <array>
#include "tacsim/common.hpp"

namespace tacsim {

struct Aabb {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

    void expand(const Vec3& p) { lo = lo.cwiseMin(p); hi = hi.cwiseMax(p); }
    void expand(const Aabb& o) { lo = lo.cwiseMin(o.lo); hi = hi.cwiseMax(o.hi); }
    void inflate(double m) { lo.array() -= m; hi.array() += m; }
    bool overlaps(const Aabb& o) const {
        return (lo.array() <= o.hi.array()).all() && (o.lo.array() <= hi.array()).all();
    }
};

// Subset of collision primitives referencing a global position array.
struct SurfacePatch {
    std::vector<int> points;
    std::vector<std::array<int, 2>> edges;
    std::vector<std::array<int, 3>> tris;
};

struct CandidatePair {
    enum Kind { PointTriangle, EdgeEdge };
    Kind kind;
    std::array<int, 4> idx;  // PT: {p, t0, t1, t2}; EE: {a0, a1, b0, b1}

    bool operator==(const CandidatePair&) const = default;
};

// Bounding-volume hierarchy over axis-aligned boxes, rebuilt per query set.
class Bvh {
public:
    explicit Bvh(std::vector<Aabb> boxes);
    // Appends indices (into the constructor's box list) overlapping `query`.
    void collect(const Aabb& query, std::vector<int>& out) const;

private:
    struct Node {
        Aabb box;
        int left = -1, right = -1;  // internal children
        int item = -1;              // leaf payload
    };
    int build(std::vector<int>& items, int begin, int end);
    std::vector<Node> nodes_;
    std::vector<Aabb> boxes_;
};

// Swept-AABB candidate pairs between patches a and b (PT both directions, EE),
// excluding pairs that share a vertex. `displacement` may be null (static
// query); otherwise boxes cover x and x+displacement. When self is true a and
// b alias the same patch and symmetric duplicates are removed.
std::vector<CandidatePair> broadphase_pairs(const std::vector<Vec3>& x,
                                            const std::vector<Vec3>* displacement,
                                            const SurfacePatch& a, const SurfacePatch& b,
                                            bool self, double margin);

}  // namespace tacsim
