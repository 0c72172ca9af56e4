#include "tacsim/geometry/broadphase.hpp"

#include <algorithm>
#include <numeric>

namespace tacsim {
namespace {

Aabb swept_box(const std::vector<Vec3>& x, const std::vector<Vec3>* dx,
               const int* ids, int count, double margin) {
    Aabb box;
    for (int k = 0; k < count; ++k) {
        box.expand(x[ids[k]]);
        if (dx) box.expand(x[ids[k]] + (*dx)[ids[k]]);
    }
    box.inflate(margin);
    return box;
}

bool shares_vertex(const int* a, int na, const int* b, int nb) {
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            if (a[i] == b[j]) return true;
    return false;
}

}  // namespace

Bvh::Bvh(std::vector<Aabb> boxes) : boxes_(std::move(boxes)) {
    if (boxes_.empty()) return;
    std::vector<int> items(boxes_.size());
    std::iota(items.begin(), items.end(), 0);
    nodes_.reserve(2 * boxes_.size());
    build(items, 0, static_cast<int>(items.size()));
}

int Bvh::build(std::vector<int>& items, int begin, int end) {
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Aabb box;
    for (int i = begin; i < end; ++i) box.expand(boxes_[items[i]]);
    nodes_[node_id].box = box;
    if (end - begin == 1) {
        nodes_[node_id].item = items[begin];
        return node_id;
    }
    const Vec3 extent = box.hi - box.lo;
    int axis = 0;
    extent.maxCoeff(&axis);
    const int mid = (begin + end) / 2;
    std::nth_element(items.begin() + begin, items.begin() + mid, items.begin() + end,
                     [&](int a, int b) {
                         return boxes_[a].lo[axis] + boxes_[a].hi[axis] <
                                boxes_[b].lo[axis] + boxes_[b].hi[axis];
                     });
    const int left = build(items, begin, mid);
    const int right = build(items, mid, end);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

void Bvh::collect(const Aabb& query, std::vector<int>& out) const {
    if (nodes_.empty()) return;
    std::vector<int> stack = {0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (!node.box.overlaps(query)) continue;
        if (node.item >= 0) {
            out.push_back(node.item);
        } else {
            stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }
}

std::vector<CandidatePair> broadphase_pairs(const std::vector<Vec3>& x,
                                            const std::vector<Vec3>* dx,
                                            const SurfacePatch& a, const SurfacePatch& b,
                                            bool self, double margin) {
    std::vector<CandidatePair> out;
    std::vector<int> hits;

    // points of a vs triangles of b
    {
        std::vector<Aabb> tri_boxes;
        tri_boxes.reserve(b.tris.size());
        for (const auto& t : b.tris) tri_boxes.push_back(swept_box(x, dx, t.data(), 3, margin));
        Bvh bvh(std::move(tri_boxes));
        for (int p : a.points) {
            hits.clear();
            bvh.collect(swept_box(x, dx, &p, 1, margin), hits);
            std::sort(hits.begin(), hits.end());
            for (int ti : hits) {
                const auto& t = b.tris[ti];
                if (shares_vertex(&p, 1, t.data(), 3)) continue;
                out.push_back({CandidatePair::PointTriangle, {p, t[0], t[1], t[2]}});
            }
        }
    }
    // points of b vs triangles of a (skip when self: already covered above)
    if (!self) {
        std::vector<Aabb> tri_boxes;
        tri_boxes.reserve(a.tris.size());
        for (const auto& t : a.tris) tri_boxes.push_back(swept_box(x, dx, t.data(), 3, margin));
        Bvh bvh(std::move(tri_boxes));
        for (int p : b.points) {
            hits.clear();
            bvh.collect(swept_box(x, dx, &p, 1, margin), hits);
            std::sort(hits.begin(), hits.end());
            for (int ti : hits) {
                const auto& t = a.tris[ti];
                if (shares_vertex(&p, 1, t.data(), 3)) continue;
                out.push_back({CandidatePair::PointTriangle, {p, t[0], t[1], t[2]}});
            }
        }
    }
    // edges of a vs edges of b
    {
        std::vector<Aabb> edge_boxes;
        edge_boxes.reserve(b.edges.size());
        for (const auto& e : b.edges) edge_boxes.push_back(swept_box(x, dx, e.data(), 2, margin));
        Bvh bvh(std::move(edge_boxes));
        for (size_t ea = 0; ea < a.edges.size(); ++ea) {
            const auto& e1 = a.edges[ea];
            hits.clear();
            bvh.collect(swept_box(x, dx, e1.data(), 2, margin), hits);
            std::sort(hits.begin(), hits.end());
            for (int eb : hits) {
                if (self && eb <= static_cast<int>(ea)) continue;  // dedupe symmetric pairs
                const auto& e2 = b.edges[eb];
                if (shares_vertex(e1.data(), 2, e2.data(), 2)) continue;
                out.push_back({CandidatePair::EdgeEdge, {e1[0], e1[1], e2[0], e2[1]}});
            }
        }
    }
    return out;
}

}  // namespace tacsim
