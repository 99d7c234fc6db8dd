#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "smt/labels.hpp"

namespace smt {

/// Abstract simplicial complex stored by its maximal faces. Faces are kept
/// as sorted vertex-index vectors forming an antichain; membership of an
/// arbitrary set is a subset-of-maximal-face query, so downward closure
/// holds by construction. Vertices not covered by any given face get their
/// singleton added (every vertex is a 0-simplex).
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    SimplicialComplex(std::vector<std::string> vertices,
                      const std::vector<std::vector<std::string>>& maximal_faces,
                      std::optional<int> dim_cap = std::nullopt)
        : vertices_(std::move(vertices)), dim_cap_(dim_cap) {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (!index_.emplace(vertices_[i], i).second)
                throw std::invalid_argument("duplicate vertex label: " + vertices_[i]);

        std::vector<std::vector<int>> faces;
        faces.reserve(maximal_faces.size() + vertices_.size());
        for (const auto& face : maximal_faces) {
            std::vector<int> f;
            f.reserve(face.size());
            for (const auto& v : face) f.push_back(static_cast<int>(index_of(v)));
            std::sort(f.begin(), f.end());
            f.erase(std::unique(f.begin(), f.end()), f.end());
            if (!f.empty()) faces.push_back(std::move(f));
        }
        std::vector<bool> covered(vertices_.size(), false);
        for (const auto& f : faces)
            for (int v : f) covered[static_cast<std::size_t>(v)] = true;
        for (std::size_t v = 0; v < vertices_.size(); ++v)
            if (!covered[v]) faces.push_back({static_cast<int>(v)});
        maximal_faces_ = normalize(std::move(faces));
    }

    const std::vector<std::string>& vertices() const { return vertices_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    bool empty() const { return vertices_.empty(); }
    std::optional<int> dim_cap() const { return dim_cap_; }

    bool has_vertex(const std::string& v) const { return index_.count(v) != 0; }

    std::size_t index_of(const std::string& v) const {
        auto it = index_.find(v);
        if (it == index_.end())
            throw std::domain_error("unknown vertex: " + v);
        return it->second;
    }

    /// Maximal faces as sorted index vectors, in canonical (lexicographic)
    /// order.
    const std::vector<std::vector<int>>& maximal_faces() const { return maximal_faces_; }

    /// Maximal faces as label vectors, same order, labels in vertex order.
    std::vector<std::vector<std::string>> maximal_face_labels() const {
        std::vector<std::vector<std::string>> out;
        out.reserve(maximal_faces_.size());
        for (const auto& f : maximal_faces_) {
            std::vector<std::string> labels;
            labels.reserve(f.size());
            for (int v : f) labels.push_back(vertices_[static_cast<std::size_t>(v)]);
            out.push_back(std::move(labels));
        }
        return out;
    }

    /// Largest face dimension, or -1 for the empty complex.
    int dimension() const {
        std::size_t best = 0;
        for (const auto& f : maximal_faces_) best = std::max(best, f.size());
        return static_cast<int>(best) - 1;
    }

    bool membership_indices(const std::vector<int>& sorted_face) const {
        for (const auto& max : maximal_faces_)
            if (std::includes(max.begin(), max.end(), sorted_face.begin(), sorted_face.end()))
                return true;
        return false;
    }

private:
    // sort, dedupe, drop faces strictly contained in another face
    static std::vector<std::vector<int>> normalize(std::vector<std::vector<int>> faces) {
        std::sort(faces.begin(), faces.end());
        faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
        std::vector<std::vector<int>> out;
        for (std::size_t a = 0; a < faces.size(); ++a) {
            bool dominated = false;
            for (std::size_t b = 0; b < faces.size() && !dominated; ++b)
                dominated = a != b && faces[a].size() < faces[b].size() &&
                            std::includes(faces[b].begin(), faces[b].end(), faces[a].begin(),
                                          faces[a].end());
            if (!dominated) out.push_back(faces[a]);
        }
        return out;
    }

    std::vector<std::string> vertices_;
    std::vector<std::vector<int>> maximal_faces_;
    std::unordered_map<std::string, std::size_t> index_;
    std::optional<int> dim_cap_;
};

/// True iff the (nonempty) vertex set is a face. Vertices outside K⁰ are a
/// domain error, per the convention that queries are about subsets of K⁰.
inline bool membership(const SimplicialComplex& k, const std::vector<std::string>& face) {
    if (face.empty())
        throw std::domain_error("membership of the empty set is not defined");
    std::vector<int> idx;
    idx.reserve(face.size());
    for (const auto& v : face) idx.push_back(static_cast<int>(k.index_of(v)));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return k.membership_indices(idx);
}

/// Categorical product: a subset of K⁰×L⁰ is a face iff both coordinate
/// projections are faces; the maximal faces are products of maximal faces.
/// Vertices are ordered row-major and labeled "(a,b)".
inline SimplicialComplex product(const SimplicialComplex& k, const SimplicialComplex& l) {
    std::vector<std::string> vertices;
    vertices.reserve(k.vertex_count() * l.vertex_count());
    for (const auto& a : k.vertices())
        for (const auto& b : l.vertices()) vertices.push_back(pair_label(a, b));

    std::vector<std::vector<std::string>> faces;
    faces.reserve(k.maximal_faces().size() * l.maximal_faces().size());
    for (const auto& fk : k.maximal_faces())
        for (const auto& fl : l.maximal_faces()) {
            std::vector<std::string> face;
            face.reserve(fk.size() * fl.size());
            for (int a : fk)
                for (int b : fl)
                    face.push_back(pair_label(k.vertices()[static_cast<std::size_t>(a)],
                                               l.vertices()[static_cast<std::size_t>(b)]));
            faces.push_back(std::move(face));
        }
    return SimplicialComplex(std::move(vertices), faces);
}

/// Disjoint union; no mixed faces. Colliding labels on the right side are
/// renamed by the same scheme the metric-space coproduct uses.
inline SimplicialComplex coproduct(const SimplicialComplex& k, const SimplicialComplex& l) {
    LabelUnion u = disjoint_union_labels(k.vertices(), l.vertices());
    std::vector<std::vector<std::string>> faces;
    faces.reserve(k.maximal_faces().size() + l.maximal_faces().size());
    for (const auto& f : k.maximal_face_labels()) {
        std::vector<std::string> relabeled;
        relabeled.reserve(f.size());
        for (const auto& v : f) relabeled.push_back(u.left_map.at(v));
        faces.push_back(std::move(relabeled));
    }
    for (const auto& f : l.maximal_face_labels()) {
        std::vector<std::string> relabeled;
        relabeled.reserve(f.size());
        for (const auto& v : f) relabeled.push_back(u.right_map.at(v));
        faces.push_back(std::move(relabeled));
    }
    return SimplicialComplex(u.labels, faces);
}

/// Wedge at the given basepoint vertices: K ⊔ L with v0 ~ w0 glued to ⋆.
inline SimplicialComplex wedge(const SimplicialComplex& k, const std::string& v0,
                               const SimplicialComplex& l, const std::string& w0) {
    if (!k.has_vertex(v0))
        throw std::domain_error("wedge basepoint missing in left complex: " + v0);
    if (!l.has_vertex(w0))
        throw std::domain_error("wedge basepoint missing in right complex: " + w0);
    LabelUnion u = wedge_union_labels(k.vertices(), v0, l.vertices(), w0);
    std::vector<std::vector<std::string>> faces;
    faces.reserve(k.maximal_faces().size() + l.maximal_faces().size());
    for (const auto& f : k.maximal_face_labels()) {
        std::vector<std::string> relabeled;
        relabeled.reserve(f.size());
        for (const auto& v : f) relabeled.push_back(u.left_map.at(v));
        faces.push_back(std::move(relabeled));
    }
    for (const auto& f : l.maximal_face_labels()) {
        std::vector<std::string> relabeled;
        relabeled.reserve(f.size());
        for (const auto& v : f) relabeled.push_back(u.right_map.at(v));
        faces.push_back(std::move(relabeled));
    }
    return SimplicialComplex(u.labels, faces);
}

using VertexMap = std::unordered_map<std::string, std::string>;

struct SimplicialMapCheck {
    bool ok = true;
    std::optional<std::vector<std::string>> violating_face;

    explicit operator bool() const { return ok; }
};

/// Checks that the image of every maximal face of K is a face of L; by
/// downward closure this covers all faces.
inline SimplicialMapCheck is_simplicial_map(const VertexMap& g, const SimplicialComplex& k,
                                            const SimplicialComplex& l) {
    for (const auto& v : k.vertices()) {
        auto it = g.find(v);
        if (it == g.end())
            throw std::domain_error("vertex map is not total: missing " + v);
        if (!l.has_vertex(it->second))
            throw std::domain_error("vertex map image outside codomain: " + it->second);
    }
    for (const auto& face : k.maximal_face_labels()) {
        std::vector<std::string> image;
        image.reserve(face.size());
        for (const auto& v : face) image.push_back(g.at(v));
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        if (!membership(l, image)) return {false, face};
    }
    return {true, std::nullopt};
}

/// All faces of exactly the given dimension, in lexicographic order of
/// vertex indices. Returns an empty list beyond the complex dimension or
/// beyond the complex's dim_cap when one is set.
inline std::vector<std::vector<std::string>> faces(const SimplicialComplex& k, int dim) {
    if (dim < 0)
        throw std::domain_error("face dimension must be nonnegative");
    if (k.dim_cap() && dim > *k.dim_cap()) return {};
    std::set<std::vector<int>> collected;
    const std::size_t want = static_cast<std::size_t>(dim) + 1;
    for (const auto& max : k.maximal_faces()) {
        if (max.size() < want) continue;
        // enumerate all (dim+1)-subsets of the maximal face
        std::vector<std::size_t> pick(want);
        for (std::size_t i = 0; i < want; ++i) pick[i] = i;
        while (true) {
            std::vector<int> face(want);
            for (std::size_t i = 0; i < want; ++i) face[i] = max[pick[i]];
            collected.insert(std::move(face));
            std::size_t i = want;
            while (i > 0 && pick[i - 1] == max.size() - want + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < want; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    std::vector<std::vector<std::string>> out;
    out.reserve(collected.size());
    for (const auto& f : collected) {
        std::vector<std::string> labels;
        labels.reserve(f.size());
        for (int v : f) labels.push_back(k.vertices()[static_cast<std::size_t>(v)]);
        out.push_back(std::move(labels));
    }
    return out;
}

/// Canonical form for cross-complex equality: each face's labels sorted,
/// faces sorted lexicographically. Two complexes are equal as complexes iff
/// these forms coincide (vertex sets are covered via singleton faces).
inline std::vector<std::vector<std::string>> canonical_faces(const SimplicialComplex& k) {
    auto out = k.maximal_face_labels();
    for (auto& f : out) std::sort(f.begin(), f.end());
    std::sort(out.begin(), out.end());
    return out;
}

inline bool same_complex(const SimplicialComplex& a, const SimplicialComplex& b) {
    auto va = a.vertices(), vb = b.vertices();
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    return va == vb && canonical_faces(a) == canonical_faces(b);
}

} // namespace smt
