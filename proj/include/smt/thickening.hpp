#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "smt/measure.hpp"
#include "smt/metric_space.hpp"
#include "smt/simplicial_complex.hpp"

namespace smt {

enum class ScaleConvention { Closed, Open }; // diameter <= r vs diameter < r

inline const char* to_string(ScaleConvention c) {
    return c == ScaleConvention::Closed ? "closed" : "open";
}

struct ScaleParameter {
    double r = 0.0;
    ScaleConvention convention = ScaleConvention::Closed;

    ScaleParameter(double radius = 0.0, ScaleConvention conv = ScaleConvention::Closed)
        : r(radius), convention(conv) {
        if (std::isnan(r) || r < 0.0)
            throw std::domain_error("scale parameter must be nonnegative");
    }

    bool admits(double d) const { return convention == ScaleConvention::Closed ? d <= r : d < r; }
};

enum class ThickeningKind {
    VietorisRips,
    VietorisRipsStrict,
    Cech,
    Product,
    Wedge,
    Coproduct,
    Custom
};

inline const char* to_string(ThickeningKind k) {
    switch (k) {
        case ThickeningKind::VietorisRips: return "vr";
        case ThickeningKind::VietorisRipsStrict: return "vr-strict";
        case ThickeningKind::Cech: return "cech";
        case ThickeningKind::Product: return "product";
        case ThickeningKind::Wedge: return "wedge";
        case ThickeningKind::Coproduct: return "coproduct";
        case ThickeningKind::Custom: return "custom";
    }
    return "?";
}

namespace detail {

/// Deterministic Bron–Kerbosch with pivoting over bitset rows. Returns the
/// maximal cliques of the graph as sorted index vectors.
class MaximalCliques {
public:
    explicit MaximalCliques(const std::vector<std::vector<char>>& adj)
        : n_(adj.size()), words_((n_ + 63) / 64), row_(n_, std::vector<std::uint64_t>(words_, 0)) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (i != j && adj[i][j]) row_[i][j / 64] |= std::uint64_t(1) << (j % 64);
    }

    std::vector<std::vector<int>> run() {
        if (n_ == 0) return {};
        std::vector<std::uint64_t> p(words_, 0), x(words_, 0);
        for (std::size_t i = 0; i < n_; ++i) p[i / 64] |= std::uint64_t(1) << (i % 64);
        std::vector<int> r;
        expand(r, p, x);
        std::sort(out_.begin(), out_.end());
        return std::move(out_);
    }

private:
    using Bits = std::vector<std::uint64_t>;

    static bool none(const Bits& b) {
        for (auto w : b)
            if (w) return false;
        return true;
    }

    std::size_t count_and(const Bits& a, const Bits& b) const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_; ++w)
            c += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
        return c;
    }

    void expand(std::vector<int>& r, Bits p, Bits x) {
        if (none(p) && none(x)) {
            out_.push_back(r);
            std::sort(out_.back().begin(), out_.back().end());
            return;
        }
        // pivot: vertex of P ∪ X with the most neighbours in P (ties: lowest index)
        std::size_t pivot = n_, best = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            bool in_px = ((p[i / 64] | x[i / 64]) >> (i % 64)) & 1;
            if (!in_px) continue;
            std::size_t c = count_and(row_[i], p);
            if (pivot == n_ || c > best) {
                pivot = i;
                best = c;
            }
        }
        for (std::size_t i = 0; i < n_; ++i) {
            bool candidate = ((p[i / 64] >> (i % 64)) & 1) &&
                             !((row_[pivot][i / 64] >> (i % 64)) & 1);
            if (!candidate) continue;
            Bits p2(words_), x2(words_);
            for (std::size_t w = 0; w < words_; ++w) {
                p2[w] = p[w] & row_[i][w];
                x2[w] = x[w] & row_[i][w];
            }
            r.push_back(static_cast<int>(i));
            expand(r, std::move(p2), std::move(x2));
            r.pop_back();
            p[i / 64] &= ~(std::uint64_t(1) << (i % 64));
            x[i / 64] |= std::uint64_t(1) << (i % 64);
        }
    }

    std::size_t n_, words_;
    std::vector<Bits> row_;
    std::vector<std::vector<int>> out_;
};

} // namespace detail

/// Vietoris–Rips complex: faces are the subsets of diameter <= r (closed
/// convention) or < r (open). Computed as the clique complex of the scale-r
/// neighbour graph. With the open convention at r = 0 the complex is empty.
inline SimplicialComplex vietoris_rips_complex(const MetricSpace& x, const ScaleParameter& s) {
    if (s.convention == ScaleConvention::Open && s.r == 0.0)
        return SimplicialComplex({}, {});
    const std::size_t n = x.size();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            adj[i][j] = i != j && s.admits(x.dist(i, j));
    auto cliques = detail::MaximalCliques(adj).run();
    std::vector<std::vector<std::string>> faces;
    faces.reserve(cliques.size());
    for (const auto& clique : cliques) {
        std::vector<std::string> face;
        face.reserve(clique.size());
        for (int v : clique) face.push_back(x.label(static_cast<std::size_t>(v)));
        faces.push_back(std::move(face));
    }
    return SimplicialComplex(x.labels(), faces);
}

/// Intrinsic Čech complex with closed (or open) balls: a subset is a face
/// iff some witness point of X is within scale of every member. Maximal
/// faces are the maximal witness balls.
inline SimplicialComplex cech_complex(const MetricSpace& x, const ScaleParameter& s) {
    const std::size_t n = x.size();
    std::vector<std::vector<std::string>> balls;
    balls.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
        std::vector<std::string> ball;
        for (std::size_t i = 0; i < n; ++i)
            if (s.admits(x.dist(w, i))) ball.push_back(x.label(i));
        if (!ball.empty()) balls.push_back(std::move(ball));
    }
    if (balls.empty()) return SimplicialComplex({}, {});
    // vertex set: points covered by some ball (all of X except at open r=0)
    std::vector<std::string> vertices;
    {
        std::unordered_map<std::string, bool> seen;
        for (const auto& ball : balls)
            for (const auto& p : ball) seen[p] = true;
        for (const auto& p : x.labels())
            if (seen.count(p)) vertices.push_back(p);
    }
    return SimplicialComplex(std::move(vertices), balls);
}

/// Simplicial metric thickening: a triple (X, K, φ) with φ a bijection from
/// the complex's vertices to the space's points. Also records how the
/// thickening was built and, for product/wedge/coproduct, its factors.
class Thickening {
public:
    Thickening(std::shared_ptr<const MetricSpace> space, SimplicialComplex complex,
               std::unordered_map<std::string, std::string> phi = {},
               ThickeningKind kind = ThickeningKind::Custom)
        : space_(std::move(space)), complex_(std::move(complex)), phi_(std::move(phi)),
          kind_(kind) {
        if (!space_) throw std::invalid_argument("thickening requires a space");
        if (phi_.empty())
            for (const auto& v : complex_.vertices()) phi_.emplace(v, v);
        if (phi_.size() != complex_.vertex_count() || complex_.vertex_count() != space_->size())
            throw std::domain_error("phi is not a bijection between vertices and points");
        std::vector<char> hit(space_->size(), 0);
        for (const auto& v : complex_.vertices()) {
            auto it = phi_.find(v);
            if (it == phi_.end())
                throw std::domain_error("phi undefined on vertex: " + v);
            std::size_t p = space_->index_of(it->second);
            if (hit[p])
                throw std::domain_error("phi is not injective at point: " + it->second);
            hit[p] = 1;
            phi_inverse_.emplace(it->second, v);
        }
    }

    const MetricSpace& space() const { return *space_; }
    const std::shared_ptr<const MetricSpace>& space_ptr() const { return space_; }
    const SimplicialComplex& complex() const { return complex_; }
    ThickeningKind kind() const { return kind_; }

    const std::string& phi(const std::string& vertex) const { return phi_.at(vertex); }
    const std::string& phi_inverse(const std::string& point) const {
        return phi_inverse_.at(point);
    }
    const std::unordered_map<std::string, std::string>& phi_map() const { return phi_; }

    const std::shared_ptr<const Thickening>& left_factor() const { return left_; }
    const std::shared_ptr<const Thickening>& right_factor() const { return right_; }

    void record_factors(std::shared_ptr<const Thickening> left,
                        std::shared_ptr<const Thickening> right) {
        left_ = std::move(left);
        right_ = std::move(right);
    }

private:
    std::shared_ptr<const MetricSpace> space_;
    SimplicialComplex complex_;
    std::unordered_map<std::string, std::string> phi_, phi_inverse_;
    ThickeningKind kind_;
    std::shared_ptr<const Thickening> left_, right_;
};

inline Thickening vietoris_rips(std::shared_ptr<const MetricSpace> x, const ScaleParameter& s) {
    SimplicialComplex k = vietoris_rips_complex(*x, s);
    if (k.vertex_count() != x->size())
        throw std::domain_error(
            "open convention at r = 0 yields an empty complex; no thickening exists");
    return Thickening(std::move(x), std::move(k), {},
                      s.convention == ScaleConvention::Open ? ThickeningKind::VietorisRipsStrict
                                                            : ThickeningKind::VietorisRips);
}

inline Thickening cech(std::shared_ptr<const MetricSpace> x, const ScaleParameter& s) {
    SimplicialComplex k = cech_complex(*x, s);
    if (k.vertex_count() != x->size())
        throw std::domain_error(
            "open convention at r = 0 yields an empty complex; no thickening exists");
    return Thickening(std::move(x), std::move(k), {}, ThickeningKind::Cech);
}

struct ContainsResult {
    bool ok = false;
    std::vector<std::string> face; // φ-preimage of the support (the failing face when !ok)

    explicit operator bool() const { return ok; }
};

/// Membership of a measure in the metric realization: the φ-preimage of its
/// support must be a face of the complex.
inline ContainsResult contains(const Thickening& t, const FiniteMeasure& mu) {
    if (!same_space(t.space(), mu.space()))
        throw std::domain_error("measure ambient does not match the thickening space");
    std::vector<std::string> face;
    face.reserve(mu.atoms().size());
    for (const auto& a : mu.atoms()) face.push_back(t.phi_inverse(a.point));
    return {membership(t.complex(), face), std::move(face)};
}

/// Product thickening (X×Y, K×L, φ×ψ).
inline Thickening thickening_product(const Thickening& m, const Thickening& n) {
    auto space = std::make_shared<MetricSpace>(linf_product(m.space(), n.space()));
    SimplicialComplex complex = product(m.complex(), n.complex());
    std::unordered_map<std::string, std::string> phi;
    for (const auto& v : m.complex().vertices())
        for (const auto& w : n.complex().vertices())
            phi.emplace(pair_label(v, w), pair_label(m.phi(v), n.phi(w)));
    Thickening out(std::move(space), std::move(complex), std::move(phi),
                   ThickeningKind::Product);
    out.record_factors(std::make_shared<Thickening>(m), std::make_shared<Thickening>(n));
    return out;
}

/// Wedge thickening (X∨Y, K∨L, φ∨ψ) at the given basepoint *points*.
inline Thickening thickening_wedge(const Thickening& m, const std::string& m_basepoint,
                                   const Thickening& n, const std::string& n_basepoint) {
    if (!m.space().has_point(m_basepoint) || !n.space().has_point(n_basepoint))
        throw std::domain_error("wedge basepoint is not a point of its thickening");
    PointedMetricSpace glued = wedge(PointedMetricSpace(m.space(), m_basepoint),
                                     PointedMetricSpace(n.space(), n_basepoint));
    const auto* prov = glued.space.as_wedge();

    const std::string mv = m.phi_inverse(m_basepoint); // basepoint vertices
    const std::string nv = n.phi_inverse(n_basepoint);
    SimplicialComplex complex = wedge(m.complex(), mv, n.complex(), nv);

    // vertex relabeling of the complex wedge, mirroring the space relabeling
    LabelUnion cu = wedge_union_labels(m.complex().vertices(), mv, n.complex().vertices(), nv);
    std::unordered_map<std::string, std::string> phi;
    for (const auto& v : m.complex().vertices())
        phi.emplace(cu.left_map.at(v), prov->left_map.at(m.phi(v)));
    for (const auto& w : n.complex().vertices()) {
        std::string glued_vertex = cu.right_map.at(w);
        if (phi.count(glued_vertex)) continue; // shared basepoint already mapped
        phi.emplace(glued_vertex, prov->right_map.at(n.phi(w)));
    }
    Thickening out(std::make_shared<MetricSpace>(glued.space), std::move(complex),
                   std::move(phi), ThickeningKind::Wedge);
    out.record_factors(std::make_shared<Thickening>(m), std::make_shared<Thickening>(n));
    return out;
}

/// Coproduct thickening: disjoint spaces at infinite distance, disjoint
/// complexes.
inline Thickening thickening_coproduct(const Thickening& m, const Thickening& n) {
    MetricSpace space = coproduct(m.space(), n.space());
    const auto* prov = space.as_coproduct();
    SimplicialComplex complex = coproduct(m.complex(), n.complex());

    LabelUnion cu = disjoint_union_labels(m.complex().vertices(), n.complex().vertices());
    std::unordered_map<std::string, std::string> phi;
    for (const auto& v : m.complex().vertices())
        phi.emplace(cu.left_map.at(v), prov->left_map.at(m.phi(v)));
    for (const auto& w : n.complex().vertices())
        phi.emplace(cu.right_map.at(w), prov->right_map.at(n.phi(w)));
    Thickening out(std::make_shared<MetricSpace>(std::move(space)), std::move(complex),
                   std::move(phi), ThickeningKind::Coproduct);
    out.record_factors(std::make_shared<Thickening>(m), std::make_shared<Thickening>(n));
    return out;
}

struct MorphismCheck {
    bool ok = true;
    std::vector<std::string> diagnostics;

    explicit operator bool() const { return ok; }
};

/// A morphism of thickenings is a pair (f: X→Y short, g: K→L simplicial)
/// making the square with the two bijections commute: f(φ(v)) = ψ(g(v)).
inline MorphismCheck validate_morphism(const PointMap& f, const VertexMap& g,
                                       const Thickening& m, const Thickening& n) {
    MorphismCheck out;
    ShortMapCheck short_check = is_short(f, m.space(), n.space());
    if (!short_check.ok) {
        out.ok = false;
        out.diagnostics.push_back("point map is not short; first violation at (" +
                                  short_check.violating_pair->first + "," +
                                  short_check.violating_pair->second + ")");
    }
    SimplicialMapCheck simp_check = is_simplicial_map(g, m.complex(), n.complex());
    if (!simp_check.ok) {
        std::string face;
        for (const auto& v : *simp_check.violating_face) face += (face.empty() ? "" : ",") + v;
        out.ok = false;
        out.diagnostics.push_back("vertex map is not simplicial; image of {" + face +
                                  "} is not a face");
    }
    for (const auto& v : m.complex().vertices()) {
        auto fv = f.find(m.phi(v));
        auto gv = g.find(v);
        if (fv == f.end() || gv == g.end()) {
            out.ok = false;
            out.diagnostics.push_back("maps are not total at vertex " + v);
            continue;
        }
        if (n.phi(gv->second) != fv->second) {
            out.ok = false;
            out.diagnostics.push_back("square does not commute at vertex " + v + ": f(phi(v))=" +
                                      fv->second + " but psi(g(v))=" + n.phi(gv->second));
        }
    }
    return out;
}

struct WedgeHypothesisResult {
    bool ok = true;
    std::string detail;

    explicit operator bool() const { return ok; }
};

/// Hypothesis of the wedge deformation: S contains K∨L, and every mixed
/// face of S (a subset of neither side) extends by the basepoint. V's space
/// must be the recorded wedge of M's and N's spaces.
inline WedgeHypothesisResult wedge_hypothesis_check(const Thickening& v, const Thickening& m,
                                                    const Thickening& n) {
    const auto* prov = v.space().as_wedge();
    if (!prov)
        throw std::domain_error("hypothesis check requires a thickening over a wedge space");
    if (!same_space(*prov->left, m.space()) || !same_space(*prov->right, n.space()))
        throw std::domain_error("wedge factors do not match the provided thickenings");

    // side membership at the level of glued points
    std::unordered_map<std::string, int> side; // 0 = basepoint, 1 = left, 2 = right
    side[prov->basepoint] = 0;
    for (const auto& [orig, glued] : prov->left_map)
        if (glued != prov->basepoint) side[glued] = 1;
    for (const auto& [orig, glued] : prov->right_map)
        if (glued != prov->basepoint) side[glued] = 2;

    // faces of V translated to point labels via φ
    auto to_points = [&](const std::vector<std::string>& face) {
        std::vector<std::string> pts;
        pts.reserve(face.size());
        for (const auto& vert : face) pts.push_back(v.phi(vert));
        return pts;
    };
    auto point_face_member = [&](std::vector<std::string> pts) {
        std::vector<std::string> verts;
        verts.reserve(pts.size());
        for (const auto& p : pts) verts.push_back(v.phi_inverse(p));
        return membership(v.complex(), verts);
    };

    // S ⊇ K ∨ L: every maximal face of the wedge complex is a face of S
    Thickening glued = thickening_wedge(m, prov->left_basepoint, n, prov->right_basepoint);
    for (const auto& face : glued.complex().maximal_face_labels()) {
        std::vector<std::string> pts;
        pts.reserve(face.size());
        for (const auto& vert : face) pts.push_back(glued.phi(vert));
        if (!point_face_member(pts)) {
            std::string txt;
            for (const auto& p : pts) txt += (txt.empty() ? "" : ",") + p;
            return {false, "wedge face {" + txt + "} is missing from S"};
        }
    }

    // mixed maximal faces must extend by ⋆
    for (const auto& face : v.complex().maximal_face_labels()) {
        auto pts = to_points(face);
        bool has_left = false, has_right = false;
        for (const auto& p : pts) {
            if (side.at(p) == 1) has_left = true;
            if (side.at(p) == 2) has_right = true;
        }
        if (!(has_left && has_right)) continue;
        auto extended = pts;
        if (std::find(extended.begin(), extended.end(), prov->basepoint) == extended.end())
            extended.push_back(prov->basepoint);
        if (!point_face_member(extended)) {
            std::string txt;
            for (const auto& p : pts) txt += (txt.empty() ? "" : ",") + p;
            return {false, "mixed face {" + txt + "} does not extend by the basepoint"};
        }
    }
    return {true, ""};
}

} // namespace smt
