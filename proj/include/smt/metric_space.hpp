#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "smt/labels.hpp"

namespace smt {

/// Extended nonnegative reals: plain doubles with IEEE +inf standing in for
/// the point at infinity (x + inf == inf, x <= inf hold natively).
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Tolerance for inequality-shaped checks (triangle inequality, shortness).
/// Exact-equality axioms (zero diagonal, symmetry) are compared exactly.
inline constexpr double kAxiomTolerance = 1e-9;

enum class Flavor { Classical, Pseudo, Extended, ExtendedPseudo };

inline const char* to_string(Flavor f) {
    switch (f) {
        case Flavor::Classical: return "classical";
        case Flavor::Pseudo: return "pseudo";
        case Flavor::Extended: return "extended";
        case Flavor::ExtendedPseudo: return "extended-pseudo";
    }
    return "?";
}

class MetricSpace;

/// Construction records attached to spaces built by the category-level
/// operations. They keep the factor spaces and the label renamings so that
/// downstream maps (marginals, wedge retraction) can decompose points.
struct ProductProvenance {
    std::shared_ptr<const MetricSpace> left, right;
    // point k of the product corresponds to (k / |right|, k % |right|)
};

struct WedgeProvenance {
    std::shared_ptr<const MetricSpace> left, right;
    std::string left_basepoint, right_basepoint; // original labels
    std::unordered_map<std::string, std::string> left_map, right_map;
    std::string basepoint; // glued label, normally the ⋆ symbol
};

struct CoproductProvenance {
    std::shared_ptr<const MetricSpace> left, right;
    std::unordered_map<std::string, std::string> left_map, right_map;
};

using SpaceProvenance =
    std::variant<std::monostate, ProductProvenance, WedgeProvenance, CoproductProvenance>;

/// A finite metric space: an ordered list of opaque point labels and a
/// square matrix of extended distances. Values are immutable once built.
class MetricSpace {
public:
    MetricSpace() = default;

    MetricSpace(std::vector<std::string> labels, std::vector<std::vector<double>> dist,
                SpaceProvenance provenance = {})
        : labels_(std::move(labels)), dist_(std::move(dist)),
          provenance_(std::move(provenance)) {
        if (dist_.size() != labels_.size())
            throw std::invalid_argument("distance matrix row count does not match point count");
        for (const auto& row : dist_)
            if (row.size() != labels_.size())
                throw std::invalid_argument("distance matrix is not square");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (!index_.emplace(labels_[i], i).second)
                throw std::invalid_argument("duplicate point label: " + labels_[i]);
        compute_flavor();
    }

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    double dist(std::size_t i, std::size_t j) const { return dist_[i][j]; }

    double dist(const std::string& a, const std::string& b) const {
        return dist_[index_of(a)][index_of(b)];
    }

    bool has_point(const std::string& label) const { return index_.count(label) != 0; }

    std::size_t index_of(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end())
            throw std::domain_error("unknown point: " + label);
        return it->second;
    }

    std::optional<std::size_t> find(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    Flavor flavor() const { return flavor_; }
    const SpaceProvenance& provenance() const { return provenance_; }

    const ProductProvenance* as_product() const {
        return std::get_if<ProductProvenance>(&provenance_);
    }
    const WedgeProvenance* as_wedge() const {
        return std::get_if<WedgeProvenance>(&provenance_);
    }
    const CoproductProvenance* as_coproduct() const {
        return std::get_if<CoproductProvenance>(&provenance_);
    }

private:
    void compute_flavor() {
        bool zero_off = false, has_inf = false;
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = 0; j < labels_.size(); ++j) {
                if (i != j && dist_[i][j] == 0.0) zero_off = true;
                if (std::isinf(dist_[i][j])) has_inf = true;
            }
        if (zero_off && has_inf) flavor_ = Flavor::ExtendedPseudo;
        else if (zero_off) flavor_ = Flavor::Pseudo;
        else if (has_inf) flavor_ = Flavor::Extended;
        else flavor_ = Flavor::Classical;
    }

    std::vector<std::string> labels_;
    std::vector<std::vector<double>> dist_;
    std::unordered_map<std::string, std::size_t> index_;
    SpaceProvenance provenance_;
    Flavor flavor_ = Flavor::Classical;
};

/// Two spaces are interchangeable as ambient spaces when the labels and
/// distances agree entrywise (provenance is not compared).
inline bool same_space(const MetricSpace& a, const MetricSpace& b) {
    if (a.labels() != b.labels()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a.dist(i, j) != b.dist(i, j)) return false;
    return true;
}

struct PointedMetricSpace {
    MetricSpace space;
    std::string basepoint;

    PointedMetricSpace(MetricSpace s, std::string base)
        : space(std::move(s)), basepoint(std::move(base)) {
        if (!space.has_point(basepoint))
            throw std::domain_error("basepoint is not a point of the space: " + basepoint);
    }
};

// ---------------------------------------------------------------------------
// Axiom diagnostics

enum class MetricAxiom { Nonnegativity, ZeroDiagonal, Symmetry, Triangle };

inline const char* to_string(MetricAxiom a) {
    switch (a) {
        case MetricAxiom::Nonnegativity: return "nonnegativity";
        case MetricAxiom::ZeroDiagonal: return "zero-diagonal";
        case MetricAxiom::Symmetry: return "symmetry";
        case MetricAxiom::Triangle: return "triangle-inequality";
    }
    return "?";
}

struct AxiomViolation {
    MetricAxiom axiom;
    std::size_t i = 0, j = 0, k = 0; // witnessing indices; k used by Triangle only

    std::string describe(const MetricSpace& space) const {
        switch (axiom) {
            case MetricAxiom::Nonnegativity:
                return std::string(to_string(axiom)) + " at (" + space.label(i) + "," +
                       space.label(j) + ")";
            case MetricAxiom::ZeroDiagonal:
                return std::string(to_string(axiom)) + " at " + space.label(i);
            case MetricAxiom::Symmetry:
                return std::string(to_string(axiom)) + " at (" + space.label(i) + "," +
                       space.label(j) + ")";
            case MetricAxiom::Triangle:
                return std::string(to_string(axiom)) + " at (" + space.label(i) + "," +
                       space.label(j) + "," + space.label(k) + ")";
        }
        return "?";
    }
};

/// Checks the pseudo-metric axioms. Empty result means the space is a valid
/// extended pseudo-metric space; the flavor field then refines the class.
/// Diagonal and symmetry use exact comparison; the triangle inequality is
/// tolerance-aware so that distances derived from floating-point coordinates
/// do not trip it on rounding dust.
inline std::vector<AxiomViolation> validate(const MetricSpace& space) {
    std::vector<AxiomViolation> out;
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (space.dist(i, i) != 0.0)
            out.push_back({MetricAxiom::ZeroDiagonal, i, i, 0});
        for (std::size_t j = 0; j < n; ++j) {
            double d = space.dist(i, j);
            if (std::isnan(d) || d < 0.0)
                out.push_back({MetricAxiom::Nonnegativity, i, j, 0});
            if (j > i && d != space.dist(j, i))
                out.push_back({MetricAxiom::Symmetry, i, j, 0});
        }
    }
    // Exhaustive O(n^3) scan; extended arithmetic works out of the box
    // because x + inf == inf and finite <= inf.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (space.dist(i, k) > space.dist(i, j) + space.dist(j, k) + kAxiomTolerance)
                    out.push_back({MetricAxiom::Triangle, i, j, k});
    return out;
}

// ---------------------------------------------------------------------------
// Constructions

/// L∞ product: point pairs in row-major order, distance = max of coordinates.
inline MetricSpace linf_product(const MetricSpace& x, const MetricSpace& y) {
    const std::size_t m = x.size(), n = y.size();
    std::vector<std::string> labels;
    labels.reserve(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            labels.push_back(pair_label(x.label(i), y.label(j)));
    std::vector<std::vector<double>> dist(m * n, std::vector<double>(m * n, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i2 = 0; i2 < m; ++i2)
                for (std::size_t j2 = 0; j2 < n; ++j2)
                    dist[i * n + j][i2 * n + j2] = std::max(x.dist(i, i2), y.dist(j, j2));
    ProductProvenance prov{std::make_shared<MetricSpace>(x), std::make_shared<MetricSpace>(y)};
    return MetricSpace(std::move(labels), std::move(dist), prov);
}

/// Wedge sum: basepoints glued to ⋆, cross distances go through ⋆.
inline PointedMetricSpace wedge(const PointedMetricSpace& x, const PointedMetricSpace& y) {
    if (x.space.empty() || y.space.empty())
        throw std::domain_error("wedge operands must be nonempty pointed spaces");
    LabelUnion u = wedge_union_labels(x.space.labels(), x.basepoint, y.space.labels(), y.basepoint);

    const std::size_t n = u.labels.size();
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos.emplace(u.labels[i], i);

    // to_left/to_right: index in glued space -> index in factor (or npos)
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> to_left(n, npos), to_right(n, npos);
    for (const auto& [orig, glued] : u.left_map) to_left[pos[glued]] = x.space.index_of(orig);
    for (const auto& [orig, glued] : u.right_map) to_right[pos[glued]] = y.space.index_of(orig);

    const std::size_t bx = x.space.index_of(x.basepoint);
    const std::size_t by = y.space.index_of(y.basepoint);

    auto left_dist_to_base = [&](std::size_t i) { return x.space.dist(to_left[i], bx); };
    auto right_dist_to_base = [&](std::size_t i) { return y.space.dist(to_right[i], by); };

    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (to_left[i] != npos && to_left[j] != npos)
                dist[i][j] = x.space.dist(to_left[i], to_left[j]);
            else if (to_right[i] != npos && to_right[j] != npos)
                dist[i][j] = y.space.dist(to_right[i], to_right[j]);
            else if (to_left[i] != npos)
                dist[i][j] = left_dist_to_base(i) + right_dist_to_base(j);
            else
                dist[i][j] = right_dist_to_base(i) + left_dist_to_base(j);
        }

    WedgeProvenance prov{std::make_shared<MetricSpace>(x.space),
                         std::make_shared<MetricSpace>(y.space),
                         x.basepoint,
                         y.basepoint,
                         u.left_map,
                         u.right_map,
                         kWedgeBasepoint};
    return PointedMetricSpace(MetricSpace(u.labels, std::move(dist), std::move(prov)),
                              kWedgeBasepoint);
}

/// pMet coproduct: disjoint union with +inf across the two sides.
inline MetricSpace coproduct(const MetricSpace& x, const MetricSpace& y) {
    LabelUnion u = disjoint_union_labels(x.labels(), y.labels());
    const std::size_t m = x.size(), n = y.size();
    std::vector<std::vector<double>> dist(m + n, std::vector<double>(m + n, kInfinity));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) dist[i][j] = x.dist(i, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dist[m + i][m + j] = y.dist(i, j);
    CoproductProvenance prov{std::make_shared<MetricSpace>(x), std::make_shared<MetricSpace>(y),
                             u.left_map, u.right_map};
    return MetricSpace(u.labels, std::move(dist), std::move(prov));
}

/// Discrete metric: every off-diagonal distance equals r (r may be 0 or +inf).
inline MetricSpace discrete(const std::vector<std::string>& labels, double r) {
    if (r < 0.0 || std::isnan(r))
        throw std::domain_error("discrete metric requires r >= 0");
    const std::size_t n = labels.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, r));
    for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0.0;
    return MetricSpace(labels, std::move(dist));
}

/// Maximum pairwise distance over a nonempty subset; 0 for singletons.
inline double diameter(const MetricSpace& space, const std::vector<std::string>& subset) {
    if (subset.empty())
        throw std::domain_error("diameter of the empty subset is undefined");
    std::vector<std::size_t> idx;
    idx.reserve(subset.size());
    for (const auto& p : subset) idx.push_back(space.index_of(p));
    double d = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            d = std::max(d, space.dist(idx[a], idx[b]));
    return d;
}

using PointMap = std::unordered_map<std::string, std::string>;

struct ShortMapCheck {
    bool ok = true;
    std::optional<std::pair<std::string, std::string>> violating_pair;

    explicit operator bool() const { return ok; }
};

/// 1-Lipschitz check: d_Y(f(a), f(b)) <= d_X(a, b) for all pairs, under
/// extended arithmetic. Reports the first violating pair in point order.
inline ShortMapCheck is_short(const PointMap& f, const MetricSpace& x, const MetricSpace& y) {
    std::vector<std::size_t> image(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto it = f.find(x.label(i));
        if (it == f.end())
            throw std::domain_error("map is not total: missing " + x.label(i));
        if (!y.has_point(it->second))
            throw std::domain_error("map image outside codomain: " + it->second);
        image[i] = y.index_of(it->second);
    }
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (y.dist(image[i], image[j]) > x.dist(i, j) + kAxiomTolerance)
                return {false, std::make_pair(x.label(i), x.label(j))};
    return {true, std::nullopt};
}

} // namespace smt
