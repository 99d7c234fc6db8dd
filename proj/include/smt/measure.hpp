#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smt/metric_space.hpp"

namespace smt {

/// Mass-sum tolerance for the probability invariant.
inline constexpr double kMassTolerance = 1e-12;

/// Atoms lighter than this after arithmetic are dropped (and the remaining
/// mass renormalized); far below every test tolerance.
inline constexpr double kAtomDropThreshold = 1e-15;

/// Counts drop-and-renormalize events, for observability in tests.
inline std::atomic<std::uint64_t>& dropped_atom_events() {
    static std::atomic<std::uint64_t> n{0};
    return n;
}

struct Atom {
    std::string point;
    double weight = 0.0;
};

/// Finitely-supported probability measure Σ λᵢ δ_{xᵢ} on a metric space.
/// Atoms are stored in ambient point order with strictly positive weights
/// summing to 1. Measures whose support spans an infinite distance are
/// rejected (the finite-moment condition).
class FiniteMeasure {
public:
    FiniteMeasure(std::shared_ptr<const MetricSpace> space, std::vector<Atom> atoms)
        : space_(std::move(space)) {
        if (!space_) throw std::invalid_argument("measure requires an ambient space");
        if (atoms.empty()) throw std::domain_error("measure must have at least one atom");

        // merge duplicate points, validate membership
        std::vector<double> weight_by_index(space_->size(), 0.0);
        for (const auto& a : atoms) {
            if (std::isnan(a.weight) || a.weight < 0.0)
                throw std::domain_error("atom weight must be nonnegative: " + a.point);
            weight_by_index[space_->index_of(a.point)] += a.weight;
        }

        bool dropped = false;
        double sum = 0.0;
        for (std::size_t i = 0; i < weight_by_index.size(); ++i) {
            if (weight_by_index[i] == 0.0) continue;
            if (weight_by_index[i] < kAtomDropThreshold) {
                dropped = true;
                continue;
            }
            atoms_.push_back({space_->label(i), weight_by_index[i]});
            sum += weight_by_index[i];
        }
        if (dropped) dropped_atom_events()++;
        if (atoms_.empty()) throw std::domain_error("measure has no mass");
        if (std::abs(sum - 1.0) > kMassTolerance)
            throw std::domain_error("atom weights must sum to 1");
        if (dropped && sum != 1.0)
            for (auto& a : atoms_) a.weight /= sum;

        for (std::size_t a = 0; a < atoms_.size(); ++a)
            for (std::size_t b = a + 1; b < atoms_.size(); ++b)
                if (std::isinf(space_->dist(atoms_[a].point, atoms_[b].point)))
                    throw std::domain_error("support spans an infinite distance: " +
                                            atoms_[a].point + ", " + atoms_[b].point);
    }

    const MetricSpace& space() const { return *space_; }
    const std::shared_ptr<const MetricSpace>& space_ptr() const { return space_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t support_size() const { return atoms_.size(); }

    double mass() const {
        double s = 0.0;
        for (const auto& a : atoms_) s += a.weight;
        return s;
    }

    double weight_of(const std::string& point) const {
        for (const auto& a : atoms_)
            if (a.point == point) return a.weight;
        return 0.0;
    }

    /// Same ambient structure, same support, weights within atol.
    bool approx_equal(const FiniteMeasure& other, double atol = kMassTolerance) const {
        if (!same_space(*space_, other.space())) return false;
        if (atoms_.size() != other.atoms_.size()) return false;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (atoms_[i].point != other.atoms_[i].point) return false;
            if (std::abs(atoms_[i].weight - other.atoms_[i].weight) > atol) return false;
        }
        return true;
    }

private:
    std::shared_ptr<const MetricSpace> space_;
    std::vector<Atom> atoms_; // ambient point order, weights > 0
};

inline FiniteMeasure delta(std::shared_ptr<const MetricSpace> space, const std::string& x) {
    return FiniteMeasure(std::move(space), {{x, 1.0}});
}

inline std::vector<std::string> support(const FiniteMeasure& mu) {
    std::vector<std::string> out;
    out.reserve(mu.atoms().size());
    for (const auto& a : mu.atoms()) out.push_back(a.point);
    return out;
}

/// ν ≪ µ for finitely-supported measures: support inclusion.
inline bool is_absolutely_continuous(const FiniteMeasure& nu, const FiniteMeasure& mu) {
    if (!same_space(nu.space(), mu.space()))
        throw std::domain_error("absolute continuity requires a common ambient space");
    for (const auto& a : nu.atoms())
        if (mu.weight_of(a.point) == 0.0) return false;
    return true;
}

/// Pushforward along a point map: atoms land on images, fibers merge.
inline FiniteMeasure pushforward(const PointMap& f, const FiniteMeasure& mu,
                                 std::shared_ptr<const MetricSpace> target) {
    std::vector<Atom> atoms;
    atoms.reserve(mu.atoms().size());
    for (const auto& a : mu.atoms()) {
        auto it = f.find(a.point);
        if (it == f.end())
            throw std::domain_error("pushforward map undefined on atom: " + a.point);
        atoms.push_back({it->second, a.weight});
    }
    return FiniteMeasure(std::move(target), std::move(atoms));
}

/// Pushforward within the same ambient space.
inline FiniteMeasure pushforward(const PointMap& f, const FiniteMeasure& mu) {
    return pushforward(f, mu, mu.space_ptr());
}

/// Product measure on a given L∞ product space (weights λᵢηⱼ).
inline FiniteMeasure product_measure(const FiniteMeasure& mu, const FiniteMeasure& nu,
                                     std::shared_ptr<const MetricSpace> product_space) {
    const auto* prov = product_space->as_product();
    if (!prov || !same_space(*prov->left, mu.space()) || !same_space(*prov->right, nu.space()))
        throw std::domain_error("ambient is not the product of the factor spaces");
    std::vector<Atom> atoms;
    atoms.reserve(mu.atoms().size() * nu.atoms().size());
    for (const auto& a : mu.atoms())
        for (const auto& b : nu.atoms())
            atoms.push_back({pair_label(a.point, b.point), a.weight * b.weight});
    return FiniteMeasure(std::move(product_space), std::move(atoms));
}

inline FiniteMeasure product_measure(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    auto space = std::make_shared<MetricSpace>(linf_product(mu.space(), nu.space()));
    return product_measure(mu, nu, std::move(space));
}

/// Marginals of a measure on a recorded product space.
inline std::pair<FiniteMeasure, FiniteMeasure> marginals(const FiniteMeasure& alpha) {
    const auto* prov = alpha.space().as_product();
    if (!prov)
        throw std::domain_error("marginals require a measure on a recorded product space");
    const MetricSpace& left = *prov->left;
    const MetricSpace& right = *prov->right;
    const std::size_t n = right.size();

    std::vector<Atom> mu, nu;
    std::vector<double> left_w(left.size(), 0.0), right_w(right.size(), 0.0);
    for (const auto& a : alpha.atoms()) {
        std::size_t k = alpha.space().index_of(a.point);
        left_w[k / n] += a.weight;
        right_w[k % n] += a.weight;
    }
    for (std::size_t i = 0; i < left_w.size(); ++i)
        if (left_w[i] > 0.0) mu.push_back({left.label(i), left_w[i]});
    for (std::size_t j = 0; j < right_w.size(); ++j)
        if (right_w[j] > 0.0) nu.push_back({right.label(j), right_w[j]});
    return {FiniteMeasure(prov->left, std::move(mu)), FiniteMeasure(prov->right, std::move(nu))};
}

/// t µ + (1−t) ν over the union of the supports; zero-weight atoms drop out.
inline FiniteMeasure convex_combination(double t, const FiniteMeasure& mu,
                                        const FiniteMeasure& nu) {
    if (std::isnan(t) || t < 0.0 || t > 1.0)
        throw std::domain_error("convex combination requires t in [0,1]");
    if (!same_space(mu.space(), nu.space()))
        throw std::domain_error("convex combination requires a common ambient space");
    std::vector<Atom> atoms;
    atoms.reserve(mu.atoms().size() + nu.atoms().size());
    for (const auto& a : mu.atoms()) atoms.push_back({a.point, t * a.weight});
    for (const auto& b : nu.atoms()) atoms.push_back({b.point, (1.0 - t) * b.weight});
    return FiniteMeasure(mu.space_ptr(), std::move(atoms));
}

} // namespace smt
