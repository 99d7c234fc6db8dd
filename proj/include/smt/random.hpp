#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "smt/measure.hpp"
#include "smt/metric_space.hpp"
#include "smt/thickening.hpp"

namespace smt {

/// Seeded generator with hand-rolled draws so that sequences are identical
/// across standard libraries (std::uniform_*_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// uniform integer in [lo, hi]
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool coin() { return engine_() & 1; }

private:
    std::mt19937_64 engine_;
};

/// Random classical metric space: n distinct points on a small integer grid
/// with the L∞ metric, so every distance is an exact small integer and the
/// triangle inequality holds exactly.
inline MetricSpace random_classical_space(Rng& rng, std::size_t n,
                                          const std::string& label_prefix = "p") {
    std::vector<std::vector<std::int64_t>> coords;
    coords.reserve(n);
    const std::int64_t extent = static_cast<std::int64_t>(8 * n);
    while (coords.size() < n) {
        std::vector<std::int64_t> c{rng.uniform_int(0, extent), rng.uniform_int(0, extent),
                                    rng.uniform_int(0, extent)};
        bool fresh = true;
        for (const auto& other : coords) fresh = fresh && other != c;
        if (fresh) coords.push_back(std::move(c));
    }
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(label_prefix + std::to_string(i));
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t d = 0;
            for (std::size_t k = 0; k < 3; ++k)
                d = std::max(d, std::abs(coords[i][k] - coords[j][k]));
            dist[i][j] = static_cast<double>(d);
        }
    return MetricSpace(std::move(labels), std::move(dist));
}

/// Random pointed space; the basepoint is the first point.
inline PointedMetricSpace random_pointed_space(Rng& rng, std::size_t n,
                                               const std::string& label_prefix = "p") {
    MetricSpace space = random_classical_space(rng, n, label_prefix);
    std::string base = space.label(0);
    return PointedMetricSpace(std::move(space), std::move(base));
}

/// Uniform point of the probability simplex over k coordinates.
inline std::vector<double> random_simplex_weights(Rng& rng, std::size_t k) {
    std::vector<double> w(k);
    double sum = 0.0;
    for (auto& v : w) {
        double u = rng.uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        v = -std::log(u); // exponential(1); normalized => Dirichlet(1,...,1)
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return w;
}

/// Random measure supported on a random nonempty subset of the points.
inline FiniteMeasure random_measure(Rng& rng, std::shared_ptr<const MetricSpace> space,
                                    std::size_t max_support = 0) {
    const std::size_t n = space->size();
    if (n == 0) throw std::domain_error("cannot sample a measure on the empty space");
    std::size_t cap = max_support == 0 ? n : std::min(max_support, n);
    std::size_t size = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(cap)));
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t i = 0; i < size; ++i) { // partial Fisher-Yates
        std::size_t j = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
        std::swap(all[i], all[j]);
    }
    std::vector<double> w = random_simplex_weights(rng, size);
    std::vector<Atom> atoms;
    atoms.reserve(size);
    for (std::size_t i = 0; i < size; ++i) atoms.push_back({space->label(all[i]), w[i]});
    return FiniteMeasure(std::move(space), std::move(atoms));
}

/// Random measure contained in the thickening: pick a random maximal face,
/// a random nonempty subset of it, and uniform simplex weights.
inline FiniteMeasure random_contained_measure(Rng& rng, const Thickening& t) {
    const auto& faces = t.complex().maximal_faces();
    if (faces.empty()) throw std::domain_error("thickening has no faces to sample from");
    const auto& face =
        faces[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(faces.size()) - 1))];
    std::vector<int> chosen;
    for (int v : face)
        if (rng.coin()) chosen.push_back(v);
    if (chosen.empty())
        chosen.push_back(face[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(face.size()) - 1))]);
    std::vector<double> w = random_simplex_weights(rng, chosen.size());
    std::vector<Atom> atoms;
    atoms.reserve(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i)
        atoms.push_back({t.phi(t.complex().vertices()[static_cast<std::size_t>(chosen[i])]), w[i]});
    return FiniteMeasure(t.space_ptr(), std::move(atoms));
}

} // namespace smt
