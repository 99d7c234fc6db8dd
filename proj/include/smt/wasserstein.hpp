#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smt/measure.hpp"
#include "smt/metric_space.hpp"

namespace smt {

struct WassersteinConfig {
    double p = 1.0;         // exponent of the transport cost, p >= 1
    double tolerance = 1e-9; // marginal / certificate tolerance
};

/// Coupling of two finite measures: a nonnegative matrix whose row sums are
/// µ's weights and whose column sums are ν's weights.
struct TransportPlan {
    FiniteMeasure row_measure;
    FiniteMeasure col_measure;
    std::vector<std::vector<double>> mass; // indexed (atom of µ, atom of ν)
};

struct CouplingCheck {
    bool ok = true;
    std::string detail; // first violated constraint, empty when ok

    explicit operator bool() const { return ok; }
};

inline CouplingCheck is_coupling(const TransportPlan& plan, double tol = 1e-9) {
    const auto& mu = plan.row_measure.atoms();
    const auto& nu = plan.col_measure.atoms();
    if (plan.mass.size() != mu.size())
        throw std::invalid_argument("plan has wrong row count");
    for (const auto& row : plan.mass)
        if (row.size() != nu.size())
            throw std::invalid_argument("plan has wrong column count");

    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j)
            if (plan.mass[i][j] < -tol)
                return {false, "negative entry at (" + mu[i].point + "," + nu[j].point + ")"};
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < nu.size(); ++j) sum += plan.mass[i][j];
        if (std::abs(sum - mu[i].weight) > tol)
            return {false, "row marginal at " + mu[i].point + ": expected " +
                               std::to_string(mu[i].weight) + ", got " + std::to_string(sum)};
    }
    for (std::size_t j = 0; j < nu.size(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) sum += plan.mass[i][j];
        if (std::abs(sum - nu[j].weight) > tol)
            return {false, "column marginal at " + nu[j].point + ": expected " +
                               std::to_string(nu[j].weight) + ", got " + std::to_string(sum)};
    }
    return {true, ""};
}

struct WassersteinResult {
    double distance = 0.0;
    std::optional<TransportPlan> plan; // absent when the distance is +inf
    // Dual potentials for the cost d^p: row_potentials[i] + col_potentials[j]
    // <= cost(i,j) with equality on the support of the plan (complementary
    // slackness certificate of optimality).
    std::vector<double> row_potentials, col_potentials;
};

namespace detail {

inline void check_config(const WassersteinConfig& cfg) {
    if (std::isnan(cfg.p) || std::isinf(cfg.p) || cfg.p < 1.0)
        throw std::domain_error("Wasserstein exponent p must lie in [1, inf)");
}

inline double transport_cost(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

inline double cost_root(double total, double p) {
    if (p == 1.0) return total;
    if (p == 2.0) return std::sqrt(total);
    return std::pow(total, 1.0 / p);
}

/// Cost matrix c[i][j] = d(x_i, y_j)^p; returns false if any entry is +inf.
inline bool build_costs(const FiniteMeasure& mu, const FiniteMeasure& nu, double p,
                        std::vector<std::vector<double>>& c) {
    const MetricSpace& space = mu.space();
    c.assign(mu.atoms().size(), std::vector<double>(nu.atoms().size(), 0.0));
    for (std::size_t i = 0; i < mu.atoms().size(); ++i)
        for (std::size_t j = 0; j < nu.atoms().size(); ++j) {
            double d = space.dist(mu.atoms()[i].point, nu.atoms()[j].point);
            if (std::isinf(d)) return false;
            c[i][j] = transport_cost(d, p);
        }
    return true;
}

} // namespace detail

/// Exact p-Wasserstein distance between finitely-supported measures via the
/// transportation simplex on the complete bipartite support graph. The
/// returned plan is an optimal vertex of the transport polytope and the dual
/// potentials certify optimality by complementary slackness.
inline WassersteinResult wasserstein(const FiniteMeasure& mu, const FiniteMeasure& nu,
                                     const WassersteinConfig& cfg = {}) {
    detail::check_config(cfg);
    if (!same_space(mu.space(), nu.space()))
        throw std::domain_error("wasserstein requires a common ambient space");

    const std::size_t m = mu.atoms().size(), n = nu.atoms().size();

    // Identical measures short-circuit: diagonal plan, zero potentials.
    if (mu.approx_equal(nu, 0.0)) {
        TransportPlan plan{mu, nu, std::vector<std::vector<double>>(m, std::vector<double>(n, 0.0))};
        for (std::size_t i = 0; i < m; ++i) plan.mass[i][i] = mu.atoms()[i].weight;
        return {0.0, std::move(plan), std::vector<double>(m, 0.0), std::vector<double>(n, 0.0)};
    }

    std::vector<std::vector<double>> c;
    if (!detail::build_costs(mu, nu, cfg.p, c))
        return {kInfinity, std::nullopt, {}, {}};

    // Forced coupling between single atoms; the distance is exactly d.
    if (m == 1 && n == 1) {
        double d = mu.space().dist(mu.atoms()[0].point, nu.atoms()[0].point);
        return {d, TransportPlan{mu, nu, {{1.0}}}, {c[0][0]}, {0.0}};
    }

    std::vector<double> a(m), b(n);
    for (std::size_t i = 0; i < m; ++i) a[i] = mu.atoms()[i].weight;
    for (std::size_t j = 0; j < n; ++j) b[j] = nu.atoms()[j].weight;

    std::vector<std::vector<double>> mass(m, std::vector<double>(n, 0.0));
    std::vector<std::vector<char>> basic(m, std::vector<char>(n, 0));

    // North-west corner rule: m+n-1 basic cells forming a spanning tree.
    {
        std::size_t i = 0, j = 0;
        while (true) {
            double q = std::min(a[i], b[j]);
            mass[i][j] = q;
            basic[i][j] = 1;
            a[i] -= q;
            b[j] -= q;
            if (i == m - 1 && j == n - 1) break;
            if (j == n - 1) ++i;
            else if (i == m - 1) ++j;
            else if (a[i] <= b[j]) ++i;
            else ++j;
        }
    }

    double cost_scale = 1.0;
    for (const auto& row : c)
        for (double v : row) cost_scale = std::max(cost_scale, std::abs(v));
    const double enter_eps = 1e-12 * cost_scale;

    std::vector<double> u(m), v(n);
    const std::size_t max_iterations = 2000 * (m + n) * (m + n) + 10000;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_iterations)
            throw std::runtime_error("transportation simplex failed to converge");

        // Duals from the basis tree: u[i] + v[j] = c[i][j] on basic cells.
        std::vector<char> have_u(m, 0), have_v(n, 0);
        u[0] = 0.0;
        have_u[0] = 1;
        std::deque<std::size_t> queue{0}; // nodes: rows [0,m), cols [m,m+n)
        while (!queue.empty()) {
            std::size_t node = queue.front();
            queue.pop_front();
            if (node < m) {
                for (std::size_t j = 0; j < n; ++j)
                    if (basic[node][j] && !have_v[j]) {
                        v[j] = c[node][j] - u[node];
                        have_v[j] = 1;
                        queue.push_back(m + j);
                    }
            } else {
                std::size_t j = node - m;
                for (std::size_t i = 0; i < m; ++i)
                    if (basic[i][j] && !have_u[i]) {
                        u[i] = c[i][j] - v[j];
                        have_u[i] = 1;
                        queue.push_back(i);
                    }
            }
        }

        for (std::size_t i = 0; i < m; ++i)
            if (!have_u[i]) throw std::runtime_error("transportation basis is not spanning");
        for (std::size_t j = 0; j < n; ++j)
            if (!have_v[j]) throw std::runtime_error("transportation basis is not spanning");

        // Entering variable: first cell in row-major order with negative
        // reduced cost (Bland-style rule, deterministic).
        std::size_t ei = m, ej = n;
        for (std::size_t i = 0; i < m && ei == m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!basic[i][j] && c[i][j] - u[i] - v[j] < -enter_eps) {
                    ei = i;
                    ej = j;
                    break;
                }
        if (ei == m) break; // optimal

        // Unique path in the basis tree from row ei to column ej.
        const std::size_t node_count = m + n;
        std::vector<std::ptrdiff_t> parent(node_count, -1);
        std::vector<char> seen(node_count, 0);
        std::deque<std::size_t> bfs{ei};
        seen[ei] = 1;
        while (!bfs.empty()) {
            std::size_t node = bfs.front();
            bfs.pop_front();
            if (node == m + ej) break;
            if (node < m) {
                for (std::size_t j = 0; j < n; ++j)
                    if (basic[node][j] && !seen[m + j]) {
                        seen[m + j] = 1;
                        parent[m + j] = static_cast<std::ptrdiff_t>(node);
                        bfs.push_back(m + j);
                    }
            } else {
                std::size_t j = node - m;
                for (std::size_t i = 0; i < m; ++i)
                    if (basic[i][j] && !seen[i]) {
                        seen[i] = 1;
                        parent[i] = static_cast<std::ptrdiff_t>(m + j);
                        bfs.push_back(i);
                    }
            }
        }
        if (!seen[m + ej])
            throw std::runtime_error("transportation basis is not connected");

        // Reconstruct the cycle cells, alternating signs; entering cell is +.
        std::vector<std::pair<std::size_t, std::size_t>> path; // cells from ej back to ei
        std::size_t node = m + ej;
        while (node != ei) {
            std::size_t prev = static_cast<std::size_t>(parent[node]);
            if (node >= m) path.emplace_back(prev, node - m); // row prev -> col node
            else path.emplace_back(node, prev - m);           // col prev -> row node
            node = prev;
        }
        // path[0] is adjacent to (ei,ej) via column ej; signs alternate -,+,-,...
        double theta = kInfinity;
        std::size_t leave = path.size();
        for (std::size_t s = 0; s < path.size(); s += 2) {
            double q = mass[path[s].first][path[s].second];
            if (q < theta - 0.0 ||
                (q == theta && leave < path.size() &&
                 path[s].first * n + path[s].second < path[leave].first * n + path[leave].second)) {
                theta = q;
                leave = s;
            }
        }
        if (leave == path.size())
            throw std::runtime_error("transportation pivot found no leaving cell");

        mass[ei][ej] += theta;
        basic[ei][ej] = 1;
        for (std::size_t s = 0; s < path.size(); ++s) {
            auto [pi, pj] = path[s];
            if (s % 2 == 0) {
                mass[pi][pj] -= theta;
                if (mass[pi][pj] < 0.0) mass[pi][pj] = 0.0; // clamp arithmetic dust
            } else {
                mass[pi][pj] += theta;
            }
        }
        basic[path[leave].first][path[leave].second] = 0;
        mass[path[leave].first][path[leave].second] = 0.0;
    }

    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) total += mass[i][j] * c[i][j];
    if (total < 0.0) total = 0.0;

    return {detail::cost_root(total, cfg.p), TransportPlan{mu, nu, std::move(mass)},
            std::move(u), std::move(v)};
}

/// Independent oracle: exact minimum over all vertices of the transport
/// polytope, enumerated as spanning trees of the complete bipartite support
/// graph (every vertex of the polytope is the basic solution of such a
/// tree). Only for supports of size <= 4 on each side.
inline double wasserstein_bruteforce(const FiniteMeasure& mu, const FiniteMeasure& nu,
                                     const WassersteinConfig& cfg = {}) {
    detail::check_config(cfg);
    if (!same_space(mu.space(), nu.space()))
        throw std::domain_error("wasserstein requires a common ambient space");
    const std::size_t m = mu.atoms().size(), n = nu.atoms().size();
    if (m > 4 || n > 4)
        throw std::domain_error("brute-force oracle refuses supports larger than 4");

    std::vector<std::vector<double>> c;
    if (!detail::build_costs(mu, nu, cfg.p, c)) return kInfinity;
    if (m == 1 && n == 1) return mu.space().dist(mu.atoms()[0].point, nu.atoms()[0].point);

    const std::size_t cells = m * n;
    const std::size_t k = m + n - 1; // edges of a spanning tree on m+n nodes
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;

    double best = kInfinity;
    while (true) {
        // spanning-tree test via union-find on rows [0,m) and columns [m,m+n)
        std::vector<std::size_t> root(m + n);
        for (std::size_t i = 0; i < m + n; ++i) root[i] = i;
        auto find = [&](std::size_t x) {
            while (root[x] != x) x = root[x] = root[root[x]];
            return x;
        };
        bool tree = true;
        for (std::size_t s = 0; s < k && tree; ++s) {
            std::size_t i = pick[s] / n, j = pick[s] % n;
            std::size_t ra = find(i), rb = find(m + j);
            if (ra == rb) tree = false;
            else root[ra] = rb;
        }

        if (tree) {
            // leaf elimination: each degree-1 node forces its cell's mass
            std::vector<double> remaining(m + n);
            for (std::size_t i = 0; i < m; ++i) remaining[i] = mu.atoms()[i].weight;
            for (std::size_t j = 0; j < n; ++j) remaining[m + j] = nu.atoms()[j].weight;
            std::vector<int> degree(m + n, 0);
            std::vector<char> used(k, 0);
            for (std::size_t s = 0; s < k; ++s) {
                ++degree[pick[s] / n];
                ++degree[m + pick[s] % n];
            }
            double cost = 0.0;
            bool feasible = true;
            for (std::size_t done = 0; done < k && feasible; ++done) {
                std::size_t cell = cells, leaf = m + n;
                for (std::size_t s = 0; s < k && cell == cells; ++s) {
                    if (used[s]) continue;
                    std::size_t i = pick[s] / n, j = pick[s] % n;
                    if (degree[i] == 1) { cell = s; leaf = i; }
                    else if (degree[m + j] == 1) { cell = s; leaf = m + j; }
                }
                std::size_t i = pick[cell] / n, j = pick[cell] % n;
                double q = remaining[leaf];
                if (q < -1e-12) { feasible = false; break; }
                if (q < 0.0) q = 0.0;
                cost += q * c[i][j];
                remaining[i] -= q;
                remaining[m + j] -= q;
                --degree[i];
                --degree[m + j];
                used[cell] = 1;
            }
            if (feasible) best = std::min(best, cost);
        }

        // next combination
        std::size_t idx = k;
        while (idx > 0 && pick[idx - 1] == cells - k + idx - 1) --idx;
        if (idx == 0) break;
        ++pick[idx - 1];
        for (std::size_t s = idx; s < k; ++s) pick[s] = pick[s - 1] + 1;
    }
    return detail::cost_root(best, cfg.p);
}

} // namespace smt
