#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smt/measure.hpp"
#include "smt/metric_space.hpp"
#include "smt/random.hpp"
#include "smt/thickening.hpp"
#include "smt/wasserstein.hpp"

namespace smt {

/// Tolerance for the homotopy identities (ρ∘ι = id, endpoints, mass).
inline constexpr double kHomotopyTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Product: ι = product measure, ρ = marginals, H = straight line between
// the identity and ι∘ρ.

inline FiniteMeasure product_inject(const FiniteMeasure& mu, const FiniteMeasure& nu,
                                    std::shared_ptr<const MetricSpace> product_space) {
    return product_measure(mu, nu, std::move(product_space));
}

inline FiniteMeasure product_inject(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    return product_measure(mu, nu);
}

inline std::pair<FiniteMeasure, FiniteMeasure> product_retract(const FiniteMeasure& alpha) {
    return marginals(alpha);
}

/// H(t,α) = t α + (1−t) ι(ρ(α)) on a recorded product space.
inline FiniteMeasure product_homotopy(double t, const FiniteMeasure& alpha) {
    auto [mu, nu] = marginals(alpha);
    FiniteMeasure back = product_measure(mu, nu, alpha.space_ptr());
    return convex_combination(t, alpha, back);
}

// ---------------------------------------------------------------------------
// Wedge: ρ collapses the lighter side into the basepoint; ι is the
// inclusion of one-sided measures, H the straight line.

enum class WedgeBranch { Auto, Left, Right };

namespace detail {

struct WedgeSplit {
    double eps = 0.0, lambda = 0.0, eta = 0.0; // basepoint / left / right mass
    std::vector<Atom> left, right;             // atoms excluding the basepoint
    std::string basepoint;
};

inline WedgeSplit split_wedge_measure(const FiniteMeasure& mu) {
    const auto* prov = mu.space().as_wedge();
    if (!prov)
        throw std::domain_error("measure ambient is not a recorded wedge");
    std::unordered_map<std::string, int> side; // 1 = left, 2 = right
    for (const auto& [orig, glued] : prov->left_map)
        if (glued != prov->basepoint) side[glued] = 1;
    for (const auto& [orig, glued] : prov->right_map)
        if (glued != prov->basepoint) side[glued] = 2;

    WedgeSplit out;
    out.basepoint = prov->basepoint;
    for (const auto& a : mu.atoms()) {
        if (a.point == prov->basepoint) {
            out.eps += a.weight;
        } else if (side.at(a.point) == 1) {
            out.lambda += a.weight;
            out.left.push_back(a);
        } else {
            out.eta += a.weight;
            out.right.push_back(a);
        }
    }
    return out;
}

} // namespace detail

/// Retraction onto one-sided measures:
///   λ ≥ η: (2η+ε) δ_⋆ + (1 − η/λ) Σ λᵢ δ_{xᵢ}
///   η ≥ λ: (2λ+ε) δ_⋆ + (1 − λ/η) Σ ηⱼ δ_{yⱼ}
/// with the ratio read as 1 when its denominator is 0. The two branches
/// agree at λ = η (both collapse to δ_⋆); Auto takes the left branch there.
/// Forcing a branch requires its inequality to hold.
inline FiniteMeasure wedge_retract(const FiniteMeasure& mu,
                                   WedgeBranch branch = WedgeBranch::Auto) {
    detail::WedgeSplit s = detail::split_wedge_measure(mu);
    if (branch == WedgeBranch::Auto)
        branch = s.lambda >= s.eta ? WedgeBranch::Left : WedgeBranch::Right;
    std::vector<Atom> atoms;
    if (branch == WedgeBranch::Left) {
        if (s.lambda < s.eta)
            throw std::domain_error("left branch requires lambda >= eta");
        double ratio = s.lambda == 0.0 ? 1.0 : s.eta / s.lambda;
        atoms.push_back({s.basepoint, 2.0 * s.eta + s.eps});
        for (const auto& a : s.left) atoms.push_back({a.point, (1.0 - ratio) * a.weight});
    } else {
        if (s.eta < s.lambda)
            throw std::domain_error("right branch requires eta >= lambda");
        double ratio = s.eta == 0.0 ? 1.0 : s.lambda / s.eta;
        atoms.push_back({s.basepoint, 2.0 * s.lambda + s.eps});
        for (const auto& a : s.right) atoms.push_back({a.point, (1.0 - ratio) * a.weight});
    }
    return FiniteMeasure(mu.space_ptr(), std::move(atoms));
}

/// Inclusion of a one-sided measure into the realization of V, after
/// checking the wedge hypothesis and membership in the wedge thickening.
inline FiniteMeasure wedge_inject(const Thickening& v, const Thickening& glued,
                                  const FiniteMeasure& mu) {
    if (glued.kind() != ThickeningKind::Wedge || !glued.left_factor() || !glued.right_factor())
        throw std::domain_error("inject requires a wedge thickening with recorded factors");
    WedgeHypothesisResult hyp =
        wedge_hypothesis_check(v, *glued.left_factor(), *glued.right_factor());
    if (!hyp.ok)
        throw std::domain_error("wedge hypothesis fails: " + hyp.detail);
    if (!contains(glued, mu).ok)
        throw std::domain_error("measure is not in the wedge thickening");
    return FiniteMeasure(v.space_ptr(), mu.atoms());
}

/// H(t,µ) = t µ + (1−t) ι(ρ(µ)) on a recorded wedge space. The retraction
/// output lives on the same underlying space, so the inclusion is implicit.
inline FiniteMeasure wedge_homotopy(double t, const FiniteMeasure& mu) {
    return convex_combination(t, mu, wedge_retract(mu));
}

// ---------------------------------------------------------------------------
// Verification harness

struct HomotopyReport {
    bool retraction_identity_ok = true;
    bool endpoint_ok = true;
    bool containment_ok = true;
    double sampled_lipschitz = 0.0; // max W(outputs) / W(inputs) over sampled pairs
    std::vector<std::string> failures;

    bool pass() const { return retraction_identity_ok && endpoint_ok && containment_ok; }
};

enum class DeformationKind { Product, Wedge };

inline std::vector<double> homotopy_time_grid() {
    std::vector<double> t;
    for (int i = 0; i <= 10; ++i) t.push_back(static_cast<double>(i) / 10.0);
    return t;
}

namespace detail {

inline bool support_within(const FiniteMeasure& mu, const std::vector<std::string>& allowed) {
    for (const auto& a : mu.atoms())
        if (std::find(allowed.begin(), allowed.end(), a.point) == allowed.end()) return false;
    return true;
}

inline void observe_ratio(HomotopyReport& report, const FiniteMeasure& in1,
                          const FiniteMeasure& in2, const FiniteMeasure& out1,
                          const FiniteMeasure& out2) {
    double din = wasserstein(in1, in2).distance;
    if (din <= 1e-12) return;
    double dout = wasserstein(out1, out2).distance;
    report.sampled_lipschitz = std::max(report.sampled_lipschitz, dout / din);
}

// Lipschitz ratios are sampled on a handful of pairs only; each ratio costs
// two exact transport solves.
inline constexpr int kLipschitzPairBudget = 8;

} // namespace detail

/// Samples contained measures for the product deformation and checks
/// ρ∘ι = id, the H endpoints, membership of every H(t,·), support
/// containment in the product of the projections, and mass conservation.
/// Failures are recorded, never thrown. samples = 0 passes vacuously.
inline HomotopyReport verify_product_deformation(const Thickening& t, int samples,
                                                 std::uint64_t seed) {
    if (t.kind() != ThickeningKind::Product || !t.left_factor() || !t.right_factor())
        throw std::domain_error("product verification requires a product thickening");
    const Thickening& m = *t.left_factor();
    const Thickening& n = *t.right_factor();
    HomotopyReport report;
    Rng rng(seed);
    const std::vector<double> grid = homotopy_time_grid();

    std::optional<FiniteMeasure> prev_alpha, prev_h0, prev_h1;
    int ratio_pairs = 0;

    for (int s = 0; s < samples; ++s) {
        try {
            FiniteMeasure mu = random_contained_measure(rng, m);
            FiniteMeasure nu = random_contained_measure(rng, n);
            FiniteMeasure joint = product_inject(mu, nu, t.space_ptr());
            if (!contains(t, joint).ok) {
                report.containment_ok = false;
                report.failures.push_back("sample " + std::to_string(s) +
                                          ": injected product measure not contained");
            }
            auto [mu_back, nu_back] = product_retract(joint);
            if (!mu_back.approx_equal(mu, kHomotopyTolerance) ||
                !nu_back.approx_equal(nu, kHomotopyTolerance)) {
                report.retraction_identity_ok = false;
                report.failures.push_back("sample " + std::to_string(s) +
                                          ": rho(iota(mu,nu)) != (mu,nu)");
            }

            FiniteMeasure alpha = random_contained_measure(rng, t);
            auto [pm, pn] = marginals(alpha);
            FiniteMeasure back = product_measure(pm, pn, alpha.space_ptr());
            if (!product_homotopy(1.0, alpha).approx_equal(alpha, kHomotopyTolerance) ||
                !product_homotopy(0.0, alpha).approx_equal(back, kHomotopyTolerance)) {
                report.endpoint_ok = false;
                report.failures.push_back("sample " + std::to_string(s) +
                                          ": H endpoint mismatch");
            }
            const std::vector<std::string> allowed = support(back);
            for (double tt : grid) {
                FiniteMeasure h = product_homotopy(tt, alpha);
                if (!contains(t, h).ok || !detail::support_within(h, allowed) ||
                    std::abs(h.mass() - 1.0) > kHomotopyTolerance) {
                    report.containment_ok = false;
                    report.failures.push_back("sample " + std::to_string(s) + ": H(" +
                                              std::to_string(tt) + ",alpha) escapes");
                }
            }
            if (prev_alpha && ratio_pairs < detail::kLipschitzPairBudget) {
                detail::observe_ratio(report, alpha, *prev_alpha, product_homotopy(0.0, alpha),
                                      *prev_h0);
                detail::observe_ratio(report, alpha, *prev_alpha, product_homotopy(0.5, alpha),
                                      *prev_h1);
                ++ratio_pairs;
            }
            prev_h0 = product_homotopy(0.0, alpha);
            prev_h1 = product_homotopy(0.5, alpha);
            prev_alpha = alpha;
        } catch (const std::exception& e) {
            report.containment_ok = false;
            report.failures.push_back("sample " + std::to_string(s) + ": " + e.what());
        }
    }
    return report;
}

/// Wedge analogue: V is the ambient thickening over the wedge space, glued
/// the wedge of the factor thickenings. Checks the hypothesis once, then
/// per sample: ρ lands in the glued thickening, ρ∘ι = id on one-sided
/// measures, H endpoints, membership of every H(t,·), and the support
/// containment supp(H(t,µ)) ⊆ supp(µ) ∪ {⋆}.
inline HomotopyReport verify_wedge_deformation(const Thickening& v, const Thickening& glued,
                                               int samples, std::uint64_t seed) {
    if (glued.kind() != ThickeningKind::Wedge || !glued.left_factor() || !glued.right_factor())
        throw std::domain_error("wedge verification requires a wedge thickening with factors");
    WedgeHypothesisResult hyp =
        wedge_hypothesis_check(v, *glued.left_factor(), *glued.right_factor());
    if (!hyp.ok)
        throw std::domain_error("wedge hypothesis fails: " + hyp.detail);
    const std::string basepoint = v.space().as_wedge()->basepoint;

    HomotopyReport report;
    Rng rng(seed);
    const std::vector<double> grid = homotopy_time_grid();

    std::optional<FiniteMeasure> prev_mu, prev_rho;
    int ratio_pairs = 0;

    for (int s = 0; s < samples; ++s) {
        try {
            // retraction identity on one-sided measures
            FiniteMeasure xi = random_contained_measure(rng, glued);
            FiniteMeasure xi_in_v = FiniteMeasure(v.space_ptr(), xi.atoms());
            FiniteMeasure xi_back = wedge_retract(xi_in_v);
            if (!xi_back.approx_equal(xi_in_v, kHomotopyTolerance)) {
                report.retraction_identity_ok = false;
                report.failures.push_back("sample " + std::to_string(s) +
                                          ": rho(iota(xi)) != xi");
            }

            FiniteMeasure mu = random_contained_measure(rng, v);
            FiniteMeasure rho = wedge_retract(mu);
            if (!contains(glued, FiniteMeasure(glued.space_ptr(), rho.atoms())).ok) {
                report.containment_ok = false;
                report.failures.push_back("sample " + std::to_string(s) +
                                          ": retraction leaves the wedge thickening");
            }
            if (!wedge_homotopy(1.0, mu).approx_equal(mu, kHomotopyTolerance) ||
                !wedge_homotopy(0.0, mu).approx_equal(rho, kHomotopyTolerance)) {
                report.endpoint_ok = false;
                report.failures.push_back("sample " + std::to_string(s) +
                                          ": H endpoint mismatch");
            }
            std::vector<std::string> allowed = support(mu);
            if (std::find(allowed.begin(), allowed.end(), basepoint) == allowed.end())
                allowed.push_back(basepoint);
            for (double tt : grid) {
                FiniteMeasure h = wedge_homotopy(tt, mu);
                if (!contains(v, h).ok || !detail::support_within(h, allowed) ||
                    std::abs(h.mass() - 1.0) > kHomotopyTolerance) {
                    report.containment_ok = false;
                    report.failures.push_back("sample " + std::to_string(s) + ": H(" +
                                              std::to_string(tt) + ",mu) escapes");
                }
            }
            if (prev_mu && ratio_pairs < detail::kLipschitzPairBudget) {
                detail::observe_ratio(report, mu, *prev_mu, rho, *prev_rho);
                detail::observe_ratio(report, mu, *prev_mu, wedge_homotopy(0.5, mu),
                                      wedge_homotopy(0.5, *prev_mu));
                ++ratio_pairs;
            }
            prev_mu = mu;
            prev_rho = rho;
        } catch (const std::exception& e) {
            report.containment_ok = false;
            report.failures.push_back("sample " + std::to_string(s) + ": " + e.what());
        }
    }
    return report;
}

/// Single-argument form as used by the reporting layer: a product
/// thickening verifies its own deformation; a wedge thickening verifies the
/// (vacuous) case V = M ∨ N. The interesting wedge case, V built over the
/// glued space by some other construction, uses verify_wedge_deformation.
inline HomotopyReport verify_deformation(const Thickening& t, DeformationKind kind, int samples,
                                         std::uint64_t seed) {
    if (kind == DeformationKind::Product) return verify_product_deformation(t, samples, seed);
    return verify_wedge_deformation(t, t, samples, seed);
}

} // namespace smt
