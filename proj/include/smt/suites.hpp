#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "smt/homology.hpp"
#include "smt/homotopy.hpp"
#include "smt/measure.hpp"
#include "smt/metric_space.hpp"
#include "smt/random.hpp"
#include "smt/simplicial_complex.hpp"
#include "smt/thickening.hpp"
#include "smt/wasserstein.hpp"

namespace smt {

/// Outcome of one verification suite: a pass flag, the number of individual
/// checks run, and witnesses for any failures.
struct SuiteResult {
    std::string name;
    bool pass = true;
    int checks = 0;
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    explicit SuiteResult(std::string suite_name) : name(std::move(suite_name)) {}

    void check(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

/// Scale grid for a space: every distinct finite pairwise distance, each
/// bracketed by ±1e-6, plus 0 and a value past the diameter.
inline std::vector<double> scale_grid(const MetricSpace& space) {
    const double eps = 1e-6;
    std::set<double> distances{0.0};
    double dmax = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i)
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            double d = space.dist(i, j);
            if (!std::isinf(d)) {
                distances.insert(d);
                dmax = std::max(dmax, d);
            }
        }
    std::set<double> grid;
    for (double d : distances) {
        if (d - eps >= 0.0) grid.insert(d - eps);
        grid.insert(d);
        grid.insert(d + eps);
    }
    grid.insert(0.0);
    grid.insert(dmax + 1.0);
    return {grid.begin(), grid.end()};
}

namespace detail {

inline SimplicialComplex build_complex(const MetricSpace& x, Construction c,
                                       const ScaleParameter& s) {
    return c == Construction::VietorisRips ? vietoris_rips_complex(x, s) : cech_complex(x, s);
}

inline std::string face_to_string(const std::vector<std::string>& face) {
    std::string out = "{";
    for (std::size_t i = 0; i < face.size(); ++i) out += (i ? "," : "") + face[i];
    return out + "}";
}

/// Median of the distinct finite pairwise distances; a scale at which the
/// complex is neither discrete nor full.
inline double median_scale(const MetricSpace& space) {
    std::set<double> distances;
    for (std::size_t i = 0; i < space.size(); ++i)
        for (std::size_t j = i + 1; j < space.size(); ++j)
            if (!std::isinf(space.dist(i, j))) distances.insert(space.dist(i, j));
    if (distances.empty()) return 0.0;
    std::vector<double> v(distances.begin(), distances.end());
    return v[v.size() / 2];
}

} // namespace detail

/// VR (or Čech) of an L∞ product equals the categorical product of the
/// factor complexes, exactly, at every scale and for both conventions.
inline SuiteResult suite_product_iso(std::uint64_t seed, Construction construction) {
    SuiteResult res{construction == Construction::VietorisRips ? "product-iso"
                                                               : "cech-product-iso"};
    Rng rng(seed);
    for (int instance = 0; instance < 10; ++instance) {
        MetricSpace x = random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(4, 6)), "a");
        MetricSpace y = random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(4, 6)), "b");
        MetricSpace p = linf_product(x, y);
        for (ScaleConvention conv : {ScaleConvention::Closed, ScaleConvention::Open})
            for (double r : scale_grid(p)) {
                ScaleParameter s(r, conv);
                SimplicialComplex direct = detail::build_complex(p, construction, s);
                SimplicialComplex split = product(detail::build_complex(x, construction, s),
                                                  detail::build_complex(y, construction, s));
                std::ostringstream what;
                what << res.name << " instance " << instance << " r=" << r << " ("
                     << to_string(conv) << "): complexes differ";
                res.check(same_complex(direct, split), what.str());
            }
    }
    return res;
}

/// Betti vectors (dim cap 3) of VR of a wedge equal those of the wedge of
/// the VR complexes, at every scale and both conventions.
inline SuiteResult suite_wedge_betti(std::uint64_t seed) {
    SuiteResult res{"wedge-betti"};
    Rng rng(seed);
    for (int instance = 0; instance < 10; ++instance) {
        PointedMetricSpace x =
            random_pointed_space(rng, static_cast<std::size_t>(rng.uniform_int(3, 5)), "a");
        PointedMetricSpace y =
            random_pointed_space(rng, static_cast<std::size_t>(rng.uniform_int(3, 5)), "b");
        PointedMetricSpace glued = wedge(x, y);
        for (ScaleConvention conv : {ScaleConvention::Closed, ScaleConvention::Open})
            for (double r : scale_grid(glued.space)) {
                if (conv == ScaleConvention::Open && r == 0.0)
                    continue; // empty factor complexes carry no basepoint to wedge at
                ScaleParameter s(r, conv);
                BettiVector direct = betti(vietoris_rips_complex(glued.space, s), 3);
                SimplicialComplex split = wedge(vietoris_rips_complex(x.space, s), x.basepoint,
                                                vietoris_rips_complex(y.space, s), y.basepoint);
                BettiVector factored = betti(split, 3);
                std::ostringstream what;
                what << "wedge-betti instance " << instance << " r=" << r << " ("
                     << to_string(conv) << "): " << direct.to_string()
                     << " != " << factored.to_string();
                res.check(direct == factored, what.str());
            }
    }
    return res;
}

/// The two-segment wedge at scale 2: the VR complex of the glued space
/// strictly contains the wedge of the VR complexes, witnessed by the face
/// of the two far endpoints, while the Betti vectors still agree.
inline SuiteResult suite_wedge_strict_containment() {
    SuiteResult res{"wedge-strict-containment"};
    MetricSpace x({"s", "x"}, {{0, 1}, {1, 0}});
    MetricSpace y({"t", "y"}, {{0, 1}, {1, 0}});
    PointedMetricSpace glued = wedge(PointedMetricSpace(x, "s"), PointedMetricSpace(y, "t"));
    ScaleParameter s(2.0, ScaleConvention::Closed);

    res.check(glued.space.dist("x", "y") == 2.0, "wedge distance d(x,y) should be 2");

    SimplicialComplex big = vietoris_rips_complex(glued.space, s);
    SimplicialComplex small = wedge(vietoris_rips_complex(x, s), "s",
                                    vietoris_rips_complex(y, s), "t");

    // containment: every maximal face of the wedge complex is a face of big
    for (const auto& face : small.maximal_face_labels())
        res.check(membership(big, face),
                  "wedge complex face " + detail::face_to_string(face) + " missing");
    // strictness witness
    std::vector<std::string> mixed{"x", "y"};
    res.check(membership(big, mixed), "mixed face {x,y} should be a face of VR of the wedge");
    res.check(!membership(small, mixed),
              "mixed face {x,y} must not be a face of the wedge of the VR complexes");
    res.check(betti(big, 3) == betti(small, 3), "Betti vectors must agree at r=2");
    if (res.pass)
        res.notes.push_back("strict containment witnessed by mixed face {x,y} at r=2");
    return res;
}

/// VR and Čech of a coproduct equal the coproduct of the complexes for
/// every finite scale.
inline SuiteResult suite_coproduct(std::uint64_t seed) {
    SuiteResult res{"coproduct"};
    Rng rng(seed);
    for (int instance = 0; instance < 5; ++instance) {
        MetricSpace x = random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(3, 5)), "a");
        MetricSpace y = random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(3, 5)), "b");
        MetricSpace both = coproduct(x, y);
        for (Construction c : {Construction::VietorisRips, Construction::Cech})
            for (ScaleConvention conv : {ScaleConvention::Closed, ScaleConvention::Open})
                for (double r : scale_grid(both)) {
                    ScaleParameter s(r, conv);
                    SimplicialComplex direct = detail::build_complex(both, c, s);
                    SimplicialComplex split = coproduct(detail::build_complex(x, c, s),
                                                        detail::build_complex(y, c, s));
                    std::ostringstream what;
                    what << "coproduct instance " << instance << " " << to_string(c)
                         << " r=" << r << " (" << to_string(conv) << "): complexes differ";
                    res.check(same_complex(direct, split), what.str());
                }
    }
    return res;
}

/// Metric axioms of the Wasserstein distance on random measures, for
/// p in {1,2}: identity, symmetry, triangle inequality, coupling validity,
/// the complementary-slackness certificate, and agreement with the
/// brute-force oracle on small supports.
inline SuiteResult suite_metric_axioms(std::uint64_t seed) {
    SuiteResult res{"metric-axioms"};
    Rng rng(seed);
    for (int instance = 0; instance < 200; ++instance) {
        auto space = std::make_shared<MetricSpace>(random_classical_space(rng, 5, "p"));
        FiniteMeasure mu = random_measure(rng, space);
        FiniteMeasure nu = random_measure(rng, space);
        FiniteMeasure xi = random_measure(rng, space);
        for (double p : {1.0, 2.0}) {
            WassersteinConfig cfg{p, 1e-9};
            WassersteinResult mn = wasserstein(mu, nu, cfg);
            WassersteinResult nm = wasserstein(nu, mu, cfg);
            WassersteinResult mx = wasserstein(mu, xi, cfg);
            WassersteinResult nx = wasserstein(nu, xi, cfg);
            std::ostringstream tag;
            tag << "instance " << instance << " p=" << p;

            res.check(wasserstein(mu, mu, cfg).distance == 0.0, tag.str() + ": d(mu,mu) != 0");
            res.check(std::abs(mn.distance - nm.distance) <= 1e-9,
                      tag.str() + ": symmetry violated");
            res.check(mx.distance <= mn.distance + nx.distance + 1e-9,
                      tag.str() + ": triangle inequality violated");
            res.check(mn.plan && is_coupling(*mn.plan, 1e-9).ok,
                      tag.str() + ": optimal plan is not a coupling");

            // complementary slackness of the returned potentials
            if (mn.plan) {
                bool slack_ok = true;
                const auto& plan = *mn.plan;
                for (std::size_t i = 0; i < plan.mass.size() && slack_ok; ++i)
                    for (std::size_t j = 0; j < plan.mass[i].size() && slack_ok; ++j) {
                        double d = space->dist(plan.row_measure.atoms()[i].point,
                                               plan.col_measure.atoms()[j].point);
                        double c = p == 1.0 ? d : d * d;
                        double reduced = c - mn.row_potentials[i] - mn.col_potentials[j];
                        if (reduced < -1e-9) slack_ok = false;
                        if (plan.mass[i][j] > 1e-9 && std::abs(reduced) > 1e-9) slack_ok = false;
                    }
                res.check(slack_ok, tag.str() + ": certificate violated");
            }

            if (mu.support_size() <= 3 && nu.support_size() <= 3) {
                double oracle = wasserstein_bruteforce(mu, nu, cfg);
                res.check(std::abs(mn.distance - oracle) <= 1e-6,
                          tag.str() + ": disagrees with brute-force oracle");
            }
        }
    }
    return res;
}

/// The delta embedding is isometric: W(δ_x, δ_y) = d(x, y) exactly.
inline SuiteResult suite_delta_isometry(std::uint64_t seed) {
    SuiteResult res{"delta-isometry"};
    Rng rng(seed);
    for (int instance = 0; instance < 5; ++instance) {
        auto space = std::make_shared<MetricSpace>(
            random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(4, 6)), "p"));
        for (std::size_t i = 0; i < space->size(); ++i)
            for (std::size_t j = 0; j < space->size(); ++j)
                for (double p : {1.0, 2.0}) {
                    double got =
                        wasserstein(delta(space, space->label(i)), delta(space, space->label(j)),
                                    WassersteinConfig{p, 1e-9})
                            .distance;
                    std::ostringstream what;
                    what << "instance " << instance << " pair (" << space->label(i) << ","
                         << space->label(j) << ") p=" << p << ": W=" << got
                         << " != d=" << space->dist(i, j);
                    res.check(got == space->dist(i, j), what.str());
                }
    }
    return res;
}

/// Product deformation harness over seeded VR product thickenings.
inline SuiteResult suite_homotopy_product(std::uint64_t seed, int samples = 100) {
    SuiteResult res{"homotopy-product"};
    Rng rng(seed);
    for (int instance = 0; instance < 5; ++instance) {
        auto x = std::make_shared<MetricSpace>(
            random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(4, 5)), "a"));
        auto y = std::make_shared<MetricSpace>(
            random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(4, 5)), "b"));
        double r = std::max(detail::median_scale(*x), detail::median_scale(*y));
        ScaleParameter s(r, ScaleConvention::Closed);
        Thickening joint = thickening_product(vietoris_rips(x, s), vietoris_rips(y, s));
        HomotopyReport report = verify_product_deformation(joint, samples, seed + instance);
        std::ostringstream tag;
        tag << "instance " << instance << " r=" << r;
        res.check(report.retraction_identity_ok, tag.str() + ": rho∘iota != id");
        res.check(report.endpoint_ok, tag.str() + ": H endpoints wrong");
        res.check(report.containment_ok, tag.str() + ": homotopy escapes the thickening");
        for (const auto& f : report.failures) res.notes.push_back(tag.str() + ": " + f);
    }
    return res;
}

/// Wedge deformation harness: the two-segment wedge of the strict
/// containment scenario plus seeded random pointed spaces.
inline SuiteResult suite_homotopy_wedge(std::uint64_t seed, int samples = 100) {
    SuiteResult res{"homotopy-wedge"};
    Rng rng(seed);
    for (int instance = 0; instance < 5; ++instance) {
        std::shared_ptr<MetricSpace> x, y;
        std::string xbase, ybase;
        double r = 0.0;
        if (instance == 0) {
            x = std::make_shared<MetricSpace>(
                MetricSpace({"s", "x"}, {{0.0, 1.0}, {1.0, 0.0}}));
            y = std::make_shared<MetricSpace>(
                MetricSpace({"t", "y"}, {{0.0, 1.0}, {1.0, 0.0}}));
            xbase = "s";
            ybase = "t";
            r = 2.0;
        } else {
            PointedMetricSpace px =
                random_pointed_space(rng, static_cast<std::size_t>(rng.uniform_int(3, 4)), "a");
            PointedMetricSpace py =
                random_pointed_space(rng, static_cast<std::size_t>(rng.uniform_int(3, 4)), "b");
            x = std::make_shared<MetricSpace>(px.space);
            y = std::make_shared<MetricSpace>(py.space);
            xbase = px.basepoint;
            ybase = py.basepoint;
            PointedMetricSpace glued_space = wedge(px, py);
            r = detail::median_scale(glued_space.space);
        }
        PointedMetricSpace glued_space =
            wedge(PointedMetricSpace(*x, xbase), PointedMetricSpace(*y, ybase));
        ScaleParameter s(r, ScaleConvention::Closed);
        Thickening m = vietoris_rips(x, s);
        Thickening n = vietoris_rips(y, s);
        Thickening glued = thickening_wedge(m, xbase, n, ybase);
        Thickening v =
            vietoris_rips(std::make_shared<MetricSpace>(glued_space.space), s);
        HomotopyReport report = verify_wedge_deformation(v, glued, samples, seed + instance);
        std::ostringstream tag;
        tag << "instance " << instance << " r=" << r;
        res.check(report.retraction_identity_ok, tag.str() + ": rho∘iota != id");
        res.check(report.endpoint_ok, tag.str() + ": H endpoints wrong");
        res.check(report.containment_ok, tag.str() + ": homotopy escapes the thickening");
        for (const auto& f : report.failures) res.notes.push_back(tag.str() + ": " + f);
    }
    return res;
}

/// Boundary-of-boundary vanishes on seeded VR complexes; the hexagon Betti
/// plateau; contractibility of the full simplex.
inline SuiteResult suite_homology_sanity(std::uint64_t seed) {
    SuiteResult res{"homology-sanity"};
    Rng rng(seed);

    for (int instance = 0; instance < 5; ++instance) {
        MetricSpace x = random_classical_space(rng, 6, "p");
        double r = detail::median_scale(x);
        SimplicialComplex k = vietoris_rips_complex(x, ScaleParameter(r));
        for (int d = 1; d + 1 <= std::min(k.dimension(), 4); ++d) {
            Gf2Matrix low = boundary_matrix(k, d);
            Gf2Matrix high = boundary_matrix(k, d + 1);
            std::ostringstream what;
            what << "instance " << instance << ": boundary∘boundary != 0 at dim " << d + 1;
            res.check(low.multiply(high).is_zero(), what.str());
        }
    }

    // regular hexagon, chordal metric: side 1, diagonals √3 and 2
    const double side = 1.0, diag = std::sqrt(3.0);
    std::vector<std::string> labels{"h0", "h1", "h2", "h3", "h4", "h5"};
    std::vector<std::vector<double>> dist(6, std::vector<double>(6, 0.0));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            int steps = std::min(std::abs(i - j), 6 - std::abs(i - j));
            dist[i][j] = steps == 0 ? 0.0 : (steps == 1 ? side : (steps == 2 ? diag : 2.0));
        }
    MetricSpace hexagon(labels, dist);
    BettiVector circle{{1, 1, 0, 0}};
    for (double r : {side, 0.5 * (side + diag), diag - 1e-9}) {
        BettiVector got = betti(vietoris_rips_complex(hexagon, ScaleParameter(r)), 3);
        std::ostringstream what;
        what << "hexagon r=" << r << ": betti " << got.to_string() << " != (1,1,0,0)";
        res.check(got == circle, what.str());
    }
    res.check(betti(vietoris_rips_complex(hexagon, ScaleParameter(0.5)), 3) ==
                  BettiVector{{6, 0, 0, 0}},
              "hexagon below the side length should be discrete");

    res.check(betti(vietoris_rips_complex(hexagon, ScaleParameter(kInfinity)), 3) ==
                  BettiVector{{1, 0, 0, 0}},
              "full simplex must be contractible");
    return res;
}

} // namespace smt
