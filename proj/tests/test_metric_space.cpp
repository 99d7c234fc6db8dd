#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "smt/metric_space.hpp"
#include "smt/random.hpp"

using namespace smt;

namespace {

MetricSpace three_point_triangle_violator() {
    // d(a,b) = d(a,c) = 1 but d(b,c) = 3 > 1 + 1
    return MetricSpace({"a", "b", "c"}, {{0, 1, 1}, {1, 0, 3}, {1, 3, 0}});
}

MetricSpace three_point_path() {
    // d(a,b) = d(a,c) = 1, d(b,c) = 2
    return MetricSpace({"a", "b", "c"}, {{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
}

// independent oracle: exhaustive triple scan for the triangle inequality
bool any_triangle_violation(const MetricSpace& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            for (std::size_t k = 0; k < s.size(); ++k)
                if (s.dist(i, k) > s.dist(i, j) + s.dist(j, k) + 1e-9) return true;
    return false;
}

} // namespace

TEST_CASE("validate: identity case", "[metric_space]") {
    MetricSpace one({"a"}, {{0.0}});
    CHECK(validate(one).empty());
    CHECK(one.flavor() == Flavor::Classical);
}

TEST_CASE("validate: triangle violation is reported with witnesses", "[metric_space]") {
    MetricSpace bad = three_point_triangle_violator();
    REQUIRE(any_triangle_violation(bad)); // oracle agrees there is one
    auto diagnostics = validate(bad);
    REQUIRE_FALSE(diagnostics.empty());
    bool found = false;
    for (const auto& d : diagnostics) {
        if (d.axiom != MetricAxiom::Triangle) continue;
        // d(b,c) = 3 > d(b,a) + d(a,c) = 2
        if (bad.label(d.i) == "b" && bad.label(d.j) == "a" && bad.label(d.k) == "c") found = true;
    }
    CHECK(found);
}

TEST_CASE("validate: infinite distances give the extended flavor", "[metric_space]") {
    MetricSpace two({"a", "b"}, {{0, kInfinity}, {kInfinity, 0}});
    CHECK(validate(two).empty());
    CHECK(two.flavor() == Flavor::Extended);
}

TEST_CASE("validate: flavor classification", "[metric_space]") {
    MetricSpace pseudo({"a", "b"}, {{0, 0}, {0, 0}});
    CHECK(pseudo.flavor() == Flavor::Pseudo);
    MetricSpace both({"a", "b", "c"},
                     {{0, 0, kInfinity}, {0, 0, kInfinity}, {kInfinity, kInfinity, 0}});
    CHECK(both.flavor() == Flavor::ExtendedPseudo);
    CHECK(validate(both).empty());
}

TEST_CASE("constructor rejects shape mismatch and duplicate labels", "[metric_space]") {
    CHECK_THROWS_AS(MetricSpace({"a", "b"}, {{0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(MetricSpace({"a", "b"}, {{0, 1}, {1, 0}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(MetricSpace({"a", "a"}, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("linf product: unit and max rule", "[metric_space]") {
    MetricSpace x({"0", "1"}, {{0, 1}, {1, 0}});
    MetricSpace y({"0", "1"}, {{0, 2}, {2, 0}});
    MetricSpace p = linf_product(x, y);
    REQUIRE(p.size() == 4);
    CHECK(p.dist("(0,0)", "(1,1)") == 2.0);
    CHECK(p.dist("(0,0)", "(1,0)") == 1.0);
    CHECK(p.dist("(0,0)", "(0,1)") == 2.0);
    CHECK(validate(p).empty());

    MetricSpace point({"u"}, {{0.0}});
    MetricSpace q = linf_product(point, y);
    REQUIRE(q.size() == y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            CHECK(q.dist(i, j) == y.dist(i, j)); // isometric under the pairing bijection
}

TEST_CASE("wedge: sum through the basepoint", "[metric_space]") {
    MetricSpace x({"s", "x"}, {{0, 1}, {1, 0}});
    MetricSpace y({"t", "y"}, {{0, 1}, {1, 0}});
    PointedMetricSpace w = wedge(PointedMetricSpace(x, "s"), PointedMetricSpace(y, "t"));
    REQUIRE(w.space.size() == 3);
    CHECK(w.basepoint == kWedgeBasepoint);
    CHECK(w.space.dist("x", "y") == 2.0);
    CHECK(w.space.dist(kWedgeBasepoint, "x") == 1.0);
    CHECK(validate(w.space).empty());

    // wedge with a single point is isometric to the other factor
    MetricSpace point({"p"}, {{0.0}});
    PointedMetricSpace w2 = wedge(PointedMetricSpace(point, "p"), PointedMetricSpace(y, "t"));
    REQUIRE(w2.space.size() == y.size());
    CHECK(w2.space.dist(kWedgeBasepoint, "y") == 1.0);
}

TEST_CASE("wedge: colliding labels are renamed, provenance keeps originals", "[metric_space]") {
    MetricSpace x({"base", "v"}, {{0, 1}, {1, 0}});
    MetricSpace y({"base", "v"}, {{0, 2}, {2, 0}});
    PointedMetricSpace w = wedge(PointedMetricSpace(x, "base"), PointedMetricSpace(y, "base"));
    REQUIRE(w.space.size() == 3);
    const auto* prov = w.space.as_wedge();
    REQUIRE(prov != nullptr);
    CHECK(prov->left_map.at("v") == "v");
    CHECK(prov->right_map.at("v") == "v'");
    CHECK(w.space.dist("v", "v'") == 3.0);
}

TEST_CASE("coproduct: disjoint union at infinite distance", "[metric_space]") {
    MetricSpace x({"a"}, {{0.0}});
    MetricSpace y({"b"}, {{0.0}});
    MetricSpace c = coproduct(x, y);
    REQUIRE(c.size() == 2);
    CHECK(std::isinf(c.dist("a", "b")));
    CHECK(c.flavor() == Flavor::Extended);
    CHECK(validate(c).empty());

    MetricSpace empty;
    MetricSpace alone = coproduct(three_point_path(), empty);
    CHECK(alone.size() == 3);
    CHECK(alone.dist("b", "c") == 2.0);
}

TEST_CASE("discrete metric spaces", "[metric_space]") {
    MetricSpace zero = discrete({"a", "b"}, 0.0);
    CHECK(zero.dist("a", "b") == 0.0);
    CHECK(zero.flavor() == Flavor::Pseudo);

    MetricSpace inf = discrete({"a", "b"}, kInfinity);
    CHECK(std::isinf(inf.dist("a", "b")));
    CHECK(inf.flavor() == Flavor::Extended);

    CHECK(discrete({"a"}, 5.0).size() == 1);
    CHECK_THROWS_AS(discrete({"a", "b"}, -1.0), std::domain_error);
}

TEST_CASE("diameter", "[metric_space]") {
    MetricSpace s = three_point_triangle_violator();
    CHECK(diameter(s, {"a"}) == 0.0);
    CHECK(diameter(s, {"b", "c"}) == 3.0);
    CHECK(diameter(s, {"a", "b", "c"}) == 3.0);
    CHECK_THROWS_AS(diameter(s, {}), std::domain_error);
    CHECK_THROWS_AS(diameter(s, {"z"}), std::domain_error);

    MetricSpace c = coproduct(MetricSpace({"a"}, {{0.0}}), MetricSpace({"b"}, {{0.0}}));
    CHECK(std::isinf(diameter(c, {"a", "b"})));
}

TEST_CASE("diameter is monotone under inclusion", "[metric_space][property]") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        MetricSpace s = random_classical_space(rng, 6);
        std::vector<std::string> small, big;
        for (const auto& p : s.labels()) {
            if (rng.coin()) big.push_back(p);
            if (!big.empty() && rng.coin()) small.push_back(big.back());
        }
        if (small.empty() || big.empty()) continue;
        CHECK(diameter(s, small) <= diameter(s, big));
    }
}

TEST_CASE("is_short", "[metric_space]") {
    MetricSpace s = three_point_path();
    PointMap identity{{"a", "a"}, {"b", "b"}, {"c", "c"}};
    CHECK(is_short(identity, s, s).ok);

    PointMap constant{{"a", "a"}, {"b", "a"}, {"c", "a"}};
    CHECK(is_short(constant, s, s).ok);

    MetricSpace d2 = discrete({"u", "v"}, 2.0);
    MetricSpace d1 = discrete({"u", "v"}, 1.0);
    PointMap swap_free{{"u", "u"}, {"v", "v"}};
    CHECK(is_short(swap_free, d2, d1).ok);
    auto reverse = is_short(swap_free, d1, d2);
    CHECK_FALSE(reverse.ok);
    REQUIRE(reverse.violating_pair.has_value());
    CHECK(reverse.violating_pair->first == "u");
    CHECK(reverse.violating_pair->second == "v");

    PointMap partial{{"a", "a"}};
    CHECK_THROWS_AS(is_short(partial, s, s), std::domain_error);
    PointMap outside{{"a", "zz"}, {"b", "b"}, {"c", "c"}};
    CHECK_THROWS_AS(is_short(outside, s, s), std::domain_error);
}

TEST_CASE("any finite distance is within an infinite budget", "[metric_space]") {
    MetricSpace ext = coproduct(MetricSpace({"a"}, {{0.0}}), MetricSpace({"b"}, {{0.0}}));
    MetricSpace target({"u", "v"}, {{0, 100}, {100, 0}});
    PointMap f{{"a", "u"}, {"b", "v"}};
    CHECK(is_short(f, ext, target).ok);
}

TEST_CASE("constructions produce valid spaces", "[metric_space][property]") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        MetricSpace x = random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(2, 5)), "a");
        MetricSpace y = random_classical_space(rng, static_cast<std::size_t>(rng.uniform_int(2, 5)), "b");
        MetricSpace p = linf_product(x, y);
        CHECK(validate(p).empty());
        CHECK(validate(coproduct(x, y)).empty());
        PointedMetricSpace w =
            wedge(PointedMetricSpace(x, x.label(0)), PointedMetricSpace(y, y.label(0)));
        CHECK(validate(w.space).empty());

        // projections of the product are short
        PointMap to_x, to_y;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) {
                to_x.emplace(pair_label(x.label(i), y.label(j)), x.label(i));
                to_y.emplace(pair_label(x.label(i), y.label(j)), y.label(j));
            }
        CHECK(is_short(to_x, p, x).ok);
        CHECK(is_short(to_y, p, y).ok);

        // wedge inclusions preserve distances on their side
        const auto* prov = w.space.as_wedge();
        REQUIRE(prov != nullptr);
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < x.size(); ++j)
                CHECK(w.space.dist(prov->left_map.at(x.label(i)), prov->left_map.at(x.label(j))) ==
                      x.dist(i, j));
        for (std::size_t i = 0; i < y.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j)
                CHECK(w.space.dist(prov->right_map.at(y.label(i)),
                                   prov->right_map.at(y.label(j))) == y.dist(i, j));

        // cross distances dominate both legs to the basepoint
        for (std::size_t i = 1; i < x.size(); ++i)
            for (std::size_t j = 1; j < y.size(); ++j) {
                std::string xl = prov->left_map.at(x.label(i));
                std::string yl = prov->right_map.at(y.label(j));
                double cross = w.space.dist(xl, yl);
                CHECK(cross >= std::max(w.space.dist(xl, kWedgeBasepoint),
                                        w.space.dist(yl, kWedgeBasepoint)));
            }
    }
}
