#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "smt/measure.hpp"
#include "smt/metric_space.hpp"
#include "smt/random.hpp"

using namespace smt;

namespace {

std::shared_ptr<const MetricSpace> path3() {
    return std::make_shared<MetricSpace>(
        MetricSpace({"a", "b", "c"}, {{0, 1, 1}, {1, 0, 2}, {1, 2, 0}}));
}

} // namespace

TEST_CASE("delta measures", "[measure]") {
    auto space = path3();
    FiniteMeasure da = delta(space, "a");
    CHECK(support(da) == std::vector<std::string>{"a"});
    CHECK(da.mass() == 1.0);
    FiniteMeasure db = delta(space, "b");
    CHECK_FALSE(da.approx_equal(db));
    CHECK_THROWS_AS(delta(space, "zz"), std::domain_error);
}

TEST_CASE("constructor enforces the invariants", "[measure]") {
    auto space = path3();
    CHECK_THROWS_AS(FiniteMeasure(space, {{"a", 0.5}}), std::domain_error);
    CHECK_THROWS_AS(FiniteMeasure(space, {{"a", -0.25}, {"b", 1.25}}), std::domain_error);
    CHECK_THROWS_AS(FiniteMeasure(space, {}), std::domain_error);

    // duplicate atoms merge
    FiniteMeasure merged(space, {{"a", 0.25}, {"a", 0.25}, {"b", 0.5}});
    CHECK(merged.support_size() == 2);
    CHECK(merged.weight_of("a") == 0.5);

    // zero-weight atoms drop silently (positivity invariant)
    FiniteMeasure dropped(space, {{"a", 1.0}, {"b", 0.0}});
    CHECK(support(dropped) == std::vector<std::string>{"a"});

    // atoms below the drop threshold renormalize away and count an event
    auto before = dropped_atom_events().load();
    FiniteMeasure tiny(space, {{"a", 1.0 - 1e-16}, {"b", 1e-16}});
    CHECK(dropped_atom_events().load() == before + 1);
    CHECK(tiny.support_size() == 1);
    CHECK(tiny.mass() == 1.0);
}

TEST_CASE("finite-moment rule rejects supports spanning infinity", "[measure]") {
    auto both = std::make_shared<MetricSpace>(
        coproduct(MetricSpace({"a"}, {{0.0}}), MetricSpace({"b"}, {{0.0}})));
    CHECK_THROWS_AS(FiniteMeasure(both, {{"a", 0.5}, {"b", 0.5}}), std::domain_error);
    CHECK_NOTHROW(FiniteMeasure(both, {{"a", 1.0}}));
}

TEST_CASE("absolute continuity is support inclusion", "[measure]") {
    auto space = path3();
    FiniteMeasure mu(space, {{"a", 0.5}, {"b", 0.5}});
    FiniteMeasure da = delta(space, "a");
    CHECK(is_absolutely_continuous(mu, mu));
    CHECK(is_absolutely_continuous(da, mu));
    CHECK_FALSE(is_absolutely_continuous(mu, da));

    FiniteMeasure ac(space, {{"a", 0.5}, {"c", 0.5}});
    CHECK_FALSE(is_absolutely_continuous(ac, mu));

    auto other = std::make_shared<MetricSpace>(MetricSpace({"z"}, {{0.0}}));
    CHECK_THROWS_AS(is_absolutely_continuous(delta(other, "z"), mu), std::domain_error);
}

TEST_CASE("absolute continuity is reflexive and transitive", "[measure][property]") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto space = std::make_shared<MetricSpace>(random_classical_space(rng, 5));
        FiniteMeasure a = random_measure(rng, space);
        CHECK(is_absolutely_continuous(a, a));
        // shrink the support twice; inclusions must compose
        std::vector<Atom> sub(a.atoms().begin(),
                              a.atoms().begin() + 1 + (a.support_size() > 1 ? 1 : 0));
        double mass = 0.0;
        for (auto& at : sub) mass += at.weight;
        for (auto& at : sub) at.weight /= mass;
        FiniteMeasure b(space, sub);
        FiniteMeasure c(space, {{sub.front().point, 1.0}});
        CHECK(is_absolutely_continuous(b, a));
        CHECK(is_absolutely_continuous(c, b));
        CHECK(is_absolutely_continuous(c, a));
    }
}

TEST_CASE("pushforward", "[measure]") {
    auto space = path3();
    FiniteMeasure mu(space, {{"a", 0.5}, {"b", 0.5}});
    PointMap identity{{"a", "a"}, {"b", "b"}, {"c", "c"}};
    CHECK(pushforward(identity, mu).approx_equal(mu));

    PointMap to_c{{"a", "c"}, {"b", "c"}, {"c", "c"}};
    FiniteMeasure collapsed = pushforward(to_c, mu);
    CHECK(collapsed.approx_equal(delta(space, "c"))); // fibers merge

    PointMap partial{{"a", "c"}};
    CHECK_THROWS_AS(pushforward(partial, mu), std::domain_error);
}

TEST_CASE("pushforward is functorial", "[measure][property]") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        auto space = std::make_shared<MetricSpace>(random_classical_space(rng, 5));
        FiniteMeasure mu = random_measure(rng, space);
        PointMap f, g;
        for (const auto& p : space->labels()) {
            f.emplace(p, space->label(static_cast<std::size_t>(rng.uniform_int(0, 4))));
            g.emplace(p, space->label(static_cast<std::size_t>(rng.uniform_int(0, 4))));
        }
        PointMap gf;
        for (const auto& p : space->labels()) gf.emplace(p, g.at(f.at(p)));
        CHECK(pushforward(gf, mu).approx_equal(pushforward(g, pushforward(f, mu))));
    }
}

TEST_CASE("product measure", "[measure]") {
    auto x = path3();
    auto y = std::make_shared<MetricSpace>(MetricSpace({"u", "v"}, {{0, 3}, {3, 0}}));
    FiniteMeasure mu(x, {{"a", 0.5}, {"b", 0.5}});
    FiniteMeasure dv = delta(y, "v");
    FiniteMeasure joint = product_measure(mu, dv);
    CHECK(joint.support_size() == 2);
    CHECK(joint.weight_of("(a,v)") == 0.5);
    CHECK(joint.weight_of("(b,v)") == 0.5);
    CHECK(std::abs(joint.mass() - 1.0) <= 1e-12);

    FiniteMeasure nu(y, {{"u", 0.25}, {"v", 0.75}});
    FiniteMeasure full = product_measure(mu, nu);
    CHECK(full.support_size() == mu.support_size() * nu.support_size());
    CHECK(full.weight_of("(b,u)") == 0.5 * 0.25);
}

TEST_CASE("marginals invert the product measure", "[measure]") {
    auto x = path3();
    auto y = std::make_shared<MetricSpace>(MetricSpace({"u", "v"}, {{0, 3}, {3, 0}}));
    FiniteMeasure mu(x, {{"a", 0.5}, {"c", 0.5}});
    FiniteMeasure nu(y, {{"u", 0.25}, {"v", 0.75}});
    auto [mu2, nu2] = marginals(product_measure(mu, nu));
    CHECK(mu2.approx_equal(mu));
    CHECK(nu2.approx_equal(nu));

    // diagonal measure: marginals are the two uniform measures
    auto p = std::make_shared<MetricSpace>(linf_product(*x, *y));
    FiniteMeasure diag(p, {{"(a,u)", 0.5}, {"(c,v)", 0.5}});
    auto [dm, dn] = marginals(diag);
    CHECK(dm.approx_equal(FiniteMeasure(x, {{"a", 0.5}, {"c", 0.5}})));
    CHECK(dn.approx_equal(FiniteMeasure(y, {{"u", 0.5}, {"v", 0.5}})));

    auto [em, en] = marginals(product_measure(delta(x, "a"), delta(y, "v")));
    CHECK(em.approx_equal(delta(x, "a")));
    CHECK(en.approx_equal(delta(y, "v")));

    CHECK_THROWS_AS(marginals(mu), std::domain_error); // ambient is not a product
}

TEST_CASE("convex combination", "[measure]") {
    auto space = path3();
    FiniteMeasure da = delta(space, "a");
    FiniteMeasure db = delta(space, "b");
    CHECK(convex_combination(1.0, da, db).approx_equal(da));
    CHECK(convex_combination(0.0, da, db).approx_equal(db));

    FiniteMeasure half = convex_combination(0.5, da, db);
    CHECK(half.weight_of("a") == 0.5);
    CHECK(half.weight_of("b") == 0.5);

    CHECK_THROWS_AS(convex_combination(1.5, da, db), std::domain_error);
    CHECK_THROWS_AS(convex_combination(-0.5, da, db), std::domain_error);

    auto other = std::make_shared<MetricSpace>(MetricSpace({"z"}, {{0.0}}));
    CHECK_THROWS_AS(convex_combination(0.5, da, delta(other, "z")), std::domain_error);
}

TEST_CASE("convex combination support", "[measure][property]") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto space = std::make_shared<MetricSpace>(random_classical_space(rng, 5));
        FiniteMeasure mu = random_measure(rng, space);
        FiniteMeasure nu = random_measure(rng, space);
        FiniteMeasure mid = convex_combination(0.5, mu, nu);
        // support is exactly the union for interior t
        for (const auto& a : mu.atoms()) CHECK(mid.weight_of(a.point) > 0.0);
        for (const auto& a : nu.atoms()) CHECK(mid.weight_of(a.point) > 0.0);
        for (const auto& a : mid.atoms())
            CHECK((mu.weight_of(a.point) > 0.0 || nu.weight_of(a.point) > 0.0));
        CHECK(std::abs(mid.mass() - 1.0) <= 1e-12);
    }
}
