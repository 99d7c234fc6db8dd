#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "smt/io.hpp"

using namespace smt;

TEST_CASE("distance matrix CSV round trip", "[io]") {
    std::istringstream in("a,b,c\na,0,1,inf\nb,1,0,2\nc,inf,2,0\n");
    MetricSpace s = read_distance_csv(in);
    REQUIRE(s.size() == 3);
    CHECK(s.dist("a", "b") == 1.0);
    CHECK(std::isinf(s.dist("a", "c")));
    CHECK(s.flavor() == Flavor::Extended);
}

TEST_CASE("distance matrix CSV tolerates a leading empty header cell", "[io]") {
    std::istringstream in(",a,b\na,0,1\nb,1,0\n");
    MetricSpace s = read_distance_csv(in);
    CHECK(s.size() == 2);
    CHECK(s.dist("a", "b") == 1.0);
}

TEST_CASE("distance matrix CSV errors carry line and column", "[io]") {
    std::istringstream bad_entry("a,b\na,0,zebra\nb,1,0\n");
    try {
        read_distance_csv(bad_entry);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }

    std::istringstream short_row("a,b\na,0\n");
    CHECK_THROWS_AS(read_distance_csv(short_row), ParseError);

    std::istringstream wrong_label("a,b\nz,0,1\nb,1,0\n");
    CHECK_THROWS_AS(read_distance_csv(wrong_label), ParseError);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_distance_csv(empty), ParseError);
}

TEST_CASE("point cloud CSV under the three metrics", "[io]") {
    const std::string cloud = "p,0,0\nq,3,4\n";
    {
        std::istringstream in(cloud);
        MetricSpace s = read_point_cloud_csv(in, PointCloudMetric::L1);
        CHECK(s.dist("p", "q") == 7.0);
    }
    {
        std::istringstream in(cloud);
        MetricSpace s = read_point_cloud_csv(in, PointCloudMetric::L2);
        CHECK(s.dist("p", "q") == 5.0);
    }
    {
        std::istringstream in(cloud);
        MetricSpace s = read_point_cloud_csv(in, PointCloudMetric::Linf);
        CHECK(s.dist("p", "q") == 4.0);
    }
    CHECK_THROWS_AS(parse_point_cloud_metric("l3"), std::domain_error);

    std::istringstream ragged("p,0,0\nq,1\n");
    CHECK_THROWS_AS(read_point_cloud_csv(ragged, PointCloudMetric::L2), ParseError);
}

TEST_CASE("complex JSON round trip", "[io]") {
    SimplicialComplex k({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}});
    json j = complex_to_json(k);
    CHECK(j.at("vertices").size() == 3);
    CHECK(j.at("maximal_faces").size() == 2);
    SimplicialComplex back = complex_from_json(j);
    CHECK(same_complex(k, back));
}

TEST_CASE("measure JSON round trip", "[io]") {
    auto space = std::make_shared<MetricSpace>(
        MetricSpace({"a", "b"}, {{0, 1}, {1, 0}}));
    FiniteMeasure mu(space, {{"a", 0.25}, {"b", 0.75}});
    json j = measure_to_json(mu, "two-points");
    CHECK(j.at("space") == "two-points");
    FiniteMeasure back = measure_from_json(j, space);
    CHECK(back.approx_equal(mu));

    json bad = {{"atoms", json::array({{{"point", "zz"}, {"weight", 1.0}}})}};
    CHECK_THROWS_AS(measure_from_json(bad, space), std::domain_error);
}

TEST_CASE("wasserstein JSON uses the string inf for infinite distances", "[io]") {
    WassersteinResult finite;
    finite.distance = 1.5;
    json j = wasserstein_to_json(finite, 1.0);
    CHECK(j.at("distance") == 1.5);
    CHECK(j.at("plan").is_null());

    WassersteinResult infinite;
    infinite.distance = kInfinity;
    CHECK(wasserstein_to_json(infinite, 1.0).at("distance") == "inf");
}

TEST_CASE("betti table serializations", "[io]") {
    std::vector<BettiCurveRow> table{{0.5, BettiVector{{6, 0, 0, 0}}},
                                     {1.0, BettiVector{{1, 1, 0, 0}}}};
    json j = betti_table_to_json(table, 3);
    CHECK(j.at("rows").size() == 2);
    CHECK(j.at("rows")[1].at("betti")[1] == 1);

    std::string csv = betti_table_to_csv(table, 3);
    CHECK(csv.find("r,b0,b1,b2,b3") == 0);
    CHECK(csv.find("1,1,1,0,0") != std::string::npos);
}

TEST_CASE("digest is stable", "[io]") {
    CHECK(fnv1a_digest("abc") == fnv1a_digest("abc"));
    CHECK(fnv1a_digest("abc") != fnv1a_digest("abd"));
}
