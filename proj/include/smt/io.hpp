#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "smt/homology.hpp"
#include "smt/homotopy.hpp"
#include "smt/measure.hpp"
#include "smt/metric_space.hpp"
#include "smt/simplicial_complex.hpp"
#include "smt/thickening.hpp"
#include "smt/wasserstein.hpp"

namespace smt {

using json = nlohmann::json;

/// Parse failure with a 1-based line and column (field index).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

/// Accepts "inf" (any case) and "+inf"/"infinity" for the extended value.
inline double parse_extended(const std::string& token, std::size_t line, std::size_t column) {
    std::string t = token;
    for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "inf" || t == "+inf" || t == "infinity") return kInfinity;
    try {
        std::size_t used = 0;
        double v = std::stod(token, &used);
        if (used != token.size())
            throw ParseError(line, column, "trailing characters in number: " + token);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(line, column, "expected a number, got: " + token);
    }
}

} // namespace detail

/// Distance-matrix CSV: header row of point labels (a leading empty field
/// is tolerated), then one row per point: label followed by n entries.
/// "inf" denotes +infinity.
inline MetricSpace read_distance_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw ParseError(1, 1, "empty input");
    ++line_no;
    std::vector<std::string> header = detail::split_csv_line(line);
    if (!header.empty() && header.front().empty()) header.erase(header.begin());
    if (header.empty())
        throw ParseError(1, 1, "header row has no point labels");
    const std::size_t n = header.size();

    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        if (row >= n)
            throw ParseError(line_no, 1, "more rows than header labels");
        std::vector<std::string> fields = detail::split_csv_line(line);
        if (fields.size() != n + 1)
            throw ParseError(line_no, fields.size(),
                             "expected label plus " + std::to_string(n) + " entries, got " +
                                 std::to_string(fields.size()) + " fields");
        if (fields[0] != header[row])
            throw ParseError(line_no, 1, "row label '" + fields[0] +
                                             "' does not match header label '" + header[row] + "'");
        for (std::size_t j = 0; j < n; ++j)
            dist[row][j] = detail::parse_extended(fields[j + 1], line_no, j + 2);
        ++row;
    }
    if (row != n)
        throw ParseError(line_no + 1, 1, "expected " + std::to_string(n) + " rows, got " +
                                             std::to_string(row));
    return MetricSpace(header, std::move(dist));
}

enum class PointCloudMetric { L1, L2, Linf };

inline PointCloudMetric parse_point_cloud_metric(const std::string& name) {
    if (name == "l1") return PointCloudMetric::L1;
    if (name == "l2") return PointCloudMetric::L2;
    if (name == "linf") return PointCloudMetric::Linf;
    throw std::domain_error("unknown point-cloud metric: " + name + " (expected l1, l2, linf)");
}

/// Point-cloud CSV: one row per point, label followed by coordinates.
inline MetricSpace read_point_cloud_csv(std::istream& in, PointCloudMetric metric) {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> coords;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> fields = detail::split_csv_line(line);
        if (fields.size() < 2)
            throw ParseError(line_no, 1, "expected label plus at least one coordinate");
        labels.push_back(fields[0]);
        std::vector<double> c;
        c.reserve(fields.size() - 1);
        for (std::size_t j = 1; j < fields.size(); ++j)
            c.push_back(detail::parse_extended(fields[j], line_no, j + 1));
        if (!coords.empty() && coords.front().size() != c.size())
            throw ParseError(line_no, fields.size(), "inconsistent coordinate count");
        coords.push_back(std::move(c));
    }
    if (labels.empty())
        throw ParseError(1, 1, "empty point cloud");

    const std::size_t n = labels.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < coords[i].size(); ++k) {
                double delta = std::abs(coords[i][k] - coords[j][k]);
                switch (metric) {
                    case PointCloudMetric::L1: d += delta; break;
                    case PointCloudMetric::L2: d += delta * delta; break;
                    case PointCloudMetric::Linf: d = std::max(d, delta); break;
                }
            }
            dist[i][j] = metric == PointCloudMetric::L2 ? std::sqrt(d) : d;
        }
    return MetricSpace(std::move(labels), std::move(dist));
}

inline MetricSpace read_space_file(const std::string& path,
                                   const std::string& metric_flag = "") {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open input file: " + path);
    if (metric_flag.empty()) return read_distance_csv(in);
    return read_point_cloud_csv(in, parse_point_cloud_metric(metric_flag));
}

// ---------------------------------------------------------------------------
// JSON serializations

inline json complex_to_json(const SimplicialComplex& k) {
    json faces = json::array();
    for (const auto& f : k.maximal_face_labels()) faces.push_back(f);
    return json{{"vertices", k.vertices()}, {"maximal_faces", faces}};
}

inline SimplicialComplex complex_from_json(const json& j) {
    std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
    std::vector<std::vector<std::string>> faces =
        j.at("maximal_faces").get<std::vector<std::vector<std::string>>>();
    return SimplicialComplex(std::move(vertices), faces);
}

inline json measure_to_json(const FiniteMeasure& mu, const std::string& space_name = "") {
    json atoms = json::array();
    for (const auto& a : mu.atoms()) atoms.push_back({{"point", a.point}, {"weight", a.weight}});
    return json{{"space", space_name}, {"atoms", atoms}};
}

inline FiniteMeasure measure_from_json(const json& j, std::shared_ptr<const MetricSpace> space) {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
        atoms.push_back({a.at("point").get<std::string>(), a.at("weight").get<double>()});
    return FiniteMeasure(std::move(space), std::move(atoms));
}

inline FiniteMeasure read_measure_file(const std::string& path,
                                       std::shared_ptr<const MetricSpace> space) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open measure file: " + path);
    json j;
    in >> j;
    return measure_from_json(j, std::move(space));
}

/// Extended value for JSON output: +inf becomes the string "inf".
inline json extended_to_json(double v) {
    if (std::isinf(v)) return json("inf");
    return json(v);
}

inline json plan_to_json(const TransportPlan& plan) {
    json rows = json::array(), cols = json::array();
    for (const auto& a : plan.row_measure.atoms())
        rows.push_back({{"point", a.point}, {"weight", a.weight}});
    for (const auto& a : plan.col_measure.atoms())
        cols.push_back({{"point", a.point}, {"weight", a.weight}});
    return json{{"rows", rows}, {"cols", cols}, {"mass", plan.mass}};
}

inline json wasserstein_to_json(const WassersteinResult& result, double p) {
    json out{{"p", p}, {"distance", extended_to_json(result.distance)}};
    out["plan"] = result.plan ? plan_to_json(*result.plan) : json(nullptr);
    return out;
}

inline json betti_table_to_json(const std::vector<BettiCurveRow>& table, int dim_cap) {
    json rows = json::array();
    for (const auto& row : table)
        rows.push_back({{"r", extended_to_json(row.r)}, {"betti", row.betti.values}});
    return json{{"dim_cap", dim_cap}, {"rows", rows}};
}

inline std::string betti_table_to_csv(const std::vector<BettiCurveRow>& table, int dim_cap) {
    std::ostringstream out;
    out << "r";
    for (int d = 0; d <= dim_cap; ++d) out << ",b" << d;
    out << "\n";
    for (const auto& row : table) {
        if (std::isinf(row.r)) out << "inf";
        else out << row.r;
        for (int v : row.betti.values) out << "," << v;
        out << "\n";
    }
    return out.str();
}

inline json homotopy_report_to_json(const HomotopyReport& report) {
    return json{{"retraction_identity_ok", report.retraction_identity_ok},
                {"endpoint_ok", report.endpoint_ok},
                {"containment_ok", report.containment_ok},
                {"sampled_lipschitz", report.sampled_lipschitz},
                {"failures", report.failures},
                {"pass", report.pass()}};
}

/// FNV-1a digest of a byte string, hex-encoded; used for input digests in
/// run reports.
inline std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

inline std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fnv1a_digest(buffer.str());
}

} // namespace smt
