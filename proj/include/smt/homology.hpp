#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "smt/metric_space.hpp"
#include "smt/simplicial_complex.hpp"
#include "smt/thickening.hpp"

namespace smt {

/// Dense bit-packed matrix over the two-element field.
class Gf2Matrix {
public:
    Gf2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64),
          data_(rows, std::vector<std::uint64_t>(words_, 0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r][c / 64] >> (c % 64)) & 1;
    }

    void set(std::size_t r, std::size_t c, bool value = true) {
        if (value) data_[r][c / 64] |= std::uint64_t(1) << (c % 64);
        else data_[r][c / 64] &= ~(std::uint64_t(1) << (c % 64));
    }

    /// Rank by Gaussian elimination on a working copy.
    std::size_t rank() const {
        std::vector<std::vector<std::uint64_t>> work = data_;
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t w = col / 64;
            std::uint64_t bit = std::uint64_t(1) << (col % 64);
            std::size_t pivot = rows_;
            for (std::size_t r = rank; r < rows_; ++r)
                if (work[r][w] & bit) {
                    pivot = r;
                    break;
                }
            if (pivot == rows_) continue;
            std::swap(work[rank], work[pivot]);
            for (std::size_t r = 0; r < rows_; ++r)
                if (r != rank && (work[r][w] & bit))
                    for (std::size_t k = 0; k < words_; ++k) work[r][k] ^= work[rank][k];
            ++rank;
        }
        return rank;
    }

    bool is_zero() const {
        for (const auto& row : data_)
            for (auto w : row)
                if (w) return false;
        return true;
    }

    Gf2Matrix multiply(const Gf2Matrix& other) const {
        if (cols_ != other.rows_)
            throw std::invalid_argument("GF(2) matrix dimensions do not compose");
        Gf2Matrix out(rows_, other.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k)
                if (get(r, k))
                    for (std::size_t w = 0; w < other.words_; ++w)
                        out.data_[r][w] ^= other.data_[k][w];
        return out;
    }

private:
    std::size_t rows_, cols_, words_;
    std::vector<std::vector<std::uint64_t>> data_;
};

namespace detail {

/// Faces of exactly the given dimension, ignoring the complex's dim_cap;
/// homology at dimension k needs the (k+1)-faces regardless of the cap.
inline std::vector<std::vector<int>> faces_by_index(const SimplicialComplex& k, int dim) {
    std::set<std::vector<int>> collected;
    const std::size_t want = static_cast<std::size_t>(dim) + 1;
    for (const auto& max : k.maximal_faces()) {
        if (max.size() < want) continue;
        std::vector<std::size_t> pick(want);
        for (std::size_t i = 0; i < want; ++i) pick[i] = i;
        while (true) {
            std::vector<int> face(want);
            for (std::size_t i = 0; i < want; ++i) face[i] = max[pick[i]];
            collected.insert(std::move(face));
            std::size_t i = want;
            while (i > 0 && pick[i - 1] == max.size() - want + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < want; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return {collected.begin(), collected.end()};
}

inline Gf2Matrix boundary_from_faces(const std::vector<std::vector<int>>& lower,
                                     const std::vector<std::vector<int>>& upper) {
    std::map<std::vector<int>, std::size_t> row_of;
    for (std::size_t r = 0; r < lower.size(); ++r) row_of.emplace(lower[r], r);
    Gf2Matrix out(lower.size(), upper.size());
    for (std::size_t c = 0; c < upper.size(); ++c) {
        const auto& face = upper[c];
        for (std::size_t skip = 0; skip < face.size(); ++skip) {
            std::vector<int> sub;
            sub.reserve(face.size() - 1);
            for (std::size_t i = 0; i < face.size(); ++i)
                if (i != skip) sub.push_back(face[i]);
            out.set(row_of.at(sub), c);
        }
    }
    return out;
}

} // namespace detail

/// Boundary matrix ∂_dim from dim-faces (columns) to (dim−1)-faces (rows),
/// entry 1 iff the row face is a codimension-1 subset of the column face.
/// Rows and columns follow the canonical lexicographic face order. ∂_0 is
/// the 0×(#vertices) zero map.
inline Gf2Matrix boundary_matrix(const SimplicialComplex& k, int dim) {
    if (dim < 0)
        throw std::domain_error("boundary dimension must be nonnegative");
    if (k.dim_cap() && dim > *k.dim_cap())
        throw std::domain_error("dimension " + std::to_string(dim) +
                                " exceeds the complex's dim_cap " +
                                std::to_string(*k.dim_cap()) + "; raise the cap to enumerate");
    auto upper = detail::faces_by_index(k, dim);
    if (dim == 0) return Gf2Matrix(0, upper.size());
    auto lower = detail::faces_by_index(k, dim - 1);
    return detail::boundary_from_faces(lower, upper);
}

/// Betti numbers b_0..b_dim_cap over GF(2).
struct BettiVector {
    std::vector<int> values;

    bool operator==(const BettiVector& other) const { return values == other.values; }
    bool operator!=(const BettiVector& other) const { return !(*this == other); }

    std::string to_string() const {
        std::string out = "(";
        for (std::size_t i = 0; i < values.size(); ++i)
            out += (i ? "," : "") + std::to_string(values[i]);
        return out + ")";
    }
};

/// b_k = #k-faces − rank ∂_k − rank ∂_{k+1}. Computing b_k requires the
/// (k+1)-faces, so a complex-level dim_cap must be at least dim_cap to
/// allow the computation; the internal (dim_cap+1)-enumeration is exempt.
inline BettiVector betti(const SimplicialComplex& k, int dim_cap = 3) {
    if (dim_cap < 0)
        throw std::domain_error("betti dimension cap must be nonnegative");
    if (k.dim_cap() && dim_cap > *k.dim_cap())
        throw std::domain_error("betti at dimension " + std::to_string(dim_cap) +
                                " exceeds the complex's dim_cap; raise the cap");
    BettiVector out;
    out.values.resize(static_cast<std::size_t>(dim_cap) + 1, 0);

    std::vector<std::vector<int>> current = detail::faces_by_index(k, 0);
    std::size_t rank_lower = 0; // rank ∂_d, carried from the previous step
    for (int d = 0; d <= dim_cap; ++d) {
        auto upper = detail::faces_by_index(k, d + 1);
        std::size_t rank_upper =
            upper.empty() ? 0 : detail::boundary_from_faces(current, upper).rank();
        out.values[static_cast<std::size_t>(d)] = static_cast<int>(
            current.size() - rank_lower - rank_upper);
        current = std::move(upper);
        rank_lower = rank_upper;
    }
    return out;
}

enum class Construction { VietorisRips, Cech };

inline const char* to_string(Construction c) {
    return c == Construction::VietorisRips ? "vr" : "cech";
}

struct BettiCurveRow {
    double r;
    BettiVector betti;
};

/// Betti vectors across a sorted grid of scales; one row per scale.
inline std::vector<BettiCurveRow> betti_curve(const MetricSpace& x, Construction construction,
                                              ScaleConvention convention,
                                              const std::vector<double>& r_grid, int dim_cap) {
    std::vector<BettiCurveRow> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        ScaleParameter s(r, convention);
        SimplicialComplex k = construction == Construction::VietorisRips
                                  ? vietoris_rips_complex(x, s)
                                  : cech_complex(x, s);
        out.push_back({r, betti(k, dim_cap)});
    }
    return out;
}

} // namespace smt
