#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace smt {

/// Label given to the glued basepoint of a wedge sum.
inline const std::string kWedgeBasepoint = "⋆"; // ⋆

/// Canonical label for a point of a product space: "(a,b)".
inline std::string pair_label(const std::string& a, const std::string& b) {
    return "(" + a + "," + b + ")";
}

/// Outcome of gluing two label sets into one: the combined ordered label
/// list plus the original->combined renamings for each side.
struct LabelUnion {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::string> left_map;
    std::unordered_map<std::string, std::string> right_map;
};

namespace detail {

inline std::string fresh_label(std::string candidate,
                               const std::unordered_set<std::string>& taken) {
    while (taken.count(candidate)) candidate += "'";
    return candidate;
}

} // namespace detail

/// Disjoint-union labeling: left labels are kept verbatim, right labels that
/// collide get primes appended until free. Deterministic in the input order.
inline LabelUnion disjoint_union_labels(const std::vector<std::string>& left,
                                        const std::vector<std::string>& right) {
    LabelUnion out;
    std::unordered_set<std::string> taken;
    out.labels.reserve(left.size() + right.size());
    for (const auto& l : left) {
        out.left_map.emplace(l, l);
        out.labels.push_back(l);
        taken.insert(l);
    }
    for (const auto& r : right) {
        std::string fresh = detail::fresh_label(r, taken);
        out.right_map.emplace(r, fresh);
        out.labels.push_back(fresh);
        taken.insert(fresh);
    }
    return out;
}

/// Wedge labeling: both basepoints map to the glued basepoint (first label);
/// the remaining labels follow, left side first, primed on collision.
inline LabelUnion wedge_union_labels(const std::vector<std::string>& left,
                                     const std::string& left_base,
                                     const std::vector<std::string>& right,
                                     const std::string& right_base) {
    LabelUnion out;
    std::unordered_set<std::string> taken{kWedgeBasepoint};
    out.labels.push_back(kWedgeBasepoint);
    out.left_map.emplace(left_base, kWedgeBasepoint);
    out.right_map.emplace(right_base, kWedgeBasepoint);
    for (const auto& l : left) {
        if (l == left_base) continue;
        std::string fresh = detail::fresh_label(l, taken);
        out.left_map.emplace(l, fresh);
        out.labels.push_back(fresh);
        taken.insert(fresh);
    }
    for (const auto& r : right) {
        if (r == right_base) continue;
        std::string fresh = detail::fresh_label(r, taken);
        out.right_map.emplace(r, fresh);
        out.labels.push_back(fresh);
        taken.insert(fresh);
    }
    return out;
}

} // namespace smt
