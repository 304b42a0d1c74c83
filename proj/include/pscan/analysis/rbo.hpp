#pragma once

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "pscan/util/errors.hpp"

namespace pscan::analysis {

// Extrapolated rank-biased overlap of two indefinite rankings. With X_d the
// size of the prefix-depth-d intersection (the shorter list held whole past
// its end, length s; the longer of length l):
//
//   rbo = (1-p)/p * [ sum_{d=1}^{l} X_d/d * p^d
//                   + sum_{d=s+1}^{l} X_s (d-s)/(s d) * p^d ]
//       + ( (X_l - X_s)/l + X_s/s ) * p^l
//
// which for equal lengths reduces to the familiar (1-p) sum A_d p^(d-1)
// plus the A_l p^l residual. Identical lists give exactly 1, disjoint
// lists exactly 0. Deterministic; no randomness anywhere.
inline double rbo(const std::vector<std::string>& list1, const std::vector<std::string>& list2,
                  double p = 0.9) {
    if (!(p > 0.0) || !(p < 1.0)) throw ConfigError("rbo persistence p must be in (0, 1)");
    if (list1.empty() || list2.empty()) throw DataError("rbo requires non-empty rankings");
    for (const auto* list : {&list1, &list2}) {
        std::unordered_set<std::string> seen;
        for (const auto& id : *list)
            if (!seen.insert(id).second)
                throw DataError("duplicate id '" + id + "' within a ranking");
    }

    const auto& shorter = list1.size() <= list2.size() ? list1 : list2;
    const auto& longer = list1.size() <= list2.size() ? list2 : list1;
    const size_t s = shorter.size();
    const size_t l = longer.size();

    std::unordered_set<std::string> in_short, in_long;
    size_t x = 0;  // running overlap of the two depth-d prefixes
    size_t xs = 0;
    double sum = 0.0;
    double pd = 1.0;  // p^d
    for (size_t d = 1; d <= l; ++d) {
        pd *= p;
        if (d <= s) {
            const auto& e = shorter[d - 1];
            if (in_long.count(e)) ++x;
            in_short.insert(e);
        }
        const auto& e = longer[d - 1];
        if (in_short.count(e)) ++x;
        in_long.insert(e);
        sum += static_cast<double>(x) / static_cast<double>(d) * pd;
        if (d == s) xs = x;
        if (d > s)
            sum += static_cast<double>(xs) * static_cast<double>(d - s) /
                   (static_cast<double>(s) * static_cast<double>(d)) * pd;
    }
    const size_t xl = x;
    const double tail = (static_cast<double>(xl - xs) / static_cast<double>(l) +
                         static_cast<double>(xs) / static_cast<double>(s)) *
                        pd;
    return (1.0 - p) / p * sum + tail;
}

}  // namespace pscan::analysis
