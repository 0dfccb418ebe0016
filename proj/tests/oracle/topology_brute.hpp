#pragma once

// Band membership by exhaustive pair enumeration.

#include <cstddef>
#include <cstdlib>
#include <set>
#include <utility>

namespace oracle {

struct Bands {
    std::set<std::size_t> excite;
    std::set<std::size_t> inhibit;
};

inline std::size_t pair_distance(std::size_t i, std::size_t j, std::size_t n, bool ring) {
    const std::size_t d = i > j ? i - j : j - i;
    if (!ring) return d;
    std::size_t best = d;
    for (std::size_t shift = 0; shift <= 2 * n; shift += n) {
        const long long a = static_cast<long long>(i) + static_cast<long long>(shift);
        const long long b = static_cast<long long>(j) + static_cast<long long>(n);
        const auto dd = static_cast<std::size_t>(std::llabs(a - b));
        if (dd < best) best = dd;
    }
    return best;
}

inline Bands bands_of(std::size_t i, std::size_t n, bool ring, std::size_t ex_hi = 2, std::size_t in_lo = 3,
                      std::size_t in_hi = 6) {
    Bands b;
    for (std::size_t j = 0; j < n; ++j) {
        const auto d = pair_distance(i, j, n, ring);
        if (d >= 1 && d <= ex_hi) b.excite.insert(j);
        if (d >= in_lo && d <= in_hi) b.inhibit.insert(j);
    }
    return b;
}

inline std::pair<std::size_t, std::size_t> entry_counts(std::size_t n, bool ring) {
    std::size_t pos = 0;
    std::size_t neg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto b = bands_of(i, n, ring);
        pos += b.excite.size();
        neg += b.inhibit.size();
    }
    return {pos, neg};
}

} // namespace oracle
