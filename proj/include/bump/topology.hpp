#pragma once

// Signed connectivity of the 1D bump network: every neuron excites the
// neighbours within `excit_reach` and inhibits those whose distance lies in
// [inhib_reach_lo, inhib_reach_hi]. Row = presynaptic, column = postsynaptic.

#include <cstddef>
#include <cstdlib>
#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bump/error.hpp"

namespace bump {

enum class Boundary { linear, ring };

inline std::string to_string(Boundary b) { return b == Boundary::ring ? "ring" : "linear"; }

inline Boundary parse_boundary(const std::string& s) {
    if (s == "linear") {
        return Boundary::linear;
    }
    if (s == "ring") {
        return Boundary::ring;
    }
    throw ParameterError("unknown boundary '" + s + "' (expected linear or ring)");
}

struct TopologySpec {
    std::size_t n = 100;
    std::size_t excit_reach = 2;
    std::size_t inhib_reach_lo = 3;
    std::size_t inhib_reach_hi = 6;
    double w_excit = 0.08;
    double w_inhib = 0.08;
    Boundary boundary = Boundary::linear;

    bool operator==(const TopologySpec&) const = default;

    void validate() const {
        using detail::require;
        require(n > 2 * inhib_reach_hi, "topology: n must exceed 2 * inhib_reach_hi");
        require(excit_reach > 0, "topology: excit_reach must be positive");
        require(excit_reach < inhib_reach_lo, "topology: excit_reach must be below inhib_reach_lo");
        require(inhib_reach_lo <= inhib_reach_hi, "topology: inhibitory band is empty");
        require(w_excit >= 0.0 && w_inhib >= 0.0, "topology: weights must be non-negative");
    }

    std::size_t distance(std::size_t i, std::size_t j) const {
        const std::size_t d = i > j ? i - j : j - i;
        return boundary == Boundary::ring ? std::min(d, n - d) : d;
    }
};

struct Synapse {
    std::size_t target;
    double weight;  // signed: > 0 excitatory, < 0 inhibitory

    bool operator==(const Synapse&) const = default;
};

class ConnectivityMatrix {
public:
    ConnectivityMatrix() = default;

    /// Takes a dense row-major n*n weight array.
    ConnectivityMatrix(std::size_t n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
        detail::require(entries_.size() == n_ * n_, "connectivity: entry count must be n*n");
        for (std::size_t i = 0; i < n_; ++i) {
            detail::require(at(i, i) == 0.0, "connectivity: diagonal must be zero");
        }
        rebuild_neighbors();
    }

    std::size_t size() const { return n_; }
    double at(std::size_t pre, std::size_t post) const { return entries_[pre * n_ + post]; }
    std::span<const double> row(std::size_t pre) const { return {entries_.data() + pre * n_, n_}; }
    std::span<const double> entries() const { return entries_; }

    /// Nonzero entries of row `pre`, ascending by target.
    std::span<const Synapse> neighbors(std::size_t pre) const { return neighbors_[pre]; }

    std::size_t positive_count() const { return count_if([](double w) { return w > 0.0; }); }
    std::size_t negative_count() const { return count_if([](double w) { return w < 0.0; }); }

    bool operator==(const ConnectivityMatrix& o) const { return n_ == o.n_ && entries_ == o.entries_; }

private:
    template <class Pred>
    std::size_t count_if(Pred pred) const {
        std::size_t c = 0;
        for (double w : entries_) {
            c += pred(w) ? 1 : 0;
        }
        return c;
    }

    void rebuild_neighbors() {
        neighbors_.assign(n_, {});
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (const double w = at(i, j); w != 0.0) {
                    neighbors_[i].push_back({j, w});
                }
            }
        }
    }

    std::size_t n_ = 0;
    std::vector<double> entries_;
    std::vector<std::vector<Synapse>> neighbors_;
};

inline ConnectivityMatrix build_bump_matrix(const TopologySpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t d = spec.distance(i, j);
            if (d >= 1 && d <= spec.excit_reach) {
                entries[i * n + j] = spec.w_excit;
            } else if (d >= spec.inhib_reach_lo && d <= spec.inhib_reach_hi) {
                entries[i * n + j] = -spec.w_inhib;
            }
        }
    }
    return ConnectivityMatrix(n, std::move(entries));
}

inline std::vector<Synapse> out_neighbors(const ConnectivityMatrix& m, std::size_t i) {
    if (i >= m.size()) {
        throw std::out_of_range("out_neighbors: index " + std::to_string(i) + " outside [0, " +
                                std::to_string(m.size()) + ")");
    }
    const auto s = m.neighbors(i);
    return {s.begin(), s.end()};
}

} // namespace bump
