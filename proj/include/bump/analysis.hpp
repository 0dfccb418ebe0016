#pragma once

// Spike-raster pattern classification: no ignition, stationary bump,
// k-stream splitting, divergence, and splitting with divergence.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bump/error.hpp"
#include "bump/record.hpp"
#include "bump/stimulus.hpp"

namespace bump {

/// Every numeric boundary the classifier uses.
struct ClassifierParams {
    double bin_width_ms = 10.0;
    std::size_t gap_tolerance = 2;         // neuron indices bridged inside one cluster
    double drift_max = 3.0;                // neuron indices
    double divergence_slope_min = 0.5;     // active neurons per bin
    double divergence_fraction = 0.8;      // of n, in the final bin
    double settle_ms = 50.0;
    std::size_t evaluation_divisor = 3;    // final 1/divisor of the bins is evaluated

    bool operator==(const ClassifierParams&) const = default;

    void validate() const {
        using detail::require;
        require(bin_width_ms > 0.0, "classifier: bin_width_ms must be positive");
        require(drift_max >= 0.0, "classifier: drift_max must be non-negative");
        require(divergence_fraction > 0.0 && divergence_fraction <= 1.0,
                "classifier: divergence_fraction must lie in (0, 1]");
        require(settle_ms >= 0.0, "classifier: settle_ms must be non-negative");
        require(evaluation_divisor >= 1, "classifier: evaluation_divisor must be at least 1");
    }
};

struct PatternClass {
    enum class Kind { no_ignition, stationary, split, divergent, split_with_divergence, unclassified };

    Kind kind = Kind::unclassified;
    std::size_t streams = 0;  // meaningful for split and split_with_divergence

    bool operator==(const PatternClass&) const = default;

    static PatternClass no_ignition() { return {Kind::no_ignition, 0}; }
    static PatternClass stationary() { return {Kind::stationary, 1}; }
    static PatternClass split(std::size_t k) { return {Kind::split, k}; }
    static PatternClass divergent() { return {Kind::divergent, 1}; }
    static PatternClass split_with_divergence(std::size_t k) { return {Kind::split_with_divergence, k}; }
    static PatternClass unclassified(std::size_t k = 0) { return {Kind::unclassified, k}; }

    bool ignited() const { return kind != Kind::no_ignition; }
    bool is_split(std::size_t k) const {
        return (kind == Kind::split || kind == Kind::split_with_divergence) && streams == k;
    }
};

inline std::string to_string(const PatternClass& c) {
    using K = PatternClass::Kind;
    switch (c.kind) {
    case K::no_ignition: return "NoIgnition";
    case K::stationary: return "Stationary";
    case K::split: return "Split(" + std::to_string(c.streams) + ")";
    case K::divergent: return "Divergent";
    case K::split_with_divergence: return "SplitWithDivergence(" + std::to_string(c.streams) + ")";
    case K::unclassified: return "Unclassified";
    }
    return "Unclassified";
}

inline std::ostream& operator<<(std::ostream& os, const PatternClass& c) { return os << to_string(c); }

inline PatternClass parse_pattern_class(const std::string& s) {
    if (s == "NoIgnition") return PatternClass::no_ignition();
    if (s == "Stationary") return PatternClass::stationary();
    if (s == "Divergent") return PatternClass::divergent();
    if (s == "Unclassified") return PatternClass::unclassified();
    const auto with_k = [&](const std::string& prefix) -> std::optional<std::size_t> {
        if (s.size() > prefix.size() + 2 && s.compare(0, prefix.size() + 1, prefix + "(") == 0 &&
            s.back() == ')') {
            const auto digits = s.substr(prefix.size() + 1, s.size() - prefix.size() - 2);
            if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](unsigned char ch) { return std::isdigit(ch) != 0; })) {
                return std::stoul(digits);
            }
        }
        return std::nullopt;
    };
    if (auto k = with_k("Split")) return PatternClass::split(*k);
    if (auto k = with_k("SplitWithDivergence")) return PatternClass::split_with_divergence(*k);
    throw ParseError("unknown pattern class '" + s + "'");
}

struct BinnedRaster {
    double bin_width_ms = 10.0;
    std::vector<std::vector<std::size_t>> bins;  // sorted, unique neuron indices per bin
};

/// Neuron i is active in bin b iff it spiked at least once in [b*w, (b+1)*w).
/// Spikes before `from_ms` are ignored.
inline BinnedRaster bin_raster(const SimulationRecord& record, double bin_width_ms, double from_ms = 0.0) {
    detail::require(bin_width_ms > 0.0, "bin_raster: bin width must be positive");
    const auto count = static_cast<std::size_t>(std::ceil(record.duration_ms / bin_width_ms - 1e-9));
    BinnedRaster out{bin_width_ms, std::vector<std::vector<std::size_t>>(count)};
    for (const auto& s : record.raster) {
        if (s.time_ms < from_ms || s.time_ms < 0.0) {
            continue;
        }
        const auto b = static_cast<std::size_t>(std::floor(s.time_ms / bin_width_ms));
        if (b < count) {
            out.bins[b].push_back(s.neuron);
        }
    }
    for (auto& bin : out.bins) {
        std::sort(bin.begin(), bin.end());
        bin.erase(std::unique(bin.begin(), bin.end()), bin.end());
    }
    return out;
}

struct Cluster {
    std::size_t start;
    std::size_t end;  // inclusive
    double centroid;
    std::size_t width;  // active neurons in the cluster

    bool operator==(const Cluster&) const = default;
};

/// Maximal runs of sorted active indices whose consecutive members differ by
/// at most gap_tolerance + 1.
inline std::vector<Cluster> cluster_bin(std::span<const std::size_t> active, std::size_t gap_tolerance) {
    std::vector<std::size_t> sorted(active.begin(), active.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<Cluster> clusters;
    std::size_t first = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const bool last = k + 1 == sorted.size();
        if (last || sorted[k + 1] - sorted[k] > gap_tolerance + 1) {
            double sum = 0.0;
            for (std::size_t m = first; m <= k; ++m) {
                sum += static_cast<double>(sorted[m]);
            }
            const std::size_t width = k - first + 1;
            clusters.push_back({sorted[first], sorted[k], sum / static_cast<double>(width), width});
            first = k + 1;
        }
    }
    return clusters;
}

/// Per-bin cluster structure over the whole run.
struct StreamTrack {
    std::vector<std::size_t> cluster_counts;
    std::vector<std::vector<double>> centroids;
    std::vector<std::vector<std::size_t>> widths;
};

inline StreamTrack track_streams(const BinnedRaster& binned, std::size_t gap_tolerance) {
    StreamTrack track;
    for (const auto& bin : binned.bins) {
        const auto clusters = cluster_bin(bin, gap_tolerance);
        track.cluster_counts.push_back(clusters.size());
        auto& c = track.centroids.emplace_back();
        auto& w = track.widths.emplace_back();
        for (const auto& cl : clusters) {
            c.push_back(cl.centroid);
            w.push_back(cl.width);
        }
    }
    return track;
}

/// Everything the classifier looked at, for offline re-analysis.
struct ClassificationReport {
    PatternClass label;
    bool ignited = false;
    std::size_t stream_count = 0;
    bool divergence = false;
    double divergence_slope = 0.0;
    double final_active_fraction = 0.0;
    double centroid_drift = 0.0;
    std::size_t evaluation_first_bin = 0;
    StreamTrack track;
    std::vector<std::size_t> active_counts;
    ClassifierParams params;
};

namespace detail {

inline double least_squares_slope(std::span<const double> y) {
    const auto n = static_cast<double>(y.size());
    if (y.size() < 2) {
        return 0.0;
    }
    const double mean_x = (n - 1.0) / 2.0;
    const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dx = static_cast<double>(i) - mean_x;
        sxy += dx * (y[i] - mean_y);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace detail

/// Decision procedure, in order:
///  1. NoIgnition unless some bin after the settling margin has an active set
///     that is nonempty and differs from the stimulated window. A disconnected
///     network under uniform drive fires its window in lockstep, so any other
///     active set (including a spike outside the window) is recurrent.
///  2. Divergence: slope of the per-bin active count over the evaluation bins
///     exceeds divergence_slope_min, or the final bin is more than
///     divergence_fraction of the network.
///  3. Stream count k: modal cluster count over nonempty evaluation bins, ties
///     broken towards the larger count.
///  4. Stationary: k = 1, no divergence, centroid drift <= drift_max.
///  5. Split(k) for 2 <= k <= 4 without divergence; SplitWithDivergence(k) for
///     k >= 2 with divergence; Divergent for k = 1 with divergence.
///  6. Unclassified otherwise.
inline ClassificationReport analyze_raster(const SimulationRecord& record, const StimulusProgram& stim,
                                           const ClassifierParams& params = {}) {
    params.validate();
    ClassificationReport rep;
    rep.params = params;

    const auto all = bin_raster(record, params.bin_width_ms);
    const auto settled = bin_raster(record, params.bin_width_ms, params.settle_ms);
    rep.track = track_streams(all, params.gap_tolerance);
    for (const auto& bin : all.bins) {
        rep.active_counts.push_back(bin.size());
    }

    const auto window_set = [&](const std::vector<std::size_t>& bin) {
        if (bin.size() != stim.window_width) {
            return false;
        }
        for (std::size_t k = 0; k < bin.size(); ++k) {
            if (bin[k] != stim.window_start + k) {
                return false;
            }
        }
        return true;
    };
    rep.ignited = std::any_of(settled.bins.begin(), settled.bins.end(),
                              [&](const auto& bin) { return !bin.empty() && !window_set(bin); });

    const std::size_t nbins = all.bins.size();
    const std::size_t eval_bins = std::max<std::size_t>(1, nbins / params.evaluation_divisor);
    rep.evaluation_first_bin = nbins - std::min(nbins, eval_bins);

    std::vector<double> totals;
    std::map<std::size_t, std::size_t> histogram;
    for (std::size_t b = rep.evaluation_first_bin; b < nbins; ++b) {
        totals.push_back(static_cast<double>(all.bins[b].size()));
        if (rep.track.cluster_counts[b] > 0) {
            ++histogram[rep.track.cluster_counts[b]];
        }
    }
    rep.divergence_slope = detail::least_squares_slope(totals);
    const double n = static_cast<double>(std::max<std::size_t>(record.n, 1));
    rep.final_active_fraction = totals.empty() ? 0.0 : totals.back() / n;
    rep.divergence = rep.divergence_slope > params.divergence_slope_min ||
                     rep.final_active_fraction > params.divergence_fraction;

    std::size_t best = 0;
    for (const auto& [k, count] : histogram) {
        if (count >= best) {  // ascending keys: ties go to the larger k
            best = count;
            rep.stream_count = k;
        }
    }

    std::vector<double> single;
    for (std::size_t b = rep.evaluation_first_bin; b < nbins; ++b) {
        if (rep.track.cluster_counts[b] == 1) {
            single.push_back(rep.track.centroids[b].front());
        }
    }
    if (!single.empty()) {
        const double med = detail::median(single);
        for (double c : single) {
            rep.centroid_drift = std::max(rep.centroid_drift, std::abs(c - med));
        }
    }

    const std::size_t k = rep.stream_count;
    if (!rep.ignited) {
        rep.label = PatternClass::no_ignition();
    } else if (k == 1 && !rep.divergence) {
        rep.label = rep.centroid_drift <= params.drift_max ? PatternClass::stationary()
                                                           : PatternClass::unclassified(1);
    } else if (k >= 2 && k <= 4 && !rep.divergence) {
        rep.label = PatternClass::split(k);
    } else if (k >= 2 && rep.divergence) {
        rep.label = PatternClass::split_with_divergence(k);
    } else if (k == 1 && rep.divergence) {
        rep.label = PatternClass::divergent();
    } else {
        rep.label = PatternClass::unclassified(k);
    }
    return rep;
}

inline PatternClass classify_pattern(const SimulationRecord& record, const StimulusProgram& stim,
                                     const ClassifierParams& params = {}) {
    return analyze_raster(record, stim, params).label;
}

/// Least width with some property, plus the "(+D)" flag of the class found there.
struct Threshold {
    std::optional<std::size_t> width;
    bool with_divergence = false;
    std::vector<std::string> warnings;

    bool operator==(const Threshold&) const = default;
};

using WidthResults = std::map<std::size_t, PatternClass>;

inline std::vector<std::size_t> default_widths() {
    std::vector<std::size_t> w(40);
    std::iota(w.begin(), w.end(), std::size_t{1});
    return w;
}

namespace detail {

inline void require_coverage(const WidthResults& results, std::span<const std::size_t> widths) {
    if (widths.empty()) {
        throw IncompleteSweepError("threshold: empty width set");
    }
    for (std::size_t w : widths) {
        if (!results.contains(w)) {
            throw IncompleteSweepError("threshold: no result for window width " + std::to_string(w));
        }
    }
}

} // namespace detail

/// Least width whose class is not NoIgnition. A warning is attached when a
/// larger width fails to ignite again.
inline Threshold ignition_threshold(const WidthResults& results,
                                    std::span<const std::size_t> widths) {
    detail::require_coverage(results, widths);
    std::vector<std::size_t> sorted(widths.begin(), widths.end());
    std::sort(sorted.begin(), sorted.end());
    Threshold t;
    for (std::size_t w : sorted) {
        const auto& c = results.at(w);
        if (!t.width && c.ignited()) {
            t.width = w;
        } else if (t.width && !c.ignited()) {
            t.warnings.push_back("non-monotone ignition: width " + std::to_string(w) +
                                 " does not ignite although width " + std::to_string(*t.width) + " does");
            break;
        }
    }
    return t;
}

inline Threshold ignition_threshold(const WidthResults& results) {
    const auto w = default_widths();
    return ignition_threshold(results, w);
}

/// Least width showing k streams, with or without divergence.
inline Threshold split_threshold(const WidthResults& results, std::size_t k,
                                 std::span<const std::size_t> widths) {
    detail::require_coverage(results, widths);
    std::vector<std::size_t> sorted(widths.begin(), widths.end());
    std::sort(sorted.begin(), sorted.end());
    Threshold t;
    for (std::size_t w : sorted) {
        const auto& c = results.at(w);
        if (c.is_split(k)) {
            t.width = w;
            t.with_divergence = c.kind == PatternClass::Kind::split_with_divergence;
            break;
        }
    }
    return t;
}

inline Threshold split_threshold(const WidthResults& results, std::size_t k) {
    const auto w = default_widths();
    return split_threshold(results, k, w);
}

} // namespace bump
