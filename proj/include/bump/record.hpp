#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace bump {

struct Spike {
    std::size_t neuron;
    double time_ms;

    bool operator==(const Spike&) const = default;
};

/// Time-major ordering used by every raster this library produces.
inline bool spike_before(const Spike& a, const Spike& b) {
    return a.time_ms != b.time_ms ? a.time_ms < b.time_ms : a.neuron < b.neuron;
}

/// Output of one run. `voltages[k]` is the membrane trace of `probes[k]`,
/// one sample per step, taken at the end of the step.
struct SimulationRecord {
    std::size_t n = 0;
    double duration_ms = 0.0;
    double dt_ms = 1.0;
    std::vector<Spike> raster;
    std::vector<std::size_t> probes;
    std::vector<std::vector<double>> voltages;
    std::string config_digest;

    bool operator==(const SimulationRecord&) const = default;

    std::size_t steps() const {
        return static_cast<std::size_t>(std::llround(duration_ms / dt_ms));
    }

    void sort_raster() { std::sort(raster.begin(), raster.end(), spike_before); }
};

/// Smallest inter-spike interval of any single neuron, or empty when no neuron
/// spiked twice.
inline std::optional<double> min_interspike_interval(const SimulationRecord& record) {
    std::vector<double> last(record.n, std::numeric_limits<double>::quiet_NaN());
    std::optional<double> best;
    auto spikes = record.raster;
    std::sort(spikes.begin(), spikes.end(), spike_before);
    for (const auto& s : spikes) {
        if (s.neuron >= last.size()) {
            last.resize(s.neuron + 1, std::numeric_limits<double>::quiet_NaN());
        }
        if (!std::isnan(last[s.neuron])) {
            const double isi = s.time_ms - last[s.neuron];
            if (!best || isi < *best) {
                best = isi;
            }
        }
        last[s.neuron] = s.time_ms;
    }
    return best;
}

} // namespace bump
