#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bump/neuron.hpp"
#include "bump/stimulus.hpp"
#include "bump/topology.hpp"

namespace bump {

/// Peak conductance (uS) delivered per unit of synaptic weight. Applies to
/// recurrent and external spikes alike.
inline constexpr double kDefaultConductanceScale = 0.3;

struct RunConfig {
    NeuronParameters neuron;
    TopologySpec topology;
    StimulusSpec stimulus;
    double duration_ms = 300.0;
    double dt_ms = 1.0;
    double conductance_scale = kDefaultConductanceScale;
    bool record_voltage = true;
    std::vector<std::size_t> voltage_probes;  // empty: every neuron

    bool operator==(const RunConfig&) const = default;

    std::size_t steps() const { return static_cast<std::size_t>(std::llround(duration_ms / dt_ms)); }

    double input_weight() const { return stimulus.input_weight.value_or(topology.w_excit); }

    void validate() const {
        using detail::require;
        neuron.validate();
        topology.validate();
        require(std::isfinite(duration_ms) && duration_ms > 0.0, "run: duration_ms must be positive");
        require(std::isfinite(dt_ms) && dt_ms > 0.0, "run: dt_ms must be positive");
        const double ratio = duration_ms / dt_ms;
        require(std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio),
                "run: duration_ms must be a whole multiple of dt_ms");
        require(std::isfinite(conductance_scale) && conductance_scale >= 0.0,
                "run: conductance_scale must be finite and non-negative");
        for (std::size_t p : voltage_probes) {
            require(p < topology.n, "run: voltage probe index out of range");
        }
        // window bounds depend on n and the duration, so check them here
        (void)build_window_stimulus(stimulus.window_width, stimulus.schedule, input_weight(),
                                    {stimulus.window_start, topology.n, duration_ms});
    }

    StimulusProgram stimulus_program() const {
        return build_window_stimulus(stimulus.window_width, stimulus.schedule, input_weight(),
                                     {stimulus.window_start, topology.n, duration_ms});
    }
};

} // namespace bump
