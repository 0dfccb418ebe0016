#pragma once

// Clock-driven simulation loop. Each step:
//   1. deliver the spikes emitted during the previous step through the
//      connectivity matrix (positive weights to the excitatory channel,
//      magnitudes of negative weights to the inhibitory one), then the
//      external events due in [t, t + dt);
//   2. decay every channel by dt;
//   3. update every membrane in ascending index order.
// Recurrent spikes therefore arrive one step after they are emitted.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bump/error.hpp"
#include "bump/json_io.hpp"
#include "bump/neuron.hpp"
#include "bump/record.hpp"
#include "bump/run_config.hpp"
#include "bump/stimulus.hpp"
#include "bump/topology.hpp"

namespace bump {

class Network {
public:
    explicit Network(RunConfig config)
        : config_((config.validate(), std::move(config))),
          matrix_(build_bump_matrix(config_.topology)),
          program_(config_.stimulus_program()),
          neurons_(config_.topology.n, NeuronState::at_rest(config_.neuron)) {}

    const RunConfig& config() const { return config_; }
    const ConnectivityMatrix& matrix() const { return matrix_; }
    const StimulusProgram& stimulus() const { return program_; }

    std::span<const NeuronState> neurons() const { return neurons_; }
    NeuronState& neuron(std::size_t i) { return neurons_.at(i); }

    std::size_t step_index() const { return step_; }
    double now() const { return static_cast<double>(step_) * config_.dt_ms; }
    bool finished() const { return step_ >= config_.steps(); }

    /// Spikes emitted by the last step, to be delivered by the next one.
    std::span<const std::size_t> pending() const { return pending_; }

    /// Queue a spike from neuron `i` for delivery at the next step, as if it had
    /// fired in the previous one.
    void mark_spiked(std::size_t i) {
        detail::require(i < neurons_.size(), "mark_spiked: neuron index out of range");
        pending_.push_back(i);
    }

    /// Advance one tick; returns the neurons that fired, ascending.
    std::vector<std::size_t> step() {
        const double t = now();
        const double dt = config_.dt_ms;
        const double scale = config_.conductance_scale;

        for (std::size_t pre : pending_) {
            for (const Synapse& syn : matrix_.neighbors(pre)) {
                auto& target = neurons_[syn.target];
                if (syn.weight > 0.0) {
                    target.ex_channel = inject_spike(target.ex_channel, syn.weight * scale);
                } else {
                    target.in_channel = inject_spike(target.in_channel, -syn.weight * scale);
                }
            }
        }
        for (const auto& ev : events_in(program_, t, t + dt)) {
            auto& target = neurons_[ev.neuron];
            target.ex_channel = inject_spike(target.ex_channel, ev.weight * scale);
        }

        for (auto& s : neurons_) {
            s.ex_channel = decay_channel(s.ex_channel, dt);
            s.in_channel = decay_channel(s.in_channel, dt);
        }

        std::vector<std::size_t> fired;
        for (std::size_t i = 0; i < neurons_.size(); ++i) {
            try {
                if (membrane_step(neurons_[i], config_.neuron, t, dt)) {
                    fired.push_back(i);
                }
            } catch (const NumericOverflowError& e) {
                throw NumericOverflowError("neuron " + std::to_string(i) + ", step " +
                                               std::to_string(step_) + ": " + e.what(),
                                           i, step_);
            }
        }

        pending_ = fired;
        ++step_;
        return fired;
    }

private:
    RunConfig config_;
    ConnectivityMatrix matrix_;
    StimulusProgram program_;
    std::vector<NeuronState> neurons_;
    std::vector<std::size_t> pending_;
    std::size_t step_ = 0;
};

inline SimulationRecord run_simulation(const RunConfig& config) {
    Network net(config);
    const auto& cfg = net.config();

    SimulationRecord rec;
    rec.n = cfg.topology.n;
    rec.duration_ms = cfg.duration_ms;
    rec.dt_ms = cfg.dt_ms;
    rec.config_digest = config_digest(cfg);
    if (cfg.record_voltage) {
        if (cfg.voltage_probes.empty()) {
            for (std::size_t i = 0; i < rec.n; ++i) {
                rec.probes.push_back(i);
            }
        } else {
            rec.probes = cfg.voltage_probes;
        }
        rec.voltages.assign(rec.probes.size(), {});
        for (auto& trace : rec.voltages) {
            trace.reserve(cfg.steps());
        }
    }

    while (!net.finished()) {
        const double t = net.now();
        for (std::size_t i : net.step()) {
            rec.raster.push_back({i, t});
        }
        for (std::size_t k = 0; k < rec.probes.size(); ++k) {
            rec.voltages[k].push_back(net.neurons()[rec.probes[k]].v_m);
        }
    }
    return rec;
}

} // namespace bump
