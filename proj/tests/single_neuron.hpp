#pragma once

// Drives one neuron through the library primitives in engine order
// (inject, decay, membrane step) and samples v after each step.

#include <cstddef>
#include <vector>

#include "bump/neuron.hpp"
#include "oracle/reference_integrator.hpp"

namespace testing_support {

inline std::vector<double> drive(const bump::NeuronParameters& p, double v0, const std::vector<oracle::Input>& in,
                                 double t_end, double dt = 1.0, std::size_t* spikes = nullptr) {
    auto s = bump::NeuronState::at_rest(p);
    s.v_m = v0;
    std::vector<double> out{v0};
    const auto steps = static_cast<std::size_t>(t_end / dt + 0.5);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        for (const auto& x : in) {
            if (x.time_ms >= t && x.time_ms < t + dt) {
                auto& ch = x.excitatory ? s.ex_channel : s.in_channel;
                ch = bump::inject_spike(ch, x.peak_us);
            }
        }
        s.ex_channel = bump::decay_channel(s.ex_channel, dt);
        s.in_channel = bump::decay_channel(s.in_channel, dt);
        if (bump::membrane_step(s, p, t, dt) && spikes) {
            ++*spikes;
        }
        out.push_back(s.v_m);
    }
    return out;
}

/// Excitatory and inhibitory spikes of the given peak conductances at fixed times.
inline std::vector<oracle::Input> mixed_inputs(double g_ex, double g_in) {
    std::vector<oracle::Input> in;
    for (double t : {20.0, 100.0, 200.0}) in.push_back({t, g_ex, true});
    for (double t : {60.0, 140.0, 200.0}) in.push_back({t, g_in, false});
    return in;
}

inline double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace testing_support
