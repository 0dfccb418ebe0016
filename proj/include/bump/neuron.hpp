#pragma once

// Conductance-based leaky integrate-and-fire neuron with alpha-shaped
// excitatory and inhibitory synaptic conductances.
//
// Units: mV, ms, nF, uS, nA. A conductance in uS times a potential in mV is a
// current in nA, and nA / nF = mV / ms.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "bump/error.hpp"

namespace bump {

struct NeuronParameters {
    double c_m = 1.0;          // nF
    double v_rest = -65.0;     // mV
    double v_reset = -70.0;    // mV
    double v_thresh = -48.0;   // mV
    double e_rev_ex = 0.0;     // mV
    double e_rev_in = -70.0;   // mV
    double tau_m = 20.0;       // ms
    double tau_syn_ex = 5.0;   // ms
    double tau_syn_in = 5.0;   // ms
    double tau_refract = 2.0;  // ms

    bool operator==(const NeuronParameters&) const = default;

    void validate() const {
        using detail::require;
        for (double v : {c_m, v_rest, v_reset, v_thresh, e_rev_ex, e_rev_in, tau_m, tau_syn_ex,
                         tau_syn_in, tau_refract}) {
            require(std::isfinite(v), "neuron parameters must be finite");
        }
        require(c_m > 0.0, "c_m must be positive");
        require(tau_m > 0.0 && tau_syn_ex > 0.0 && tau_syn_in > 0.0 && tau_refract > 0.0,
                "time constants must be strictly positive");
        require(v_reset <= v_rest, "v_reset must not exceed v_rest");
        require(v_rest < v_thresh, "v_rest must lie below v_thresh");
        require(v_thresh < e_rev_ex, "v_thresh must lie below e_rev_ex");
        require(e_rev_in <= v_rest, "e_rev_in must not exceed v_rest");
    }
};

/// Alpha function scaled to peak exactly 1 at t = tau: (e/tau) t exp(-t/tau).
inline double alpha_kernel(double t, double tau) {
    detail::require(tau > 0.0, "alpha_kernel: tau must be positive");
    detail::require(t >= 0.0, "alpha_kernel: t must be non-negative");
    return std::numbers::e / tau * t * std::exp(-t / tau);
}

/// Two-variable linear cascade realizing the alpha conductance:
///   da/dt = -a / tau
///   dg/dt = a - g / tau
/// A spike of weight w adds w*e/tau to `a`, after which g(t) = w * alpha_kernel(t, tau).
struct SynapseChannel {
    double a = 0.0;    // uS / ms
    double g = 0.0;    // uS
    double tau = 5.0;  // ms

    bool operator==(const SynapseChannel&) const = default;
};

inline SynapseChannel inject_spike(SynapseChannel channel, double weight) {
    detail::require(weight >= 0.0 && std::isfinite(weight),
                    "inject_spike: weight must be finite and non-negative");
    detail::require(channel.tau > 0.0, "inject_spike: channel tau must be positive");
    channel.a += weight * std::numbers::e / channel.tau;
    return channel;
}

/// Exact propagation of the cascade over `dt`.
inline SynapseChannel decay_channel(SynapseChannel channel, double dt) {
    detail::require(dt > 0.0, "decay_channel: dt must be positive");
    detail::require(channel.tau > 0.0, "decay_channel: channel tau must be positive");
    const double decay = std::exp(-dt / channel.tau);
    channel.g = decay * (channel.g + channel.a * dt);
    channel.a *= decay;
    return channel;
}

struct NeuronState {
    double v_m = -65.0;
    SynapseChannel ex_channel;
    SynapseChannel in_channel;
    double refract_remaining = 0.0;
    std::optional<double> last_spike_time;

    bool operator==(const NeuronState&) const = default;

    static NeuronState at_rest(const NeuronParameters& p) {
        NeuronState s;
        s.v_m = p.v_rest;
        s.ex_channel.tau = p.tau_syn_ex;
        s.in_channel.tau = p.tau_syn_in;
        return s;
    }

    bool refractory() const { return refract_remaining > kTimeEpsilon; }

    static constexpr double kTimeEpsilon = 1e-9;
};

/// Membrane currents in nA at potential `v`, signed as they enter dV/dt.
struct MembraneCurrents {
    double leak;
    double syn_ex;
    double syn_in;
};

inline MembraneCurrents membrane_currents(const NeuronState& s, const NeuronParameters& p) {
    return {p.c_m * (s.v_m - p.v_rest) / p.tau_m, s.ex_channel.g * (s.v_m - p.e_rev_ex),
            s.in_channel.g * (s.v_m - p.e_rev_in)};
}

/// Advance the membrane by one forward-Euler step. The channels are expected to
/// already hold this step's conductances. Returns true when the neuron fired;
/// in that case v_m is already reset.
///
/// While refractory the membrane is held at v_reset and no current flows.
inline bool membrane_step(NeuronState& s, const NeuronParameters& p, double now, double dt,
                          double i_ext = 0.0) {
    detail::require(dt > 0.0, "membrane_step: dt must be positive");
    if (s.refractory()) {
        s.v_m = p.v_reset;
        s.refract_remaining = std::max(0.0, s.refract_remaining - dt);
        if (s.refract_remaining <= NeuronState::kTimeEpsilon) {
            s.refract_remaining = 0.0;
        }
        return false;
    }

    const auto i = membrane_currents(s, p);
    s.v_m += dt * (-i.leak - i.syn_ex - i.syn_in + i_ext) / p.c_m;
    if (!std::isfinite(s.v_m)) {
        throw NumericOverflowError("non-finite membrane potential at t=" + std::to_string(now) +
                                   " ms");
    }
    if (s.v_m >= p.v_thresh) {
        s.v_m = p.v_reset;
        s.refract_remaining = p.tau_refract;
        s.last_spike_time = now;
        return true;
    }
    return false;
}

} // namespace bump
