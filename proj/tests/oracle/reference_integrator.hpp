#pragma once

// Fine-step reference for a single conductance LIF neuron. Conductances are
// evaluated from the closed-form alpha function of every input spike, so this
// shares no code with the channel cascade in the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct Input {
    double time_ms;
    double peak_us;  // peak conductance of this spike
    bool excitatory;
};

struct Cell {
    double c_m = 1.0;
    double tau_m = 20.0;
    double v_rest = -65.0;
    double e_ex = 0.0;
    double e_in = -70.0;
    double tau_ex = 5.0;
    double tau_in = 5.0;
};

inline double alpha(double s, double tau) {
    return s <= 0.0 ? 0.0 : s / tau * std::exp(1.0 - s / tau);
}

inline double conductance(const std::vector<Input>& in, double t, bool excitatory, double tau) {
    double g = 0.0;
    for (const auto& x : in) {
        if (x.excitatory == excitatory) {
            g += x.peak_us * alpha(t - x.time_ms, tau);
        }
    }
    return g;
}

inline double dvdt(const Cell& c, const std::vector<Input>& in, double t, double v) {
    const double ge = conductance(in, t, true, c.tau_ex);
    const double gi = conductance(in, t, false, c.tau_in);
    return (-c.c_m * (v - c.v_rest) / c.tau_m - ge * (v - c.e_ex) - gi * (v - c.e_in)) / c.c_m;
}

/// Classic RK4 with step h; returns v at t = 0, sample_every, 2*sample_every, ...
inline std::vector<double> trajectory(const Cell& c, const std::vector<Input>& in, double v0, double t_end,
                                      double h = 0.01, double sample_every = 1.0) {
    const auto per_sample = static_cast<std::size_t>(std::llround(sample_every / h));
    const auto samples = static_cast<std::size_t>(std::llround(t_end / sample_every));
    std::vector<double> out{v0};
    double v = v0;
    std::size_t k = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t j = 0; j < per_sample; ++j, ++k) {
            const double t = static_cast<double>(k) * h;
            const double k1 = dvdt(c, in, t, v);
            const double k2 = dvdt(c, in, t + h / 2, v + h / 2 * k1);
            const double k3 = dvdt(c, in, t + h / 2, v + h / 2 * k2);
            const double k4 = dvdt(c, in, t + h, v + h * k3);
            v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        out.push_back(v);
    }
    return out;
}

inline double analytic_leak(const Cell& c, double v0, double t) {
    return c.v_rest + (v0 - c.v_rest) * std::exp(-t / c.tau_m);
}

} // namespace oracle
