#pragma once

// Deterministic spike sources driving a contiguous window of neurons, one
// source per neuron. Every source shares the same spike-time schedule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bump/error.hpp"

namespace bump {

/// Source fires at start, start + period, ... while t < stop (and t < run duration).
struct PeriodicSchedule {
    double period_ms = 10.0;
    double start_ms = 1.0;
    double stop_ms = 300.0;

    bool operator==(const PeriodicSchedule&) const = default;
};

struct ExplicitSchedule {
    std::vector<double> times_ms;

    bool operator==(const ExplicitSchedule&) const = default;
};

using ScheduleSpec = std::variant<PeriodicSchedule, ExplicitSchedule>;

/// Spike times of one source, strictly increasing and all in [0, duration).
inline std::vector<double> expand_schedule(const ScheduleSpec& schedule, double duration_ms) {
    detail::require(duration_ms > 0.0, "schedule: duration must be positive");
    std::vector<double> times;
    if (const auto* p = std::get_if<PeriodicSchedule>(&schedule)) {
        detail::require(p->period_ms > 0.0, "schedule: period_ms must be positive");
        detail::require(p->start_ms >= 0.0, "schedule: start_ms must be non-negative");
        detail::require(p->stop_ms >= p->start_ms, "schedule: stop_ms must not precede start_ms");
        const double end = std::min(p->stop_ms, duration_ms);
        // multiply rather than accumulate so long schedules stay exact on the grid
        for (std::size_t k = 0;; ++k) {
            const double t = p->start_ms + static_cast<double>(k) * p->period_ms;
            if (t >= end) {
                break;
            }
            times.push_back(t);
        }
    } else {
        times = std::get<ExplicitSchedule>(schedule).times_ms;
        for (std::size_t k = 0; k < times.size(); ++k) {
            detail::require(std::isfinite(times[k]) && times[k] >= 0.0 && times[k] < duration_ms,
                            "schedule: spike times must lie in [0, duration)");
            detail::require(k == 0 || times[k] > times[k - 1],
                            "schedule: spike times must be strictly increasing");
        }
    }
    return times;
}

/// Placement of the stimulus as it appears in a run configuration. An unset
/// input_weight means "use the run's excitatory weight".
struct StimulusSpec {
    std::size_t window_start = 30;
    std::size_t window_width = 25;
    ScheduleSpec schedule = PeriodicSchedule{};
    std::optional<double> input_weight;

    bool operator==(const StimulusSpec&) const = default;
};

struct StimulusProgram {
    std::size_t window_start = 30;
    std::size_t window_width = 1;
    std::vector<double> spike_times;
    double input_weight = 0.0;

    bool operator==(const StimulusProgram&) const = default;

    bool drives(std::size_t neuron) const {
        return neuron >= window_start && neuron < window_start + window_width;
    }
};

struct WindowPlacement {
    std::size_t window_start = 30;
    std::size_t network_size = 100;
    double duration_ms = 300.0;
};

inline StimulusProgram build_window_stimulus(std::size_t width, const ScheduleSpec& schedule,
                                             double input_weight, const WindowPlacement& at = {}) {
    detail::require(width >= 1, "stimulus: window width must be at least 1");
    detail::require(at.window_start + width <= at.network_size,
                    "stimulus: window [" + std::to_string(at.window_start) + ", " +
                        std::to_string(at.window_start + width) + ") escapes a network of " +
                        std::to_string(at.network_size) + " neurons");
    detail::require(input_weight >= 0.0 && std::isfinite(input_weight),
                    "stimulus: input weight must be finite and non-negative");
    return {at.window_start, width, expand_schedule(schedule, at.duration_ms), input_weight};
}

struct StimulusEvent {
    std::size_t neuron;
    double weight;

    bool operator==(const StimulusEvent&) const = default;
};

/// Events whose spike time falls in [t0, t1), ordered by neuron index.
inline std::vector<StimulusEvent> events_in(const StimulusProgram& program, double t0, double t1) {
    std::size_t due = 0;
    for (double t : program.spike_times) {
        due += (t >= t0 && t < t1) ? 1 : 0;
    }
    std::vector<StimulusEvent> events;
    events.reserve(due * program.window_width);
    for (std::size_t i = 0; i < program.window_width; ++i) {
        for (std::size_t k = 0; k < due; ++k) {
            events.push_back({program.window_start + i, program.input_weight});
        }
    }
    return events;
}

/// Events scheduled exactly at `t` (within 1e-9 ms).
inline std::vector<StimulusEvent> events_at(const StimulusProgram& program, double t) {
    constexpr double eps = 1e-9;
    return events_in(program, t - eps, t + eps);
}

} // namespace bump
