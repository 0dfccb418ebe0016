#pragma once

// JSON forms of the configuration and result types. Readers reject unknown
// keys and leave absent keys at their defaults.

#include <cstdint>
#include <cstdio>
#include <set>
#include <type_traits>
#include <string>

#include <json.hpp>

#include "bump/analysis.hpp"
#include "bump/error.hpp"
#include "bump/neuron.hpp"
#include "bump/run_config.hpp"
#include "bump/stimulus.hpp"
#include "bump/topology.hpp"

namespace bump {

using json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

namespace detail {

/// Reads fields of one JSON object and reports keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) {
            throw ParseError(where_ + ": expected a JSON object");
        }
    }

    ObjectReader(const ObjectReader&) = delete;
    ObjectReader& operator=(const ObjectReader&) = delete;

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (auto it = j_.find(key); it != j_.end()) {
            try {
                reject_negative<T>(*it, key);
                out = it->template get<T>();
            } catch (const json::exception& e) {
                throw ParseError(where_ + "." + key + ": " + e.what());
            }
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void finish() {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) {
                throw ParseError(where_ + ": unknown key '" + key + "'");
            }
        }
    }

private:
    template <class T>
    static constexpr bool unsigned_like = std::is_unsigned_v<T> && !std::is_same_v<T, bool>;

    template <class T>
    void reject_negative(const json& v, const char* key) const {
        if constexpr (unsigned_like<T>) {
            if (!v.is_number_unsigned()) {
                throw ParseError(where_ + "." + key + ": expected a non-negative integer");
            }
        } else if constexpr (requires { typename T::value_type; } && !std::is_same_v<T, std::string>) {
            if constexpr (unsigned_like<typename T::value_type>) {
                if (!v.is_array()) {
                    throw ParseError(where_ + "." + key + ": expected an array");
                }
                for (const auto& e : v) {
                    if (!e.is_number_unsigned()) {
                        throw ParseError(where_ + "." + key + ": expected non-negative integers");
                    }
                }
            }
        }
    }

    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

} // namespace detail

// ---- neuron ---------------------------------------------------------------

inline void to_json(json& j, const NeuronParameters& p) {
    j = json{{"c_m", p.c_m},           {"v_rest", p.v_rest},         {"v_reset", p.v_reset},
             {"v_thresh", p.v_thresh}, {"e_rev_ex", p.e_rev_ex},     {"e_rev_in", p.e_rev_in},
             {"tau_m", p.tau_m},       {"tau_syn_ex", p.tau_syn_ex}, {"tau_syn_in", p.tau_syn_in},
             {"tau_refract", p.tau_refract}};
}

inline NeuronParameters read_neuron(const json& j, const std::string& where = "neuron") {
    NeuronParameters p;
    detail::ObjectReader r(j, where);
    r.get("c_m", p.c_m);
    r.get("v_rest", p.v_rest);
    r.get("v_reset", p.v_reset);
    r.get("v_thresh", p.v_thresh);
    r.get("e_rev_ex", p.e_rev_ex);
    r.get("e_rev_in", p.e_rev_in);
    r.get("tau_m", p.tau_m);
    r.get("tau_syn_ex", p.tau_syn_ex);
    r.get("tau_syn_in", p.tau_syn_in);
    r.get("tau_refract", p.tau_refract);
    r.finish();
    return p;
}

// ---- topology -------------------------------------------------------------

inline void to_json(json& j, const TopologySpec& t) {
    j = json{{"n", t.n},
             {"excit_reach", t.excit_reach},
             {"inhib_reach_lo", t.inhib_reach_lo},
             {"inhib_reach_hi", t.inhib_reach_hi},
             {"w_excit", t.w_excit},
             {"w_inhib", t.w_inhib},
             {"boundary", to_string(t.boundary)}};
}

inline TopologySpec read_topology(const json& j, const std::string& where = "topology") {
    TopologySpec t;
    detail::ObjectReader r(j, where);
    r.get("n", t.n);
    r.get("excit_reach", t.excit_reach);
    r.get("inhib_reach_lo", t.inhib_reach_lo);
    r.get("inhib_reach_hi", t.inhib_reach_hi);
    r.get("w_excit", t.w_excit);
    r.get("w_inhib", t.w_inhib);
    std::string boundary = to_string(t.boundary);
    r.get("boundary", boundary);
    try {
        t.boundary = parse_boundary(boundary);
    } catch (const ParameterError& e) {
        throw ParseError(where + ".boundary: " + e.what());
    }
    r.finish();
    return t;
}

// ---- stimulus -------------------------------------------------------------

inline void to_json(json& j, const ScheduleSpec& s) {
    if (const auto* p = std::get_if<PeriodicSchedule>(&s)) {
        j = json{{"period_ms", p->period_ms}, {"start_ms", p->start_ms}, {"stop_ms", p->stop_ms}};
    } else {
        j = json{{"times_ms", std::get<ExplicitSchedule>(s).times_ms}};
    }
}

inline ScheduleSpec read_schedule(const json& j, const std::string& where = "schedule") {
    if (j.is_object() && j.contains("times_ms")) {
        ExplicitSchedule e;
        detail::ObjectReader r(j, where);
        r.get("times_ms", e.times_ms);
        r.finish();
        return e;
    }
    PeriodicSchedule p;
    detail::ObjectReader r(j, where);
    r.get("period_ms", p.period_ms);
    r.get("start_ms", p.start_ms);
    r.get("stop_ms", p.stop_ms);
    r.finish();
    return p;
}

inline void to_json(json& j, const StimulusSpec& s) {
    j = json{{"window_start", s.window_start},
             {"window_width", s.window_width},
             {"schedule", s.schedule},
             {"input_weight", s.input_weight ? json(*s.input_weight) : json(nullptr)}};
}

inline StimulusSpec read_stimulus(const json& j, const std::string& where = "stimulus") {
    StimulusSpec s;
    detail::ObjectReader r(j, where);
    r.get("window_start", s.window_start);
    r.get("window_width", s.window_width);
    if (const json* sched = r.child("schedule")) {
        s.schedule = read_schedule(*sched, where + ".schedule");
    }
    if (const json* w = r.child("input_weight"); w && !w->is_null()) {
        if (!w->is_number()) {
            throw ParseError(where + ".input_weight: expected a number or null");
        }
        s.input_weight = w->get<double>();
    }
    r.finish();
    return s;
}

inline void to_json(json& j, const StimulusProgram& p) {
    j = json{{"window_start", p.window_start},
             {"window_width", p.window_width},
             {"spike_times_ms", p.spike_times},
             {"input_weight", p.input_weight}};
}

// ---- run ------------------------------------------------------------------

inline void to_json(json& j, const RunConfig& c) {
    j = json{{"neuron", c.neuron},
             {"topology", c.topology},
             {"stimulus", c.stimulus},
             {"duration_ms", c.duration_ms},
             {"dt_ms", c.dt_ms},
             {"conductance_scale", c.conductance_scale},
             {"record_voltage", c.record_voltage},
             {"voltage_probes", c.voltage_probes}};
}

inline RunConfig read_run_config(const json& j, const std::string& where = "run") {
    RunConfig c;
    detail::ObjectReader r(j, where);
    if (const json* n = r.child("neuron")) c.neuron = read_neuron(*n, where + ".neuron");
    if (const json* t = r.child("topology")) c.topology = read_topology(*t, where + ".topology");
    if (const json* s = r.child("stimulus")) c.stimulus = read_stimulus(*s, where + ".stimulus");
    r.get("duration_ms", c.duration_ms);
    r.get("dt_ms", c.dt_ms);
    r.get("conductance_scale", c.conductance_scale);
    r.get("record_voltage", c.record_voltage);
    r.get("voltage_probes", c.voltage_probes);
    r.finish();
    return c;
}

/// FNV-1a (64 bit) of the canonical JSON form, as 16 hex digits.
inline std::string digest_of(const json& j) {
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string config_digest(const RunConfig& c) { return digest_of(json(c)); }

// ---- analysis -------------------------------------------------------------

inline void to_json(json& j, const ClassifierParams& p) {
    j = json{{"bin_width_ms", p.bin_width_ms},
             {"gap_tolerance", p.gap_tolerance},
             {"drift_max", p.drift_max},
             {"divergence_slope_min", p.divergence_slope_min},
             {"divergence_fraction", p.divergence_fraction},
             {"settle_ms", p.settle_ms},
             {"evaluation_divisor", p.evaluation_divisor}};
}

inline ClassifierParams read_classifier(const json& j, const std::string& where = "classifier") {
    ClassifierParams p;
    detail::ObjectReader r(j, where);
    r.get("bin_width_ms", p.bin_width_ms);
    r.get("gap_tolerance", p.gap_tolerance);
    r.get("drift_max", p.drift_max);
    r.get("divergence_slope_min", p.divergence_slope_min);
    r.get("divergence_fraction", p.divergence_fraction);
    r.get("settle_ms", p.settle_ms);
    r.get("evaluation_divisor", p.evaluation_divisor);
    r.finish();
    return p;
}

inline void to_json(json& j, const PatternClass& c) { j = to_string(c); }

inline void to_json(json& j, const Threshold& t) {
    j = json{{"width", t.width ? json(*t.width) : json(nullptr)},
             {"with_divergence", t.with_divergence},
             {"warnings", t.warnings}};
}

inline void to_json(json& j, const ClassificationReport& r) {
    j = json{{"label", r.label},
             {"ignited", r.ignited},
             {"stream_count", r.stream_count},
             {"divergence", r.divergence},
             {"divergence_slope", r.divergence_slope},
             {"final_active_fraction", r.final_active_fraction},
             {"centroid_drift", r.centroid_drift},
             {"evaluation_first_bin", r.evaluation_first_bin},
             {"diagnostics",
              {{"cluster_counts", r.track.cluster_counts},
               {"centroids", r.track.centroids},
               {"cluster_widths", r.track.widths},
               {"active_counts", r.active_counts}}},
             {"classifier_params", r.params}};
}

} // namespace bump
