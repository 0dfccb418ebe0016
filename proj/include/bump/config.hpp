#pragma once

// Configuration document shared by the command line tools:
//
//   {"neuron": {...}, "topology": {...}, "stimulus": {...},
//    "run": {"duration_ms", "dt_ms", "conductance_scale", "record_voltage", "voltage_probes"},
//    "classifier": {...}, "sweep": {"weights_ex", "weights_in", "widths", "parallelism", "archive_rasters"}}
//
// Every section is optional; missing fields keep their defaults.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bump/json_io.hpp"
#include "bump/sweep.hpp"

namespace bump {

struct ConfigDocument {
    RunConfig run;
    ClassifierParams classifier;
    SweepConfig sweep;

    /// The sweep as configured, using this document's model, run and classifier settings.
    SweepConfig sweep_config() const {
        SweepConfig s = sweep;
        s.base = run;
        s.base.record_voltage = false;
        s.classifier = classifier;
        return s;
    }

    void validate() const {
        run.validate();
        classifier.validate();
    }
};

inline void to_json(json& j, const ConfigDocument& d) {
    j = json{{"neuron", d.run.neuron},
             {"topology", d.run.topology},
             {"stimulus", d.run.stimulus},
             {"run",
              {{"duration_ms", d.run.duration_ms},
               {"dt_ms", d.run.dt_ms},
               {"conductance_scale", d.run.conductance_scale},
               {"record_voltage", d.run.record_voltage},
               {"voltage_probes", d.run.voltage_probes}}},
             {"classifier", d.classifier},
             {"sweep",
              {{"weights_ex", d.sweep.excit_weights},
               {"weights_in", d.sweep.inhib_weights},
               {"widths", d.sweep.widths},
               {"parallelism", d.sweep.parallelism},
               {"archive_rasters", d.sweep.archive_rasters}}}};
}

inline ConfigDocument read_config_document(const json& j) {
    ConfigDocument d;
    detail::ObjectReader r(j, "config");
    if (const json* n = r.child("neuron")) d.run.neuron = read_neuron(*n);
    if (const json* t = r.child("topology")) d.run.topology = read_topology(*t);
    if (const json* s = r.child("stimulus")) d.run.stimulus = read_stimulus(*s);
    if (const json* run = r.child("run")) {
        detail::ObjectReader rr(*run, "run");
        rr.get("duration_ms", d.run.duration_ms);
        rr.get("dt_ms", d.run.dt_ms);
        rr.get("conductance_scale", d.run.conductance_scale);
        rr.get("record_voltage", d.run.record_voltage);
        rr.get("voltage_probes", d.run.voltage_probes);
        rr.finish();
    }
    if (const json* c = r.child("classifier")) d.classifier = read_classifier(*c);
    if (const json* s = r.child("sweep")) read_sweep_section(*s, d.sweep);
    r.finish();
    return d;
}

inline ConfigDocument parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return read_config_document(j);
}

inline ConfigDocument load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace bump
