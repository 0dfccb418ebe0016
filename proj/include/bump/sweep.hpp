#pragma once

// Full grid of (excitatory weight, inhibitory weight, window width) runs,
// classified and folded into the ignition, 2-stream and 3/4-stream tables.

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bump/analysis.hpp"
#include "bump/csv_io.hpp"
#include "bump/engine.hpp"
#include "bump/json_io.hpp"
#include "bump/run_config.hpp"

namespace bump {

inline std::vector<double> default_weight_grid() { return {0.05, 0.06, 0.07, 0.08, 0.09, 0.10}; }

/// Parses "a..b" (inclusive) or a comma list of widths.
inline std::vector<std::size_t> parse_width_range(const std::string& text) {
    std::vector<std::size_t> out;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const auto lo = detail::parse_index(detail::trim(std::string_view(text).substr(0, dots)), 0);
        const auto hi = detail::parse_index(detail::trim(std::string_view(text).substr(dots + 2)), 0);
        detail::require(lo <= hi, "width range '" + text + "' is empty");
        for (std::size_t w = lo; w <= hi; ++w) {
            out.push_back(w);
        }
        return out;
    }
    for (auto cell : detail::split_commas(text)) {
        out.push_back(detail::parse_index(cell, 0));
    }
    return out;
}

inline std::vector<double> parse_weight_list(const std::string& text) {
    std::vector<double> out;
    for (auto cell : detail::split_commas(text)) {
        out.push_back(detail::parse_double(cell, 0));
    }
    return out;
}

struct SweepConfig {
    std::vector<double> excit_weights = default_weight_grid();
    std::vector<double> inhib_weights = default_weight_grid();
    std::vector<std::size_t> widths = default_widths();
    RunConfig base = [] {
        RunConfig c;
        c.record_voltage = false;
        return c;
    }();
    ClassifierParams classifier;
    unsigned parallelism = 0;  // 0: one worker per hardware thread
    bool archive_rasters = false;

    std::size_t planned_runs() const { return excit_weights.size() * inhib_weights.size() * widths.size(); }

    RunConfig run_for(double w_excit, double w_inhib, std::size_t width) const {
        RunConfig c = base;
        c.topology.w_excit = w_excit;
        c.topology.w_inhib = w_inhib;
        c.stimulus.window_width = width;
        return c;
    }

    void validate() const {
        using detail::require;
        require(!excit_weights.empty() && !inhib_weights.empty(), "sweep: weight grids must be nonempty");
        require(!widths.empty(), "sweep: width set must be nonempty");
        for (std::size_t k = 0; k < widths.size(); ++k) {
            require(k == 0 || widths[k] > widths[k - 1], "sweep: widths must be strictly increasing");
        }
        for (const auto* grid : {&excit_weights, &inhib_weights}) {
            for (std::size_t k = 0; k < grid->size(); ++k) {
                require((*grid)[k] >= 0.0, "sweep: weights must be non-negative");
                require(k == 0 || (*grid)[k] > (*grid)[k - 1], "sweep: weight grids must be strictly increasing");
            }
        }
        classifier.validate();
        // the widest window is the one that can escape the network
        run_for(excit_weights.front(), inhib_weights.front(), widths.back()).validate();
        run_for(excit_weights.front(), inhib_weights.front(), widths.front()).validate();
    }
};

struct CellResult {
    double w_excit = 0.0;
    double w_inhib = 0.0;
    std::size_t width = 0;
    std::optional<PatternClass> label;  // empty when the run failed
    std::size_t stream_count = 0;
    bool divergence = false;
    std::size_t spike_count = 0;
    std::optional<double> min_isi_ms;
    std::string config_digest;
    std::string error;
    std::optional<SimulationRecord> record;  // only with archive_rasters

    bool failed() const { return !label.has_value(); }
};

/// Per weight pair summary derived from its cells alone.
struct WeightCell {
    double w_excit = 0.0;
    double w_inhib = 0.0;
    bool complete = true;
    Threshold ignition;
    Threshold split2;
    Threshold split3;
    Threshold split4;
    bool divergent_dominant = false;  // first Split/Divergent class met with growing width is Divergent
};

struct SweepReport {
    SweepConfig config;
    std::vector<CellResult> cells;            // excit-major, then inhib, then width
    std::vector<std::vector<WeightCell>> grid;  // [excit][inhib]

    std::size_t failures() const {
        std::size_t f = 0;
        for (const auto& c : cells) {
            f += c.failed() ? 1 : 0;
        }
        return f;
    }

    const CellResult& cell(std::size_t ie, std::size_t ii, std::size_t iw) const {
        const auto& cfg = config;
        return cells.at((ie * cfg.inhib_weights.size() + ii) * cfg.widths.size() + iw);
    }
};

inline CellResult run_cell(const SweepConfig& config, double w_excit, double w_inhib, std::size_t width) {
    CellResult cell;
    cell.w_excit = w_excit;
    cell.w_inhib = w_inhib;
    cell.width = width;
    try {
        const RunConfig run = config.run_for(w_excit, w_inhib, width);
        auto record = run_simulation(run);
        const auto report = analyze_raster(record, run.stimulus_program(), config.classifier);
        cell.label = report.label;
        cell.stream_count = report.stream_count;
        cell.divergence = report.divergence;
        cell.spike_count = record.raster.size();
        cell.min_isi_ms = min_interspike_interval(record);
        cell.config_digest = record.config_digest;
        if (config.archive_rasters) {
            cell.record = std::move(record);
        }
    } catch (const std::exception& e) {
        cell.label.reset();
        cell.error = e.what();
    }
    return cell;
}

inline WeightCell summarize_weight_pair(const SweepConfig& config, std::span<const CellResult> cells) {
    WeightCell out;
    out.w_excit = cells.front().w_excit;
    out.w_inhib = cells.front().w_inhib;
    WidthResults results;
    for (const auto& c : cells) {
        if (c.failed()) {
            out.complete = false;
            return out;
        }
        results[c.width] = *c.label;
    }
    out.ignition = ignition_threshold(results, config.widths);
    out.split2 = split_threshold(results, 2, config.widths);
    out.split3 = split_threshold(results, 3, config.widths);
    out.split4 = split_threshold(results, 4, config.widths);
    using K = PatternClass::Kind;
    for (const auto& [w, c] : results) {
        if (c.kind == K::divergent) {
            out.divergent_dominant = true;
            break;
        }
        if (c.kind == K::split || c.kind == K::split_with_divergence) {
            break;
        }
    }
    return out;
}

/// Tables are a pure function of the per-cell grid.
inline SweepReport assemble_report(SweepConfig config, std::vector<CellResult> cells) {
    SweepReport report{std::move(config), std::move(cells), {}};
    const auto& cfg = report.config;
    detail::require(report.cells.size() == cfg.planned_runs(), "sweep: cell count does not match the grid");
    const std::size_t nw = cfg.widths.size();
    report.grid.assign(cfg.excit_weights.size(), std::vector<WeightCell>(cfg.inhib_weights.size()));
    for (std::size_t ie = 0; ie < cfg.excit_weights.size(); ++ie) {
        for (std::size_t ii = 0; ii < cfg.inhib_weights.size(); ++ii) {
            const std::size_t first = (ie * cfg.inhib_weights.size() + ii) * nw;
            report.grid[ie][ii] =
                summarize_weight_pair(cfg, std::span<const CellResult>(report.cells).subspan(first, nw));
        }
    }
    return report;
}

inline SweepReport run_sweep(const SweepConfig& config) {
    config.validate();
    struct Job {
        double we;
        double wi;
        std::size_t width;
    };
    std::vector<Job> jobs;
    jobs.reserve(config.planned_runs());
    for (double we : config.excit_weights) {
        for (double wi : config.inhib_weights) {
            for (std::size_t w : config.widths) {
                jobs.push_back({we, wi, w});
            }
        }
    }

    std::vector<CellResult> cells(jobs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            cells[k] = run_cell(config, jobs[k].we, jobs[k].wi, jobs[k].width);
        }
    };
    unsigned workers = config.parallelism ? config.parallelism : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back(worker);
        }
    }
    return assemble_report(config, std::move(cells));
}

// ---- serialization --------------------------------------------------------

inline void to_json(json& j, const SweepConfig& c) {
    j = json{{"weights_ex", c.excit_weights},
             {"weights_in", c.inhib_weights},
             {"widths", c.widths},
             {"base", c.base},
             {"classifier", c.classifier},
             {"archive_rasters", c.archive_rasters}};
}

/// Reads the "sweep" section; `base` and `classifier` come from elsewhere in
/// the document.
inline void read_sweep_section(const json& j, SweepConfig& c, const std::string& where = "sweep") {
    detail::ObjectReader r(j, where);
    r.get("weights_ex", c.excit_weights);
    r.get("weights_in", c.inhib_weights);
    if (const json* w = r.child("widths")) {
        if (w->is_string()) {
            try {
                c.widths = parse_width_range(w->get<std::string>());
            } catch (const std::exception& e) {
                throw ParseError(where + ".widths: " + e.what());
            }
        } else {
            r.get("widths", c.widths);
        }
    }
    r.get("parallelism", c.parallelism);
    r.get("archive_rasters", c.archive_rasters);
    r.finish();
}

inline void to_json(json& j, const CellResult& c) {
    j = json{{"w_excit", c.w_excit},
             {"w_inhib", c.w_inhib},
             {"width", c.width},
             {"label", c.label ? json(to_string(*c.label)) : json(nullptr)},
             {"stream_count", c.stream_count},
             {"divergence", c.divergence},
             {"spike_count", c.spike_count},
             {"min_isi_ms", c.min_isi_ms ? json(*c.min_isi_ms) : json(nullptr)},
             {"config_digest", c.config_digest}};
    if (c.failed()) {
        j["error"] = c.error;
    }
}

inline void to_json(json& j, const WeightCell& w) {
    j = json{{"w_excit", w.w_excit},   {"w_inhib", w.w_inhib}, {"complete", w.complete},
             {"ignition", w.ignition}, {"split2", w.split2},   {"split3", w.split3},
             {"split4", w.split4},     {"divergent_dominant", w.divergent_dominant}};
}

/// Report body. Contains no wall-clock data, so equal configurations give
/// byte-identical dumps.
inline json report_json(const SweepReport& r) {
    json grid = json::array();
    for (const auto& row : r.grid) {
        for (const auto& w : row) {
            grid.push_back(w);
        }
    }
    const json config = r.config;
    return json{{"format_version", kFormatVersion},
                {"artifact_version", kArtifactVersion},
                {"config_digest", digest_of(config)},
                {"config", config},
                {"classifier_params", r.config.classifier},
                {"planned_runs", r.config.planned_runs()},
                {"failed_runs", r.failures()},
                {"weight_pairs", grid},
                {"cells", r.cells}};
}

// ---- tables ---------------------------------------------------------------

struct RenderedTables {
    std::string ignition_markdown;
    std::string ignition_csv;
    std::string split2_markdown;
    std::string split2_csv;
    std::string multistream_markdown;
    std::string multistream_csv;
};

inline std::string render_threshold(const Threshold& t, const char* absent) {
    if (!t.width) {
        return absent;
    }
    return std::to_string(*t.width) + (t.with_divergence ? "(+D)" : "");
}

/// "/" never ignites, an integer threshold otherwise.
inline std::string render_ignition_cell(const WeightCell& w) {
    if (!w.complete) return "err";
    return render_threshold(w.ignition, "/");
}

/// "/" never ignites, "D" divergent-dominant, "13" or "15(+D)" for a 2-stream
/// threshold, "na" when ignited but never split in two.
inline std::string render_split2_cell(const WeightCell& w) {
    if (!w.complete) return "err";
    if (!w.ignition.width) return "/";
    if (w.divergent_dominant) return "D";
    return render_threshold(w.split2, "na");
}

inline RenderedTables render_tables(const SweepReport& r) {
    const auto& cfg = r.config;
    RenderedTables out;

    const auto grid_table = [&](auto cell_text, std::string& md, std::string& csv, const char* corner) {
        std::ostringstream m;
        std::ostringstream c;
        m << "| " << corner << " |";
        c << corner;
        for (double wi : cfg.inhib_weights) {
            m << ' ' << format_number(wi) << " |";
            c << ',' << format_number(wi);
        }
        m << "\n|---|";
        for (std::size_t k = 0; k < cfg.inhib_weights.size(); ++k) {
            m << "---|";
        }
        m << '\n';
        c << '\n';
        for (std::size_t ie = 0; ie < cfg.excit_weights.size(); ++ie) {
            m << "| " << format_number(cfg.excit_weights[ie]) << " |";
            c << format_number(cfg.excit_weights[ie]);
            for (std::size_t ii = 0; ii < cfg.inhib_weights.size(); ++ii) {
                const auto text = cell_text(r.grid[ie][ii]);
                m << ' ' << text << " |";
                c << ',' << text;
            }
            m << '\n';
            c << '\n';
        }
        md = m.str();
        csv = c.str();
    };
    grid_table(render_ignition_cell, out.ignition_markdown, out.ignition_csv, "E\\I");
    grid_table(render_split2_cell, out.split2_markdown, out.split2_csv, "E\\I");

    std::ostringstream m;
    std::ostringstream c;
    m << "| E-I weights | 3S | 4S |\n|---|---|---|\n";
    c << "weights,3S,4S\n";
    for (const auto& row : r.grid) {
        for (const auto& w : row) {
            if (!w.complete || (!w.split3.width && !w.split4.width)) {
                continue;
            }
            const auto pair = format_number(w.w_excit) + "-" + format_number(w.w_inhib);
            const auto s3 = render_threshold(w.split3, "na");
            const auto s4 = render_threshold(w.split4, "na");
            m << "| " << pair << " | " << s3 << " | " << s4 << " |\n";
            c << pair << ',' << s3 << ',' << s4 << '\n';
        }
    }
    out.multistream_markdown = m.str();
    out.multistream_csv = c.str();
    return out;
}

} // namespace bump
