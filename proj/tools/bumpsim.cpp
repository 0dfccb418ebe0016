// bumpsim: simulate | sweep | classify | render
//
// Exit codes: 0 ok, 2 configuration or input error, 3 runtime error,
// 4 sweep finished with failed runs.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bump/bump.hpp"

namespace fs = std::filesystem;
using namespace bump;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitPartial = 4;

/// Failure while reading inputs or writing outputs.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config_path;
    std::string out = ".";
    std::optional<double> bin_width;
    std::optional<std::string> boundary;
    bool seedless = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "JSON configuration file (defaults are used when absent)");
    cmd->add_option("--bin-width", o.bin_width, "classifier bin width in ms");
    cmd->add_option("--boundary", o.boundary, "network boundary")->check(CLI::IsMember({"linear", "ring"}));
    cmd->add_flag("--seedless", o.seedless, "no-op: every run is deterministic, nothing is seeded");
}

ConfigDocument load(const CommonOptions& o) {
    ConfigDocument d = o.config_path.empty() ? ConfigDocument{} : load_config_file(o.config_path);
    if (o.bin_width) d.classifier.bin_width_ms = *o.bin_width;
    if (o.boundary) d.run.topology.boundary = parse_boundary(*o.boundary);
    d.validate();
    return d;
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir);
    }
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string csv_with_digest(const std::string& body, const std::string& digest) {
    return "# config_digest=" + digest + "\n" + body;
}

std::string markdown_with_digest(const std::string& body, const std::string& digest) {
    return "<!-- config_digest=" + digest + " -->\n\n" + body;
}

json manifest_base(const char* command, const json& config) {
    return json{{"format_version", kFormatVersion},
                {"artifact_version", kArtifactVersion},
                {"command", command},
                {"config_digest", digest_of(config)},
                {"config", config}};
}

// ---- simulate ---------------------------------------------------------------

int cmd_simulate(const CommonOptions& o) {
    const ConfigDocument doc = load(o);
    const auto dir = prepare_dir(o.out);
    const auto record = run_simulation(doc.run);
    const auto stim = doc.run.stimulus_program();
    const auto report = analyze_raster(record, stim, doc.classifier);

    std::ostringstream raster;
    write_raster_csv(raster, record, &stim);
    write_file(dir / "raster.csv", raster.str());

    json files = json::array({"raster.csv", "classification.json"});
    if (doc.run.record_voltage) {
        std::ostringstream volt;
        write_voltage_csv(volt, record);
        write_file(dir / "voltage.csv", volt.str());
        files.push_back("voltage.csv");
    }

    json classification = report;
    classification["config_digest"] = record.config_digest;
    write_file(dir / "classification.json", classification.dump(2) + "\n");

    json manifest = manifest_base("simulate", json(doc));
    manifest["run_digest"] = record.config_digest;
    manifest["label"] = report.label;
    manifest["spike_count"] = record.raster.size();
    manifest["files"] = files;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    std::cout << to_string(report.label) << "\n";
    return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepOptions {
    std::optional<std::string> widths;
    std::optional<std::string> weights_ex;
    std::optional<std::string> weights_in;
    bool archive = false;
    std::optional<unsigned> jobs;
};

std::string raster_name(const CellResult& c) {
    return "e" + format_number(c.w_excit) + "_i" + format_number(c.w_inhib) + "_w" + std::to_string(c.width) +
           ".csv";
}

int cmd_sweep(const CommonOptions& o, const SweepOptions& s) {
    ConfigDocument doc = load(o);
    if (s.widths) doc.sweep.widths = parse_width_range(*s.widths);
    if (s.weights_ex) doc.sweep.excit_weights = parse_weight_list(*s.weights_ex);
    if (s.weights_in) doc.sweep.inhib_weights = parse_weight_list(*s.weights_in);
    if (s.archive) doc.sweep.archive_rasters = true;
    if (s.jobs) doc.sweep.parallelism = *s.jobs;
    const SweepConfig config = doc.sweep_config();
    config.validate();
    const auto dir = prepare_dir(o.out);

    const auto report = run_sweep(config);
    const json body = report_json(report);
    const std::string digest = body.at("config_digest");
    write_file(dir / "report.json", body.dump(2) + "\n");
    write_file(dir / "cells.json", json{{"config_digest", digest}, {"cells", body.at("cells")}}.dump(2) + "\n");

    const auto tables = render_tables(report);
    write_file(dir / "table1_ignition.md", markdown_with_digest(tables.ignition_markdown, digest));
    write_file(dir / "table1_ignition.csv", csv_with_digest(tables.ignition_csv, digest));
    write_file(dir / "table2_split2.md", markdown_with_digest(tables.split2_markdown, digest));
    write_file(dir / "table2_split2.csv", csv_with_digest(tables.split2_csv, digest));
    write_file(dir / "table3_multistream.md", markdown_with_digest(tables.multistream_markdown, digest));
    write_file(dir / "table3_multistream.csv", csv_with_digest(tables.multistream_csv, digest));

    json files = json::array({"report.json", "cells.json", "table1_ignition.md", "table1_ignition.csv",
                              "table2_split2.md", "table2_split2.csv", "table3_multistream.md",
                              "table3_multistream.csv"});
    json archived = json::array();
    if (config.archive_rasters) {
        const auto rdir = prepare_dir((dir / "rasters").string());
        for (const auto& cell : report.cells) {
            if (!cell.record) continue;
            const auto run = config.run_for(cell.w_excit, cell.w_inhib, cell.width);
            const auto stim = run.stimulus_program();
            std::ostringstream out;
            write_raster_csv(out, *cell.record, &stim);
            write_file(rdir / raster_name(cell), out.str());
            archived.push_back({{"file", "rasters/" + raster_name(cell)},
                                {"label", cell.label ? json(to_string(*cell.label)) : json(nullptr)},
                                {"config_digest", cell.config_digest}});
        }
    }
    json manifest = manifest_base("sweep", body.at("config"));
    manifest["files"] = files;
    manifest["rasters"] = archived;
    manifest["failed_runs"] = report.failures();
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    std::cout << report.cells.size() << " runs, " << report.failures() << " failed\n";
    if (report.failures() > 0) {
        for (const auto& c : report.cells) {
            if (c.failed()) std::cerr << raster_name(c) << ": " << c.error << "\n";
        }
        return kExitPartial;
    }
    return kExitOk;
}

// ---- classify -----------------------------------------------------------------

struct ClassifyOptions {
    std::string raster;
    std::optional<std::size_t> window_start;
    std::optional<std::size_t> window_width;
    std::string json_out;
};

int cmd_classify(const CommonOptions& o, const ClassifyOptions& c) {
    const ConfigDocument doc = load(o);
    std::istringstream in(read_file(c.raster));
    const auto file = read_raster_csv(in);
    const std::size_t start = c.window_start.value_or(file.window_start.value_or(doc.run.stimulus.window_start));
    const std::size_t width = c.window_width.value_or(file.window_width.value_or(doc.run.stimulus.window_width));
    StimulusProgram stim;
    stim.window_start = start;
    stim.window_width = width;
    const auto report = analyze_raster(file.record, stim, doc.classifier);
    json j = report;
    j["config_digest"] = file.record.config_digest;
    j["source"] = c.raster;
    if (!c.json_out.empty()) {
        write_file(c.json_out, j.dump(2) + "\n");
    }
    std::cout << to_string(report.label) << "\n";
    return kExitOk;
}

// ---- render -------------------------------------------------------------------

struct RenderOptions {
    std::string raster;
    std::string out = "raster.svg";
    std::string voltage;
    std::string voltage_out = "voltage.svg";
};

std::string embed_digest(std::string svg, const std::string& digest) {
    if (digest.empty()) return svg;
    const auto eol = svg.find('\n');
    svg.insert(eol + 1, "<!-- config_digest=" + digest + " -->\n");
    return svg;
}

int cmd_render(const RenderOptions& r) {
    std::istringstream in(read_file(r.raster));
    const auto file = read_raster_csv(in);
    write_file(r.out, embed_digest(render_raster_svg(file.record), file.record.config_digest));
    if (!r.voltage.empty()) {
        const auto text = read_file(r.voltage);
        std::istringstream vin(text);
        const auto table = read_voltage_csv(vin);
        std::string digest;
        if (const auto p = text.find("config_digest="); p != std::string::npos) {
            digest = text.substr(p + 14, text.find_first_of(" \r\n", p) - p - 14);
        }
        write_file(r.voltage_out, embed_digest(render_voltage_svg(table), digest));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bump-attractor LIF network simulator"};
    app.require_subcommand(1);

    CommonOptions sim_opts;
    auto* simulate = app.add_subcommand("simulate", "run one simulation and classify it");
    add_common(simulate, sim_opts);
    simulate->add_option("--out", sim_opts.out, "output directory");

    CommonOptions sweep_opts;
    SweepOptions sweep_extra;
    auto* sweep = app.add_subcommand("sweep", "run the weight x window-width grid and build the tables");
    add_common(sweep, sweep_opts);
    sweep->add_option("--out", sweep_opts.out, "output directory");
    sweep->add_option("--widths", sweep_extra.widths, "window widths, a..b or a comma list");
    sweep->add_option("--weights-ex", sweep_extra.weights_ex, "excitatory weights, comma list");
    sweep->add_option("--weights-in", sweep_extra.weights_in, "inhibitory weights, comma list");
    sweep->add_flag("--archive-rasters", sweep_extra.archive, "write every run's raster CSV");
    sweep->add_option("--jobs", sweep_extra.jobs, "worker threads (0: one per core)");

    CommonOptions classify_opts;
    ClassifyOptions classify_extra;
    auto* classify = app.add_subcommand("classify", "classify an existing raster CSV");
    add_common(classify, classify_opts);
    classify->add_option("raster", classify_extra.raster, "raster CSV")->required();
    classify->add_option("--window-start", classify_extra.window_start, "stimulated window start");
    classify->add_option("--window-width", classify_extra.window_width, "stimulated window width");
    classify->add_option("--out", classify_extra.json_out, "write the classification report JSON here");

    RenderOptions render_opts;
    auto* render = app.add_subcommand("render", "draw a raster (and optionally a voltage heat map) as SVG");
    render->add_option("raster", render_opts.raster, "raster CSV")->required();
    render->add_option("--out", render_opts.out, "raster SVG path");
    render->add_option("--voltage", render_opts.voltage, "voltage CSV");
    render->add_option("--voltage-out", render_opts.voltage_out, "heat map SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*simulate) return cmd_simulate(sim_opts);
        if (*sweep) return cmd_sweep(sweep_opts, sweep_extra);
        if (*classify) return cmd_classify(classify_opts, classify_extra);
        if (*render) return cmd_render(render_opts);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
