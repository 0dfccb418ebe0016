#pragma once

// Plain-text formats:
//   matrix  : n lines of n comma-separated signed weights
//   raster  : "# bump-raster v1 key=value ..." then "neuron_id,time_ms" rows
//   voltage : "# bump-voltage v1 key=value ..." then "time_ms,v_<i>,..." rows
// Numbers are written in shortest round-trip form.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "bump/error.hpp"
#include "bump/record.hpp"
#include "bump/stimulus.hpp"
#include "bump/topology.hpp"

namespace bump {

inline std::string format_number(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc{} ? end : buf);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) {
            return out;
        }
        pos = comma + 1;
    }
}

inline double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError("expected a number, got '" + std::string(s) + "'", line);
    }
    return v;
}

inline std::size_t parse_index(std::string_view s, std::size_t line) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'", line);
    }
    return v;
}

/// "# <tag> v1 k=v k=v" -> map; throws on a wrong tag or version.
inline std::map<std::string, std::string> parse_meta(std::string_view line, std::string_view tag,
                                                     std::size_t lineno) {
    std::istringstream in{std::string(line.substr(1))};
    std::string word;
    in >> word;
    if (word != tag) {
        throw ParseError("expected '# " + std::string(tag) + "' header", lineno);
    }
    in >> word;
    if (word != "v1") {
        throw ParseError("unsupported format version '" + word + "'", lineno);
    }
    std::map<std::string, std::string> meta;
    while (in >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) {
            throw ParseError("malformed header field '" + word + "'", lineno);
        }
        meta[word.substr(0, eq)] = word.substr(eq + 1);
    }
    return meta;
}

} // namespace detail

// ---- connectivity matrix --------------------------------------------------

inline void write_matrix_csv(std::ostream& out, const ConnectivityMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto row = m.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? "," : "") << format_number(row[j]);
        }
        out << '\n';
    }
}

inline ConnectivityMatrix read_matrix_csv(std::istream& in) {
    std::vector<double> entries;
    std::size_t n = 0;
    std::size_t rows = 0;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto cells = detail::split_commas(line);
        if (rows == 0) {
            n = cells.size();
        } else if (cells.size() != n) {
            throw ParseError("expected " + std::to_string(n) + " columns, got " + std::to_string(cells.size()),
                             lineno);
        }
        for (auto c : cells) {
            entries.push_back(detail::parse_double(c, lineno));
        }
        ++rows;
    }
    if (rows != n) {
        throw ParseError("matrix is " + std::to_string(rows) + "x" + std::to_string(n) + ", expected square");
    }
    try {
        return ConnectivityMatrix(n, std::move(entries));
    } catch (const ParameterError& e) {
        throw ParseError(e.what());
    }
}

// ---- raster ---------------------------------------------------------------

/// A raster as stored on disk, with the stimulus window when the header has one.
struct RasterFile {
    SimulationRecord record;
    std::optional<std::size_t> window_start;
    std::optional<std::size_t> window_width;
};

inline void write_raster_csv(std::ostream& out, const SimulationRecord& rec,
                             const StimulusProgram* stim = nullptr) {
    out << "# bump-raster v1 n=" << rec.n << " duration_ms=" << format_number(rec.duration_ms)
        << " dt_ms=" << format_number(rec.dt_ms);
    if (stim) {
        out << " window_start=" << stim->window_start << " window_width=" << stim->window_width;
    }
    if (!rec.config_digest.empty()) {
        out << " config_digest=" << rec.config_digest;
    }
    out << "\nneuron_id,time_ms\n";
    for (const auto& s : rec.raster) {
        out << s.neuron << ',' << format_number(s.time_ms) << '\n';
    }
}

inline RasterFile read_raster_csv(std::istream& in) {
    RasterFile file;
    auto& rec = file.record;
    std::map<std::string, std::string> meta;
    bool header_seen = false;
    std::string line;
    std::size_t lineno = 0;
    std::size_t max_neuron = 0;
    double max_time = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = detail::trim(line);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '#') {
            if (!header_seen && meta.empty()) {
                meta = detail::parse_meta(text, "bump-raster", lineno);
            }
            continue;
        }
        if (!header_seen) {
            if (text != "neuron_id,time_ms") {
                throw ParseError("expected header 'neuron_id,time_ms'", lineno);
            }
            header_seen = true;
            continue;
        }
        const auto cells = detail::split_commas(text);
        if (cells.size() != 2) {
            throw ParseError("expected 2 columns, got " + std::to_string(cells.size()), lineno);
        }
        const Spike s{detail::parse_index(cells[0], lineno), detail::parse_double(cells[1], lineno)};
        if (s.time_ms < 0.0) {
            throw ParseError("negative spike time", lineno);
        }
        max_neuron = std::max(max_neuron, s.neuron);
        max_time = std::max(max_time, s.time_ms);
        rec.raster.push_back(s);
    }
    if (!header_seen) {
        throw ParseError("missing 'neuron_id,time_ms' header", lineno ? lineno : 1);
    }

    const auto number = [&](const char* key) -> std::optional<double> {
        auto it = meta.find(key);
        return it == meta.end() ? std::nullopt : std::optional(detail::parse_double(it->second, 1));
    };
    const auto index = [&](const char* key) -> std::optional<std::size_t> {
        auto it = meta.find(key);
        return it == meta.end() ? std::nullopt : std::optional(detail::parse_index(it->second, 1));
    };
    rec.n = index("n").value_or(rec.raster.empty() ? 0 : max_neuron + 1);
    rec.dt_ms = number("dt_ms").value_or(1.0);
    rec.duration_ms = number("duration_ms").value_or(std::floor(max_time / rec.dt_ms) * rec.dt_ms + rec.dt_ms);
    if (auto it = meta.find("config_digest"); it != meta.end()) {
        rec.config_digest = it->second;
    }
    file.window_start = index("window_start");
    file.window_width = index("window_width");
    for (const auto& s : rec.raster) {
        if (s.neuron >= rec.n) {
            throw ParseError("neuron " + std::to_string(s.neuron) + " outside n=" + std::to_string(rec.n));
        }
    }
    rec.sort_raster();
    return file;
}

// ---- voltage --------------------------------------------------------------

inline void write_voltage_csv(std::ostream& out, const SimulationRecord& rec) {
    out << "# bump-voltage v1 dt_ms=" << format_number(rec.dt_ms);
    if (!rec.config_digest.empty()) {
        out << " config_digest=" << rec.config_digest;
    }
    out << "\ntime_ms";
    for (std::size_t p : rec.probes) {
        out << ",v_" << p;
    }
    out << '\n';
    const std::size_t steps = rec.voltages.empty() ? 0 : rec.voltages.front().size();
    for (std::size_t s = 0; s < steps; ++s) {
        out << format_number(static_cast<double>(s + 1) * rec.dt_ms);  // end of step s
        for (const auto& trace : rec.voltages) {
            out << ',' << format_number(trace[s]);
        }
        out << '\n';
    }
}

struct VoltageTable {
    std::vector<double> times_ms;
    std::vector<std::size_t> probes;
    std::vector<std::vector<double>> traces;  // traces[k][s]
};

inline VoltageTable read_voltage_csv(std::istream& in) {
    VoltageTable table;
    bool header_seen = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = detail::trim(line);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '#') {
            if (!header_seen) {
                detail::parse_meta(text, "bump-voltage", lineno);
            }
            continue;
        }
        const auto cells = detail::split_commas(text);
        if (!header_seen) {
            if (cells.empty() || cells.front() != "time_ms") {
                throw ParseError("expected header starting with 'time_ms'", lineno);
            }
            for (std::size_t k = 1; k < cells.size(); ++k) {
                if (cells[k].size() < 3 || cells[k].substr(0, 2) != "v_") {
                    throw ParseError("expected column 'v_<index>', got '" + std::string(cells[k]) + "'", lineno);
                }
                table.probes.push_back(detail::parse_index(cells[k].substr(2), lineno));
            }
            table.traces.assign(table.probes.size(), {});
            header_seen = true;
            continue;
        }
        if (cells.size() != table.probes.size() + 1) {
            throw ParseError("expected " + std::to_string(table.probes.size() + 1) + " columns, got " +
                                 std::to_string(cells.size()),
                             lineno);
        }
        table.times_ms.push_back(detail::parse_double(cells[0], lineno));
        for (std::size_t k = 1; k < cells.size(); ++k) {
            table.traces[k - 1].push_back(detail::parse_double(cells[k], lineno));
        }
    }
    if (!header_seen) {
        throw ParseError("missing 'time_ms,...' header", lineno ? lineno : 1);
    }
    return table;
}

} // namespace bump
