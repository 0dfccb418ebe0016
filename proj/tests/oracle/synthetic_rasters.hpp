#pragma once

// Hand-built rasters with known labels. Geometry is n = 100, 300 ms, 10 ms
// bins (30 bins, the last 10 evaluated), window at 30.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bump/analysis.hpp"
#include "bump/record.hpp"
#include "bump/stimulus.hpp"

namespace oracle {

struct LabeledRaster {
    std::string name;
    bump::SimulationRecord record;
    bump::StimulusProgram stimulus;
    std::string expected;
};

struct Interval {
    long lo;
    long hi;  // inclusive
};

/// Active intervals for bin b.
using Shape = std::function<std::vector<Interval>(std::size_t bin)>;

inline bump::StimulusProgram window(std::size_t width, std::size_t start = 30) {
    return bump::build_window_stimulus(width, bump::PeriodicSchedule{}, 0.08, {start, 100, 300.0});
}

/// Every neuron inside an interval fires twice per bin, at staggered offsets.
inline bump::SimulationRecord paint(const Shape& shape, std::size_t first_bin = 0, std::size_t last_bin = 29) {
    bump::SimulationRecord rec;
    rec.n = 100;
    rec.duration_ms = 300.0;
    for (std::size_t b = first_bin; b <= last_bin; ++b) {
        for (const auto& iv : shape(b)) {
            for (long i = std::max(0L, iv.lo); i <= std::min(99L, iv.hi); ++i) {
                const double t0 = static_cast<double>(b) * 10.0 + static_cast<double>(i % 3);
                rec.raster.push_back({static_cast<std::size_t>(i), t0 + 1.0});
                rec.raster.push_back({static_cast<std::size_t>(i), t0 + 6.0});
            }
        }
    }
    rec.sort_raster();
    return rec;
}

inline bump::SimulationRecord merge(bump::SimulationRecord a, const bump::SimulationRecord& b) {
    a.raster.insert(a.raster.end(), b.raster.begin(), b.raster.end());
    a.sort_raster();
    a.raster.erase(std::unique(a.raster.begin(), a.raster.end()), a.raster.end());
    return a;
}

inline Shape fixed(std::vector<Interval> ivs) {
    return [ivs](std::size_t) { return ivs; };
}

inline std::vector<LabeledRaster> corpus() {
    std::vector<LabeledRaster> out;
    const auto add = [&](std::string name, bump::SimulationRecord rec, bump::StimulusProgram stim,
                         std::string expected) {
        out.push_back({std::move(name), std::move(rec), std::move(stim), std::move(expected)});
    };
    const auto L = [](long b) { return static_cast<long>(b); };

    // no ignition
    {
        bump::SimulationRecord empty;
        empty.n = 100;
        empty.duration_ms = 300.0;
        add("empty raster", empty, window(5), "NoIgnition");
    }
    add("driven window only", paint(fixed({{30, 34}})), window(5), "NoIgnition");
    add("single driven neuron", paint(fixed({{30, 30}})), window(1), "NoIgnition");
    add("transient spread dies before settling",
        merge(paint(fixed({{30, 39}})), paint(fixed({{22, 47}}), 0, 4)), window(10), "NoIgnition");
    add("early burst outside window only", paint(fixed({{60, 70}}), 0, 3), window(3), "NoIgnition");

    // stationary
    add("fixed block of ten", paint(fixed({{40, 49}})), window(5), "Stationary");
    add("block around the window", paint(fixed({{27, 42}})), window(10), "Stationary");
    add("narrow block", paint(fixed({{70, 73}})), window(2), "Stationary");
    add("wobbling block", paint([&](std::size_t b) {
            const long w = L(b % 3) - 1;
            return std::vector<Interval>{{50 + w, 59 + w}};
        }),
        window(4), "Stationary");
    add("block with dropout bins", paint([](std::size_t b) {
            return b % 4 == 3 ? std::vector<Interval>{} : std::vector<Interval>{{35, 44}};
        }),
        window(4), "Stationary");

    // splits
    add("two streams moving apart", paint([&](std::size_t b) {
            return std::vector<Interval>{{48 - L(b), 52 - L(b)}, {48 + L(b), 52 + L(b)}};
        }),
        window(5), "Split(2)");
    add("two fixed streams", paint(fixed({{20, 28}, {60, 68}})), window(5), "Split(2)");
    add("three fixed streams", paint(fixed({{10, 16}, {40, 46}, {70, 76}})), window(5), "Split(3)");
    add("three streams fanning out", paint([&](std::size_t b) {
            const long s = L(b) / 2;
            return std::vector<Interval>{{30 - s, 35 - s}, {47, 52}, {64 + s, 69 + s}};
        }),
        window(5), "Split(3)");
    add("four fixed streams", paint(fixed({{5, 10}, {30, 35}, {55, 60}, {80, 85}})), window(5), "Split(4)");
    add("four streams with an early merge", paint([&](std::size_t b) {
            if (b < 10) return std::vector<Interval>{{20, 80}};
            return std::vector<Interval>{{8, 14}, {33, 39}, {58, 64}, {83, 89}};
        }),
        window(5), "Split(4)");

    // divergence
    add("block growing to cover the network", paint([&](std::size_t b) {
            return std::vector<Interval>{{45 - 2 * L(b), 54 + 2 * L(b)}};
        }),
        window(5), "Divergent");
    add("block spreading right", paint([&](std::size_t b) {
            return std::vector<Interval>{{30 - L(b), 40 + 3 * L(b)}};
        }),
        window(5), "Divergent");
    add("two streams growing from the edges", paint([&](std::size_t b) {
            return std::vector<Interval>{{0, 10 + L(b)}, {89 - L(b), 99}};
        }),
        window(5), "SplitWithDivergence(2)");
    add("three streams growing", paint([&](std::size_t b) {
            const long g = L(b) / 3;
            return std::vector<Interval>{{5, 10 + g}, {40 - g, 50 + g}, {80 - g, 85}};
        }),
        window(5), "SplitWithDivergence(3)");

    // outside the taxonomy
    add("drifting single bump", paint([&](std::size_t b) {
            return std::vector<Interval>{{10 + 2 * L(b), 15 + 2 * L(b)}};
        }),
        window(5), "Unclassified");
    add("five fixed streams", paint(fixed({{2, 6}, {22, 26}, {42, 46}, {62, 66}, {82, 86}})), window(5),
        "Unclassified");
    return out;
}

} // namespace oracle
