// Runs one network and prints its class and the per-bin cluster layout.
//
//   demo_single_run [w_excit w_inhib width]

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "bump/bump.hpp"

int main(int argc, char** argv) {
    bump::RunConfig config;
    if (argc == 4) {
        config.topology.w_excit = std::stod(argv[1]);
        config.topology.w_inhib = std::stod(argv[2]);
        config.stimulus.window_width = std::stoul(argv[3]);
    } else {
        config.topology.w_inhib = 0.10;
        config.stimulus.window_width = 20;
    }
    config.record_voltage = false;

    const auto record = bump::run_simulation(config);
    const auto report = bump::analyze_raster(record, config.stimulus_program());

    std::cout << "w_excit " << config.topology.w_excit << ", w_inhib " << config.topology.w_inhib << ", width "
              << config.stimulus.window_width << ": " << bump::to_string(report.label) << " ("
              << record.raster.size() << " spikes)\n";
    const auto binned = bump::bin_raster(record, report.params.bin_width_ms);
    for (std::size_t b = 0; b < binned.bins.size(); ++b) {
        std::string row(record.n, '.');
        for (std::size_t i : binned.bins[b]) row[i] = '#';
        std::cout << std::setw(4) << static_cast<double>(b) * report.params.bin_width_ms << " ms " << row << "\n";
    }
    return 0;
}
