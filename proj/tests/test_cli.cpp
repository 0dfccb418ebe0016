#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "bump/csv_io.hpp"
#include "bump/json_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Cli : ::testing::Test {
    fs::path dir;

    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("bumpsim_") + info->name() + "_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(BUMPSIM_PATH) + " " + args + " > " + (dir / "stdout.txt").string() +
                                " 2> " + (dir / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string out() const { return slurp(dir / "stdout.txt"); }
    std::string err() const { return slurp(dir / "stderr.txt"); }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name) << text;
        return dir / name;
    }
};

} // namespace

TEST_F(Cli, SimulateWritesAllArtifacts) {
    ASSERT_EQ(run("simulate --out " + (dir / "a").string()), 0) << err();
    for (const char* f : {"raster.csv", "voltage.csv", "classification.json", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
    }
    const auto manifest = bump::json::parse(slurp(dir / "a" / "manifest.json"));
    const auto classification = bump::json::parse(slurp(dir / "a" / "classification.json"));
    EXPECT_EQ(manifest.at("label"), classification.at("label"));
    EXPECT_EQ(out(), classification.at("label").get<std::string>() + "\n");
    const std::string digest = manifest.at("run_digest");
    EXPECT_NE(slurp(dir / "a" / "raster.csv").find("config_digest=" + digest), std::string::npos);
    EXPECT_NE(slurp(dir / "a" / "voltage.csv").find("config_digest=" + digest), std::string::npos);
    EXPECT_EQ(classification.at("config_digest"), digest);
    EXPECT_EQ(manifest.at("config").at("topology").at("w_excit"), 0.08);
    EXPECT_EQ(manifest.at("config").at("stimulus").at("window_width"), 25);
}

TEST_F(Cli, SimulateIsDeterministic) {
    ASSERT_EQ(run("simulate --out " + (dir / "a").string()), 0);
    ASSERT_EQ(run("simulate --out " + (dir / "b").string()), 0);
    for (const char* f : {"raster.csv", "voltage.csv", "classification.json", "manifest.json"}) {
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
}

TEST_F(Cli, ConfigErrorsExitTwo) {
    const auto zero = write("zero.json", R"({"run": {"duration_ms": 0}})");
    EXPECT_EQ(run("simulate --config " + zero.string() + " --out " + dir.string()), 2);
    EXPECT_NE(err().find("duration_ms"), std::string::npos);
    const auto unknown = write("unknown.json", R"({"neuron": {"tau_membrane": 20}})");
    EXPECT_EQ(run("simulate --config " + unknown.string() + " --out " + dir.string()), 2);
    EXPECT_NE(err().find("tau_membrane"), std::string::npos);
    EXPECT_EQ(run("simulate --config " + (dir / "missing.json").string()), 2);
    EXPECT_EQ(run("simulate --boundary torus"), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("sweep --widths 9..3 --out " + dir.string()), 2);
}

TEST_F(Cli, FlagsOverrideConfig) {
    const auto cfg = write("c.json", R"({"topology": {"w_excit": 0.1}, "stimulus": {"window_width": 3}})");
    ASSERT_EQ(run("simulate --seedless --boundary ring --bin-width 5 --config " + cfg.string() + " --out " +
                  (dir / "a").string()),
              0)
        << err();
    const auto m = bump::json::parse(slurp(dir / "a" / "manifest.json"));
    EXPECT_EQ(m.at("config").at("topology").at("boundary"), "ring");
    EXPECT_EQ(m.at("config").at("classifier").at("bin_width_ms"), 5.0);
    EXPECT_EQ(m.at("config").at("topology").at("w_excit"), 0.1);
}

TEST_F(Cli, SweepRestrictedWidths) {
    ASSERT_EQ(run("sweep --widths 1..5 --out " + dir.string()), 0) << err();
    const auto cells = bump::json::parse(slurp(dir / "cells.json"));
    EXPECT_EQ(cells.at("cells").size(), 36u * 5u);
    for (const char* f : {"report.json", "table1_ignition.md", "table1_ignition.csv", "table2_split2.md",
                          "table2_split2.csv", "table3_multistream.md", "table3_multistream.csv", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
        EXPECT_NE(slurp(dir / f).find(cells.at("config_digest").get<std::string>()), std::string::npos) << f;
    }
    EXPECT_FALSE(fs::exists(dir / "rasters"));
    const auto table = slurp(dir / "table1_ignition.csv");
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 1 + 1 + 6);
}

TEST_F(Cli, ArchivedRastersReclassifyToTheirLabels) {
    ASSERT_EQ(run("sweep --weights-ex 0.09 --weights-in 0.06,0.1 --widths 1,14,30 --archive-rasters --out " +
                  dir.string()),
              0)
        << err();
    const auto manifest = bump::json::parse(slurp(dir / "manifest.json"));
    ASSERT_EQ(manifest.at("rasters").size(), 6u);
    for (const auto& entry : manifest.at("rasters")) {
        const auto path = dir / entry.at("file").get<std::string>();
        ASSERT_TRUE(fs::exists(path));
        EXPECT_NE(slurp(path).find(entry.at("config_digest").get<std::string>()), std::string::npos);
        ASSERT_EQ(run("classify " + path.string()), 0) << err();
        EXPECT_EQ(out(), entry.at("label").get<std::string>() + "\n") << path;
    }
}

TEST_F(Cli, PartialSweepFailureExitsFour) {
    const auto cfg = write("huge.json", R"({"run": {"conductance_scale": 1e306}})");
    EXPECT_EQ(run("sweep --config " + cfg.string() + " --weights-ex 0.1 --weights-in 0.1 --widths 1..2 --out " +
                  dir.string()),
              4);
    const auto report = bump::json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(report.at("failed_runs"), 2);
    EXPECT_TRUE(report.at("cells")[0].contains("error"));
    EXPECT_EQ(slurp(dir / "table1_ignition.csv").find("err") != std::string::npos, true);
}

TEST_F(Cli, ClassifyWritesReport) {
    ASSERT_EQ(run("simulate --out " + (dir / "a").string()), 0);
    const auto report = dir / "c.json";
    ASSERT_EQ(run("classify " + (dir / "a" / "raster.csv").string() + " --out " + report.string()), 0);
    const auto j = bump::json::parse(slurp(report));
    const auto sim = bump::json::parse(slurp(dir / "a" / "classification.json"));
    EXPECT_EQ(j.at("label"), sim.at("label"));
    EXPECT_EQ(j.at("diagnostics"), sim.at("diagnostics"));
}

TEST_F(Cli, MalformedRasterReportsLine) {
    const auto bad = write("bad.csv", "neuron_id,time_ms\n1,5\n2,five\n");
    EXPECT_EQ(run("classify " + bad.string()), 2);
    EXPECT_NE(err().find("line 3"), std::string::npos) << err();
    EXPECT_EQ(run("render " + bad.string() + " --out " + (dir / "x.svg").string()), 2);
    EXPECT_NE(err().find("line 3"), std::string::npos) << err();
    EXPECT_EQ(run("render " + (dir / "nope.csv").string()), 3);
}

TEST_F(Cli, RenderEmptyAndFullRasters) {
    const auto empty = write("empty.csv", "# bump-raster v1 n=100 duration_ms=300 dt_ms=1\nneuron_id,time_ms\n");
    ASSERT_EQ(run("render " + empty.string() + " --out " + (dir / "e.svg").string()), 0) << err();
    const auto svg = slurp(dir / "e.svg");
    EXPECT_NE(svg.find("neuron index"), std::string::npos);
    EXPECT_EQ(svg.find("class=\"spike\""), std::string::npos);

    ASSERT_EQ(run("simulate --out " + (dir / "a").string()), 0);
    ASSERT_EQ(run("render " + (dir / "a" / "raster.csv").string() + " --out " + (dir / "r.svg").string() +
                  " --voltage " + (dir / "a" / "voltage.csv").string() + " --voltage-out " +
                  (dir / "v.svg").string()),
              0)
        << err();
    std::istringstream raster(slurp(dir / "a" / "raster.csv"));
    const auto spikes = bump::read_raster_csv(raster).record.raster.size();
    const auto r = slurp(dir / "r.svg");
    std::size_t marks = 0;
    for (auto p = r.find("class=\"spike\""); p != std::string::npos; p = r.find("class=\"spike\"", p + 1)) ++marks;
    EXPECT_EQ(marks, spikes);
    const auto v = slurp(dir / "v.svg");
    std::size_t rows = 0;
    for (auto p = v.find("class=\"row\""); p != std::string::npos; p = v.find("class=\"row\"", p + 1)) ++rows;
    EXPECT_EQ(rows, 100u);
}

TEST_F(Cli, HelpExitsZero) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_NE(out().find("simulate"), std::string::npos);
}
