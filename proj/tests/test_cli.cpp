#include "key_samples.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string output;  // stdout and stderr
};

Run cli(const std::string& args) {
    const std::string command = std::string(GRAPHTRACK_CLI) + " " + args + " 2>&1";
    Run run;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return run;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) run.output.append(buffer, n);
    const int raw = pclose(pipe);
    run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return run;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("graphtrack_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

// One synthetic sequence shared by the track tests.
const fs::path& frames() {
    static const fs::path dir = [] {
        auto d = scratch("frames");
        const auto r = cli("--mode synth --seed 4 --density 0.01 --output-dir " + d.string());
        EXPECT_EQ(r.status, 0) << r.output;
        return d;
    }();
    return dir;
}

}  // namespace

TEST(Cli, SynthWritesFramesAndTruth) {
    const auto& dir = frames();
    EXPECT_TRUE(fs::exists(dir / "frame_000.png"));
    EXPECT_TRUE(fs::exists(dir / "frame_019.png"));
    const auto truth = slurp(dir / "truth.csv");
    EXPECT_EQ(truth.substr(0, truth.find('\n')),
              "track_id,frame,x,y,radius_px,segment_distance_px,segment_angle_deg,track_id_true");
}

TEST(Cli, TrackRowsMatchSummary) {
    const auto out = scratch("track");
    const auto r = cli("--mode track --input " + frames().string() + " --output-dir " + out.string());
    ASSERT_EQ(r.status, 0) << r.output;
    const auto rows = slurp(out / "trajectories.csv");
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    std::size_t total = 0;
    for (const auto& t : summary["trajectories"]) total += t["length"].get<std::size_t>();
    EXPECT_GT(total, 0u);
    EXPECT_EQ(line_count(rows) - 1, total);
    EXPECT_EQ(summary["trajectory_rows"].get<std::size_t>(), total);
    EXPECT_EQ(summary["frames"].get<int>(), 20);
    EXPECT_EQ(summary["inputs"].size(), 20u);
    EXPECT_EQ(summary["config"]["imaging"]["threshold"], "0.15");
    EXPECT_EQ(slurp(out / "objects.csv").substr(0, 46), "frame,x,y,radius_px,pixel_count,match_index\n0,");
    for (const auto& t : summary["trajectories"]) {
        EXPECT_TRUE(t.contains("mu"));
        EXPECT_TRUE(t.contains("sigma_mu"));
        EXPECT_TRUE(t.contains("mean_velocity"));
        EXPECT_TRUE(t.contains("mean_diameter"));
        EXPECT_TRUE(t.contains("n_segments"));
    }
    EXPECT_FALSE(fs::exists(out / "edges.csv"));
}

TEST(Cli, EdgeDump) {
    const auto out = scratch("edges");
    const auto r = cli("--mode track --dump_edges true --input " + frames().string() + " --output-dir " + out.string());
    ASSERT_EQ(r.status, 0) << r.output;
    const auto edges = slurp(out / "edges.csv");
    EXPECT_EQ(edges.substr(0, edges.find('\n')), "frame,from_id,to_id,s,dR,phi,cost");
    EXPECT_GT(line_count(edges), 1u);
}

TEST(Cli, EmptyInputListsGlob) {
    const auto empty = scratch("empty");
    fs::create_directories(empty);
    const auto r = cli("--mode track --input " + empty.string() + " --output-dir " + scratch("e_out").string());
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find(empty.string()), std::string::npos) << r.output;
    const auto g = cli("--mode track --input '" + (empty / "*.png").string() + "' --output-dir " +
                       scratch("e_out2").string());
    EXPECT_EQ(g.status, 1);
    EXPECT_NE(g.output.find("*.png"), std::string::npos) << g.output;
}

TEST(Cli, NothingSurvivesThreshold) {
    const auto out = scratch("none");
    const auto r = cli("--mode track --threshold 0.99 --input " + frames().string() + " --output-dir " + out.string());
    EXPECT_EQ(r.status, 2) << r.output;
    EXPECT_EQ(slurp(out / "trajectories.csv"), "track_id,frame,x,y,radius_px,segment_distance_px,segment_angle_deg\n");
}

TEST(Cli, ErrorsNameKeyOrPath) {
    auto r = cli("--threshold 2 --print-config");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find("threshold"), std::string::npos);
    const auto ini = scratch("badini");
    fs::create_directories(ini);
    std::ofstream(ini / "c.ini") << "[linking]\nG_s = fast\n";
    r = cli("--config " + (ini / "c.ini").string());
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find("G_s"), std::string::npos);
    r = cli("--config /nonexistent/c.ini");
    EXPECT_EQ(r.status, 1);
    r = cli("--mode track --input /nonexistent/frame.png --output-dir " + scratch("badpath").string());
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find("/nonexistent/frame.png"), std::string::npos) << r.output;
    r = cli("--no-such-flag 3");
    EXPECT_EQ(r.status, 1);
}

TEST(Cli, BenchSingleCellAndCheck) {
    const std::string cell = "--mode bench --densities 0.01 --step_multiples 1 --modes identical --replicates 3 ";
    const auto out = scratch("bench");
    auto r = cli(cell + "--output-dir " + out.string());
    ASSERT_EQ(r.status, 0) << r.output;
    const auto report = slurp(out / "report.csv");
    EXPECT_EQ(line_count(report), 2u);
    EXPECT_EQ(report.substr(0, report.find('\n')),
              "density,step_multiple,mode,replicate_count,obj_ratio_mean,obj_ratio_std,fp_ratio_mean,"
              "traj_ratio_mean,traj_ratio_std,fragmentation_mean");
    EXPECT_FALSE(fs::exists(out / "check.json"));

    const auto pass = scratch("bench_pass");
    r = cli(cell + "--check --output-dir " + pass.string());
    EXPECT_EQ(r.status, 0) << r.output;
    EXPECT_TRUE(nlohmann::json::parse(slurp(pass / "check.json"))["passed"].get<bool>());

    const auto fail = scratch("bench_fail");
    r = cli(cell + "--check --check_min_traj_ratio 1.01 --output-dir " + fail.string());
    EXPECT_EQ(r.status, 3) << r.output;
    EXPECT_NE(r.output.find("density=0.01 step_multiple=1 mode=identical"), std::string::npos) << r.output;
    EXPECT_FALSE(nlohmann::json::parse(slurp(fail / "check.json"))["passed"].get<bool>());
}

TEST(Cli, ByteIdenticalReruns) {
    const std::vector<std::string> runs{
        "--mode track --dump_edges true --input " + frames().string(),
        "--mode bench --densities 0.01,0.05 --step_multiples 1 --modes identical,within_track --replicates 2 --check",
        "--mode synth --density 0.05 --variation_mode within_track --noise_sigma 0.02 --seed 11",
    };
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto a = scratch("det_a" + std::to_string(i));
        const auto b = scratch("det_b" + std::to_string(i));
        const auto ra = cli(runs[i] + " --output-dir " + a.string());
        const auto rb = cli(runs[i] + " --threads 3 --output-dir " + b.string());
        ASSERT_EQ(ra.status, rb.status);
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            if (entry.path().filename() == "config.resolved.ini") continue;  // echoes the thread count
            ++files;
            auto x = slurp(entry.path()), y = slurp(b / entry.path().filename());
            if (entry.path().filename() == "summary.json") {  // its config block echoes them too
                auto jx = nlohmann::json::parse(x), jy = nlohmann::json::parse(y);
                jx.erase("config");
                jy.erase("config");
                x = jx.dump();
                y = jy.dump();
            }
            EXPECT_EQ(x, y) << entry.path();
        }
        EXPECT_GT(files, 0u);
    }
}

// Rerunning from the echoed configuration reproduces the outputs.
TEST(Cli, EchoedConfigReproducesRun) {
    const auto a = scratch("echo_a");
    const auto b = scratch("echo_b");
    auto r = cli("--mode track --w 5 --threshold 0.2 --G_phi 1 --input " + frames().string() + " --output-dir " +
                 a.string());
    ASSERT_EQ(r.status, 0) << r.output;
    r = cli("--config " + (a / "config.resolved.ini").string() + " --output-dir " + b.string());
    ASSERT_EQ(r.status, 0) << r.output;
    for (const char* name : {"objects.csv", "trajectories.csv"}) EXPECT_EQ(slurp(a / name), slurp(b / name));
}

// For every key: the flag beats the config file, and the file beats the default.
TEST(Cli, FlagsOverrideConfigFilePerKey) {
    const auto dir = scratch("precedence");
    fs::create_directories(dir);
    const auto keys_dump = cli("--print-config");
    ASSERT_EQ(keys_dump.status, 0);
    std::map<std::string, std::string> section_of;
    std::string section;
    std::istringstream lines(keys_dump.output);
    for (std::string line; std::getline(lines, line);) {
        if (!line.empty() && line.front() == '[') section = line.substr(1, line.size() - 2);
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) section_of[line.substr(0, eq)] = section;
    }
    ASSERT_EQ(section_of.size(), key_samples().size());
    for (const auto& [key, values] : key_samples()) {
        const auto ini = dir / (key + ".ini");
        std::ofstream(ini) << "[" << section_of.at(key) << "]\n" << key << " = " << values.first << "\n";
        const std::string flag = key == "output_dir" ? "--output-dir" : "--" + key;
        const auto from_file = cli("--print-config --config " + ini.string());
        const auto from_flag = cli("--print-config --config " + ini.string() + " " + flag + " '" + values.second + "'");
        ASSERT_EQ(from_file.status, 0) << key << from_file.output;
        ASSERT_EQ(from_flag.status, 0) << key << from_flag.output;
        EXPECT_NE(from_file.output.find("\n" + key + " = " + values.first + "\n"), std::string::npos) << key;
        EXPECT_NE(from_flag.output.find("\n" + key + " = " + values.second + "\n"), std::string::npos) << key;
    }
}
