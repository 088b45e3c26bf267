#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "graphss/audio_io.hpp"
#include "graphss/signal_lab.hpp"

using namespace graphss;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = GRAPHSS_TEST_DATA;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

json manifest(const fs::path& output) { return json::parse(slurp(output.string() + ".manifest.json")); }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("graphss_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, NoArgumentsIsInputError) { EXPECT_EQ(invoke({}).code, cli::kInputError); }

TEST_F(CliTest, HelpSucceeds) { EXPECT_EQ(invoke({"--help"}).code, cli::kSuccess); }

TEST_F(CliTest, SynthWritesClipAndManifest) {
    const Outcome r = invoke({"synth", "tone", path("t.wav"), "--duration", "1", "--seed", "4"});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const AudioBuffer b = read_wav(path("t.wav"));
    EXPECT_EQ(b.samples.size(), 16000u);
    const json m = manifest(path("t.wav"));
    EXPECT_EQ(m["format_version"], cli::kFormatVersion);
    EXPECT_EQ(m["command"], "synth");
    EXPECT_EQ(m["seed"], 4);
    EXPECT_EQ(invoke({"synth", "square", path("s.wav")}).code, cli::kInputError);
}

TEST_F(CliTest, EnhanceDefaultsAreIgss) {
    const Outcome r = invoke({"enhance", (kData / "noisy_tone.wav").string(), path("e.wav"), "--max-iters", "2"});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const json m = manifest(path("e.wav"));
    EXPECT_EQ(m["config"]["method"], "igss");
    EXPECT_EQ(m["config"]["k"], 3);
    EXPECT_EQ(m["config"]["frame_len"], 256);
    EXPECT_EQ(m["config"]["alpha"], 1e-5);
    EXPECT_EQ(m["config"]["max_iters"], 2);
    EXPECT_NE(r.err.find("iterations=2"), std::string::npos);
    EXPECT_NE(r.err.find("clipped="), std::string::npos);
}

TEST_F(CliTest, HugeAlphaReproducesInput) {
    const fs::path in = kData / "noisy_tone.wav";
    ASSERT_EQ(invoke({"enhance", in.string(), path("same.wav"), "--alpha", "1e9"}).code, cli::kSuccess);
    EXPECT_EQ(slurp(path("same.wav")), slurp(in));
    EXPECT_EQ(manifest(path("same.wav"))["results"]["iterations"], 0);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
    std::ofstream(path("c.cfg")) << "# settings\nmethod = gss\nk=8\nalpha=0.5\n";
    const std::string in = (kData / "noisy_tone.wav").string();
    ASSERT_EQ(invoke({"enhance", in, path("a.wav"), "--config", path("c.cfg"), "--k", "20"}).code, cli::kSuccess);
    const json m = manifest(path("a.wav"));
    EXPECT_EQ(m["config"]["method"], "gss");
    EXPECT_EQ(m["config"]["k"], 20);
    EXPECT_EQ(m["config"]["alpha"], 0.5);

    std::ofstream(path("bad.cfg")) << "colour=blue\n";
    EXPECT_EQ(invoke({"enhance", in, path("b.wav"), "--config", path("bad.cfg")}).code, cli::kInputError);
}

TEST_F(CliTest, EnhanceErrors) {
    const std::string in = (kData / "noisy_tone.wav").string();
    EXPECT_EQ(invoke({"enhance", path("missing.wav"), path("o.wav")}).code, cli::kInputError);
    EXPECT_EQ(invoke({"enhance", in, path("o.wav"), "--method", "wiener"}).code, cli::kInputError);
    EXPECT_EQ(invoke({"enhance", in, path("o.wav"), "--frame-len", "255"}).code, cli::kInputError);
    EXPECT_EQ(invoke({"enhance", in, path("o.wav"), "--k", "0"}).code, cli::kInputError);
}

TEST_F(CliTest, ThreadsEnvironmentOverride) {
    const std::string in = (kData / "noisy_tone.wav").string();
    ASSERT_EQ(invoke({"enhance", in, path("one.wav"), "--method", "gss"}).code, cli::kSuccess);
    ::setenv(cli::kThreadsEnv, "3", 1);
    const int threaded = invoke({"enhance", in, path("three.wav"), "--method", "gss"}).code;
    ::setenv(cli::kThreadsEnv, "zero", 1);
    const int bad = invoke({"enhance", in, path("bad.wav"), "--method", "gss"}).code;
    ::unsetenv(cli::kThreadsEnv);
    EXPECT_EQ(threaded, cli::kSuccess);
    EXPECT_EQ(bad, cli::kInputError);
    EXPECT_EQ(slurp(path("one.wav")), slurp(path("three.wav")));
}

// Frozen from the first verified run on the packaged clip.
constexpr double kGoldenGssSnr = 7.95376916;
constexpr int kGoldenIgssIterations = 30;
constexpr double kGoldenIgssSnr = 11.52807880;

TEST_F(CliTest, GoldenGssAndIgss) {
    const AudioBuffer clean = read_wav(kData / "clean_tone.wav");
    const std::string in = (kData / "noisy_tone.wav").string();
    struct Golden {
        const char* method;
        int iterations;
        double snr_db;
    };
    for (const Golden g : {Golden{"gss", 1, kGoldenGssSnr}, Golden{"igss", kGoldenIgssIterations, kGoldenIgssSnr}}) {
        const std::string out = path(std::string(g.method) + ".wav");
        ASSERT_EQ(invoke({"enhance", in, out, "--method", g.method}).code, cli::kSuccess);
        EXPECT_EQ(manifest(out)["results"]["iterations"], g.iterations) << g.method;
        EXPECT_NEAR(snr(clean.samples, read_wav(out).samples), g.snr_db, 1e-3) << g.method;
    }
}

TEST_F(CliTest, MixSingleTarget) {
    const std::string speech = (kData / "clean_tone.wav").string();
    ASSERT_EQ(invoke({"synth", "white", path("n.wav"), "--duration", "2", "--seed", "9"}).code, cli::kSuccess);
    ASSERT_EQ(invoke({"mix", speech, path("n.wav"), path("m.wav"), "--snr-db", "5"}).code, cli::kSuccess);
    const json m = manifest(path("m.wav"));
    EXPECT_EQ(m["command"], "mix");
    EXPECT_NEAR(m["results"]["achieved_snr_db"].get<double>(), 5.0, 1e-9);
    EXPECT_GT(m["results"]["scale"].get<double>(), 0.0);
}

TEST_F(CliTest, MixEqualPowersUnitScale) {
    // A clip mixed against itself has equal power.
    const std::string speech = (kData / "clean_tone.wav").string();
    ASSERT_EQ(invoke({"mix", speech, speech, path("m.wav"), "--snr-db", "0"}).code, cli::kSuccess);
    EXPECT_NEAR(manifest(path("m.wav"))["results"]["scale"].get<double>(), 1.0, 1e-12);
}

TEST_F(CliTest, MixGridEmitsSevenFiles) {
    const std::string speech = (kData / "clean_tone.wav").string();
    ASSERT_EQ(invoke({"synth", "pink", path("n.wav"), "--duration", "2", "--seed", "9"}).code, cli::kSuccess);
    const Outcome r = invoke({"mix", speech, path("n.wav"), path("g.wav"), "--snr-db", "-15:5:15"});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_EQ(lines(r.out).size(), 7u);
    for (const char* tag : {"-15", "-10", "-5", "+0", "+5", "+10", "+15"}) {
        const std::string p = path(std::string("g_snr") + tag + ".wav");
        ASSERT_TRUE(fs::exists(p)) << p;
        EXPECT_NEAR(manifest(p)["results"]["achieved_snr_db"].get<double>(), std::stod(tag), 1e-9);
    }
    EXPECT_EQ(invoke({"mix", speech, path("n.wav"), path("x.wav"), "--snr-db", "5:0:1"}).code, cli::kInputError);
}

TEST_F(CliTest, EvalReport) {
    fs::create_directories(path("clean"));
    fs::create_directories(path("noisy"));
    const std::string speech = (kData / "clean_tone.wav").string();
    fs::copy_file(speech, path("clean/a.wav"));
    fs::copy_file(speech, path("noisy/a.wav"));
    fs::copy_file(speech, path("clean/b.wav"));
    fs::copy_file((kData / "noisy_tone.wav").string(), path("noisy/b.wav"));

    const Outcome r = invoke({"eval", path("clean"), path("noisy"), "--report", path("r.csv")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const auto rows = lines(slurp(path("r.csv")));
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0], "format_version,1");
    EXPECT_EQ(rows[1], "clip_id,method,input_snr_db,output_snr_db,iterations");
    EXPECT_EQ(split(rows[2])[0], "a");
    EXPECT_EQ(split(rows[2])[3], "inf");
    EXPECT_EQ(split(rows[4])[0], "mean");
    EXPECT_EQ(manifest(path("r.csv"))["command"], "eval");

    const Outcome gss = invoke({"eval", path("clean"), path("noisy"), "--report", path("g.csv"), "--method", "gss"});
    ASSERT_EQ(gss.code, cli::kSuccess) << gss.err;
    const auto g = lines(slurp(path("g.csv")));
    ASSERT_EQ(g.size(), 5u);
    const double a = std::stod(split(g[2])[3]);
    const double b = std::stod(split(g[3])[3]);
    EXPECT_NEAR(std::stod(split(g[4])[3]), (a + b) / 2.0, 1e-8);
    EXPECT_EQ(split(g[3])[1], "gss");
}

TEST_F(CliTest, EvalUnpairedFilesFail) {
    fs::create_directories(path("clean"));
    fs::create_directories(path("noisy"));
    fs::copy_file(kData / "clean_tone.wav", path("clean/a.wav"));
    fs::copy_file(kData / "clean_tone.wav", path("noisy/z.wav"));
    const Outcome r = invoke({"eval", path("clean"), path("noisy"), "--report", path("r.csv")});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("a.wav"), std::string::npos);
    EXPECT_NE(r.err.find("z.wav"), std::string::npos);
}

TEST_F(CliTest, SpectrumDefaultPanels) {
    const Outcome r = invoke({"spectrum", (kData / "clean_tone.wav").string(), path("s.csv"), "--frame-index", "40"});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    for (int k : {1, 3, 8, 20, 50}) {
        const auto rows = lines(slurp(path("s_k" + std::to_string(k) + ".csv")));
        ASSERT_EQ(rows.size(), 258u);
        EXPECT_EQ(rows[0], "format_version,1");
        EXPECT_EQ(rows[1], "bin,eigenvalue_re,eigenvalue_im,magnitude");
        EXPECT_EQ(std::stod(split(rows[2])[1]), static_cast<double>(k));
    }
}

TEST_F(CliTest, SpectrumIdentityK1IsSampleMagnitudes) {
    const std::string in = (kData / "clean_tone.wav").string();
    ASSERT_EQ(invoke({"spectrum", in, path("s.csv"), "--k", "1", "--identity-k1", "--frame-index", "40"}).code,
              cli::kSuccess);
    const AudioBuffer b = read_wav(in);
    const auto rows = lines(slurp(path("s_k1.csv")));
    for (std::size_t i = 0; i < 256; ++i)
        EXPECT_NEAR(std::stod(split(rows[i + 2])[3]), std::abs(b.samples[40 * 128 + i]), 1e-9);
}

TEST_F(CliTest, SpectrumZeroFrame) {
    ASSERT_EQ(invoke({"spectrum", (kData / "clean_tone.wav").string(), path("z.csv"), "--k", "3"}).code, cli::kSuccess);
    const auto rows = lines(slurp(path("z_k3.csv")));
    for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_EQ(std::stod(split(rows[i])[3]), 0.0);
}

TEST_F(CliTest, SpectrumWhiteNoiseIsFlat) {
    ASSERT_EQ(invoke({"synth", "white", path("w.wav"), "--duration", "1.7", "--seed", "5"}).code, cli::kSuccess);
    std::vector<double> mean_mag(256, 0.0);
    for (int f = 0; f < 100; ++f) {
        ASSERT_EQ(invoke({"spectrum", path("w.wav"), path("w.csv"), "--k", "3", "--frame-index", std::to_string(f)}).code,
                  cli::kSuccess);
        const auto rows = lines(slurp(path("w_k3.csv")));
        for (std::size_t i = 0; i < 256; ++i) mean_mag[i] += std::stod(split(rows[i + 2])[3]) / 100.0;
    }
    double avg = 0.0;
    for (double v : mean_mag) avg += v / 256.0;
    for (double v : mean_mag) EXPECT_LE(v, 5.0 * avg);
}

TEST_F(CliTest, SpectrumFrameOutOfRange) {
    EXPECT_EQ(invoke({"spectrum", (kData / "clean_tone.wav").string(), path("s.csv"), "--frame-index", "100000"}).code,
              cli::kInputError);
}
