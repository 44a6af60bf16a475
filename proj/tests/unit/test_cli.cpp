#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <algorithm>
#include <random>
#include <sstream>

#include "pcscrypt/symbol_io.hpp"
#include "pcscrypt_tools/cli.hpp"

namespace fs = std::filesystem;
using namespace pcscrypt;
using pcscrypt::tools::run_cli;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("pcscrypt_cli_" + std::to_string(std::random_device{}()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
        write("link.cfg", "key_hex = 2b7e151628aed2a6abf7158809cf4f3c\nradix = 267\nblocksize = 22\n");
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream f(dir_ / name, std::ios::binary);
        f << text;
    }

    std::string read(const std::string& name) const {
        std::ifstream f(dir_ / name, std::ios::binary);
        return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    }

    int run(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return run_cli(args, out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

}  // namespace

TEST_F(CliTest, Version) {
    EXPECT_EQ(run({"--version"}), 0);
    EXPECT_NE(out_.str().find(tools::version()), std::string::npos);
    EXPECT_EQ(run({"--formats"}), 0);
    EXPECT_NE(out_.str().find("exit_codes"), std::string::npos);
}

TEST_F(CliTest, UnknownCommandAndMissingOptions) {
    EXPECT_EQ(run({"frobnicate"}), tools::exit_validation);
    EXPECT_EQ(run({"encrypt", "--in", path("x.sym")}), tools::exit_validation);
}

TEST_F(CliTest, EncryptDecryptRoundTripAllFormats) {
    for (const std::string ext : {".sym", ".symb", ".idx"}) {
        std::vector<codec::Symbol8b10b> plain;
        for (int i = 0; i < 1000; ++i) plain.push_back(i % 2 ? codec::symbols::D16_2 : codec::symbols::K28_5);
        io::write_symbols(dir_ / ("plain" + ext), plain);
        ASSERT_EQ(run({"encrypt", "--in", path("plain" + ext), "--cfg", path("link.cfg"), "--out",
                       path("enc" + ext)}),
                  0)
            << err_.str();
        EXPECT_TRUE(fs::exists(dir_ / ("enc" + ext + ".manifest.json")));
        EXPECT_NE(read("enc" + ext), read("plain" + ext));
        ASSERT_EQ(run({"decrypt", "--in", path("enc" + ext), "--cfg", path("link.cfg"), "--out",
                       path("dec" + ext)}),
                  0)
            << err_.str();
        EXPECT_EQ(read("dec" + ext), read("plain" + ext)) << ext;
    }
}

TEST_F(CliTest, ManifestEchoesConfigWithoutKey) {
    write("p.sym", "K28.5\nD16.2\n");
    ASSERT_EQ(run({"encrypt", "--in", path("p.sym"), "--cfg", path("link.cfg"), "--out", path("c.sym"), "--manifest",
                   path("m.json")}),
              0);
    const auto m = read("m.json");
    EXPECT_NE(m.find("\"encrypt\""), std::string::npos);
    EXPECT_NE(m.find("key_fingerprint"), std::string::npos);
    EXPECT_EQ(m.find("2b7e151628aed2a6abf7158809cf4f3c"), std::string::npos);
}

TEST_F(CliTest, ExcludedSymbolReportsLine) {
    write("p.sym", "K28.5\nD16.2\n# gap\nK28.7\n");
    EXPECT_EQ(run({"encrypt", "--in", path("p.sym"), "--cfg", path("link.cfg"), "--out", path("c.sym")}),
              tools::exit_validation);
    EXPECT_NE(err_.str().find("line 4"), std::string::npos) << err_.str();
    EXPECT_FALSE(fs::exists(dir_ / "c.sym"));
}

TEST_F(CliTest, WeakBlockSizeRejected) {
    write("weak.cfg", "key_hex = 2b7e151628aed2a6abf7158809cf4f3c\nblocksize = 15\n");
    write("p.sym", "K28.5\n");
    EXPECT_EQ(run({"encrypt", "--in", path("p.sym"), "--cfg", path("weak.cfg"), "--out", path("c.sym")}),
              tools::exit_validation);
    EXPECT_EQ(run({"keystream", "--cfg", path("weak.cfg"), "--blocks", "1", "--out", path("k.idx")}),
              tools::exit_validation);
}

TEST_F(CliTest, FreshRefusesReuse) {
    write("p.sym", "K28.5\nD16.2\n");
    const std::vector<std::string> args = {"encrypt", "--in",  path("p.sym"), "--cfg",
                                           path("link.cfg"), "--out", path("c.sym"), "--fresh"};
    EXPECT_EQ(run(args), 0);
    EXPECT_EQ(run(args), tools::exit_validation);
    EXPECT_NE(err_.str().find("already used"), std::string::npos);
}

TEST_F(CliTest, KeystreamIndices) {
    ASSERT_EQ(run({"keystream", "--cfg", path("link.cfg"), "--blocks", "2", "--out", path("k.idx")}), 0)
        << err_.str();
    std::istringstream in(read("k.idx"));
    const auto idx = io::read_indices(in);
    EXPECT_EQ(idx.size(), 44u);
}

TEST_F(CliTest, DumpAlphabet) {
    ASSERT_EQ(run({"dump-alphabet", "--out", path("a.csv")}), 0);
    const auto csv = read("a.csv");
    EXPECT_EQ(csv.rfind("symbol,index\n", 0), 0u);
    EXPECT_NE(csv.find("K28.5,261\n"), std::string::npos);
    EXPECT_EQ(csv.find("K28.7"), std::string::npos);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 268);
}

TEST_F(CliTest, SimulateReport) {
    ASSERT_EQ(run({"simulate", "--pattern", "D", "--frames", "5", "--encrypt", "on", "--cfg", path("link.cfg"),
                   "--report", path("r.json"), "--kflags", path("k.csv"), "--trace", path("t.symb")}),
              0)
        << err_.str();
    const auto r = read("r.json");
    EXPECT_NE(r.find("\"frames_received\": 5"), std::string::npos) << r;
    EXPECT_NE(r.find("\"crc_errors\": 0"), std::string::npos);
    EXPECT_EQ(read("k.csv").rfind("position,k\n", 0), 0u);
    EXPECT_EQ(io::read_symbols(dir_ / "t.symb").symbols.size(), 5u * (1053 + 104));
    EXPECT_EQ(run({"simulate", "--pattern", "Q"}), tools::exit_validation);
    EXPECT_EQ(run({"simulate", "--pattern", "D", "--encrypt", "on"}), tools::exit_validation);
}

TEST_F(CliTest, AnalyzeFlagsPatternedTrace) {
    std::string idle;
    for (int i = 0; i < 20000; ++i) idle += i % 2 ? "80\n" : "261\n";
    write("idle.idx", idle);
    EXPECT_EQ(run({"analyze", "--in", path("idle.idx"), "--tests", "frequency", "--entropy", "n=1", "--out",
                   path("a.json")}),
              tools::exit_test_failure);
    const auto a = read("a.json");
    EXPECT_NE(a.find("\"fail\""), std::string::npos);
}

TEST_F(CliTest, AnalyzeAcceptsKeystream) {
    ASSERT_EQ(run({"keystream", "--cfg", path("link.cfg"), "--blocks", "6000", "--out", path("k.idx")}), 0);
    EXPECT_EQ(run({"analyze", "--in", path("k.idx"), "--tests", "frequency,poker,run", "--out", path("a.json"),
                   "--alpha", "0.001"}),
              0)
        << read("a.json");
    EXPECT_EQ(run({"analyze", "--in", path("k.idx"), "--tests", "serial2", "--out", path("s.json")}), 0);
    EXPECT_NE(read("s.json").find("skipped"), std::string::npos);
}

TEST_F(CliTest, Vectors) {
    EXPECT_EQ(run({"vectors", "--ff3", PCSCRYPT_TEST_DATA_DIR "/ff3_sample_vectors.txt"}), 0);
    EXPECT_NE(out_.str().find("vectors pass"), std::string::npos);
    EXPECT_EQ(run({"vectors", "--ff3", path("missing.txt")}), tools::exit_validation);
}
