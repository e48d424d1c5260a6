#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run
{
    int code = -1;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(WULFF_LAB_EXE) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(const std::string& name) { return std::string(WULFF_SAMPLES_DIR) + "/" + name; }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Scratch : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("wulff_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

} // namespace

TEST(Cli, AmgmSuitePasses)
{
    const auto r = run("amgm --count 1000 --n 4 --seed 7");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["command"], "amgm");
    EXPECT_EQ(j["config"]["count"], 1000);
    EXPECT_EQ(j["config"]["seed"], 7);
    EXPECT_EQ(j["result"]["violations"], 0);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(run("amgm --count 100 --suite lemma").code, 0);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run("amgm --count 0").code, 64);
    EXPECT_EQ(run("").code, 64);
    EXPECT_EQ(run("frobnicate").code, 64);
    EXPECT_EQ(run("verify iso").code, 64);
    EXPECT_EQ(run("verify iso --mode sideways --random").code, 64);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, VerifyFiles)
{
    const auto r = run("verify iso --k " + sample("cube2.json") + " --l " + sample("disc256.json"));
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["reports"].size(), 1u);
    const auto& rep = j["reports"][0];
    EXPECT_EQ(rep["name"], "isoperimetric-dimensional");
    EXPECT_TRUE(rep["pass"].get<bool>());
    EXPECT_LT(rep["ratio"].get<double>(), 1e-3);
    EXPECT_NEAR(rep["deficit"].get<double>(), 0.1284, 5e-4);
    EXPECT_EQ(rep["inputs"][0], "cube2");
}

TEST(Cli, VerifyRandomCorpus)
{
    const auto r = run("verify bm --random --n 3 --pairs 50 --seed 11");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["reports"].size(), 50u);
    EXPECT_EQ(j["failures"], 0);
    const auto all = nlohmann::json::parse(run("verify iso --random --n 2 --pairs 6 --mode all --seed 2").out);
    // Three reports for the symmetric even-index pairs, two otherwise.
    EXPECT_EQ(all["reports"].size(), 15u);
    EXPECT_EQ(run("verify dar --random --n 2 --pairs 5").code, 0);
    EXPECT_EQ(run("verify derive --random --n 2 --pairs 2").code, 0);
}

TEST_F(Scratch, VerifyErrorCodes)
{
    EXPECT_EQ(run("verify iso --mode symmetric --k " + sample("simplex.json") + " --l " + sample("disc256.json")).code,
              66);
    std::ofstream(path("flat.json")) << R"({"dimension": 2, "label": "flat", "vertices": [[0,0],[1,1],[2,2]]})";
    std::ofstream(path("junk.json")) << "not json";
    std::ofstream(path("short.json")) << R"({"dimension": 3, "vertices": [[0,0],[1,0],[0,1]]})";
    for (const char* f : {"flat.json", "junk.json", "short.json"})
        EXPECT_EQ(run("verify bm --k " + path(f) + " --l " + sample("cube2.json")).code, 65) << f;
    EXPECT_EQ(run("verify bm --k " + sample("cube3.json") + " --l " + sample("cube2.json")).code, 65);
}

TEST_F(Scratch, ConjectureTable)
{
    const auto r = run("conjecture --n 2..8 --eps 0.02,0.01,0.005 --out " + path("table.csv"));
    ASSERT_EQ(r.code, 0);
    const auto summary = nlohmann::json::parse(r.out);
    EXPECT_GE(summary["fitted_exponent"].get<double>(), 1.7);
    EXPECT_EQ(summary["rows"], 21);
    std::ifstream in(path("table.csv"));
    std::string line;
    int data = 0, comments = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) ++comments;
        else if (line == "n,m,epsilon,beta,asymmetry,sigma,c_lower") header = true;
        else ++data;
    }
    EXPECT_TRUE(header);
    EXPECT_EQ(data, 21);
    EXPECT_EQ(comments, 2);

    const auto single = run("conjecture --n 4 --eps 0.1");
    ASSERT_EQ(single.code, 0);
    EXPECT_NE(single.out.find("skipped"), std::string::npos);
    EXPECT_EQ(run("conjecture --n 9..2 --out " + path("bad.csv")).code, 65);
    EXPECT_EQ(run("conjecture --n 2 --eps 0.7 --out " + path("bad.csv")).code, 65);
    EXPECT_FALSE(fs::exists(path("bad.csv")));
}

TEST_F(Scratch, RerunsAreByteIdentical)
{
    const std::vector<std::string> commands = {
        "amgm --count 2000 --seed 3",
        "amgm --count 500 --suite lemma --seed 4",
        "verify iso --random --n 2 --pairs 8 --mode all --seed 5",
        "verify bm --random --n 3 --pairs 4 --seed 6",
        "conjecture --n 2..6 --eps 0.02,0.01",
        "search --n 2 --budget 60 --seed 7",
        "transport --samples 256 --seed 8 --chain 200 --trace 4",
        "body --shape random --n 3 --points 7 --seed 9",
    };
    for (const auto& c : commands) {
        const auto a = run(c + " --out " + path("x.out"));
        const auto first = slurp(path("x.out"));
        fs::remove(path("x.out"));
        const auto b = run(c + " --out " + path("x.out"));
        EXPECT_EQ(a.code, 0) << c;
        EXPECT_EQ(a.out, b.out) << c;
        EXPECT_EQ(first, slurp(path("x.out"))) << c;
        EXPECT_FALSE(first.empty()) << c;
        EXPECT_EQ(run(c).out, run(c).out) << c;
    }
}

TEST_F(Scratch, BodyRoundTrip)
{
    ASSERT_EQ(run("body --shape random --n 3 --points 9 --seed 5 --out " + path("k.json")).code, 0);
    const auto info = nlohmann::json::parse(run("body --info " + path("k.json")).out);
    EXPECT_EQ(info["dimension"], 3);
    EXPECT_GT(info["volume"].get<double>(), 0.0);
    EXPECT_LE(info["q_upper"].get<double>(), 3.0 + 1e-9);
    EXPECT_EQ(slurp(path("k.json")), slurp(sample("random3.json")));
}

TEST(Cli, TransportReport)
{
    const auto r = run("transport --samples 512 --seed 1");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& m = j["affine_fit"]["matrix"];
    EXPECT_NEAR(m[0][0].get<double>(), 2.0, 0.1);
    EXPECT_NEAR(m[1][1].get<double>(), 0.5, 0.1);
    EXPECT_NEAR(j["jacobians"]["median_det"].get<double>(), 1.0, 0.25);
    EXPECT_EQ(j["optimality"]["two_swap"]["improving"], 0);
    EXPECT_EQ(run("transport --samples 5000").code, 64);
}

TEST(Cli, SearchReport)
{
    const auto j = nlohmann::json::parse(run("search --n 2 --budget 0").out);
    EXPECT_TRUE(j["reports"].empty());
    EXPECT_TRUE(j["max_empirical_constant"].is_null());
}
