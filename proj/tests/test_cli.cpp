#include "mms/bvh.hpp"
#include "mms/service.hpp"
#include "mms/synthetic.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

using namespace mms;

namespace {

struct CliRun {
    int status = -1;
    std::string output;  // stdout and stderr
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(MMSPLAY_PATH) + " " + args + " 2>&1";
    CliRun r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
    const int raw = ::pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        root_ = new std::filesystem::path(test::temp_dir("cli"));
        synthetic::write_demo_dictionary(*root_ / "dict");
        std::ofstream(*root_ / "two.csv") << "maingloss,transition\nINDEX,\nNICHT,0.5\n";
        std::ofstream(*root_ / "bad.csv") << "maingloss,framestart,frameend\nINDEX,2,3\nNICHT,0,1\n";
    }
    static void TearDownTestSuite() {
        std::filesystem::remove_all(*root_);
        delete root_;
    }

    static std::string path(const std::string& name) { return (*root_ / name).string(); }

    static std::filesystem::path* root_;
};

std::filesystem::path* CliTest::root_ = nullptr;

}  // namespace

TEST_F(CliTest, Version) {
    const CliRun r = run("--version");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.output.find(std::string(kVersion)), std::string::npos);
}

TEST_F(CliTest, ValidateOnlyWellFormed) {
    const CliRun r = run("--mms " + path("two.csv") + " --dict " + path("dict") + " --validate-only");
    EXPECT_EQ(r.status, 0) << r.output;
    EXPECT_NE(r.output.find("0 errors"), std::string::npos);
    const CliRun no_dict = run("--mms " + path("two.csv") + " --validate-only");
    EXPECT_EQ(no_dict.status, 0) << no_dict.output;
}

TEST_F(CliTest, ValidationFailureExitsOne) {
    const CliRun r = run("--mms " + path("bad.csv") + " --dict " + path("dict") + " --out " + path("bad.bvh"));
    EXPECT_EQ(r.status, 1) << r.output;
    EXPECT_FALSE(std::filesystem::exists(path("bad.bvh")));
    const auto diagnostics = check_mms(parse_mms(slurp(path("bad.csv"))), *GlossDictionary::open(
                                           path("dict"), SkeletonProfile::default_profile()));
    for (const auto& d : diagnostics) EXPECT_NE(r.output.find(d.to_string()), std::string::npos) << d.to_string();
}

TEST_F(CliTest, MissingDictionaryExitsTwo) {
    const std::string missing = path("no_such_dict");
    const CliRun r = run("--mms " + path("two.csv") + " --dict " + missing + " --out " + path("x.bvh"));
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.output.find(missing), std::string::npos) << r.output;
}

TEST_F(CliTest, TwoRowRealization) {
    const CliRun r = run("--mms " + path("two.csv") + " --dict " + path("dict") + " --out " + path("two.bvh") +
                      " --segments " + path("two.segments.json"));
    ASSERT_EQ(r.status, 0) << r.output;
    // 31 + ceil(0.5 * 30) - 1 + 25 frames.
    const BvhData d = load_bvh(slurp(path("two.bvh")));
    EXPECT_EQ(d.clip.frame_count(), 70u);
    EXPECT_NE(r.output.find("70 frames at 30 fps"), std::string::npos);
    const auto seg = nlohmann::json::parse(slurp(path("two.segments.json")));
    EXPECT_EQ(seg["frame_count"], 70);
}

TEST_F(CliTest, MatchesServiceBytes) {
    const CliRun r = run("--mms " + path("two.csv") + " --dict " + path("dict") + " --format json --fps 24 --out " +
                      path("two.json"));
    ASSERT_EQ(r.status, 0) << r.output;
    RealizeService service(GlossDictionary::open(path("dict"), SkeletonProfile::default_profile()));
    const nlohmann::json body = {{"mms", slurp(path("two.csv"))}, {"output_format", "json"}, {"fps", 24}};
    const HttpReply reply = service.realize(body.dump());
    ASSERT_EQ(reply.status, 200);
    EXPECT_EQ(reply.body, slurp(path("two.json")));
}

TEST_F(CliTest, MissingOutIsUsageError) {
    const CliRun r = run("--mms " + path("two.csv") + " --dict " + path("dict"));
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find("--out is required"), std::string::npos);
}
