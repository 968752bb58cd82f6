#include "mms/bvh.hpp"
#include "mms/clip_json.hpp"
#include "mms/service.hpp"
#include "mms/synthetic.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "httplib.h"

using namespace mms;
using nlohmann::json;

namespace {

const char* kTwoRows = "maingloss,transition\nINDEX,\nNICHT,0.5\n";
const char* kNonMonotonic = "maingloss,framestart,frameend\nINDEX,2,3\nNICHT,0,1\n";

class ServiceTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = new std::filesystem::path(test::temp_dir("service") / "signs");
        synthetic::write_demo_dictionary(*dir_);
    }
    static void TearDownTestSuite() {
        std::filesystem::remove_all(dir_->parent_path());
        delete dir_;
    }

    void SetUp() override {
        dict_ = GlossDictionary::open(*dir_, SkeletonProfile::default_profile());
        auto lefty = SkeletonProfile::default_profile();
        lefty.dominant_side = Side::Left;
        service_ = std::make_shared<RealizeService>(dict_, std::map<std::string, SkeletonProfile>{{"lefty", lefty}});
    }

    HttpReply post(const json& body) const { return service_->realize(body.dump()); }

    static std::filesystem::path* dir_;
    std::shared_ptr<GlossDictionary> dict_;
    std::shared_ptr<RealizeService> service_;
};

std::filesystem::path* ServiceTest::dir_ = nullptr;

}  // namespace

TEST_F(ServiceTest, Health) {
    const HttpReply r = service_->health();
    EXPECT_EQ(r.status, 200);
    const json j = json::parse(r.body);
    EXPECT_EQ(j["status"], "ok");
    EXPECT_EQ(j["version"], std::string(kVersion));
}

TEST_F(ServiceTest, GlossList) {
    const json j = json::parse(service_->glosses().body);
    ASSERT_EQ(j["glosses"].size(), 13u);
    bool found = false;
    for (const auto& g : j["glosses"]) {
        if (g["gloss"] == "INDEX") {
            found = true;
            EXPECT_NEAR(g["nominal_duration"].get<double>(), 1.0, 1e-9);
        }
    }
    EXPECT_TRUE(found);
}

TEST_F(ServiceTest, RealizeBvhMatchesLibrary) {
    const HttpReply r = post({{"mms", kTwoRows}});
    ASSERT_EQ(r.status, 200) << r.body;
    EXPECT_EQ(r.content_type, "application/x-bvh");
    const Artifact direct = realize_to_artifact(kTwoRows, Dialect::csv(), *dict_, dict_->profile(), 30.0,
                                                ExportFormat::Bvh);
    EXPECT_EQ(r.body, direct.bytes);
    EXPECT_EQ(load_bvh(r.body).clip.frame_count(), 31u + 14u + 25u);
}

TEST_F(ServiceTest, RealizeJsonWithOptions) {
    const HttpReply r = post({{"mms", kTwoRows}, {"output_format", "json"}, {"fps", 60}, {"profile", "lefty"},
                              {"dictionary", "signs"}});
    ASSERT_EQ(r.status, 200) << r.body;
    EXPECT_EQ(r.content_type, "application/json");
    const AnimationClip clip = load_clip_json(r.body);
    EXPECT_EQ(clip.fps(), 60.0);
    EXPECT_EQ(clip.frame_count(), 61u + 29u + 49u);
    const json meta = json::parse(r.body)["metadata"];
    EXPECT_EQ(meta["segments"].size(), 3u);

    const HttpReply tsv = post({{"mms", "maingloss\ttransition\nINDEX\t\nNICHT\t0.5\n"}, {"dialect", "tsv"}});
    EXPECT_EQ(tsv.body, post({{"mms", kTwoRows}}).body);
}

TEST_F(ServiceTest, BadRequests) {
    EXPECT_EQ(service_->realize("{not json").status, 400);
    EXPECT_EQ(service_->realize("[1,2]").status, 400);
    EXPECT_EQ(post({{"fps", 30}}).status, 400);
    EXPECT_EQ(post({{"mms", kTwoRows}, {"output_format", "mp4"}}).status, 400);
    EXPECT_EQ(post({{"mms", kTwoRows}, {"fps", -1}}).status, 400);
    EXPECT_EQ(post({{"mms", kTwoRows}, {"dialect", "xls"}}).status, 400);
    EXPECT_EQ(post({{"mms", kTwoRows}, {"profile", "nobody"}}).status, 400);
    const HttpReply d = post({{"mms", kTwoRows}, {"dictionary", "elsewhere"}});
    EXPECT_EQ(d.status, 400);
    EXPECT_EQ(json::parse(d.body)["error"], "unknown dictionary: elsewhere");
}

TEST_F(ServiceTest, ValidationFailureIs422WithCliText) {
    const HttpReply r = post({{"mms", kNonMonotonic}});
    ASSERT_EQ(r.status, 422);
    const json j = json::parse(r.body);
    EXPECT_GE(j["errors"].get<int>(), 1);
    const ParseResult parsed = parse_mms(kNonMonotonic);
    const auto diagnostics = check_mms(parsed, *dict_);
    ASSERT_EQ(j["diagnostics"].size(), diagnostics.size());
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
        EXPECT_EQ(j["diagnostics"][i]["text"], diagnostics[i].to_string());
    }
    EXPECT_EQ(post({{"mms", "duration\n1\n"}}).status, 422);
}

TEST_F(ServiceTest, RealizationFailureIs500WithRow) {
    // The skeleton check fails on a clip that does not fit the dictionary.
    auto skel = test::planar_chain();
    const auto extra = dir_->parent_path() / "odd";
    std::filesystem::create_directories(extra);
    std::filesystem::copy_file(*dir_ / "INDEX.bvh", extra / "INDEX.bvh",
                               std::filesystem::copy_options::overwrite_existing);
    std::ofstream(extra / "ODD.bvh") << save_bvh(AnimationClip(skel, 30.0, {Pose::identity(*skel), Pose::identity(*skel)}));
    RealizeService odd(GlossDictionary::open(extra, SkeletonProfile::default_profile()));
    const HttpReply r = odd.realize(json{{"mms", "maingloss\nINDEX\nODD\n"}}.dump());
    EXPECT_EQ(r.status, 500);
    EXPECT_EQ(json::parse(r.body)["row"], 1);
}

TEST_F(ServiceTest, ConcurrentRequestsAgree) {
    const std::string expected = post({{"mms", kTwoRows}}).body;
    std::vector<std::string> bodies(4);
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i) {
        threads.emplace_back([&, i] { bodies[i] = post({{"mms", kTwoRows}}).body; });
    }
    for (auto& t : threads) t.join();
    for (const auto& b : bodies) EXPECT_EQ(b, expected);
}

TEST_F(ServiceTest, HttpEndToEnd) {
    HttpServer server(service_, ServerConfig{"127.0.0.1", 0});
    const int port = server.bind();
    ASSERT_GT(port, 0);
    std::thread loop([&] { server.listen(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(health->get_header_value("X-MMS-Version"), std::string(kVersion));

    auto glosses = client.Get("/glosses");
    ASSERT_TRUE(glosses);
    EXPECT_EQ(glosses->status, 200);

    auto ok = client.Post("/realize", json{{"mms", kTwoRows}}.dump(), "application/json");
    ASSERT_TRUE(ok);
    EXPECT_EQ(ok->status, 200);
    EXPECT_EQ(ok->get_header_value("Content-Type"), "application/x-bvh");
    EXPECT_EQ(ok->body, post({{"mms", kTwoRows}}).body);

    auto bad = client.Post("/realize", json{{"mms", kNonMonotonic}}.dump(), "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 422);

    auto missing = client.Get("/nothing");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);

    server.stop();
    loop.join();
}

TEST(Service, BindFailureIsIoError) {
    auto dict = GlossDictionary::from_clips(synthetic::demo_glosses(), SkeletonProfile::default_profile());
    auto service = std::make_shared<RealizeService>(dict);
    HttpServer first(service, ServerConfig{"127.0.0.1", 0});
    const int port = first.bind();
    HttpServer second(service, ServerConfig{"127.0.0.1", port});
    EXPECT_THROW(second.bind(), IoError);
}

TEST(Service, ExportFormats) {
    EXPECT_EQ(parse_export_format("bvh"), ExportFormat::Bvh);
    EXPECT_EQ(parse_export_format("json"), ExportFormat::Json);
    EXPECT_FALSE(parse_export_format("fbx"));
    EXPECT_EQ(content_type(ExportFormat::Json), "application/json");
    EXPECT_EQ(to_string(ExportFormat::Bvh), "bvh");
}
