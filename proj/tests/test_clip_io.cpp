#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "mms/bvh.hpp"
#include "mms/clip_json.hpp"
#include "mms/dictionary.hpp"
#include "mms/error.hpp"
#include "mms/synthetic.hpp"
#include "test_support.hpp"

using namespace mms;

namespace {

const char* kMinimal =
    "HIERARCHY\n"
    "ROOT Hips\n"
    "{\n"
    "  OFFSET 0 0 0\n"
    "  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n"
    "  End Site\n"
    "  {\n"
    "    OFFSET 0 1 0\n"
    "  }\n"
    "}\n"
    "MOTION\n"
    "Frames: 2\n"
    "Frame Time: 0.033333\n"
    "0 0 0 0 0 0\n"
    "1 2 3 90 0 0\n";

void expect_clips_equal(const AnimationClip& a, const AnimationClip& b, double tol) {
    ASSERT_EQ(a.frame_count(), b.frame_count());
    ASSERT_TRUE(a.skeleton().same_hierarchy(b.skeleton(), tol));
    EXPECT_NEAR(a.fps(), b.fps(), 1e-9);
    for (std::size_t f = 0; f < a.frame_count(); ++f) {
        EXPECT_LT((a.frame(f).root_translation - b.frame(f).root_translation).cwiseAbs().maxCoeff(), tol);
        for (std::size_t j = 0; j < a.skeleton().size(); ++j) {
            EXPECT_LT(angle_between_deg(a.frame(f).rotations[j], b.frame(f).rotations[j]), tol);
        }
    }
}

std::string read(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST(Bvh, MinimalFile) {
    const BvhData d = load_bvh(kMinimal);
    EXPECT_EQ(d.skeleton->size(), 1u);
    ASSERT_EQ(d.clip.frame_count(), 2u);
    EXPECT_NEAR(d.clip.fps(), 30.0, 1e-9);
    EXPECT_NEAR(d.clip.nominal_duration(), 0.0333, 1e-3);
    EXPECT_EQ(d.clip.frame(1).root_translation, Vec3(1, 2, 3));
    ASSERT_TRUE(d.skeleton->bone(0).end_site);
    EXPECT_EQ(*d.skeleton->bone(0).end_site, Vec3(0, 1, 0));
}

TEST(Bvh, ZxyNinetyAboutZ) {
    const BvhData d = load_bvh(kMinimal);
    const Quat expected(Eigen::AngleAxisd(kPi / 2.0, Vec3::UnitZ()));
    EXPECT_LT(angle_between_deg(d.clip.frame(1).rotations[0], expected), 1e-6);
    // Oracle on the rotation matrix: +X maps to +Y.
    const Vec3 x = d.clip.frame(1).rotations[0] * Vec3::UnitX();
    EXPECT_LT((x - Vec3::UnitY()).norm(), 1e-6);
}

TEST(Bvh, ChannelOrderComposition) {
    // ZXY with Z=30, X=40, Y=50 is Rz * Rx * Ry.
    const std::string text =
        "HIERARCHY\nROOT r\n{\n OFFSET 0 0 0\n CHANNELS 3 Zrotation Xrotation Yrotation\n"
        " End Site\n {\n OFFSET 0 1 0\n }\n}\nMOTION\nFrames: 1\nFrame Time: 0.1\n30 40 50\n";
    const BvhData d = load_bvh(text);
    const Quat expected = Quat(Eigen::AngleAxisd(deg_to_rad(30), Vec3::UnitZ())) *
                          Quat(Eigen::AngleAxisd(deg_to_rad(40), Vec3::UnitX())) *
                          Quat(Eigen::AngleAxisd(deg_to_rad(50), Vec3::UnitY()));
    EXPECT_LT(angle_between_deg(d.clip.frame(0).rotations[0], expected), 1e-9);
    EXPECT_NEAR(d.clip.fps(), 10.0, 1e-12);
}

TEST(Bvh, SaveFormat) {
    auto skel = test::planar_chain();
    std::vector<Pose> frames(3, Pose::identity(*skel));
    const std::string text = save_bvh(AnimationClip(skel, 30.0, frames));
    EXPECT_NE(text.find("Frames: 3\n"), std::string::npos);
    EXPECT_NE(text.find("Frame Time: 0.033333\n"), std::string::npos);
    EXPECT_NE(text.find("CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation"), std::string::npos);
    EXPECT_NE(text.find("CHANNELS 3 Zrotation Xrotation Yrotation"), std::string::npos);
    const std::string zeros = "0.000000 0.000000 0.000000 0.000000 0.000000 0.000000 0.000000 0.000000 0.000000 "
                              "0.000000 0.000000 0.000000 0.000000 0.000000 0.000000";
    const auto motion = text.substr(text.find("Frame Time"));
    EXPECT_NE(motion.find(zeros), std::string::npos);
}

TEST(Bvh, RoundTripSyntheticSigner) {
    const AnimationClip clip = synthetic::arm_motion_clips()[3];
    const BvhData once = load_bvh(save_bvh(clip));
    expect_clips_equal(clip, once.clip, 1e-4);
    const std::string second = save_bvh(once.clip);
    const BvhData twice = load_bvh(second);
    expect_clips_equal(once.clip, twice.clip, 1e-5);
    EXPECT_EQ(save_bvh(twice.clip), second);
}

TEST(Bvh, AllChannelOrdersFixpoint) {
    const std::vector<AxisOrder> all = {AxisOrder::XYZ, AxisOrder::XZY, AxisOrder::YXZ,
                                        AxisOrder::YZX, AxisOrder::ZXY, AxisOrder::ZYX};
    for (std::size_t k = 0; k < all.size(); ++k) {
        const std::vector<AxisOrder> orders = {all[k], all[(k + 1) % 6], all[(k + 3) % 6]};
        const std::string text = test::corpus_bvh(orders, 12, 100 + static_cast<unsigned>(k));
        const BvhData a = load_bvh(text);
        const BvhData b = load_bvh(save_bvh(a.clip));
        expect_clips_equal(a.clip, b.clip, 1e-4);
        const BvhData c = load_bvh(save_bvh(b.clip));
        expect_clips_equal(b.clip, c.clip, 1e-5);
    }
}

TEST(Bvh, ErrorsCarryLineNumbers) {
    try {
        load_bvh("HIERARCHY\nROOT a\n{\n  OFFSET 0 0\n  CHANNELS 3 Xrotation Yrotation Zrotation\n}\n");
        FAIL();
    } catch (const BvhError& e) {
        EXPECT_EQ(e.line(), 5u);
        EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
    }
    EXPECT_THROW(load_bvh("HIERARCHY\nROOT a\n{\n OFFSET 0 0 0\n CHANNELS 3 Xrotation Yrotation Zrotation\n}\n"
                          "MOTION\nFrames: 0\nFrame Time: 0.1\n"),
                 BvhError);
    EXPECT_THROW(load_bvh("HIERARCHY\nROOT a\n{\n OFFSET 0 0 0\n CHANNELS 3 Xrotation Yrotation Zrotation\n}\n"
                          "MOTION\nFrames: 2\nFrame Time: 0.1\n1 2 3\n"),
                 BvhError);
    EXPECT_THROW(load_bvh("HIERARCHY\nROOT a\n{\n OFFSET 0 0 0\n CHANNELS 3 Xrotation Wrotation Zrotation\n}\n"
                          "MOTION\nFrames: 1\nFrame Time: 0.1\n1 2 3\n"),
                 BvhError);
}

TEST(Bvh, NonRootTranslationChannels) {
    const std::string head =
        "HIERARCHY\nROOT a\n{\n OFFSET 0 0 0\n CHANNELS 3 Zrotation Xrotation Yrotation\n"
        " JOINT b\n {\n  OFFSET 0 1 0\n  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n"
        "  End Site\n  {\n   OFFSET 0 1 0\n  }\n }\n}\nMOTION\nFrames: 2\nFrame Time: 0.1\n";
    const BvhData folded = load_bvh(head + "0 0 0 0.5 0 0 0 0 0\n0 0 0 0.5 0 0 10 0 0\n");
    EXPECT_LT((folded.skeleton->bone(1).rest_offset - Vec3(0.5, 1, 0)).norm(), 1e-12);
    try {
        load_bvh(head + "0 0 0 0.5 0 0 0 0 0\n0 0 0 0.7 0 0 10 0 0\n");
        FAIL();
    } catch (const BvhError& e) {
        EXPECT_NE(std::string(e.what()).find("animated translation"), std::string::npos);
    }
}

TEST(ClipJson, RoundTripAndSchema) {
    const AnimationClip clip = synthetic::nicht_clip();
    const std::string text = save_clip_json(clip, {{"source", "test"}});
    const auto doc = nlohmann::json::parse(text);
    EXPECT_EQ(doc["format"], "mms-anim/1");
    EXPECT_EQ(doc["frame_count"], clip.frame_count());
    EXPECT_EQ(doc["metadata"]["source"], "test");
    const AnimationClip back = load_clip_json(text);
    expect_clips_equal(clip, back, 1e-12);
    EXPECT_EQ(save_clip_json(back, {{"source", "test"}}), text);
}

TEST(ClipJson, RejectsWrongFormatTag) {
    auto doc = clip_to_json(synthetic::index_clip());
    doc["format"] = "something-else";
    EXPECT_THROW(clip_from_json(doc), Error);
}

class DictionaryTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = test::temp_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
        write(dir_ / "NICHT.bvh", save_bvh(synthetic::nicht_clip()));
        write(dir_ / "INDEX.bvh", save_bvh(synthetic::index_clip()));
        write(dir_ / "README.txt", "not a clip");
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::filesystem::path dir_;
};

TEST_F(DictionaryTest, OpensAndListsEntries) {
    auto dict = GlossDictionary::open(dir_, SkeletonProfile::default_profile());
    EXPECT_EQ(dict->glosses(), (std::vector<std::string>{"INDEX", "NICHT"}));
    EXPECT_TRUE(dict->contains("INDEX"));
    EXPECT_FALSE(dict->contains("index"));
    EXPECT_FALSE(dict->contains("<HOLD>"));
}

TEST_F(DictionaryTest, ReservedAndUnknownIds) {
    auto dict = GlossDictionary::open(dir_, SkeletonProfile::default_profile());
    try {
        dict->lookup("<HOLD>");
        FAIL();
    } catch (const DictionaryError& e) {
        EXPECT_NE(std::string(e.what()).find("reserved token, not a dictionary entry"), std::string::npos);
    }
    try {
        dict->lookup("XYZZY");
        FAIL();
    } catch (const UnknownGlossError& e) {
        EXPECT_EQ(e.gloss(), "XYZZY");
        EXPECT_NE(std::string(e.what()).find("XYZZY"), std::string::npos);
    }
}

TEST_F(DictionaryTest, MissingDirectory) {
    try {
        GlossDictionary::open(dir_ / "nowhere", SkeletonProfile::default_profile());
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("nowhere"), std::string::npos);
    }
}

TEST_F(DictionaryTest, LookupsAreStableAndNominalDurationMatchesFile) {
    auto dict = GlossDictionary::open(dir_, SkeletonProfile::default_profile());
    auto a = dict->lookup("NICHT");
    auto b = dict->lookup("NICHT");
    EXPECT_EQ(a.get(), b.get());
    const BvhData file = load_bvh(read(dir_ / "NICHT.bvh"));
    EXPECT_DOUBLE_EQ(a->nominal_duration(),
                     static_cast<double>(file.clip.frame_count() - 1) / file.clip.fps());
    EXPECT_EQ(a->clip->skeleton_ptr().get(), dict->lookup("INDEX")->clip->skeleton_ptr().get());
}

TEST_F(DictionaryTest, SkeletonMismatchIsRejected) {
    auto skel = test::planar_chain();
    write(dir_ / "ODD.bvh", save_bvh(AnimationClip(skel, 30.0, {Pose::identity(*skel), Pose::identity(*skel)})));
    auto dict = GlossDictionary::open(dir_, SkeletonProfile::default_profile());
    dict->lookup("INDEX");
    EXPECT_THROW(dict->lookup("ODD"), DictionaryError);
}

TEST_F(DictionaryTest, ProfileRolesMustExist) {
    auto skel = test::planar_chain();
    const auto only = test::temp_dir("profile_roles");
    write(only / "ODD.bvh", save_bvh(AnimationClip(skel, 30.0, {Pose::identity(*skel), Pose::identity(*skel)})));
    auto dict = GlossDictionary::open(only, SkeletonProfile::default_profile());
    EXPECT_THROW(dict->lookup("ODD"), ProfileError);
    std::filesystem::remove_all(only);
}

TEST_F(DictionaryTest, ConcurrentLookups) {
    auto dict = GlossDictionary::open(dir_, SkeletonProfile::default_profile());
    std::vector<std::thread> threads;
    std::vector<const GlossEntry*> seen(8);
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] { seen[t] = dict->lookup(t % 2 ? "INDEX" : "NICHT").get(); });
    }
    for (auto& t : threads) t.join();
    for (int t = 2; t < 8; ++t) EXPECT_EQ(seen[t], seen[t % 2]);
}

TEST_F(DictionaryTest, ReloadPicksUpNewFiles) {
    auto dict = GlossDictionary::open(dir_, SkeletonProfile::default_profile());
    EXPECT_FALSE(dict->contains("HAUS"));
    write(dir_ / "HAUS.bvh", save_bvh(synthetic::haus_clip()));
    dict->reload();
    EXPECT_TRUE(dict->contains("HAUS"));
    EXPECT_GT(dict->lookup("HAUS")->clip->frame_count(), 1u);
}
