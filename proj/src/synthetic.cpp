#include "mms/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "mms/bvh.hpp"
#include "mms/error.hpp"

namespace mms::synthetic {
namespace {

constexpr double kFps = 30.0;
const Vec3 kPelvisHeight(0.0, 1.0, 0.0);

struct BoneSpec {
    std::string name;
    std::string parent;  // empty for the root
    Vec3 offset;
    std::optional<Vec3> end_site;
};

void add_arm(std::vector<BoneSpec>& out, const std::string& side, double sx) {
    const std::string p = "Bone_" + side + "_";
    out.push_back({p + "Clavicle", "Bone_Spine2", {sx * 0.03, 0.12, 0.0}, std::nullopt});
    out.push_back({p + "UpperArm", p + "Clavicle", {sx * 0.16, 0.0, 0.0}, std::nullopt});
    out.push_back({p + "Forearm", p + "UpperArm", {0.0, -0.28, 0.0}, std::nullopt});
    out.push_back({p + "Hand", p + "Forearm", {0.0, -0.25, 0.0}, std::nullopt});
    out.push_back({p + "Index1", p + "Hand", {sx * 0.01, -0.08, 0.0}, Vec3(0.0, -0.06, 0.0)});
    out.push_back({p + "Thumb1", p + "Hand", {sx * -0.03, -0.03, 0.02}, Vec3(0.0, -0.04, 0.01)});
}

std::shared_ptr<const Skeleton> build_skeleton() {
    std::vector<BoneSpec> specs = {
        {"Bone_Pelvis", "", {0.0, 0.0, 0.0}, std::nullopt},
        {"Bone_Spine", "Bone_Pelvis", {0.0, 0.10, 0.0}, std::nullopt},
        {"Bone_Spine1", "Bone_Spine", {0.0, 0.12, 0.0}, std::nullopt},
        {"Bone_Spine2", "Bone_Spine1", {0.0, 0.12, 0.0}, std::nullopt},
        {"Bone_Neck", "Bone_Spine2", {0.0, 0.14, 0.0}, std::nullopt},
        {"Bone_Head", "Bone_Neck", {0.0, 0.10, 0.0}, Vec3(0.0, 0.18, 0.0)},
    };
    add_arm(specs, "R", -1.0);
    add_arm(specs, "L", 1.0);
    specs.push_back({"Bone_R_Thigh", "Bone_Pelvis", {-0.10, -0.05, 0.0}, std::nullopt});
    specs.push_back({"Bone_R_Calf", "Bone_R_Thigh", {0.0, -0.45, 0.0}, std::nullopt});
    specs.push_back({"Bone_R_Foot", "Bone_R_Calf", {0.0, -0.42, 0.0}, Vec3(0.0, -0.05, 0.12)});
    specs.push_back({"Bone_L_Thigh", "Bone_Pelvis", {0.10, -0.05, 0.0}, std::nullopt});
    specs.push_back({"Bone_L_Calf", "Bone_L_Thigh", {0.0, -0.45, 0.0}, std::nullopt});
    specs.push_back({"Bone_L_Foot", "Bone_L_Calf", {0.0, -0.42, 0.0}, Vec3(0.0, -0.05, 0.12)});

    std::vector<Bone> bones;
    for (const BoneSpec& s : specs) {
        Bone b;
        b.name = s.name;
        if (!s.parent.empty()) {
            for (std::size_t i = 0; i < bones.size(); ++i) {
                if (bones[i].name == s.parent) b.parent = i;
            }
        }
        b.rest_offset = s.offset;
        b.end_site = s.end_site;
        bones.push_back(std::move(b));
    }
    return std::make_shared<const Skeleton>(std::move(bones));
}

// Yaw about +Y applied after pitch about +X: the arm first swings forward,
// then turns sideways.
Quat yaw_pitch(double yaw_deg, double pitch_deg, double roll_deg = 0.0) {
    return euler_to_quat(Vec3(yaw_deg, pitch_deg, roll_deg), AxisOrder::YXZ);
}

double ease(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

class PoseBuilder {
public:
    explicit PoseBuilder(const Skeleton& skel) : skel_(skel), pose_(Pose::identity(skel)) {
        pose_.root_translation = kPelvisHeight;
    }
    PoseBuilder& set(std::string_view bone, const Quat& q) {
        pose_.rotations[skel_.index_of(bone)] = q.normalized();
        return *this;
    }
    PoseBuilder& root(const Vec3& t) {
        pose_.root_translation = t;
        return *this;
    }
    Pose build() const { return pose_; }

private:
    const Skeleton& skel_;
    Pose pose_;
};

double lerp(double a, double b, double u) { return a + (b - a) * u; }

}  // namespace

std::shared_ptr<const Skeleton> signer_skeleton() {
    static const std::shared_ptr<const Skeleton> skel = build_skeleton();
    return skel;
}

AnimationClip index_clip() {
    auto skel = signer_skeleton();
    std::vector<Pose> frames;
    const int n = 31;
    for (int i = 0; i < n; ++i) {
        const double u = ease(i / 14.0);
        const double t = i / kFps;
        PoseBuilder p(*skel);
        p.set("Bone_R_UpperArm", yaw_pitch(0.0, lerp(-25.0, -62.0, u)));
        p.set("Bone_R_Forearm", yaw_pitch(0.0, lerp(-70.0, -22.0, u)));
        p.set("Bone_R_Hand", yaw_pitch(0.0, lerp(10.0, -6.0, u)));
        p.set("Bone_R_Index1", yaw_pitch(0.0, 0.0));
        p.set("Bone_R_Thumb1", yaw_pitch(0.0, lerp(-30.0, -50.0, u)));
        p.set("Bone_L_UpperArm", yaw_pitch(0.0, -8.0, 6.0));
        p.set("Bone_L_Forearm", yaw_pitch(0.0, -15.0));
        p.set("Bone_Head", yaw_pitch(0.0, 3.0 * u));
        p.set("Bone_Spine1", yaw_pitch(0.0, 2.0 * std::sin(kPi * t)));
        frames.push_back(p.build());
    }
    return AnimationClip(skel, kFps, std::move(frames));
}

AnimationClip nicht_clip() {
    auto skel = signer_skeleton();
    std::vector<Pose> frames;
    const int n = 25;
    for (int i = 0; i < n; ++i) {
        const double t = i / kFps;
        const double swing = std::sin(2.0 * kPi * 2.5 * t);
        PoseBuilder p(*skel);
        p.set("Bone_R_UpperArm", yaw_pitch(18.0 + 10.0 * swing, -35.0, 5.0 * swing));
        p.set("Bone_R_Forearm", yaw_pitch(0.0, -85.0 + 6.0 * swing));
        p.set("Bone_R_Hand", yaw_pitch(8.0 * swing, -10.0));
        p.set("Bone_R_Index1", yaw_pitch(0.0, 0.0));
        p.set("Bone_R_Thumb1", yaw_pitch(0.0, -60.0));
        p.set("Bone_L_UpperArm", yaw_pitch(0.0, -6.0, 5.0));
        p.set("Bone_L_Forearm", yaw_pitch(0.0, -10.0));
        p.set("Bone_Head", yaw_pitch(6.0 * swing, 0.0));
        frames.push_back(p.build());
    }
    return AnimationClip(skel, kFps, std::move(frames));
}

AnimationClip haus_clip() {
    auto skel = signer_skeleton();
    std::vector<Pose> frames;
    const int n = 37;
    for (int i = 0; i < n; ++i) {
        const double u = ease(i / 36.0);
        PoseBuilder p(*skel);
        for (int side = 0; side < 2; ++side) {
            const double s = side == 0 ? 1.0 : -1.0;  // mirror yaw for the left arm
            const std::string prefix = side == 0 ? "Bone_R_" : "Bone_L_";
            p.set(prefix + "UpperArm", yaw_pitch(s * lerp(30.0, 5.0, u), lerp(-55.0, -40.0, u)));
            p.set(prefix + "Forearm", yaw_pitch(0.0, lerp(-85.0, -60.0, u)));
            p.set(prefix + "Hand", yaw_pitch(s * lerp(-20.0, 0.0, u), 0.0));
        }
        frames.push_back(p.build());
    }
    return AnimationClip(skel, kFps, std::move(frames));
}

std::vector<AnimationClip> arm_motion_clips() {
    auto skel = signer_skeleton();
    std::vector<AnimationClip> out;
    for (int k = 0; k < 10; ++k) {
        const int n = 40 + 5 * k;
        const double f1 = 0.6 + 0.15 * k;
        const double f2 = 1.1 + 0.07 * k;
        const double ph = 0.4 * k;
        std::vector<Pose> frames;
        for (int i = 0; i < n; ++i) {
            const double t = i / kFps;
            const double a = std::sin(2.0 * kPi * f1 * t + ph);
            const double b = std::sin(2.0 * kPi * f2 * t + 0.5 * ph);
            const double c = std::cos(2.0 * kPi * 0.5 * f1 * t);
            PoseBuilder p(*skel);
            p.root(kPelvisHeight + Vec3(0.01 * b, 0.005 * a, 0.01 * c));
            p.set("Bone_Pelvis", yaw_pitch(3.0 * b, 1.0 * a));
            p.set("Bone_Spine", yaw_pitch(2.0 * a, 2.0 * c, 1.0 * b));
            p.set("Bone_Spine1", yaw_pitch(2.0 * b, 1.5 * a));
            p.set("Bone_Spine2", yaw_pitch(3.0 * c, 1.0 * b, 1.0 * a));
            p.set("Bone_Neck", yaw_pitch(5.0 * a, 3.0 * b));
            p.set("Bone_Head", yaw_pitch(8.0 * b, 4.0 * c, 2.0 * a));
            p.set("Bone_R_Clavicle", yaw_pitch(3.0 * a, 0.0, 4.0 * b));
            p.set("Bone_L_Clavicle", yaw_pitch(-3.0 * b, 0.0, -4.0 * a));
            p.set("Bone_R_UpperArm", yaw_pitch(15.0 + 15.0 * a + k, -40.0 - 12.0 * b - 2.0 * k, 8.0 * c));
            p.set("Bone_L_UpperArm", yaw_pitch(-15.0 - 12.0 * b - k, -35.0 - 10.0 * c, -6.0 * a));
            p.set("Bone_R_Forearm", yaw_pitch(5.0 * c, -70.0 + 20.0 * b, 10.0 * a));
            p.set("Bone_L_Forearm", yaw_pitch(-5.0 * a, -65.0 + 15.0 * a, -8.0 * b));
            p.set("Bone_R_Hand", yaw_pitch(10.0 * b, 15.0 * a, 12.0 * c));
            p.set("Bone_L_Hand", yaw_pitch(-10.0 * c, 12.0 * b, -9.0 * a));
            p.set("Bone_R_Index1", yaw_pitch(0.0, -20.0 - 20.0 * a));
            p.set("Bone_L_Index1", yaw_pitch(0.0, -20.0 - 20.0 * b));
            p.set("Bone_R_Thumb1", yaw_pitch(0.0, -30.0 + 10.0 * c));
            p.set("Bone_L_Thumb1", yaw_pitch(0.0, -30.0 + 10.0 * a));
            frames.push_back(p.build());
        }
        out.emplace_back(skel, kFps, std::move(frames));
    }
    return out;
}

std::map<std::string, AnimationClip> demo_glosses() {
    std::map<std::string, AnimationClip> out;
    out.emplace("INDEX", index_clip());
    out.emplace("NICHT", nicht_clip());
    out.emplace("HAUS", haus_clip());
    auto motions = arm_motion_clips();
    for (std::size_t k = 0; k < motions.size(); ++k) {
        char name[16];
        std::snprintf(name, sizeof name, "MOTION%02zu", k + 1);
        out.emplace(name, std::move(motions[k]));
    }
    return out;
}

std::vector<std::filesystem::path> write_demo_dictionary(const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    for (const auto& [gloss, clip] : demo_glosses()) {
        const auto path = directory / (gloss + ".bvh");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        out << save_bvh(clip);
        if (!out) throw IoError("cannot write " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace mms::synthetic
