#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mms/math.hpp"

namespace mms {

using BoneIndex = std::size_t;

struct Bone {
    std::string name;
    std::optional<BoneIndex> parent;
    Vec3 rest_offset = Vec3::Zero();       // in parent frame
    Quat rest_rotation = Quat::Identity();
    std::optional<Vec3> end_site;          // BVH "End Site" offset, leaves only
};

// Bone hierarchy in topological order: bone 0 is the single root and every
// parent precedes its children.
class Skeleton {
public:
    Skeleton() = default;
    explicit Skeleton(std::vector<Bone> bones);

    std::size_t size() const noexcept { return bones_.size(); }
    const Bone& bone(BoneIndex i) const { return bones_.at(i); }
    const std::vector<Bone>& bones() const noexcept { return bones_; }

    std::optional<BoneIndex> find(std::string_view name) const;
    // Throws SkeletonError naming the bone when absent.
    BoneIndex index_of(std::string_view name) const;

    bool is_ancestor(BoneIndex ancestor, BoneIndex bone) const;
    std::vector<BoneIndex> children(BoneIndex bone) const;
    // The bone itself followed by all its descendants, in skeleton order.
    std::vector<BoneIndex> subtree(BoneIndex bone) const;

    // Same names, parents and rest offsets (within tol).
    bool same_hierarchy(const Skeleton& other, double tol = 1e-6) const;

private:
    std::vector<Bone> bones_;
    std::unordered_map<std::string, BoneIndex> by_name_;
};

// Root translation plus one bone-local rotation per bone, relative to rest.
struct Pose {
    Vec3 root_translation = Vec3::Zero();
    std::vector<Quat> rotations;

    static Pose identity(const Skeleton& skeleton);
};

class AnimationClip {
public:
    AnimationClip() = default;
    AnimationClip(std::shared_ptr<const Skeleton> skeleton, double fps, std::vector<Pose> frames);

    const Skeleton& skeleton() const { return *skeleton_; }
    const std::shared_ptr<const Skeleton>& skeleton_ptr() const noexcept { return skeleton_; }
    double fps() const noexcept { return fps_; }
    std::size_t frame_count() const noexcept { return frames_.size(); }
    double nominal_duration() const noexcept {
        return static_cast<double>(frames_.size() - 1) / fps_;
    }

    const std::vector<Pose>& frames() const noexcept { return frames_; }
    std::vector<Pose>& frames() noexcept { return frames_; }
    const Pose& frame(std::size_t i) const { return frames_.at(i); }
    Pose& frame(std::size_t i) { return frames_.at(i); }

private:
    std::shared_ptr<const Skeleton> skeleton_;
    double fps_ = 30.0;
    std::vector<Pose> frames_;
};

// World transforms of every bone for one pose.
std::vector<RigidTransform> fk_all(const Skeleton& skeleton, const Pose& pose);

RigidTransform fk_global(const Skeleton& skeleton, const Pose& pose, BoneIndex bone);
RigidTransform fk_global(const Skeleton& skeleton, const Pose& pose, std::string_view bone);

// inverse(fk_global(root_bone)) * fk_global(bone)
RigidTransform relative_transform(const Skeleton& skeleton, const Pose& pose, BoneIndex bone,
                                  BoneIndex root_bone);
RigidTransform relative_transform(const Skeleton& skeleton, const Pose& pose,
                                  std::string_view bone, std::string_view root_bone);

// Bone-local transform (rest offset, rest rotation, pose rotation); the root
// also carries the pose's root translation.
RigidTransform local_transform(const Skeleton& skeleton, const Pose& pose, BoneIndex bone);

Pose interpolate_pose(const Pose& a, const Pose& b, double t);

// Linear root translation and shortest-arc slerp between stored frames.
// Throws std::out_of_range outside [0, nominal_duration].
Pose sample_clip(const AnimationClip& clip, double t);

// Output frame i samples the source at i / (n - 1) of its nominal duration,
// so first and last poses are copied exactly.
AnimationClip retime_to_frames(const AnimationClip& clip, std::size_t frame_count, double fps);
AnimationClip retime_clip(const AnimationClip& clip, double target_duration, double target_fps);

// Number of frames a clip of `duration` seconds occupies at `fps`.
std::size_t frames_for_duration(double duration, double fps);

}  // namespace mms
