#include "mms/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mms/error.hpp"

namespace mms {

Skeleton::Skeleton(std::vector<Bone> bones) : bones_(std::move(bones)) {
    if (bones_.empty()) {
        throw SkeletonError("skeleton has no bones");
    }
    for (BoneIndex i = 0; i < bones_.size(); ++i) {
        const Bone& b = bones_[i];
        if (i == 0 && b.parent) {
            throw SkeletonError("first bone must be the root: " + b.name);
        }
        if (i > 0) {
            if (!b.parent) {
                throw SkeletonError("more than one root bone: " + b.name);
            }
            if (*b.parent >= i) {
                throw SkeletonError("parent must precede child: " + b.name);
            }
        }
        if (!by_name_.emplace(b.name, i).second) {
            throw SkeletonError("duplicate bone name: " + b.name);
        }
        bones_[i].rest_rotation.normalize();
    }
}

std::optional<BoneIndex> Skeleton::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

BoneIndex Skeleton::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw SkeletonError("unknown bone: " + std::string(name));
}

bool Skeleton::is_ancestor(BoneIndex ancestor, BoneIndex bone) const {
    std::optional<BoneIndex> cur = bones_.at(bone).parent;
    while (cur) {
        if (*cur == ancestor) return true;
        cur = bones_[*cur].parent;
    }
    return false;
}

std::vector<BoneIndex> Skeleton::children(BoneIndex bone) const {
    std::vector<BoneIndex> out;
    for (BoneIndex i = bone + 1; i < bones_.size(); ++i) {
        if (bones_[i].parent == bone) out.push_back(i);
    }
    return out;
}

std::vector<BoneIndex> Skeleton::subtree(BoneIndex bone) const {
    std::vector<bool> inside(bones_.size(), false);
    inside.at(bone) = true;
    std::vector<BoneIndex> out{bone};
    for (BoneIndex i = bone + 1; i < bones_.size(); ++i) {
        if (inside[*bones_[i].parent]) {
            inside[i] = true;
            out.push_back(i);
        }
    }
    return out;
}

bool Skeleton::same_hierarchy(const Skeleton& other, double tol) const {
    if (size() != other.size()) return false;
    for (BoneIndex i = 0; i < size(); ++i) {
        const Bone& a = bones_[i];
        const Bone& b = other.bones_[i];
        if (a.name != b.name || a.parent != b.parent) return false;
        if ((a.rest_offset - b.rest_offset).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

Pose Pose::identity(const Skeleton& skeleton) {
    Pose p;
    p.rotations.assign(skeleton.size(), Quat::Identity());
    return p;
}

AnimationClip::AnimationClip(std::shared_ptr<const Skeleton> skeleton, double fps,
                             std::vector<Pose> frames)
    : skeleton_(std::move(skeleton)), fps_(fps), frames_(std::move(frames)) {
    if (!skeleton_) throw std::invalid_argument("clip needs a skeleton");
    if (!(fps_ > 0.0)) throw std::invalid_argument("clip fps must be positive");
    if (frames_.empty()) throw std::invalid_argument("clip needs at least one frame");
    for (const Pose& p : frames_) {
        if (p.rotations.size() != skeleton_->size()) {
            throw std::invalid_argument("pose does not match skeleton bone count");
        }
    }
}

RigidTransform local_transform(const Skeleton& skeleton, const Pose& pose, BoneIndex bone) {
    const Bone& b = skeleton.bone(bone);
    RigidTransform t{b.rest_offset, (b.rest_rotation * pose.rotations[bone]).normalized()};
    if (!b.parent) t.translation += pose.root_translation;
    return t;
}

std::vector<RigidTransform> fk_all(const Skeleton& skeleton, const Pose& pose) {
    std::vector<RigidTransform> world(skeleton.size());
    for (BoneIndex i = 0; i < skeleton.size(); ++i) {
        const RigidTransform local = local_transform(skeleton, pose, i);
        const auto& parent = skeleton.bone(i).parent;
        world[i] = parent ? world[*parent] * local : local;
    }
    return world;
}

RigidTransform fk_global(const Skeleton& skeleton, const Pose& pose, BoneIndex bone) {
    if (bone >= skeleton.size()) throw SkeletonError("bone index out of range");
    RigidTransform t = local_transform(skeleton, pose, bone);
    for (auto p = skeleton.bone(bone).parent; p; p = skeleton.bone(*p).parent) {
        t = local_transform(skeleton, pose, *p) * t;
    }
    return t;
}

RigidTransform fk_global(const Skeleton& skeleton, const Pose& pose, std::string_view bone) {
    return fk_global(skeleton, pose, skeleton.index_of(bone));
}

RigidTransform relative_transform(const Skeleton& skeleton, const Pose& pose, BoneIndex bone,
                                  BoneIndex root_bone) {
    if (bone == root_bone) return RigidTransform::identity();
    return fk_global(skeleton, pose, root_bone).inverse() * fk_global(skeleton, pose, bone);
}

RigidTransform relative_transform(const Skeleton& skeleton, const Pose& pose,
                                  std::string_view bone, std::string_view root_bone) {
    return relative_transform(skeleton, pose, skeleton.index_of(bone),
                              skeleton.index_of(root_bone));
}

Pose interpolate_pose(const Pose& a, const Pose& b, double t) {
    Pose out;
    out.root_translation = a.root_translation + t * (b.root_translation - a.root_translation);
    out.rotations.resize(a.rotations.size());
    for (std::size_t i = 0; i < a.rotations.size(); ++i) {
        out.rotations[i] = slerp_shortest(a.rotations[i], b.rotations[i], t);
    }
    return out;
}

Pose sample_clip(const AnimationClip& clip, double t) {
    const double duration = clip.nominal_duration();
    constexpr double kSlack = 1e-9;
    if (t < -kSlack || t > duration + kSlack) {
        throw std::out_of_range("sample time " + std::to_string(t) + " outside clip [0, " +
                                std::to_string(duration) + "]");
    }
    const std::size_t last = clip.frame_count() - 1;
    const double pos = std::clamp(t * clip.fps(), 0.0, static_cast<double>(last));
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < kSlack) {
        return clip.frame(static_cast<std::size_t>(nearest));
    }
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, last);
    return interpolate_pose(clip.frame(lo), clip.frame(hi), pos - static_cast<double>(lo));
}

std::size_t frames_for_duration(double duration, double fps) {
    if (!(duration > 0.0)) return 1;
    // A positive duration always keeps both endpoints.
    return static_cast<std::size_t>(std::max(1.0, std::round(duration * fps))) + 1;
}

AnimationClip retime_to_frames(const AnimationClip& clip, std::size_t frame_count, double fps) {
    if (frame_count == 0) throw std::invalid_argument("retime needs at least one frame");
    std::vector<Pose> frames;
    frames.reserve(frame_count);
    const double nominal = clip.nominal_duration();
    for (std::size_t i = 0; i < frame_count; ++i) {
        if (i == 0) {
            frames.push_back(clip.frames().front());
        } else if (i + 1 == frame_count) {
            frames.push_back(clip.frames().back());
        } else {
            const double u = static_cast<double>(i) / static_cast<double>(frame_count - 1);
            frames.push_back(sample_clip(clip, u * nominal));
        }
    }
    return AnimationClip(clip.skeleton_ptr(), fps, std::move(frames));
}

AnimationClip retime_clip(const AnimationClip& clip, double target_duration, double target_fps) {
    if (!(target_duration > 0.0)) throw std::invalid_argument("target duration must be positive");
    if (!(target_fps > 0.0)) throw std::invalid_argument("target fps must be positive");
    return retime_to_frames(clip, frames_for_duration(target_duration, target_fps), target_fps);
}

}  // namespace mms
