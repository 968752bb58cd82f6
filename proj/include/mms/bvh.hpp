#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "mms/skeleton.hpp"

namespace mms {

struct BvhData {
    std::shared_ptr<const Skeleton> skeleton;
    AnimationClip clip;
};

// Parses HIERARCHY/MOTION text. Rotation channels may come in any axis
// order per joint. Constant position channels on non-root joints are folded
// into the rest offset; animated ones are rejected. Errors throw BvhError
// with the offending line.
BvhData load_bvh(std::string_view text);
BvhData load_bvh_file(const std::string& path);

// Canonical output: root gets Xposition Yposition Zposition Zrotation
// Xrotation Yrotation, other joints Zrotation Xrotation Yrotation; all numbers
// with six decimals.
std::string save_bvh(const AnimationClip& clip);

}  // namespace mms
