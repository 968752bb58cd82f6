#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mms/skeleton.hpp"

namespace mms {

// Per-frame transform of a controlled bone expressed in a root bone's frame.
struct ControllerTrack {
    std::string controlled_bone;
    std::string root_bone;
    std::vector<RigidTransform> samples;
};

// Bones listed from the chain root (exclusive) to the end effector
// (inclusive), each the parent of the next.
//
// Without a tip the effector is the end bone's origin: every bone but the
// last is rotated to place it, and the last bone takes the target
// orientation. With a tip (an offset in the end bone's frame) the effector is
// that point, every bone in the chain is rotated, and the goal is the target
// transform applied to the same tip; the end bone's orientation is not solved.
struct IkChain {
    std::vector<std::string> bones;
    double position_weight = 1.0;
    double orientation_weight = 1.0;
    double tolerance = 1e-3;
    int max_iterations = 64;
    // Largest rotation (radians) a joint may take in one coordinate-descent step.
    double damping = 0.5;
    std::optional<Vec3> tip;

    const std::string& end_effector() const { return bones.back(); }
};

struct SolveResult {
    Pose pose;
    double position_residual = 0.0;
    double orientation_residual_deg = 0.0;
    int iterations = 0;
    bool converged = true;
};

struct BakeReport {
    double max_position_residual = 0.0;
    double max_orientation_residual_deg = 0.0;
    std::size_t unconverged_frames = 0;
    std::size_t solved_frames = 0;

    void add(const SolveResult& r);
    void merge(const BakeReport& other);
    bool ok() const { return unconverged_frames == 0; }
};

struct BakeResult {
    AnimationClip clip;
    BakeReport report;
};

ControllerTrack bake_controller(const AnimationClip& clip, std::string_view controlled_bone,
                                std::string_view root_bone);

// Throws SkeletonError if the chain is empty, names unknown bones or is not
// a parent-to-child sequence.
void check_chain(const Skeleton& skeleton, const IkChain& chain);

// Damped cyclic coordinate descent from `pose` (each sweep first bends the
// second joint to match the goal distance), followed by a direct
// orientation alignment of the end bone. Bones outside the chain and the
// root translation are never touched. A target already within tolerance
// returns the input pose unchanged.
SolveResult solve_frame(const Skeleton& skeleton, const Pose& pose, const IkChain& chain,
                        const RigidTransform& target_world);

// Frame i is solved toward fk_global(root_bone, clip frame i) * sample i,
// warm-started from clip frame i.
BakeResult bake_back(const AnimationClip& clip, const ControllerTrack& track, const IkChain& chain);

}  // namespace mms
