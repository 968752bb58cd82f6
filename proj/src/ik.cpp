#include "mms/ik.hpp"

#include <algorithm>
#include <cmath>

#include "mms/error.hpp"

namespace mms {
namespace {

// Below this the end bone orientation is considered already aligned.
constexpr double kOrientationSlackDeg = 1e-6;
constexpr double kConvergedOrientationDeg = 0.5;

struct ResolvedChain {
    std::vector<BoneIndex> bones;
    std::vector<BoneIndex> movers;  // rotated for position, effector-most first
};

ResolvedChain resolve(const Skeleton& skeleton, const IkChain& chain) {
    check_chain(skeleton, chain);
    ResolvedChain rc;
    for (const auto& name : chain.bones) rc.bones.push_back(skeleton.index_of(name));
    const std::size_t count = chain.tip ? rc.bones.size() : rc.bones.size() - 1;
    for (std::size_t k = count; k-- > 0;) rc.movers.push_back(rc.bones[k]);
    return rc;
}

Vec3 effector_point(const std::vector<RigidTransform>& world, BoneIndex end, const IkChain& chain) {
    return chain.tip ? world[end] * *chain.tip : world[end].translation;
}

// Rotates bone `b` by the world-space rotation `delta` about its own origin.
void rotate_in_world(const Skeleton& skeleton, Pose& pose, const std::vector<RigidTransform>& world,
                     BoneIndex b, const Quat& delta) {
    const Bone& bone = skeleton.bone(b);
    const Quat parent_rot = bone.parent ? world[*bone.parent].rotation : Quat::Identity();
    const Quat frame = (parent_rot * bone.rest_rotation).normalized();
    pose.rotations[b] = (frame.conjugate() * delta * frame * pose.rotations[b]).normalized();
}

Quat capped(const Quat& delta, double max_step) {
    const double angle = 2.0 * std::acos(std::clamp(std::abs(delta.w()), 0.0, 1.0));
    if (angle <= max_step) return delta;
    return Quat::Identity().slerp(max_step / angle, delta).normalized();
}

// Bends `elbow` about its current bend axis so that the effector's distance
// from `base` matches the goal's. CCD alone crawls near full extension.
void match_reach(const Skeleton& skeleton, Pose& pose, std::vector<RigidTransform>& world, BoneIndex base,
                 BoneIndex elbow, const Vec3& effector, const Vec3& goal, double max_step) {
    const Vec3 to_base = world[base].translation - world[elbow].translation;
    const Vec3 to_effector = effector - world[elbow].translation;
    const double a = to_base.norm();
    const double b = to_effector.norm();
    if (a < 1e-9 || b < 1e-9) return;
    const Vec3 axis = to_base.cross(to_effector);
    if (axis.norm() < 1e-9 * a * b) return;
    const double current = std::atan2(axis.norm(), to_base.dot(to_effector));
    const double d = std::clamp((goal - world[base].translation).norm(), std::abs(a - b), a + b);
    const double wanted = std::acos(std::clamp((a * a + b * b - d * d) / (2.0 * a * b), -1.0, 1.0));
    const Quat delta(Eigen::AngleAxisd(wanted - current, axis.normalized()));
    rotate_in_world(skeleton, pose, world, elbow, capped(delta, max_step));
    world = fk_all(skeleton, pose);
}

}  // namespace

void BakeReport::add(const SolveResult& r) {
    max_position_residual = std::max(max_position_residual, r.position_residual);
    max_orientation_residual_deg = std::max(max_orientation_residual_deg, r.orientation_residual_deg);
    if (!r.converged) ++unconverged_frames;
    ++solved_frames;
}

void BakeReport::merge(const BakeReport& other) {
    max_position_residual = std::max(max_position_residual, other.max_position_residual);
    max_orientation_residual_deg =
        std::max(max_orientation_residual_deg, other.max_orientation_residual_deg);
    unconverged_frames += other.unconverged_frames;
    solved_frames += other.solved_frames;
}

ControllerTrack bake_controller(const AnimationClip& clip, std::string_view controlled_bone,
                                std::string_view root_bone) {
    const Skeleton& skel = clip.skeleton();
    const BoneIndex bone = skel.index_of(controlled_bone);
    const BoneIndex root = skel.index_of(root_bone);
    ControllerTrack track{std::string(controlled_bone), std::string(root_bone), {}};
    track.samples.reserve(clip.frame_count());
    for (const Pose& pose : clip.frames()) {
        track.samples.push_back(relative_transform(skel, pose, bone, root));
    }
    return track;
}

void check_chain(const Skeleton& skeleton, const IkChain& chain) {
    if (chain.bones.empty()) throw SkeletonError("IK chain has no bones");
    std::optional<BoneIndex> prev;
    for (const auto& name : chain.bones) {
        const BoneIndex b = skeleton.index_of(name);
        if (prev && skeleton.bone(b).parent != prev) {
            throw SkeletonError("IK chain is not connected at bone " + name);
        }
        prev = b;
    }
}

SolveResult solve_frame(const Skeleton& skeleton, const Pose& pose, const IkChain& chain,
                        const RigidTransform& target_world) {
    const ResolvedChain rc = resolve(skeleton, chain);
    const BoneIndex end = rc.bones.back();
    const bool use_orientation = !chain.tip && chain.orientation_weight > 0.0;
    const double max_step = chain.damping > 0.0 ? chain.damping : kPi;

    SolveResult result;
    result.pose = pose;
    Pose& out = result.pose;
    std::vector<RigidTransform> world = fk_all(skeleton, out);

    const Vec3 start = effector_point(world, end, chain);
    const Vec3 goal_point = chain.tip ? target_world * *chain.tip : target_world.translation;
    const Vec3 goal = start + std::clamp(chain.position_weight, 0.0, 1.0) * (goal_point - start);

    double residual = (start - goal).norm();
    if (chain.position_weight > 0.0 && !rc.movers.empty()) {
        while (residual > chain.tolerance && result.iterations < chain.max_iterations) {
            ++result.iterations;
            // The reach match already set the elbow; the sweep leaves it alone.
            std::optional<BoneIndex> elbow;
            if (rc.movers.size() >= 2) {
                elbow = rc.movers[rc.movers.size() - 2];
                match_reach(skeleton, out, world, rc.movers.back(), *elbow, effector_point(world, end, chain),
                            goal, max_step);
            }
            for (BoneIndex b : rc.movers) {
                if (b == elbow) continue;
                const Vec3 joint = world[b].translation;
                const Vec3 to_effector = effector_point(world, end, chain) - joint;
                const Vec3 to_goal = goal - joint;
                if (to_effector.norm() < 1e-12 || to_goal.norm() < 1e-12) continue;
                const Quat delta = capped(Quat::FromTwoVectors(to_effector, to_goal), max_step);
                rotate_in_world(skeleton, out, world, b, delta);
                world = fk_all(skeleton, out);
            }
            residual = (effector_point(world, end, chain) - goal).norm();
        }
    }
    result.position_residual = (effector_point(world, end, chain) - goal_point).norm();

    if (use_orientation) {
        const double before = angle_between_deg(world[end].rotation, target_world.rotation);
        if (before > kOrientationSlackDeg) {
            const Bone& bone = skeleton.bone(end);
            const Quat parent_rot = bone.parent ? world[*bone.parent].rotation : Quat::Identity();
            const Quat frame = (parent_rot * bone.rest_rotation).normalized();
            const Quat aligned = (frame.conjugate() * target_world.rotation).normalized();
            out.rotations[end] =
                slerp_shortest(out.rotations[end], aligned, std::min(chain.orientation_weight, 1.0));
            world = fk_all(skeleton, out);
        }
        result.orientation_residual_deg = angle_between_deg(world[end].rotation, target_world.rotation);
    }

    const bool position_ok = chain.position_weight <= 0.0 || result.position_residual <= chain.tolerance;
    const bool orientation_ok = !use_orientation || chain.orientation_weight < 1.0 ||
                                result.orientation_residual_deg <= kConvergedOrientationDeg;
    result.converged = position_ok && orientation_ok;
    return result;
}

BakeResult bake_back(const AnimationClip& clip, const ControllerTrack& track, const IkChain& chain) {
    const Skeleton& skel = clip.skeleton();
    if (track.samples.size() != clip.frame_count()) {
        throw Error("controller track has " + std::to_string(track.samples.size()) +
                    " samples for a clip of " + std::to_string(clip.frame_count()) + " frames");
    }
    if (chain.end_effector() != track.controlled_bone) {
        throw Error("IK chain ends at " + chain.end_effector() + " but the track controls " +
                    track.controlled_bone);
    }
    check_chain(skel, chain);
    const BoneIndex root = skel.index_of(track.root_bone);
    const BoneIndex chain_start = skel.index_of(chain.bones.front());
    if (root == chain_start || skel.is_ancestor(chain_start, root)) {
        throw Error("controller root " + track.root_bone + " moves with the IK chain");
    }

    BakeResult out{clip, {}};
    for (std::size_t i = 0; i < clip.frame_count(); ++i) {
        const Pose& original = clip.frame(i);
        const RigidTransform target = fk_global(skel, original, root) * track.samples[i];
        SolveResult solved = solve_frame(skel, original, chain, target);
        out.report.add(solved);
        out.clip.frame(i) = std::move(solved.pose);
    }
    return out;
}

}  // namespace mms
