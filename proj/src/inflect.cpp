#include "mms/inflect.hpp"

#include "mms/error.hpp"

namespace mms {

ControllerTrack inflect_trajectory(const ControllerTrack& track, const TrajectoryParams& params) {
    if (params.is_identity() || track.samples.empty()) return track;
    const Quat r = rotation_from_degrees(params.rotation_deg);
    const Vec3 p0 = track.samples.front().translation;
    ControllerTrack out = track;
    for (RigidTransform& s : out.samples) {
        const Vec3 scaled = params.scale.cwiseProduct(s.translation - p0);
        s.translation = p0 + params.translation + r * scaled;
        s.rotation = (r * s.rotation).normalized();
    }
    return out;
}

ControllerTrack inflect_relative(const ControllerTrack& track,
                                 const std::optional<Vec3>& delta_translation,
                                 const std::optional<Vec3>& delta_rotation_deg) {
    const bool move = delta_translation && !delta_translation->isZero(0.0);
    const bool turn = delta_rotation_deg && !delta_rotation_deg->isZero(0.0);
    if (!move && !turn) return track;
    const Quat r = turn ? rotation_from_degrees(*delta_rotation_deg) : Quat::Identity();
    ControllerTrack out = track;
    for (RigidTransform& s : out.samples) {
        if (move) s.translation += *delta_translation;
        if (turn) s.rotation = (r * s.rotation).normalized();
    }
    return out;
}

AnimationClip inflect_local_rotation(const AnimationClip& clip, std::string_view bone,
                                     const Vec3& delta_deg) {
    const BoneIndex b = clip.skeleton().index_of(bone);
    if (delta_deg.isZero(0.0)) return clip;
    const Quat delta = rotation_from_degrees(delta_deg);
    AnimationClip out = clip;
    for (Pose& p : out.frames()) p.rotations[b] = (p.rotations[b] * delta).normalized();
    return out;
}

std::string_view to_string(InflectorKind kind) {
    switch (kind) {
        case InflectorKind::LocalRotationTarget: return "LocalRotationTarget";
        case InflectorKind::RelativeLocRotTarget: return "RelativeLocRotTarget";
        case InflectorKind::RelativeRotTarget: return "RelativeRotTarget";
        case InflectorKind::RelativeLocTarget: return "RelativeLocTarget";
        case InflectorKind::TrajectoryTarget: return "TrajectoryTarget";
    }
    return "?";
}

std::vector<InflectionBinding> inflection_bindings(const SkeletonProfile& profile) {
    const SideBinding& dom = profile.dominant();
    const SideBinding& ndom = profile.nondominant();
    return {
        {"[ n]domhandreloc[ as][xyz]", InflectorKind::TrajectoryTarget, {dom.hand, ndom.hand}, profile.torso},
        {"[ n]domhandrot[xyz]", InflectorKind::LocalRotationTarget, {dom.hand, ndom.hand}, profile.torso},
        {"[ n]domshoulderreloc[xyz]", InflectorKind::RelativeLocTarget, {dom.clavicle, ndom.clavicle}, profile.torso},
        {"torsoreloc[ a][xyz]", InflectorKind::RelativeLocRotTarget, {profile.torso}, profile.pelvis},
        {"headrot[xyz]", InflectorKind::RelativeRotTarget, {profile.head}, profile.torso},
    };
}

namespace {

struct ControllerJob {
    std::unique_ptr<ControllerInflector> inflector;
    IkChain chain;
    bool active = false;
    ControllerTrack track;
};

}  // namespace

RowInflectionResult apply_row_inflections(const AnimationClip& clip, const InflectionSet& inflections,
                                          const SkeletonProfile& profile) {
    RowInflectionResult result{clip, {}};
    if (inflections.is_identity()) return result;

    const Skeleton& skel = clip.skeleton();
    const SideBinding& dom = profile.dominant();
    const SideBinding& ndom = profile.nondominant();
    const Side dom_side = profile.dominant_side;
    const Side ndom_side = opposite(dom_side);

    // Hierarchy order: torso, shoulders, head, hands.
    std::vector<ControllerJob> jobs;
    auto add = [&](std::unique_ptr<ControllerInflector> inflector, IkChain chain, bool active) {
        jobs.push_back({std::move(inflector), std::move(chain), active, {}});
    };
    add(std::make_unique<RelativeLocRotTarget>(profile.torso, profile.pelvis, inflections.torso_reloc),
        profile.spine_chain, !inflections.torso_reloc.is_identity());
    const bool dom_shoulder = !inflections.dom_shoulder_reloc.isZero(0.0);
    const bool ndom_shoulder = !inflections.ndom_shoulder_reloc.isZero(0.0);
    add(std::make_unique<RelativeLocTarget>(dom.clavicle, profile.torso, inflections.dom_shoulder_reloc),
        profile.shoulder_chain(skel, dom_side), dom_shoulder);
    add(std::make_unique<RelativeLocTarget>(ndom.clavicle, profile.torso, inflections.ndom_shoulder_reloc),
        profile.shoulder_chain(skel, ndom_side), ndom_shoulder);
    add(std::make_unique<RelativeRotTarget>(profile.head, profile.torso, inflections.head_rot),
        profile.neck_chain, !inflections.head_rot.isZero(0.0));
    // A shifted shoulder drags the arm, so the hand is re-solved to keep its
    // place in the torso frame even without a hand edit.
    add(std::make_unique<TrajectoryTarget>(dom.hand, profile.torso, inflections.dom_hand_reloc),
        dom.arm_chain, !inflections.dom_hand_reloc.is_identity() || dom_shoulder);
    add(std::make_unique<TrajectoryTarget>(ndom.hand, profile.torso, inflections.ndom_hand_reloc),
        ndom.arm_chain, !inflections.ndom_hand_reloc.is_identity() || ndom_shoulder);

    for (auto& job : jobs) {
        if (!job.active) continue;
        job.track = bake_controller(clip, job.inflector->controlled_bone(), job.inflector->root_bone());
    }
    for (auto& job : jobs) {
        if (job.active) job.track = job.inflector->inflect(job.track);
    }
    for (const auto& job : jobs) {
        if (!job.active) continue;
        BakeResult baked = bake_back(result.clip, job.track, job.chain);
        result.report.merge(baked.report);
        result.clip = std::move(baked.clip);
    }

    result.clip = LocalRotationTarget(dom.hand, inflections.dom_hand_rot).inflect(result.clip);
    result.clip = LocalRotationTarget(ndom.hand, inflections.ndom_hand_rot).inflect(result.clip);
    return result;
}

}  // namespace mms
