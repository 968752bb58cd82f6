#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mms/ik.hpp"
#include "mms/mms_table.hpp"
#include "mms/profile.hpp"

namespace mms {

// p' = p0 + T + R * (S * (p - p0)) with p0 the first sample position;
// orientations are pre-multiplied by R. Identity params return the track
// untouched.
ControllerTrack inflect_trajectory(const ControllerTrack& track, const TrajectoryParams& params);

// Per sample: position += delta_translation, orientation = R(delta) * orientation,
// both in the root bone frame.
ControllerTrack inflect_relative(const ControllerTrack& track,
                                 const std::optional<Vec3>& delta_translation,
                                 const std::optional<Vec3>& delta_rotation_deg);

// Per frame: local rotation of `bone` becomes q * R(delta). No IK.
AnimationClip inflect_local_rotation(const AnimationClip& clip, std::string_view bone,
                                     const Vec3& delta_deg);

enum class InflectorKind {
    LocalRotationTarget,
    RelativeLocRotTarget,
    RelativeRotTarget,
    RelativeLocTarget,
    TrajectoryTarget,
};

std::string_view to_string(InflectorKind kind);

class Inflector {
public:
    virtual ~Inflector() = default;
    virtual InflectorKind kind() const = 0;
    virtual bool is_identity() const = 0;
};

// Strategies that edit a baked controller track and rely on IK to bake the
// edit back into joint rotations.
class ControllerInflector : public Inflector {
public:
    ControllerInflector(std::string controlled_bone, std::string root_bone)
        : controlled_bone_(std::move(controlled_bone)), root_bone_(std::move(root_bone)) {}

    const std::string& controlled_bone() const { return controlled_bone_; }
    const std::string& root_bone() const { return root_bone_; }

    virtual ControllerTrack inflect(const ControllerTrack& track) const = 0;

private:
    std::string controlled_bone_;
    std::string root_bone_;
};

class TrajectoryTarget final : public ControllerInflector {
public:
    TrajectoryTarget(std::string controlled, std::string root, TrajectoryParams params)
        : ControllerInflector(std::move(controlled), std::move(root)), params_(params) {}

    InflectorKind kind() const override { return InflectorKind::TrajectoryTarget; }
    bool is_identity() const override { return params_.is_identity(); }
    ControllerTrack inflect(const ControllerTrack& track) const override {
        return inflect_trajectory(track, params_);
    }

private:
    TrajectoryParams params_;
};

class RelativeLocRotTarget final : public ControllerInflector {
public:
    RelativeLocRotTarget(std::string controlled, std::string root, LocRotParams params)
        : ControllerInflector(std::move(controlled), std::move(root)), params_(params) {}

    InflectorKind kind() const override { return InflectorKind::RelativeLocRotTarget; }
    bool is_identity() const override { return params_.is_identity(); }
    ControllerTrack inflect(const ControllerTrack& track) const override {
        return inflect_relative(track, params_.translation, params_.rotation_deg);
    }

private:
    LocRotParams params_;
};

class RelativeRotTarget final : public ControllerInflector {
public:
    RelativeRotTarget(std::string controlled, std::string root, Vec3 rotation_deg)
        : ControllerInflector(std::move(controlled), std::move(root)), rotation_deg_(rotation_deg) {}

    InflectorKind kind() const override { return InflectorKind::RelativeRotTarget; }
    bool is_identity() const override { return rotation_deg_.isZero(0.0); }
    ControllerTrack inflect(const ControllerTrack& track) const override {
        return inflect_relative(track, std::nullopt, rotation_deg_);
    }

private:
    Vec3 rotation_deg_;
};

// Position-only relative edit; solved without orientation.
class RelativeLocTarget final : public ControllerInflector {
public:
    RelativeLocTarget(std::string controlled, std::string root, Vec3 translation)
        : ControllerInflector(std::move(controlled), std::move(root)), translation_(translation) {}

    InflectorKind kind() const override { return InflectorKind::RelativeLocTarget; }
    bool is_identity() const override { return translation_.isZero(0.0); }
    ControllerTrack inflect(const ControllerTrack& track) const override {
        return inflect_relative(track, translation_, std::nullopt);
    }

private:
    Vec3 translation_;
};

class LocalRotationTarget final : public Inflector {
public:
    LocalRotationTarget(std::string bone, Vec3 delta_deg) : bone_(std::move(bone)), delta_deg_(delta_deg) {}

    InflectorKind kind() const override { return InflectorKind::LocalRotationTarget; }
    bool is_identity() const override { return delta_deg_.isZero(0.0); }
    const std::string& bone() const { return bone_; }
    AnimationClip inflect(const AnimationClip& clip) const {
        return inflect_local_rotation(clip, bone_, delta_deg_);
    }

private:
    std::string bone_;
    Vec3 delta_deg_;
};

// One MMS inflection family bound to its strategy and bones.
struct InflectionBinding {
    std::string column_pattern;
    InflectorKind kind;
    std::vector<std::string> controlled_bones;  // dominant side first
    std::string relative_bone;
};

std::vector<InflectionBinding> inflection_bindings(const SkeletonProfile& profile);

struct RowInflectionResult {
    AnimationClip clip;
    BakeReport report;
};

// Bakes every controller the row needs from the input clip, edits the
// tracks, then bakes back torso, shoulders, head and hands in that order so
// each solve sees its already-updated parents. Hand local rotations are
// applied last.
RowInflectionResult apply_row_inflections(const AnimationClip& clip, const InflectionSet& inflections,
                                          const SkeletonProfile& profile);

}  // namespace mms
