#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mms/skeleton.hpp"

// Procedural signer and sign clips for demos and tests. Y-up, meters, the
// signer faces +Z; its right side is -X.
namespace mms::synthetic {

// Pelvis-rooted biped whose bone names follow the default skeleton profile.
// Arms hang straight down in the rest pose.
std::shared_ptr<const Skeleton> signer_skeleton();

// Dominant (right) hand rises from a resting spot below the right shoulder to
// point straight ahead, then holds. 1.0 s at 30 fps.
AnimationClip index_clip();

// Dominant hand starts in front of the chest and wags sideways twice.
// 0.8 s at 30 fps.
AnimationClip nicht_clip();

// Both hands meet above the chest and slide apart and down. 1.2 s at 30 fps.
AnimationClip haus_clip();

// Ten desk-scale motions driving spine, neck and both arms with different
// smooth oscillations; clip k has 40 + 5k frames at 30 fps.
std::vector<AnimationClip> arm_motion_clips();

// INDEX, NICHT, HAUS and MOTION01..MOTION10.
std::map<std::string, AnimationClip> demo_glosses();

// Writes every demo gloss as <GLOSS>.bvh into `directory` (created if
// needed). Returns the written paths.
std::vector<std::filesystem::path> write_demo_dictionary(const std::filesystem::path& directory);

}  // namespace mms::synthetic
