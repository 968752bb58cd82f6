#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "mms/skeleton.hpp"

namespace mms {

inline constexpr std::string_view kAnimJsonFormat = "mms-anim/1";

// Schema "mms-anim/1":
//   { "format": "mms-anim/1", "fps": <number>, "frame_count": <int>,
//     "skeleton": { "bones": [ { "name", "parent": <index|null>,
//                                "offset": [x,y,z], "rest_rotation": [w,x,y,z] } ] },
//     "frames": [ { "root_translation": [x,y,z], "rotations": [[w,x,y,z], ...] } ],
//     "metadata": { ... optional ... } }
nlohmann::json clip_to_json(const AnimationClip& clip);
AnimationClip clip_from_json(const nlohmann::json& doc);

// Serialized with two-space indentation and a trailing newline.
std::string save_clip_json(const AnimationClip& clip, const nlohmann::json& metadata = nullptr);
AnimationClip load_clip_json(std::string_view text);

}  // namespace mms
