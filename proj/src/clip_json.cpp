#include "mms/clip_json.hpp"

#include "mms/error.hpp"

namespace mms {
namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json quat_json(const Quat& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

Vec3 json_vec(const json& j) {
    if (!j.is_array() || j.size() != 3) throw Error("mms-anim: expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Quat json_quat(const json& j) {
    if (!j.is_array() || j.size() != 4) throw Error("mms-anim: expected [w, x, y, z]");
    return Quat(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>())
        .normalized();
}

}  // namespace

json clip_to_json(const AnimationClip& clip) {
    json bones = json::array();
    for (const Bone& b : clip.skeleton().bones()) {
        json jb = {{"name", b.name},
                   {"parent", b.parent ? json(*b.parent) : json(nullptr)},
                   {"offset", vec_json(b.rest_offset)},
                   {"rest_rotation", quat_json(b.rest_rotation)}};
        if (b.end_site) jb["end_site"] = vec_json(*b.end_site);
        bones.push_back(std::move(jb));
    }
    json frames = json::array();
    for (const Pose& p : clip.frames()) {
        json rots = json::array();
        for (const Quat& q : p.rotations) rots.push_back(quat_json(q));
        frames.push_back({{"root_translation", vec_json(p.root_translation)}, {"rotations", std::move(rots)}});
    }
    return {{"format", kAnimJsonFormat},
            {"fps", clip.fps()},
            {"frame_count", clip.frame_count()},
            {"skeleton", {{"bones", std::move(bones)}}},
            {"frames", std::move(frames)}};
}

AnimationClip clip_from_json(const json& doc) {
    try {
        if (doc.value("format", "") != kAnimJsonFormat) {
            throw Error("not an mms-anim/1 document");
        }
        std::vector<Bone> bones;
        for (const json& jb : doc.at("skeleton").at("bones")) {
            Bone b;
            b.name = jb.at("name").get<std::string>();
            if (!jb.at("parent").is_null()) b.parent = jb.at("parent").get<BoneIndex>();
            b.rest_offset = json_vec(jb.at("offset"));
            b.rest_rotation = json_quat(jb.at("rest_rotation"));
            if (jb.contains("end_site")) b.end_site = json_vec(jb.at("end_site"));
            bones.push_back(std::move(b));
        }
        auto skeleton = std::make_shared<const Skeleton>(std::move(bones));
        std::vector<Pose> frames;
        for (const json& jf : doc.at("frames")) {
            Pose p;
            p.root_translation = json_vec(jf.at("root_translation"));
            for (const json& q : jf.at("rotations")) p.rotations.push_back(json_quat(q));
            frames.push_back(std::move(p));
        }
        return AnimationClip(skeleton, doc.at("fps").get<double>(), std::move(frames));
    } catch (const json::exception& e) {
        throw Error(std::string("mms-anim: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(std::string("mms-anim: ") + e.what());
    }
}

std::string save_clip_json(const AnimationClip& clip, const json& metadata) {
    json doc = clip_to_json(clip);
    if (!metadata.is_null()) doc["metadata"] = metadata;
    return doc.dump(2) + "\n";
}

AnimationClip load_clip_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("mms-anim: ") + e.what());
    }
    return clip_from_json(doc);
}

}  // namespace mms
