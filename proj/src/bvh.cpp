#include "mms/bvh.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mms/error.hpp"

namespace mms {
namespace {

struct Token {
    std::string text;
    std::size_t line;
};

class Tokenizer {
public:
    explicit Tokenizer(std::string_view text) {
        std::size_t line = 1;
        std::size_t i = 0;
        while (i < text.size()) {
            const char c = text[i];
            if (c == '\n') {
                ++line;
                ++i;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '{' || c == '}') {
                tokens_.push_back({std::string(1, c), line});
                ++i;
            } else {
                std::size_t j = i;
                while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
                       text[j] != '{' && text[j] != '}') {
                    ++j;
                }
                tokens_.push_back({std::string(text.substr(i, j - i)), line});
                i = j;
            }
        }
        last_line_ = line;
    }

    bool done() const { return pos_ >= tokens_.size(); }
    std::size_t line() const { return done() ? last_line_ : tokens_[pos_].line; }

    const Token& peek() const {
        if (done()) throw BvhError("unexpected end of file", last_line_);
        return tokens_[pos_];
    }
    Token next() {
        const Token& t = peek();
        ++pos_;
        return t;
    }
    void expect(std::string_view word) {
        const Token t = next();
        if (t.text != word) {
            throw BvhError("expected '" + std::string(word) + "' but found '" + t.text + "'", t.line);
        }
    }
    double number() {
        const Token t = next();
        double v = 0.0;
        const char* b = t.text.data();
        const char* e = b + t.text.size();
        if (b != e && *b == '+') ++b;
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e) {
            throw BvhError("malformed number '" + t.text + "'", t.line);
        }
        return v;
    }
    long integer() {
        const Token t = next();
        long v = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
            throw BvhError("malformed integer '" + t.text + "'", t.line);
        }
        return v;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t last_line_ = 1;
};

enum class ChannelKind { Position, Rotation };

struct Channel {
    ChannelKind kind;
    int axis;
};

struct JointDesc {
    std::string name;
    std::optional<BoneIndex> parent;
    Vec3 offset = Vec3::Zero();
    std::optional<Vec3> end_site;
    std::vector<Channel> channels;
    std::size_t channels_line = 0;
};

Channel parse_channel(const Token& t) {
    const std::string& s = t.text;
    if (s.size() == 9 && s.substr(1) == "position") {
        const int axis = std::toupper(static_cast<unsigned char>(s[0])) - 'X';
        if (axis >= 0 && axis < 3) return {ChannelKind::Position, axis};
    }
    if (s.size() == 9 && s.substr(1) == "rotation") {
        const int axis = std::toupper(static_cast<unsigned char>(s[0])) - 'X';
        if (axis >= 0 && axis < 3) return {ChannelKind::Rotation, axis};
    }
    throw BvhError("unknown channel '" + s + "'", t.line);
}

Vec3 parse_offset(Tokenizer& tok) {
    tok.expect("OFFSET");
    const double x = tok.number();
    const double y = tok.number();
    const double z = tok.number();
    return {x, y, z};
}

void parse_joint(Tokenizer& tok, std::vector<JointDesc>& joints, std::optional<BoneIndex> parent) {
    JointDesc joint;
    const Token name = tok.next();
    if (name.text == "{") throw BvhError("joint without a name", name.line);
    joint.name = name.text;
    joint.parent = parent;
    tok.expect("{");
    joint.offset = parse_offset(tok);
    const Token ch = tok.next();
    if (ch.text != "CHANNELS") throw BvhError("expected 'CHANNELS' for joint " + joint.name, ch.line);
    joint.channels_line = ch.line;
    const long count = tok.integer();
    if (count < 0 || count > 6) throw BvhError("bad channel count", ch.line);
    for (long i = 0; i < count; ++i) joint.channels.push_back(parse_channel(tok.next()));

    const BoneIndex self = joints.size();
    joints.push_back(joint);
    while (true) {
        const Token t = tok.next();
        if (t.text == "}") break;
        if (t.text == "JOINT") {
            parse_joint(tok, joints, self);
        } else if (t.text == "End") {
            tok.expect("Site");
            tok.expect("{");
            joints[self].end_site = parse_offset(tok);
            tok.expect("}");
        } else {
            throw BvhError("unexpected '" + t.text + "' in joint " + joints[self].name, t.line);
        }
    }
}

double snap_fps(double fps) {
    const double nearest = std::round(fps);
    return std::abs(fps - nearest) < 1e-3 * fps ? nearest : fps;
}

void write_fixed(std::ostream& os, double v) {
    char buf[64];
    if (std::abs(v) < 5e-7) v = 0.0;
    std::snprintf(buf, sizeof buf, "%.6f", v);
    os << buf;
}

}  // namespace

BvhData load_bvh(std::string_view text) {
    Tokenizer tok(text);
    tok.expect("HIERARCHY");
    const Token root = tok.next();
    if (root.text != "ROOT") throw BvhError("expected 'ROOT'", root.line);
    std::vector<JointDesc> joints;
    parse_joint(tok, joints, std::nullopt);
    if (!tok.done() && tok.peek().text == "ROOT") {
        throw BvhError("more than one ROOT", tok.peek().line);
    }

    tok.expect("MOTION");
    tok.expect("Frames:");
    const std::size_t frames_line = tok.line();
    const long frame_count = tok.integer();
    if (frame_count <= 0) throw BvhError("clip has zero frames", frames_line);
    tok.expect("Frame");
    tok.expect("Time:");
    const std::size_t time_line = tok.line();
    const double frame_time = tok.number();
    if (!(frame_time > 0.0)) throw BvhError("frame time must be positive", time_line);

    std::size_t channel_count = 0;
    for (const auto& j : joints) channel_count += j.channels.size();

    std::vector<std::vector<double>> values(static_cast<std::size_t>(frame_count));
    for (auto& frame : values) {
        frame.reserve(channel_count);
        for (std::size_t c = 0; c < channel_count; ++c) {
            if (tok.done()) throw BvhError("missing motion values", tok.line());
            frame.push_back(tok.number());
        }
    }
    if (!tok.done()) throw BvhError("unexpected trailing data '" + tok.peek().text + "'", tok.line());

    // Fold constant non-root translations into rest offsets.
    std::size_t base = 0;
    for (std::size_t j = 0; j < joints.size(); ++j) {
        for (std::size_t c = 0; c < joints[j].channels.size(); ++c) {
            const Channel ch = joints[j].channels[c];
            if (j == 0 || ch.kind != ChannelKind::Position) continue;
            const double first = values[0][base + c];
            for (const auto& frame : values) {
                if (std::abs(frame[base + c] - first) > 1e-9) {
                    throw BvhError("animated translation on non-root joint " + joints[j].name,
                                   joints[j].channels_line);
                }
            }
            joints[j].offset[ch.axis] += first;
        }
        base += joints[j].channels.size();
    }

    std::vector<Bone> bones;
    bones.reserve(joints.size());
    for (const auto& j : joints) {
        Bone b;
        b.name = j.name;
        b.parent = j.parent;
        b.rest_offset = j.offset;
        b.end_site = j.end_site;
        bones.push_back(std::move(b));
    }
    std::shared_ptr<const Skeleton> skeleton;
    try {
        skeleton = std::make_shared<const Skeleton>(std::move(bones));
    } catch (const SkeletonError& e) {
        throw BvhError(e.what(), 1);
    }

    std::vector<Pose> poses;
    poses.reserve(values.size());
    for (const auto& frame : values) {
        Pose pose = Pose::identity(*skeleton);
        std::size_t k = 0;
        for (std::size_t j = 0; j < joints.size(); ++j) {
            Quat q = Quat::Identity();
            for (const Channel& ch : joints[j].channels) {
                const double v = frame[k++];
                if (ch.kind == ChannelKind::Rotation) {
                    q = q * axis_rotation(ch.axis, deg_to_rad(v));
                } else if (j == 0) {
                    pose.root_translation[ch.axis] = v;
                }
            }
            pose.rotations[j] = q.normalized();
        }
        poses.push_back(std::move(pose));
    }

    AnimationClip clip(skeleton, snap_fps(1.0 / frame_time), std::move(poses));
    return {skeleton, std::move(clip)};
}

BvhData load_bvh_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open BVH file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return load_bvh(ss.str());
    } catch (const BvhError& e) {
        throw BvhError(path + ": " + e.what(), e.line());
    }
}

std::string save_bvh(const AnimationClip& clip) {
    const Skeleton& skel = clip.skeleton();
    std::ostringstream os;

    std::vector<BoneIndex> order;  // depth-first, matches channel layout
    auto write_joint = [&](auto&& self, BoneIndex b, int depth) -> void {
        const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
        const Bone& bone = skel.bone(b);
        os << indent << (depth == 0 ? "ROOT " : "JOINT ") << bone.name << '\n';
        os << indent << "{\n";
        os << indent << "  OFFSET ";
        write_fixed(os, bone.rest_offset.x());
        os << ' ';
        write_fixed(os, bone.rest_offset.y());
        os << ' ';
        write_fixed(os, bone.rest_offset.z());
        os << '\n';
        if (depth == 0) {
            os << indent << "  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation\n";
        } else {
            os << indent << "  CHANNELS 3 Zrotation Xrotation Yrotation\n";
        }
        order.push_back(b);
        const auto kids = skel.children(b);
        for (BoneIndex c : kids) self(self, c, depth + 1);
        if (kids.empty()) {
            const Vec3 tip = bone.end_site.value_or(Vec3::Zero());
            os << indent << "  End Site\n" << indent << "  {\n" << indent << "    OFFSET ";
            write_fixed(os, tip.x());
            os << ' ';
            write_fixed(os, tip.y());
            os << ' ';
            write_fixed(os, tip.z());
            os << '\n' << indent << "  }\n";
        }
        os << indent << "}\n";
    };

    os << "HIERARCHY\n";
    write_joint(write_joint, 0, 0);
    os << "MOTION\n";
    os << "Frames: " << clip.frame_count() << '\n';
    os << "Frame Time: ";
    write_fixed(os, 1.0 / clip.fps());
    os << '\n';

    for (const Pose& pose : clip.frames()) {
        bool first = true;
        auto put = [&](double v) {
            if (!first) os << ' ';
            first = false;
            write_fixed(os, v);
        };
        for (BoneIndex b : order) {
            if (b == 0) {
                put(pose.root_translation.x());
                put(pose.root_translation.y());
                put(pose.root_translation.z());
            }
            const Quat local = skel.bone(b).rest_rotation * pose.rotations[b];
            const Vec3 zxy = quat_to_euler(local, AxisOrder::ZXY);
            put(zxy[0]);
            put(zxy[1]);
            put(zxy[2]);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace mms
