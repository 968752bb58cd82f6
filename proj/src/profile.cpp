#include "mms/profile.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mms/error.hpp"

namespace mms {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> words(std::string_view s) {
    std::istringstream is{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& w : v) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

IkChain chain_of(std::vector<std::string> bones, double orientation_weight) {
    IkChain c;
    c.bones = std::move(bones);
    c.orientation_weight = orientation_weight;
    return c;
}

SideBinding default_side(const std::string& tag) {
    const std::string p = "Bone_" + tag + "_";
    SideBinding s;
    s.hand = p + "Hand";
    s.clavicle = p + "Clavicle";
    s.arm_chain = chain_of({p + "UpperArm", p + "Forearm", p + "Hand"}, 1.0);
    s.clavicle_chain = chain_of({p + "Clavicle"}, 0.0);
    s.shoulder_tip = p + "UpperArm";
    s.arm_set_root = p + "UpperArm";
    return s;
}

void require_bone(const Skeleton& skeleton, const std::string& role, const std::string& bone) {
    if (!skeleton.find(bone)) {
        throw ProfileError("profile role '" + role + "' names bone '" + bone +
                           "' which is not in the skeleton");
    }
}

void require_chain(const Skeleton& skeleton, const std::string& role, const IkChain& chain,
                   const std::string& end) {
    if (chain.bones.empty()) throw ProfileError("profile chain '" + role + "' is empty");
    for (const auto& b : chain.bones) require_bone(skeleton, role, b);
    try {
        check_chain(skeleton, chain);
    } catch (const SkeletonError& e) {
        throw ProfileError("profile chain '" + role + "': " + e.what());
    }
    if (chain.end_effector() != end) {
        throw ProfileError("profile chain '" + role + "' must end at " + end);
    }
}

}  // namespace

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

SkeletonProfile SkeletonProfile::default_profile() {
    SkeletonProfile p;
    p.dominant_side = Side::Right;
    p.torso = "Bone_Spine2";
    p.pelvis = "Bone_Pelvis";
    p.head = "Bone_Head";
    p.spine_chain = chain_of({"Bone_Spine", "Bone_Spine1", "Bone_Spine2"}, 1.0);
    p.neck_chain = chain_of({"Bone_Neck", "Bone_Head"}, 1.0);
    p.right = default_side("R");
    p.left = default_side("L");
    return p;
}

SkeletonProfile SkeletonProfile::parse(std::string_view text) {
    SkeletonProfile p = default_profile();
    std::vector<IkChain*> chains{&p.spine_chain, &p.neck_chain, &p.right.arm_chain,
                                 &p.right.clavicle_chain, &p.left.arm_chain,
                                 &p.left.clavicle_chain};

    std::map<std::string, std::function<void(const std::string&, std::size_t)>> setters;
    auto number = [](const std::string& v, std::size_t line) {
        double d = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
        if (ec != std::errc() || ptr != v.data() + v.size()) {
            throw ProfileError("line " + std::to_string(line) + ": malformed number '" + v + "'");
        }
        return d;
    };
    auto text_key = [&](const std::string& key, std::string& field) {
        setters[key] = [&field](const std::string& v, std::size_t) { field = v; };
    };
    auto chain_key = [&](const std::string& key, IkChain& chain) {
        setters[key] = [&chain](const std::string& v, std::size_t) { chain.bones = words(v); };
    };

    setters["dominant_side"] = [&p](const std::string& v, std::size_t line) {
        if (v == "right") p.dominant_side = Side::Right;
        else if (v == "left") p.dominant_side = Side::Left;
        else throw ProfileError("line " + std::to_string(line) + ": dominant_side must be left or right");
    };
    text_key("torso", p.torso);
    text_key("pelvis", p.pelvis);
    text_key("head", p.head);
    chain_key("spine_chain", p.spine_chain);
    chain_key("neck_chain", p.neck_chain);
    for (auto* side : {&p.right, &p.left}) {
        const std::string prefix = side == &p.right ? "right." : "left.";
        text_key(prefix + "hand", side->hand);
        text_key(prefix + "clavicle", side->clavicle);
        chain_key(prefix + "arm_chain", side->arm_chain);
        chain_key(prefix + "clavicle_chain", side->clavicle_chain);
        text_key(prefix + "shoulder_tip", side->shoulder_tip);
        text_key(prefix + "arm_set_root", side->arm_set_root);
    }
    setters["ik.tolerance"] = [&](const std::string& v, std::size_t line) {
        const double t = number(v, line);
        if (!(t > 0.0)) throw ProfileError("line " + std::to_string(line) + ": ik.tolerance must be positive");
        for (auto* c : chains) c->tolerance = t;
    };
    setters["ik.max_iterations"] = [&](const std::string& v, std::size_t line) {
        const double n = number(v, line);
        if (n < 1) throw ProfileError("line " + std::to_string(line) + ": ik.max_iterations must be positive");
        for (auto* c : chains) c->max_iterations = static_cast<int>(n);
    };
    setters["ik.damping"] = [&](const std::string& v, std::size_t line) {
        const double d = number(v, line);
        if (!(d > 0.0) || d > kPi) {
            throw ProfileError("line " + std::to_string(line) + ": ik.damping must be in (0, pi]");
        }
        for (auto* c : chains) c->damping = d;
    };

    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        std::string_view body = line;
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ProfileError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        auto it = setters.find(key);
        if (it == setters.end()) {
            throw ProfileError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        it->second(value, line_no);
    }
    return p;
}

SkeletonProfile SkeletonProfile::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string SkeletonProfile::to_text() const {
    std::ostringstream os;
    os << "dominant_side = " << to_string(dominant_side) << '\n'
       << "torso = " << torso << '\n'
       << "pelvis = " << pelvis << '\n'
       << "head = " << head << '\n'
       << "spine_chain = " << join(spine_chain.bones) << '\n'
       << "neck_chain = " << join(neck_chain.bones) << '\n';
    for (Side s : {Side::Right, Side::Left}) {
        const SideBinding& b = side(s);
        const std::string prefix = std::string(to_string(s)) + ".";
        os << prefix << "hand = " << b.hand << '\n'
           << prefix << "clavicle = " << b.clavicle << '\n'
           << prefix << "arm_chain = " << join(b.arm_chain.bones) << '\n'
           << prefix << "clavicle_chain = " << join(b.clavicle_chain.bones) << '\n'
           << prefix << "shoulder_tip = " << b.shoulder_tip << '\n'
           << prefix << "arm_set_root = " << b.arm_set_root << '\n';
    }
    os << "ik.tolerance = " << spine_chain.tolerance << '\n'
       << "ik.max_iterations = " << spine_chain.max_iterations << '\n'
       << "ik.damping = " << spine_chain.damping << '\n';
    return os.str();
}

void SkeletonProfile::check(const Skeleton& skeleton) const {
    require_bone(skeleton, "torso", torso);
    require_bone(skeleton, "pelvis", pelvis);
    require_bone(skeleton, "head", head);
    if (!skeleton.is_ancestor(skeleton.index_of(pelvis), skeleton.index_of(torso))) {
        throw ProfileError("torso bone " + torso + " must descend from pelvis bone " + pelvis);
    }
    require_chain(skeleton, "spine_chain", spine_chain, torso);
    require_chain(skeleton, "neck_chain", neck_chain, head);
    for (Side s : {Side::Right, Side::Left}) {
        const SideBinding& b = side(s);
        const std::string tag(to_string(s));
        require_bone(skeleton, tag + ".hand", b.hand);
        require_bone(skeleton, tag + ".clavicle", b.clavicle);
        require_bone(skeleton, tag + ".shoulder_tip", b.shoulder_tip);
        require_bone(skeleton, tag + ".arm_set_root", b.arm_set_root);
        require_chain(skeleton, tag + ".arm_chain", b.arm_chain, b.hand);
        require_chain(skeleton, tag + ".clavicle_chain", b.clavicle_chain, b.clavicle);
        if (skeleton.bone(skeleton.index_of(b.shoulder_tip)).parent != skeleton.index_of(b.clavicle)) {
            throw ProfileError(tag + ".shoulder_tip must be a child of " + b.clavicle);
        }
    }
}

IkChain SkeletonProfile::shoulder_chain(const Skeleton& skeleton, Side s) const {
    const SideBinding& b = side(s);
    IkChain chain = b.clavicle_chain;
    chain.tip = skeleton.bone(skeleton.index_of(b.shoulder_tip)).rest_offset;
    chain.orientation_weight = 0.0;
    return chain;
}

std::vector<BoneIndex> SkeletonProfile::arm_bone_set(const Skeleton& skeleton, Side s) const {
    return skeleton.subtree(skeleton.index_of(side(s).arm_set_root));
}

}  // namespace mms
