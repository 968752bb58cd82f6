#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mms/ik.hpp"
#include "mms/skeleton.hpp"

namespace mms {

enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
std::string_view to_string(Side s);

struct SideBinding {
    std::string hand;
    std::string clavicle;
    IkChain arm_chain;          // ends at `hand`
    IkChain clavicle_chain;     // ends at `clavicle`; tip set on bind
    std::string shoulder_tip;   // child of the clavicle whose origin is the clavicle end
    std::string arm_set_root;   // the arm "from the shoulder to the fingertips" is its subtree
};

// Binds semantic body roles to concrete bone names and IK chains.
//
// Text form: one `key = value` per line, `#` starts a comment, bone lists
// separated by spaces. Keys: dominant_side (left|right), torso, pelvis, head,
// spine_chain, neck_chain, ik.tolerance, ik.max_iterations, ik.damping, and
// per side (`right.` / `left.` prefix): hand, clavicle, arm_chain,
// clavicle_chain, shoulder_tip, arm_set_root. Missing keys keep the defaults.
class SkeletonProfile {
public:
    Side dominant_side = Side::Right;
    std::string torso;
    std::string pelvis;
    std::string head;
    IkChain spine_chain;  // ends at torso
    IkChain neck_chain;   // ends at head
    SideBinding right;
    SideBinding left;

    static SkeletonProfile default_profile();
    static SkeletonProfile parse(std::string_view text);
    static SkeletonProfile load_file(const std::string& path);
    std::string to_text() const;

    const SideBinding& side(Side s) const { return s == Side::Right ? right : left; }
    const SideBinding& dominant() const { return side(dominant_side); }
    const SideBinding& nondominant() const { return side(opposite(dominant_side)); }

    // Throws ProfileError when a role is missing from the skeleton or a chain
    // does not end at its role bone.
    void check(const Skeleton& skeleton) const;

    // The clavicle chain with its tip resolved against the skeleton.
    IkChain shoulder_chain(const Skeleton& skeleton, Side s) const;

    std::vector<BoneIndex> arm_bone_set(const Skeleton& skeleton, Side s) const;
};

}  // namespace mms
