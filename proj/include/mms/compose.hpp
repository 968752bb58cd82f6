#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mms/dictionary.hpp"
#include "mms/error.hpp"
#include "mms/ik.hpp"
#include "mms/mms_table.hpp"
#include "mms/profile.hpp"

namespace mms {

inline constexpr double kDefaultFps = 30.0;
// Playback faster than this multiple of nominal speed triggers a warning.
inline constexpr double kMaxComfortableSpeedup = 4.0;

struct ScheduledRow {
    std::size_t index = 0;
    MmsRow row;
    double start = 0.0;
    double end = 0.0;
    // Null for <HOLD> and absent overrides.
    std::shared_ptr<const GlossEntry> main;
    std::shared_ptr<const GlossEntry> dom;
    std::shared_ptr<const GlossEntry> ndom;
};

struct ScheduleResult {
    std::vector<ScheduledRow> rows;
    std::vector<Diagnostic> warnings;
};

// Absolute rows sit at [framestart, frameend]; relative rows start at the
// previous end plus transition and last `duration` seconds, nominal *
// 100 / percent, or nominal. Throws ScheduleError for overlaps, mixed
// timing, <HOLD> without duration and glosses the dictionary cannot supply.
ScheduleResult schedule(const MmsDocument& doc, const GlossDictionary& dict);

// Replacement source for one arm during a row.
struct ArmOverride {
    enum class Kind { None, Clip, Hold };
    Kind kind = Kind::None;
    const AnimationClip* clip = nullptr;

    static ArmOverride none() { return {}; }
    static ArmOverride hold() { return {Kind::Hold, nullptr}; }
    static ArmOverride from(const AnimationClip& c) { return {Kind::Clip, &c}; }
};

// Frame i is main frame i with each overridden arm set taken from its clip,
// or frozen at `previous_pose` for <HOLD>. Throws Error on frame-count
// mismatch or a hold without a previous pose.
AnimationClip merge_parallel(const AnimationClip& main, const ArmOverride& dom, const ArmOverride& ndom,
                             const SkeletonProfile& profile, const Pose* previous_pose = nullptr);

class TransitionGenerator {
public:
    virtual ~TransitionGenerator() = default;
    // `count` in-between poses, excluding both endpoints.
    virtual std::vector<Pose> generate(const Pose& from, const Pose& to, std::size_t count) const = 0;
};

// Ease-in-ease-out interpolation with smoothstep weights.
class SmoothstepTransition final : public TransitionGenerator {
public:
    std::vector<Pose> generate(const Pose& from, const Pose& to, std::size_t count) const override;
};

double smoothstep(double u);

// ceil(gap * fps) - 1 intermediate poses; empty for gap 0 (hard cut).
std::size_t transition_frame_count(double gap, double fps);
std::vector<Pose> make_transition(const Pose& from, const Pose& to, double gap, double fps,
                                  const TransitionGenerator& generator = SmoothstepTransition{});

struct Segment {
    enum class Kind { LeadIn, Row, Transition };
    Kind kind = Kind::Row;
    std::optional<std::size_t> row;
    std::string gloss;
    double start = 0.0;
    double end = 0.0;
    std::size_t first_frame = 0;
    std::size_t last_frame = 0;
};

struct Timeline {
    AnimationClip clip;
    std::vector<Segment> segments;
    BakeReport ik_report;
    std::vector<Diagnostic> warnings;
};

struct RealizeOptions {
    double fps = kDefaultFps;
    std::shared_ptr<const TransitionGenerator> transitions;  // smoothstep when null
};

class ValidationFailed : public Error {
public:
    explicit ValidationFailed(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

// Validates, schedules, then per row: retime, merge arm overrides, inflect,
// place on the timeline; gaps between rows become transitions. A gap before
// the first row holds its first pose. Throws ValidationFailed or
// RealizeError (with the row index).
Timeline realize(const MmsDocument& doc, const GlossDictionary& dict, const SkeletonProfile& profile,
                 const RealizeOptions& options = {});

nlohmann::json segments_to_json(const Timeline& timeline);

}  // namespace mms
