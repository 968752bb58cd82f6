#include "mms/compose.hpp"

#include <cmath>
#include <sstream>

#include "mms/inflect.hpp"

namespace mms {
namespace {

std::size_t frame_index(double t, double fps) {
    return static_cast<std::size_t>(std::llround(t * fps));
}

std::shared_ptr<const GlossEntry> lookup_optional(const GlossDictionary& dict,
                                                  const std::optional<std::string>& gloss) {
    if (!gloss || gloss->empty() || is_hold(*gloss)) return nullptr;
    return dict.lookup(*gloss);
}

ArmOverride arm_source(const std::optional<std::string>& gloss, const AnimationClip* clip) {
    if (!gloss || gloss->empty()) return ArmOverride::none();
    if (is_hold(*gloss)) return ArmOverride::hold();
    return ArmOverride::from(*clip);
}

}  // namespace

ScheduleResult schedule(const MmsDocument& doc, const GlossDictionary& dict) {
    ScheduleResult out;
    double cursor = 0.0;
    std::optional<double> previous_end;

    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
        const MmsRow& row = doc.rows[i];
        const TimingSpec& t = row.timing;
        ScheduledRow s;
        s.index = i;
        s.row = row;
        try {
            if (!is_hold(row.maingloss)) s.main = dict.lookup(row.maingloss);
            s.dom = lookup_optional(dict, row.domgloss);
            s.ndom = lookup_optional(dict, row.ndomgloss);
        } catch (const Error& e) {
            throw ScheduleError(i, e.what());
        }

        if (t.is_mixed()) throw ScheduleError(i, "mixed timing modes");
        if (t.mode() == TimingMode::Absolute) {
            if (!t.frame_start || !t.frame_end) throw ScheduleError(i, "incomplete absolute timing");
            s.start = *t.frame_start;
            s.end = *t.frame_end;
        } else {
            s.start = cursor + t.transition.value_or(0.0);
            double length = 0.0;
            if (t.duration) {
                if (!s.main && t.duration->kind == DurationValue::Kind::SpeedPercent) {
                    throw ScheduleError(i, "<HOLD> duration must be in seconds");
                }
                length = t.duration->resolve(s.main ? s.main->nominal_duration() : 0.0);
            } else if (s.main) {
                length = s.main->nominal_duration();
            } else {
                throw ScheduleError(i, "<HOLD> requires a duration");
            }
            s.end = s.start + length;
        }
        if (!(s.end > s.start)) throw ScheduleError(i, "row has no positive length");
        if (previous_end && s.start < *previous_end) {
            std::ostringstream msg;
            msg << "row overlaps the previous row (starts at " << s.start << " s, previous ends at "
                << *previous_end << " s)";
            throw ScheduleError(i, msg.str());
        }
        if (s.main) {
            const double speedup = s.main->nominal_duration() / (s.end - s.start);
            if (speedup > kMaxComfortableSpeedup) {
                std::ostringstream msg;
                msg << "playback at " << std::lround(speedup * 100.0)
                    << "% of nominal speed exceeds 400%";
                out.warnings.push_back({Severity::Warning, i, row.line, "duration", msg.str()});
            }
        }
        cursor = s.end;
        previous_end = s.end;
        out.rows.push_back(std::move(s));
    }
    return out;
}

AnimationClip merge_parallel(const AnimationClip& main, const ArmOverride& dom, const ArmOverride& ndom,
                             const SkeletonProfile& profile, const Pose* previous_pose) {
    if (dom.kind == ArmOverride::Kind::None && ndom.kind == ArmOverride::Kind::None) return main;
    const Skeleton& skel = main.skeleton();
    AnimationClip out = main;

    auto apply = [&](const ArmOverride& src, Side side) {
        if (src.kind == ArmOverride::Kind::None) return;
        const auto bones = profile.arm_bone_set(skel, side);
        if (src.kind == ArmOverride::Kind::Hold) {
            if (!previous_pose) throw Error("<HOLD> arm override has no previous pose to keep");
            for (Pose& p : out.frames()) {
                for (BoneIndex b : bones) p.rotations[b] = previous_pose->rotations[b];
            }
            return;
        }
        if (src.clip->frame_count() != main.frame_count()) {
            throw Error("arm override has " + std::to_string(src.clip->frame_count()) +
                        " frames, main clip has " + std::to_string(main.frame_count()));
        }
        if (src.clip->skeleton().size() != skel.size()) {
            throw Error("arm override uses a different skeleton");
        }
        for (std::size_t i = 0; i < out.frame_count(); ++i) {
            for (BoneIndex b : bones) out.frame(i).rotations[b] = src.clip->frame(i).rotations[b];
        }
    };
    apply(dom, profile.dominant_side);
    apply(ndom, opposite(profile.dominant_side));
    return out;
}

double smoothstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

std::vector<Pose> SmoothstepTransition::generate(const Pose& from, const Pose& to, std::size_t count) const {
    std::vector<Pose> out;
    out.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(count + 1);
        out.push_back(interpolate_pose(from, to, smoothstep(u)));
    }
    return out;
}

std::size_t transition_frame_count(double gap, double fps) {
    if (!(gap > 0.0)) return 0;
    const double steps = std::ceil(gap * fps - 1e-9);
    return steps > 1.0 ? static_cast<std::size_t>(steps) - 1 : 0;
}

std::vector<Pose> make_transition(const Pose& from, const Pose& to, double gap, double fps,
                                  const TransitionGenerator& generator) {
    return generator.generate(from, to, transition_frame_count(gap, fps));
}

ValidationFailed::ValidationFailed(std::vector<Diagnostic> diagnostics)
    : Error(std::to_string(count_errors(diagnostics)) + " validation error(s)"),
      diagnostics_(std::move(diagnostics)) {}

Timeline realize(const MmsDocument& doc, const GlossDictionary& dict, const SkeletonProfile& profile,
                 const RealizeOptions& options) {
    if (!(options.fps > 0.0)) throw Error("fps must be positive");
    const double fps = options.fps;

    std::vector<Diagnostic> diagnostics = validate(doc, &dict);
    if (doc.rows.empty()) {
        diagnostics.push_back({Severity::Error, std::nullopt, 0, "", "document has no rows"});
    }
    if (count_errors(diagnostics) > 0) throw ValidationFailed(std::move(diagnostics));

    ScheduleResult sched = schedule(doc, dict);
    for (auto& w : sched.warnings) diagnostics.push_back(std::move(w));

    const SmoothstepTransition default_transition;
    const TransitionGenerator& transitions =
        options.transitions ? *options.transitions : static_cast<const TransitionGenerator&>(default_transition);

    std::shared_ptr<const Skeleton> skeleton = dict.skeleton();
    if (!skeleton) {
        for (const auto& s : sched.rows) {
            if (s.main) { skeleton = s.main->clip->skeleton_ptr(); break; }
            if (s.dom) { skeleton = s.dom->clip->skeleton_ptr(); break; }
            if (s.ndom) { skeleton = s.ndom->clip->skeleton_ptr(); break; }
        }
    }
    if (!skeleton) throw RealizeError(0, "no gloss clip available to establish the skeleton");

    Timeline timeline;
    std::vector<Pose> frames;
    std::optional<Pose> previous_pose;
    std::optional<std::size_t> previous_last;

    for (const ScheduledRow& s : sched.rows) {
        try {
            const std::size_t first = frame_index(s.start, fps);
            const std::size_t last = frame_index(s.end, fps);
            const std::size_t count = last - first + 1;

            AnimationClip main;
            if (s.main) {
                main = retime_to_frames(*s.main->clip, count, fps);
            } else {
                if (!previous_pose) throw Error("<HOLD> has no previous pose to keep");
                main = AnimationClip(skeleton, fps, std::vector<Pose>(count, *previous_pose));
            }
            std::optional<AnimationClip> dom_clip;
            std::optional<AnimationClip> ndom_clip;
            if (s.dom) dom_clip = retime_to_frames(*s.dom->clip, count, fps);
            if (s.ndom) ndom_clip = retime_to_frames(*s.ndom->clip, count, fps);

            const AnimationClip merged =
                merge_parallel(main, arm_source(s.row.domgloss, dom_clip ? &*dom_clip : nullptr),
                               arm_source(s.row.ndomgloss, ndom_clip ? &*ndom_clip : nullptr), profile,
                               previous_pose ? &*previous_pose : nullptr);

            RowInflectionResult inflected = apply_row_inflections(merged, s.row.inflections, profile);
            timeline.ik_report.merge(inflected.report);
            if (!inflected.report.ok()) {
                std::ostringstream msg;
                msg << inflected.report.unconverged_frames
                    << " frame(s) did not reach their inflection target (max residual "
                    << inflected.report.max_position_residual << ")";
                diagnostics.push_back({Severity::Warning, s.index, s.row.line, "", msg.str()});
            }
            const auto& row_frames = inflected.clip.frames();

            if (!previous_last) {
                if (first > 0) {
                    frames.assign(first, row_frames.front());
                    timeline.segments.push_back({Segment::Kind::LeadIn, std::nullopt, "", 0.0, s.start,
                                                 0, first - 1});
                }
            } else if (first > *previous_last) {
                const double gap = static_cast<double>(first - *previous_last) / fps;
                auto between = make_transition(frames.back(), row_frames.front(), gap, fps, transitions);
                if (!between.empty()) {
                    timeline.segments.push_back({Segment::Kind::Transition, std::nullopt, "",
                                                 static_cast<double>(*previous_last) / fps, s.start,
                                                 *previous_last + 1, first - 1});
                }
                for (auto& p : between) frames.push_back(std::move(p));
            } else {
                // Touching rows: the later row owns the shared frame.
                frames.pop_back();
                timeline.segments.back().last_frame = first - 1;
            }
            frames.insert(frames.end(), row_frames.begin(), row_frames.end());
            timeline.segments.push_back({Segment::Kind::Row, s.index, s.row.maingloss, s.start, s.end,
                                         first, last});
            previous_pose = row_frames.back();
            previous_last = last;
        } catch (const RealizeError&) {
            throw;
        } catch (const std::exception& e) {
            throw RealizeError(s.index, e.what());
        }
    }

    timeline.clip = AnimationClip(skeleton, fps, std::move(frames));
    timeline.warnings = std::move(diagnostics);
    return timeline;
}

nlohmann::json segments_to_json(const Timeline& timeline) {
    nlohmann::json segs = nlohmann::json::array();
    for (const Segment& s : timeline.segments) {
        const char* kind = s.kind == Segment::Kind::Row ? "row"
                           : s.kind == Segment::Kind::Transition ? "transition" : "lead-in";
        nlohmann::json j = {{"kind", kind},
                            {"start", s.start},
                            {"end", s.end},
                            {"first_frame", s.first_frame},
                            {"last_frame", s.last_frame}};
        if (s.row) {
            j["row"] = *s.row;
            j["gloss"] = s.gloss;
        }
        segs.push_back(std::move(j));
    }
    return {{"fps", timeline.clip.fps()},
            {"frame_count", timeline.clip.frame_count()},
            {"duration", timeline.clip.nominal_duration()},
            {"segments", std::move(segs)}};
}

}  // namespace mms
