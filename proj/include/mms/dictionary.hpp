#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "mms/mms_table.hpp"
#include "mms/profile.hpp"
#include "mms/skeleton.hpp"

namespace mms {

struct GlossEntry {
    std::string gloss;
    std::filesystem::path source;  // empty for in-memory entries
    std::shared_ptr<const AnimationClip> clip;

    double nominal_duration() const { return clip->nominal_duration(); }
};

// Gloss id -> sign clip, one `<GLOSSID>.bvh` file per gloss. Clips load on
// first lookup and are cached read-only; every clip is rebound to one shared
// skeleton. Lookups may run concurrently; reload() takes exclusive access.
class GlossDictionary : public GlossCatalog {
public:
    // Throws IoError when the directory does not exist.
    static std::shared_ptr<GlossDictionary> open(const std::filesystem::path& directory,
                                                 SkeletonProfile profile);
    static std::shared_ptr<GlossDictionary> from_clips(std::map<std::string, AnimationClip> clips,
                                                       SkeletonProfile profile);

    bool contains(std::string_view gloss) const override;
    std::vector<std::string> glosses() const;

    // Throws DictionaryError for <HOLD>, UnknownGlossError for missing ids,
    // and DictionaryError/ProfileError when the clip does not fit.
    std::shared_ptr<const GlossEntry> lookup(std::string_view gloss) const;

    void preload() const;
    void reload();

    // Null until the first clip has been loaded.
    std::shared_ptr<const Skeleton> skeleton() const;
    const SkeletonProfile& profile() const { return profile_; }
    const std::filesystem::path& directory() const { return directory_; }

private:
    GlossDictionary(std::filesystem::path directory, SkeletonProfile profile);
    void scan();
    std::shared_ptr<const GlossEntry> bind(const std::string& gloss, const std::filesystem::path& source,
                                           const AnimationClip& clip) const;

    std::filesystem::path directory_;
    SkeletonProfile profile_;
    std::map<std::string, std::filesystem::path, std::less<>> files_;

    mutable std::shared_mutex mutex_;
    mutable std::map<std::string, std::shared_ptr<const GlossEntry>, std::less<>> cache_;
    mutable std::shared_ptr<const Skeleton> skeleton_;
};

}  // namespace mms
