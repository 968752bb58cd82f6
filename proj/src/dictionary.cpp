#include "mms/dictionary.hpp"

#include <algorithm>
#include <mutex>

#include "mms/bvh.hpp"
#include "mms/error.hpp"

namespace mms {

namespace fs = std::filesystem;

GlossDictionary::GlossDictionary(fs::path directory, SkeletonProfile profile)
    : directory_(std::move(directory)), profile_(std::move(profile)) {}

std::shared_ptr<GlossDictionary> GlossDictionary::open(const fs::path& directory,
                                                       SkeletonProfile profile) {
    std::error_code ec;
    if (!fs::is_directory(directory, ec)) {
        throw IoError("dictionary directory not found: " + directory.string());
    }
    std::shared_ptr<GlossDictionary> dict(new GlossDictionary(directory, std::move(profile)));
    dict->scan();
    return dict;
}

std::shared_ptr<GlossDictionary> GlossDictionary::from_clips(std::map<std::string, AnimationClip> clips,
                                                             SkeletonProfile profile) {
    std::shared_ptr<GlossDictionary> dict(new GlossDictionary({}, std::move(profile)));
    for (auto& [gloss, clip] : clips) {
        if (is_hold(gloss)) throw DictionaryError("<HOLD> is a reserved token, not a dictionary entry");
        dict->cache_[gloss] = dict->bind(gloss, {}, clip);
    }
    return dict;
}

void GlossDictionary::scan() {
    files_.clear();
    for (const auto& entry : fs::directory_iterator(directory_)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.extension() != ".bvh") continue;
        files_.emplace(p.stem().string(), p);
    }
}

bool GlossDictionary::contains(std::string_view gloss) const {
    if (files_.find(gloss) != files_.end()) return true;
    std::shared_lock lock(mutex_);
    return cache_.find(gloss) != cache_.end();
}

std::vector<std::string> GlossDictionary::glosses() const {
    std::vector<std::string> out;
    for (const auto& [g, p] : files_) out.push_back(g);
    std::shared_lock lock(mutex_);
    for (const auto& [g, e] : cache_) {
        if (files_.find(g) == files_.end()) out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::shared_ptr<const GlossEntry> GlossDictionary::bind(const std::string& gloss, const fs::path& source,
                                                        const AnimationClip& clip) const {
    if (!skeleton_) {
        profile_.check(clip.skeleton());
        skeleton_ = clip.skeleton_ptr();
    } else if (!skeleton_->same_hierarchy(clip.skeleton())) {
        throw DictionaryError("skeleton of gloss '" + gloss +
                              "' does not match the dictionary skeleton");
    }
    auto entry = std::make_shared<GlossEntry>();
    entry->gloss = gloss;
    entry->source = source;
    entry->clip = std::make_shared<const AnimationClip>(skeleton_, clip.fps(), clip.frames());
    return entry;
}

std::shared_ptr<const GlossEntry> GlossDictionary::lookup(std::string_view gloss) const {
    if (is_hold(gloss)) {
        throw DictionaryError("<HOLD> is a reserved token, not a dictionary entry");
    }
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(gloss); it != cache_.end()) return it->second;
    }
    auto file = files_.find(gloss);
    if (file == files_.end()) throw UnknownGlossError(std::string(gloss));

    BvhData data = load_bvh_file(file->second.string());
    std::unique_lock lock(mutex_);
    if (auto it = cache_.find(gloss); it != cache_.end()) return it->second;
    auto entry = bind(std::string(gloss), file->second, data.clip);
    cache_.emplace(std::string(gloss), entry);
    return entry;
}

void GlossDictionary::preload() const {
    for (const auto& [gloss, path] : files_) lookup(gloss);
}

void GlossDictionary::reload() {
    std::unique_lock lock(mutex_);
    if (directory_.empty()) return;
    cache_.clear();
    skeleton_.reset();
    scan();
}

std::shared_ptr<const Skeleton> GlossDictionary::skeleton() const {
    std::shared_lock lock(mutex_);
    return skeleton_;
}

}  // namespace mms
