#include "ecgsyn/templates.hpp"

#include "ecgsyn/rng.hpp"

namespace ecgsyn {

std::string Template::origin_name() const {
    switch (origin) {
        case Origin::Sab: return "sab";
        case Origin::Random:
            return "random(seed=" + std::to_string(seed) +
                   ", index=" + std::to_string(index) + ")";
        case Origin::File: return "file:" + file;
    }
    return "sab";
}

Template sab_template(const BeatSet& set) {
    if (set.empty()) throw Error("EmptySet", "sab_template");
    const std::size_t len = set.beat_length();
    Beat mean(len, 0.0);
    for (const auto& beat : set.beats) {
        for (std::size_t j = 0; j < len; ++j) mean[j] += beat[j];
    }
    const double inv = 1.0 / static_cast<double>(set.count());
    for (auto& v : mean) v *= inv;
    Template tpl;
    tpl.beat = std::move(mean);
    tpl.origin = Template::Origin::Sab;
    return tpl;
}

Template random_template(const BeatSet& set, std::uint64_t seed) {
    if (set.empty()) throw Error("EmptySet", "random_template");
    Rng rng(seed);
    Template tpl;
    tpl.index = static_cast<std::size_t>(rng.uniform_index(set.count()));
    tpl.beat = set.beats[tpl.index];
    tpl.origin = Template::Origin::Random;
    tpl.seed = seed;
    return tpl;
}

Template load_template(const std::string& path, std::size_t expected_length) {
    const BeatSet set = load_beats(path, expected_length);
    if (set.empty()) throw Error("EmptySet", "template file has no rows: " + path);
    Template tpl;
    tpl.beat = set.beats.front();
    tpl.origin = Template::Origin::File;
    tpl.file = path;
    return tpl;
}

void save_template(const Template& tpl, const std::string& path) {
    BeatSet set;
    set.push_back(tpl.beat, "T");
    save_beats(set, path);
}

} // namespace ecgsyn
