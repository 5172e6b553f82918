#pragma once

#include <cstdint>
#include <string>

#include "ecgsyn/dataset.hpp"

namespace ecgsyn {

/// The per-class reference beat used as the comparison anchor.
struct Template {
    enum class Origin { Sab, Random, File };

    Beat beat;
    Origin origin = Origin::Sab;
    std::uint64_t seed = 0;    // random origin only
    std::size_t index = 0;     // random origin only
    std::string file;          // file origin only

    std::string origin_name() const;
};

/// Statistically averaged beat: per-timestep mean over the whole set.
Template sab_template(const BeatSet& set);

/// Uniform draw of one member beat; the chosen index is recorded.
Template random_template(const BeatSet& set, std::uint64_t seed);

/// Template files reuse the one-line beat CSV format with label `T`.
Template load_template(const std::string& path, std::size_t expected_length);
void save_template(const Template& tpl, const std::string& path);

} // namespace ecgsyn
