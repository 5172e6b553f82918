#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ecgsyn/error.hpp"

namespace ecgsyn {

/// One segmented cardiac cycle: a fixed-length sequence of amplitudes.
using Beat = std::vector<double>;

enum class Source { Real, Generated, Augmented };

std::string source_name(Source s);
Source source_from_name(const std::string& name);

/// Labeled collection of beats, all of one length. Labels are kept per
/// beat so a freshly loaded multi-class file can be filtered afterwards.
struct BeatSet {
    std::vector<Beat> beats;
    std::vector<std::string> labels; // same size as beats
    Source source = Source::Real;

    std::size_t count() const { return beats.size(); }
    bool empty() const { return beats.empty(); }

    /// Length shared by all member beats; 0 for an empty set.
    std::size_t beat_length() const { return beats.empty() ? 0 : beats.front().size(); }

    /// The single label when homogeneous, "*" otherwise.
    std::string class_label() const;

    void push_back(Beat beat, std::string label);
};

struct DatasetManifest {
    std::string path;
    std::size_t beat_length = 0;
    std::map<std::string, std::size_t> classes_present;
    std::uint64_t seed = 0;

    std::size_t total() const;
};

/// Parses the one-beat-per-line CSV format: `label,v1,...,vL`.
/// Throws FileNotFound, MalformedRow, LengthMismatch.
BeatSet load_beats(const std::string& path, std::size_t expected_length);

/// Writes the same CSV format (no header row, '.' decimal separator).
void save_beats(const BeatSet& set, const std::string& path);

/// Keeps exactly the beats whose label matches; order preserved.
BeatSet filter_class(const BeatSet& set, const std::string& label);

/// Fourier-domain resampling: forward DFT, symmetric truncation or
/// zero-padding of the spectrum to target_length bins, inverse DFT, real
/// part, amplitude scale target_length/source_length.
Beat resample_beat(const Beat& beat, std::size_t target_length);

/// Affine per-beat min-max map onto [-1, 1]. A constant beat maps to all
/// zeros and sets *constant_flag when the caller supplies one.
Beat normalize_beat(const Beat& beat, bool* constant_flag = nullptr);

/// Uniform sample of n beats without replacement; draw order, fixed seed.
BeatSet sample_subset(const BeatSet& set, std::size_t n, std::uint64_t seed);

/// Disjoint, exhaustive split; test size = round(test_fraction * count).
std::pair<BeatSet, BeatSet> split(const BeatSet& set, double test_fraction,
                                  std::uint64_t seed);

BeatSet resample_set(const BeatSet& set, std::size_t target_length);
BeatSet normalize_set(const BeatSet& set);

DatasetManifest make_manifest(const BeatSet& set, const std::string& path,
                              std::uint64_t seed);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

/// Binary beat cache (magic + version + payload + CRC32 trailer).
void save_cache(const BeatSet& set, const std::string& path);
BeatSet load_cache(const std::string& path);

} // namespace ecgsyn
