#include "ecgsyn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ecgsyn/crc32.hpp"
#include "ecgsyn/rng.hpp"

namespace ecgsyn {

std::string source_name(Source s) {
    switch (s) {
        case Source::Real: return "real";
        case Source::Generated: return "generated";
        case Source::Augmented: return "augmented";
    }
    return "real";
}

Source source_from_name(const std::string& name) {
    if (name == "real") return Source::Real;
    if (name == "generated") return Source::Generated;
    if (name == "augmented") return Source::Augmented;
    throw Error("BadSource", "unknown source tag: " + name);
}

std::string BeatSet::class_label() const {
    if (labels.empty()) return "*";
    for (const auto& l : labels) {
        if (l != labels.front()) return "*";
    }
    return labels.front();
}

void BeatSet::push_back(Beat beat, std::string label) {
    if (!beats.empty() && beat.size() != beats.front().size()) {
        throw Error("LengthMismatch", "beat length " + std::to_string(beat.size()) +
                                          " does not match set length " +
                                          std::to_string(beats.front().size()));
    }
    beats.push_back(std::move(beat));
    labels.push_back(std::move(label));
}

std::size_t DatasetManifest::total() const {
    std::size_t n = 0;
    for (const auto& [label, count] : classes_present) n += count;
    return n;
}

namespace {

double parse_sample(const std::string& token, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error("MalformedRow", "row " + std::to_string(row) + ", field " +
                                        std::to_string(col) + ": cannot parse '" +
                                        token + "'");
    }
    if (!std::isfinite(value)) {
        throw Error("MalformedRow", "row " + std::to_string(row) + ", field " +
                                        std::to_string(col) + ": non-finite value");
    }
    return value;
}

} // namespace

BeatSet load_beats(const std::string& path, std::size_t expected_length) {
    std::ifstream in(path);
    if (!in) throw Error("FileNotFound", path);

    BeatSet set;
    set.source = Source::Real;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::stringstream ss(line);
        std::string token;
        if (!std::getline(ss, token, ',')) {
            throw Error("MalformedRow", "row " + std::to_string(row) + ": empty");
        }
        std::string label = token;
        if (label.empty()) {
            throw Error("MalformedRow", "row " + std::to_string(row) + ": empty label");
        }

        Beat beat;
        beat.reserve(expected_length);
        std::size_t col = 0;
        while (std::getline(ss, token, ',')) {
            ++col;
            beat.push_back(parse_sample(token, row, col));
        }
        if (beat.size() != expected_length) {
            throw Error("LengthMismatch", "row " + std::to_string(row) + ": expected " +
                                              std::to_string(expected_length) +
                                              " samples, found " +
                                              std::to_string(beat.size()));
        }
        set.push_back(std::move(beat), std::move(label));
    }
    return set;
}

void save_beats(const BeatSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("Io", "cannot open for writing: " + path);
    out.precision(17);
    for (std::size_t i = 0; i < set.count(); ++i) {
        out << set.labels[i];
        for (double v : set.beats[i]) out << ',' << v;
        out << '\n';
    }
    if (!out) throw Error("Io", "write failed: " + path);
}

BeatSet filter_class(const BeatSet& set, const std::string& label) {
    BeatSet out;
    out.source = set.source;
    for (std::size_t i = 0; i < set.count(); ++i) {
        if (set.labels[i] == label) out.push_back(set.beats[i], set.labels[i]);
    }
    return out;
}

namespace {

// Plain O(N^2) DFT; beats are short (hundreds of samples) and resampling
// is a per-beat one-off, so no FFT library is pulled in.
std::vector<std::complex<double>> dft(const Beat& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> spectrum(n);
    const double w = -2.0 * 3.14159265358979323846 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double phi = w * static_cast<double>(k) * static_cast<double>(t);
            re += x[t] * std::cos(phi);
            im += x[t] * std::sin(phi);
        }
        spectrum[k] = {re, im};
    }
    return spectrum;
}

} // namespace

Beat resample_beat(const Beat& beat, std::size_t target_length) {
    if (target_length < 2) {
        throw Error("InvalidTargetLength", std::to_string(target_length));
    }
    const std::size_t n = beat.size();
    const std::size_t m = target_length;
    if (n == m) return beat;

    const auto spectrum = dft(beat);

    // Symmetric truncation / zero-padding of the spectrum to m bins.
    std::vector<std::complex<double>> trimmed(m, {0.0, 0.0});
    const std::size_t keep = std::min(n, m);
    const std::size_t low = (keep + 1) / 2;        // bins 0 .. low-1
    const std::size_t high = keep / 2;             // top `high` bins
    for (std::size_t k = 0; k < low; ++k) trimmed[k] = spectrum[k];
    for (std::size_t k = 0; k < high; ++k) trimmed[m - 1 - k] = spectrum[n - 1 - k];

    Beat out(m);
    const double w = 2.0 * 3.14159265358979323846 / static_cast<double>(m);
    const double scale = 1.0 / static_cast<double>(n); // ifft 1/m times m/n
    for (std::size_t t = 0; t < m; ++t) {
        double re = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double phi = w * static_cast<double>(k) * static_cast<double>(t);
            re += trimmed[k].real() * std::cos(phi) - trimmed[k].imag() * std::sin(phi);
        }
        out[t] = re * scale;
    }
    return out;
}

Beat normalize_beat(const Beat& beat, bool* constant_flag) {
    if (beat.empty()) throw Error("EmptyBeat", "cannot normalize an empty beat");
    for (double v : beat) {
        if (!std::isfinite(v)) throw Error("NonFiniteSample", "normalize_beat input");
    }
    const auto [min_it, max_it] = std::minmax_element(beat.begin(), beat.end());
    const double lo = *min_it, hi = *max_it;
    if (constant_flag) *constant_flag = false;
    if (hi == lo) {
        if (constant_flag) *constant_flag = true;
        return Beat(beat.size(), 0.0);
    }
    Beat out(beat.size());
    const double scale = 2.0 / (hi - lo);
    for (std::size_t i = 0; i < beat.size(); ++i) out[i] = (beat[i] - lo) * scale - 1.0;
    return out;
}

BeatSet sample_subset(const BeatSet& set, std::size_t n, std::uint64_t seed) {
    if (n < 1 || n > set.count()) {
        throw Error("SampleTooLarge", "requested " + std::to_string(n) + " of " +
                                          std::to_string(set.count()));
    }
    Rng rng(seed);
    std::vector<std::size_t> indices(set.count());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    BeatSet out;
    out.source = set.source;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng.uniform_index(indices.size() - i);
        std::swap(indices[i], indices[j]);
        out.push_back(set.beats[indices[i]], set.labels[indices[i]]);
    }
    return out;
}

std::pair<BeatSet, BeatSet> split(const BeatSet& set, double test_fraction,
                                  std::uint64_t seed) {
    if (set.count() < 2) throw Error("DegenerateSplit", "need at least 2 beats");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error("DegenerateSplit", "test_fraction must lie in (0,1)");
    }
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(set.count())));
    if (n_test == 0 || n_test == set.count()) {
        throw Error("DegenerateSplit", "split leaves one side empty");
    }
    const BeatSet shuffled = sample_subset(set, set.count(), seed);
    BeatSet train, test;
    train.source = set.source;
    test.source = set.source;
    for (std::size_t i = 0; i < shuffled.count(); ++i) {
        if (i < n_test) {
            test.push_back(shuffled.beats[i], shuffled.labels[i]);
        } else {
            train.push_back(shuffled.beats[i], shuffled.labels[i]);
        }
    }
    return {std::move(train), std::move(test)};
}

BeatSet resample_set(const BeatSet& set, std::size_t target_length) {
    BeatSet out;
    out.source = set.source;
    for (std::size_t i = 0; i < set.count(); ++i) {
        out.push_back(resample_beat(set.beats[i], target_length), set.labels[i]);
    }
    return out;
}

BeatSet normalize_set(const BeatSet& set) {
    BeatSet out;
    out.source = set.source;
    for (std::size_t i = 0; i < set.count(); ++i) {
        out.push_back(normalize_beat(set.beats[i]), set.labels[i]);
    }
    return out;
}

DatasetManifest make_manifest(const BeatSet& set, const std::string& path,
                              std::uint64_t seed) {
    DatasetManifest m;
    m.path = path;
    m.beat_length = set.beat_length();
    m.seed = seed;
    for (const auto& label : set.labels) ++m.classes_present[label];
    return m;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("Io", "cannot open for writing: " + path);
    out << "path = " << manifest.path << '\n';
    out << "beat_length = " << manifest.beat_length << '\n';
    out << "seed = " << manifest.seed << '\n';
    out << "total = " << manifest.total() << '\n';
    for (const auto& [label, count] : manifest.classes_present) {
        out << "class." << label << " = " << count << '\n';
    }
}

namespace {

constexpr char kCacheMagic[4] = {'E', 'C', 'G', 'B'};
constexpr std::uint32_t kCacheVersion = 1;

template <typename T>
void put(std::string& buf, T value) {
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    buf.append(raw, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& pos) {
    if (pos + sizeof(T) > buf.size()) throw Error("ChecksumMismatch", "truncated cache");
    T value;
    std::memcpy(&value, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

} // namespace

void save_cache(const BeatSet& set, const std::string& path) {
    std::string buf;
    buf.append(kCacheMagic, 4);
    put<std::uint32_t>(buf, kCacheVersion);
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(set.source));
    put<std::uint64_t>(buf, set.count());
    put<std::uint64_t>(buf, set.beat_length());
    for (std::size_t i = 0; i < set.count(); ++i) {
        put<std::uint16_t>(buf, static_cast<std::uint16_t>(set.labels[i].size()));
        buf.append(set.labels[i]);
        for (double v : set.beats[i]) put<double>(buf, v);
    }
    const std::uint32_t crc =
        crc32(reinterpret_cast<const unsigned char*>(buf.data()), buf.size());
    put<std::uint32_t>(buf, crc);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("Io", "cannot open for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("Io", "write failed: " + path);
}

BeatSet load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("FileNotFound", path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 4 + sizeof(std::uint32_t) * 2) {
        throw Error("ChecksumMismatch", "cache too small: " + path);
    }
    if (std::memcmp(buf.data(), kCacheMagic, 4) != 0) {
        throw Error("BadMagic", "not a beat cache: " + path);
    }
    const std::size_t body = buf.size() - sizeof(std::uint32_t);
    std::uint32_t stored;
    std::memcpy(&stored, buf.data() + body, sizeof(stored));
    const std::uint32_t actual =
        crc32(reinterpret_cast<const unsigned char*>(buf.data()), body);
    if (stored != actual) throw Error("ChecksumMismatch", path);

    std::size_t pos = 4;
    const auto version = take<std::uint32_t>(buf, pos);
    if (version != kCacheVersion) {
        throw Error("VersionMismatch", "cache version " + std::to_string(version));
    }
    BeatSet set;
    set.source = static_cast<Source>(take<std::uint8_t>(buf, pos));
    const auto count = take<std::uint64_t>(buf, pos);
    const auto length = take<std::uint64_t>(buf, pos);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto label_len = take<std::uint16_t>(buf, pos);
        if (pos + label_len > body) throw Error("ChecksumMismatch", "truncated cache");
        std::string label = buf.substr(pos, label_len);
        pos += label_len;
        Beat beat(length);
        for (auto& v : beat) v = take<double>(buf, pos);
        set.push_back(std::move(beat), std::move(label));
    }
    return set;
}

} // namespace ecgsyn
