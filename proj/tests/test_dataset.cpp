#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ecgsyn/dataset.hpp"
#include "synthetic.hpp"

using namespace ecgsyn;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (fs::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("load_beats parses valid rows") {
    TempFile f("ecgsyn_load_ok.csv");
    {
        std::ofstream out(f.path);
        out << "N,0.1,0.2,0.3\nV,1,2,3\nN,-1,-2,-3\n";
    }
    const BeatSet set = load_beats(f.path, 3);
    CHECK(set.count() == 3);
    CHECK(set.beat_length() == 3);
    CHECK(set.labels[1] == "V");
    CHECK(set.beats[2][2] == doctest::Approx(-3.0));
    CHECK(set.source == Source::Real);
}

TEST_CASE("load_beats rejects NaN rows") {
    TempFile f("ecgsyn_load_nan.csv");
    {
        std::ofstream out(f.path);
        out << "N,0.1,NaN,0.3\n";
    }
    CHECK_THROWS_WITH_AS(load_beats(f.path, 3), doctest::Contains("MalformedRow"), Error);
}

TEST_CASE("load_beats reports length mismatch and missing file") {
    TempFile f("ecgsyn_load_len.csv");
    {
        std::ofstream out(f.path);
        out << "N,1,2\n";
    }
    CHECK_THROWS_WITH_AS(load_beats(f.path, 3), doctest::Contains("LengthMismatch"), Error);
    CHECK_THROWS_WITH_AS(load_beats("/nonexistent/beats.csv", 3),
                         doctest::Contains("FileNotFound"), Error);
}

TEST_CASE("filter_class keeps matching beats in order") {
    BeatSet set;
    set.push_back({1.0, 2.0}, "N");
    set.push_back({3.0, 4.0}, "N");
    set.push_back({5.0, 6.0}, "V");
    CHECK(filter_class(set, "N").count() == 2);
    CHECK(filter_class(set, "N").beats[1][0] == 3.0);
    CHECK(filter_class(set, "F").count() == 0);

    // partition property: class counts sum to the total
    std::size_t total = 0;
    for (const auto& label : {"N", "V", "F"}) total += filter_class(set, label).count();
    CHECK(total == set.count());
}

TEST_CASE("resample_beat maps a constant beat exactly") {
    const Beat in(280, 0.5);
    const Beat out = resample_beat(in, 256);
    REQUIRE(out.size() == 256);
    for (double v : out) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("resample_beat tracks a whole-cycle sinusoid") {
    Beat in(280);
    for (std::size_t i = 0; i < in.size(); ++i) {
        in[i] = std::sin(2.0 * M_PI * 5.0 * static_cast<double>(i) / 280.0);
    }
    const Beat out = resample_beat(in, 256);
    REQUIRE(out.size() == 256);

    Beat target(256);
    for (std::size_t i = 0; i < target.size(); ++i) {
        target[i] = std::sin(2.0 * M_PI * 5.0 * static_cast<double>(i) / 256.0);
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < 256; ++i) {
        dot += out[i] * target[i];
        na += out[i] * out[i];
        nb += target[i] * target[i];
    }
    CHECK(dot / std::sqrt(na * nb) >= 0.999);
}

TEST_CASE("resample_beat validates target length and preserves the mean of a constant") {
    CHECK_THROWS_WITH_AS(resample_beat(Beat(10, 1.0), 1),
                         doctest::Contains("InvalidTargetLength"), Error);
    const Beat up = resample_beat(Beat(16, -0.25), 40);
    for (double v : up) CHECK(v == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("normalize_beat maps min/max onto [-1, 1]") {
    const Beat out = normalize_beat({-5.0, 0.0, 5.0});
    CHECK(out[0] == doctest::Approx(-1.0));
    CHECK(out[1] == doctest::Approx(0.0));
    CHECK(out[2] == doctest::Approx(1.0));

    const Beat two = normalize_beat({0.0, 10.0});
    CHECK(two[0] == doctest::Approx(-1.0));
    CHECK(two[1] == doctest::Approx(1.0));
}

TEST_CASE("normalize_beat is idempotent on normalized beats") {
    ecgsyn::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Beat b = synthetic::ecg_like_beat(64, rng);
        const Beat again = normalize_beat(b);
        for (std::size_t i = 0; i < b.size(); ++i) {
            CHECK(std::abs(again[i] - b[i]) < 1e-12);
        }
    }
}

TEST_CASE("normalize_beat constant case maps to zeros with a flag") {
    bool constant = false;
    const Beat out = normalize_beat(Beat(5, 3.0), &constant);
    CHECK(constant);
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("sample_subset is deterministic and draws without replacement") {
    const BeatSet set = synthetic::ecg_like_set(50, 32, 5);
    const BeatSet a = sample_subset(set, 10, 42);
    const BeatSet b = sample_subset(set, 10, 42);
    REQUIRE(a.count() == 10);
    CHECK(a.beats == b.beats);

    // full draw is a permutation
    const BeatSet all = sample_subset(set, set.count(), 7);
    auto sorted_a = all.beats;
    auto sorted_b = set.beats;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    CHECK(sorted_a == sorted_b);

    CHECK_THROWS_WITH_AS(sample_subset(set, 51, 0), doctest::Contains("SampleTooLarge"),
                         Error);
}

TEST_CASE("split is disjoint, exhaustive, and deterministic") {
    const BeatSet set = synthetic::ecg_like_set(10, 32, 9);
    auto [train, test] = split(set, 0.2, 3);
    CHECK(train.count() == 8);
    CHECK(test.count() == 2);

    auto [train2, test2] = split(set, 0.2, 3);
    CHECK(train.beats == train2.beats);
    CHECK(test.beats == test2.beats);

    auto combined = train.beats;
    combined.insert(combined.end(), test.beats.begin(), test.beats.end());
    auto sorted_all = set.beats;
    std::sort(combined.begin(), combined.end());
    std::sort(sorted_all.begin(), sorted_all.end());
    CHECK(combined == sorted_all);

    CHECK_THROWS_WITH_AS(split(set, 0.01, 0), doctest::Contains("DegenerateSplit"), Error);
}

TEST_CASE("beat CSV and binary cache round-trip") {
    const BeatSet set = synthetic::ecg_like_set(7, 24, 21, "L");
    TempFile csv("ecgsyn_rt.csv");
    save_beats(set, csv.path);
    const BeatSet back = load_beats(csv.path, 24);
    CHECK(back.count() == set.count());
    for (std::size_t i = 0; i < set.count(); ++i) {
        for (std::size_t j = 0; j < 24; ++j) {
            CHECK(back.beats[i][j] == set.beats[i][j]); // full precision round-trip
        }
    }

    TempFile bin("ecgsyn_rt.bin");
    save_cache(set, bin.path);
    const BeatSet cached = load_cache(bin.path);
    CHECK(cached.beats == set.beats);
    CHECK(cached.labels == set.labels);

    // truncation must be detected
    {
        std::ifstream in(bin.path, std::ios::binary);
        std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        std::ofstream out(bin.path, std::ios::binary);
        out.write(data.data(), static_cast<std::streamsize>(data.size() - 5));
    }
    CHECK_THROWS_WITH_AS(load_cache(bin.path), doctest::Contains("ChecksumMismatch"),
                         Error);
}

TEST_CASE("manifest counts classes") {
    BeatSet set;
    set.push_back({0.0, 1.0}, "N");
    set.push_back({0.0, 1.0}, "N");
    set.push_back({0.0, 1.0}, "L");
    const DatasetManifest m = make_manifest(set, "x", 123);
    CHECK(m.classes_present.at("N") == 2);
    CHECK(m.classes_present.at("L") == 1);
    CHECK(m.total() == set.count());
    CHECK(m.seed == 123);
}
