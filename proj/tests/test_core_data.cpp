#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "io.hpp"
#include "parallel.hpp"
#include "preprocess.hpp"
#include "record.hpp"
#include "rng.hpp"
#include "synth.hpp"

using namespace tsc;

namespace {

std::filesystem::path temp_file(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "tsc_core_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

Record make_record(int channels, int length, uint64_t seed) {
    Record rec;
    rec.id = "r" + std::to_string(seed);
    rec.channels = channels;
    rec.length = length;
    rec.sampling_rate = 100.0;
    rec.label = Label::Normal;
    rec.samples.resize(size_t(channels) * length);
    Rng rng(seed);
    for (double& s : rec.samples) s = rng.normal();
    return rec;
}

Dataset make_dataset(int count, int channels, int length, uint64_t seed) {
    Dataset ds;
    for (int i = 0; i < count; ++i) ds.records.push_back(make_record(channels, length, seed + i));
    return ds;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("rng reproduces and streams diverge") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c(42, 0), d(42, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += c.next_u64() == d.next_u64();
    CHECK(same == 0);
}

TEST_CASE("rng split leaves the parent untouched") {
    Rng a(7), b(7);
    (void)a.split(3);
    for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng c(7);
    Rng s1 = c.split(3);
    Rng s2 = Rng(7).split(3);
    for (int i = 0; i < 16; ++i) CHECK(s1.next_u64() == s2.next_u64());
}

TEST_CASE("rng distributions stay in range") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform(-2.0, 3.0);
        CHECK(u >= -2.0);
        CHECK(u < 3.0);
    }
    std::set<int64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        int64_t v = rng.below(5);
        CHECK(v >= 0);
        CHECK(v < 5);
        seen.insert(v);
    }
    CHECK(seen.size() == 5);
    for (int i = 0; i < 100; ++i) CHECK(std::isfinite(rng.normal()));
}

TEST_CASE("pairwise sum matches direct summation") {
    std::vector<double> values = {1.0, 2.0, 3.0, 4.0};
    CHECK(pairwise_sum(values) == 10.0);
    CHECK(pairwise_mean(values) == 2.5);
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);

    Rng rng(9);
    std::vector<double> big(1003);
    for (double& v : big) v = rng.normal();
    double direct = 0.0;
    for (double v : big) direct += v;
    CHECK(pairwise_sum(big) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("parallel_for is schedule independent") {
    std::vector<double> out1(200), out3(200);
    set_thread_count(1);
    parallel_for(200, [&](int64_t i) { out1[size_t(i)] = std::sin(double(i)); });
    set_thread_count(3);
    parallel_for(200, [&](int64_t i) { out3[size_t(i)] = std::sin(double(i)); });
    set_thread_count(0);
    CHECK(out1 == out3);

    parallel_for(0, [&](int64_t) { CHECK(false); });
    CHECK_THROWS(parallel_for(4, [](int64_t i) {
        if (i == 2) throw std::runtime_error("boom");
    }));
}

TEST_CASE("record validation rejects malformed shapes") {
    Record rec = make_record(2, 16, 4);
    CHECK_NOTHROW(rec.validate());

    Record bad = rec;
    bad.length = 1;
    bad.samples.resize(2);
    CHECK_THROWS(bad.validate());

    bad = rec;
    bad.sampling_rate = 0.0;
    CHECK_THROWS(bad.validate());

    bad = rec;
    bad.samples[3] = std::nan("");
    CHECK_THROWS(bad.validate());

    bad = rec;
    bad.samples.pop_back();
    CHECK_THROWS(bad.validate());
}

TEST_CASE("dataset validation requires uniform shapes") {
    Dataset ds = make_dataset(3, 2, 16, 1);
    CHECK_NOTHROW(ds.validate());
    CHECK(ds.count() == 3);
    CHECK(ds.channels() == 2);
    CHECK(ds.length() == 16);

    ds.records.push_back(make_record(2, 17, 9));
    CHECK_THROWS(ds.validate());

    Dataset empty;
    CHECK_THROWS(empty.validate());
}

TEST_CASE("labels round trip through text") {
    CHECK(std::string(to_string(Label::Normal)) == "Normal");
    CHECK(std::string(to_string(Label::Anomaly)) == "Anomaly");
    CHECK(label_from_string("Normal") == Label::Normal);
    CHECK(label_from_string("Anomaly") == Label::Anomaly);
    CHECK(label_from_string("Unknown") == Label::Unknown);
    CHECK_THROWS(label_from_string("bogus"));
}

TEST_CASE("doubles format to shortest round-trip text") {
    for (double v : {0.1, -0.1, 1.0 / 3.0, 1e-17, 12345.678901234567, 0.0, -2.5e300}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK_THROWS(parse_double("1.2.3"));
    CHECK_THROWS(parse_double(""));
    CHECK(parse_int("42") == 42);
    CHECK_THROWS(parse_int("4.2"));
}

TEST_CASE("csv io preserves samples exactly") {
    Dataset ds = make_dataset(4, 3, 20, 11);
    ds.records[1].label = Label::Anomaly;
    ds.records[2].id = "weird_id-7";
    auto path = temp_file("round.csv");
    save_dataset(ds, path, Format::Csv);
    Dataset back = load_dataset(path, Format::Csv);

    REQUIRE(back.count() == ds.count());
    CHECK(back.sampling_rate() == ds.sampling_rate());
    for (int i = 0; i < ds.count(); ++i) {
        CHECK(back.records[size_t(i)].id == ds.records[size_t(i)].id);
        CHECK(back.records[size_t(i)].label == ds.records[size_t(i)].label);
        CHECK(back.records[size_t(i)].samples == ds.records[size_t(i)].samples);
    }
}

TEST_CASE("raw io quantizes to float but keeps labels") {
    Dataset ds = make_dataset(3, 2, 32, 5);
    ds.records[0].label = Label::Anomaly;
    auto path = temp_file("round.tsc");
    save_dataset(ds, path, Format::RawF32);
    Dataset back = load_dataset(path, Format::RawF32);

    REQUIRE(back.count() == 3);
    CHECK(back.records[0].label == Label::Anomaly);
    CHECK(back.records[1].label == Label::Normal);
    CHECK(back.records[0].id == "rec0");
    for (int i = 0; i < 3; ++i)
        for (size_t j = 0; j < ds.records[size_t(i)].samples.size(); ++j)
            CHECK(back.records[size_t(i)].samples[j] ==
                  double(float(ds.records[size_t(i)].samples[j])));
}

TEST_CASE("format detection keys on the extension") {
    CHECK(detect_format("a/b.csv") == Format::Csv);
    CHECK(detect_format("a/b.tsc") == Format::RawF32);
    CHECK(detect_format("noext") == Format::RawF32);
    CHECK(format_from_string("csv") == Format::Csv);
    CHECK(format_from_string("raw") == Format::RawF32);
    CHECK_THROWS(format_from_string("yaml"));
}

TEST_CASE("corrupt files fail loudly") {
    auto path = temp_file("corrupt.tsc");
    write_file_atomic(path, "TSC9garbage");
    CHECK_THROWS(load_dataset(path, Format::RawF32));

    auto csv = temp_file("corrupt.csv");
    write_file_atomic(csv, "2,16,100\nrec0,Normal\n1,2,3\n");
    CHECK_THROWS(load_dataset(csv, Format::Csv));

    CHECK_THROWS(load_dataset(temp_file("missing.tsc"), Format::RawF32));
}

TEST_CASE("resample length follows the endpoint-preserving rule") {
    CHECK(resample_length(1000, 100.0, 100.0) == 1000);
    CHECK(resample_length(1000, 100.0, 50.0) == 501);
    CHECK(resample_length(1000, 500.0, 100.0) == 201);
    CHECK(resample_length(500, 100.0, 200.0) == 999);
}

TEST_CASE("resampling a ramp is exact") {
    Record rec;
    rec.id = "ramp";
    rec.channels = 1;
    rec.length = 101;
    rec.sampling_rate = 100.0;
    rec.samples.resize(101);
    for (int i = 0; i < 101; ++i) rec.samples[size_t(i)] = 0.25 * i;

    Record out = resample(rec, 50.0);
    CHECK(out.length == 51);
    CHECK(out.sampling_rate == 50.0);
    CHECK(out.samples.front() == rec.samples.front());
    CHECK(out.samples.back() == doctest::Approx(rec.samples.back()).epsilon(1e-12));
    for (int i = 0; i < out.length; ++i)
        CHECK(out.samples[size_t(i)] == doctest::Approx(0.5 * i).epsilon(1e-12));
}

TEST_CASE("standardize gives zero mean and unit variance per channel") {
    Dataset ds = make_dataset(6, 2, 50, 21);
    for (auto& rec : ds.records)
        for (int i = 0; i < rec.length; ++i) rec.at(1, i) = rec.at(1, i) * 3.0 + 5.0;

    auto [out, stats] = standardize(ds);
    REQUIRE(stats.mean.size() == 2);
    CHECK(stats.mean[1] == doctest::Approx(5.0).epsilon(0.5));

    for (int c = 0; c < 2; ++c) {
        double sum = 0.0, sq = 0.0;
        int64_t n = 0;
        for (const auto& rec : out.records)
            for (int i = 0; i < rec.length; ++i) {
                sum += rec.at(c, i);
                sq += rec.at(c, i) * rec.at(c, i);
                ++n;
            }
        CHECK(sum / double(n) == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(sq / double(n) == doctest::Approx(1.0).epsilon(1e-10));
    }

    Dataset back = unstandardize(out, stats);
    for (int i = 0; i < ds.count(); ++i)
        for (size_t j = 0; j < ds.records[size_t(i)].samples.size(); ++j)
            CHECK(back.records[size_t(i)].samples[j] ==
                  doctest::Approx(ds.records[size_t(i)].samples[j]).epsilon(1e-12));

    Dataset redo = standardize_with(ds, stats);
    CHECK(redo.records[0].samples == out.records[0].samples);
}

TEST_CASE("standardize rejects a flat channel") {
    Dataset ds = make_dataset(2, 1, 10, 3);
    for (auto& rec : ds.records)
        for (double& s : rec.samples) s = 4.0;
    CHECK_THROWS(standardize(ds));
}

TEST_CASE("crop and tile offsets") {
    Record rec = make_record(2, 20, 8);
    Record c = crop(rec, 5, 8);
    CHECK(c.length == 8);
    CHECK(c.at(1, 0) == rec.at(1, 5));
    CHECK(c.at(0, 7) == rec.at(0, 12));
    CHECK_THROWS(crop(rec, 15, 8));

    auto offs = tile_offsets(1000, 256, 4);
    REQUIRE(offs.size() == 4);
    CHECK(offs.front() == 0);
    CHECK(offs.back() == 744);
    CHECK(tile_offsets(10, 10, 1) == std::vector<int>{0});
    CHECK_THROWS(tile_offsets(1000, 10, 2));

    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        Record rc = random_crop(rec, 8, rng);
        CHECK(rc.length == 8);
    }
}

TEST_CASE("noise scales with per-channel variance and reproduces") {
    Dataset ds = make_dataset(8, 2, 400, 31);
    Dataset a = add_noise(ds, 0.2, 99);
    Dataset b = add_noise(ds, 0.2, 99);
    Dataset c = add_noise(ds, 0.2, 100);
    CHECK(a.records[3].samples == b.records[3].samples);
    CHECK(a.records[3].samples != c.records[3].samples);

    double signal_var = 0.0, noise_var = 0.0;
    int64_t n = 0;
    for (int i = 0; i < ds.count(); ++i)
        for (size_t j = 0; j < ds.records[size_t(i)].samples.size(); ++j) {
            double s = ds.records[size_t(i)].samples[j];
            double d = a.records[size_t(i)].samples[j] - s;
            signal_var += s * s;
            noise_var += d * d;
            ++n;
        }
    CHECK(noise_var / signal_var == doctest::Approx(0.2).epsilon(0.15));

    Record same = add_noise(ds.records[0], NoiseSpec{0.0, 7});
    CHECK(same.samples == ds.records[0].samples);
}

TEST_CASE("synthetic generation is deterministic and labeled") {
    SyntheticConfig cfg;
    cfg.count = 24;
    cfg.channels = 3;
    cfg.length = 600;
    cfg.anomaly_fraction = 0.25;
    cfg.seed = 17;

    Dataset a = generate_synthetic(cfg);
    Dataset b = generate_synthetic(cfg);
    REQUIRE(a.count() == 24);
    CHECK(a.channels() == 3);
    CHECK(a.length() == 600);
    CHECK(a.sampling_rate() == 100.0);
    CHECK_NOTHROW(a.validate());

    int anomalies = 0;
    for (int i = 0; i < a.count(); ++i) {
        CHECK(a.records[size_t(i)].samples == b.records[size_t(i)].samples);
        anomalies += a.records[size_t(i)].label == Label::Anomaly;
    }
    CHECK(anomalies == 6);

    cfg.seed = 18;
    Dataset c = generate_synthetic(cfg);
    CHECK(a.records[0].samples != c.records[0].samples);
}

}  // TEST_SUITE
