#include <doctest.h>

#include <cmath>
#include <vector>

#include "fpca.hpp"
#include "rng.hpp"

using namespace tsc;

namespace {

Record random_record(int channels, int length, uint64_t seed) {
    Record rec;
    rec.id = "f" + std::to_string(seed);
    rec.channels = channels;
    rec.length = length;
    rec.sampling_rate = 100.0;
    rec.samples.resize(size_t(channels) * length);
    Rng rng(seed);
    for (double& s : rec.samples) s = rng.normal();
    return rec;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST_SUITE("fpca") {

TEST_CASE("jacobi solves a two by two by hand") {
    std::vector<double> eigenvalues, v;
    jacobi_eigen({2.0, 1.0, 1.0, 2.0}, 2, eigenvalues, v);
    REQUIRE(eigenvalues.size() == 2);

    double lo = std::min(eigenvalues[0], eigenvalues[1]);
    double hi = std::max(eigenvalues[0], eigenvalues[1]);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(3.0).epsilon(1e-12));

    for (int j = 0; j < 2; ++j) {
        std::vector<double> col = {v[size_t(j)], v[size_t(2 + j)]};
        CHECK(dot(col, col) == doctest::Approx(1.0).epsilon(1e-12));
        double a0 = 2.0 * col[0] + 1.0 * col[1];
        CHECK(a0 == doctest::Approx(eigenvalues[size_t(j)] * col[0]).epsilon(1e-10));
    }
}

TEST_CASE("jacobi handles an already diagonal matrix") {
    std::vector<double> eigenvalues, v;
    jacobi_eigen({5.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, -1.0}, 3, eigenvalues, v);
    std::vector<double> sorted = eigenvalues;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted[0] == doctest::Approx(-1.0));
    CHECK(sorted[1] == doctest::Approx(2.0));
    CHECK(sorted[2] == doctest::Approx(5.0));
}

TEST_CASE("basis is orthonormal with ordered eigenvalues") {
    Dataset ds;
    for (int i = 0; i < 20; ++i) ds.records.push_back(random_record(2, 30, 100 + i));
    FpcaBasis basis = fpca_fit(ds, 8);

    REQUIRE(basis.k() == 8);
    CHECK(basis.dim() == 60);
    REQUIRE(basis.mean_curve.size() == 60);
    for (int a = 0; a < 8; ++a) {
        CHECK(basis.eigenvalues[size_t(a)] >= -1e-12);
        if (a > 0) CHECK(basis.eigenvalues[size_t(a)] <= basis.eigenvalues[size_t(a) - 1] + 1e-12);
        for (int b = 0; b <= a; ++b) {
            double want = a == b ? 1.0 : 0.0;
            CHECK(dot(basis.components[size_t(a)], basis.components[size_t(b)]) ==
                  doctest::Approx(want).epsilon(1e-9));
        }
    }

    std::vector<double> mean(60, 0.0);
    for (const auto& rec : ds.records)
        for (size_t j = 0; j < 60; ++j) mean[j] += rec.samples[j] / 20.0;
    for (size_t j = 0; j < 60; ++j)
        CHECK(basis.mean_curve[j] == doctest::Approx(mean[j]).epsilon(1e-10));
}

TEST_CASE("gram path components are covariance eigenvectors") {
    Dataset ds;
    for (int i = 0; i < 3; ++i) ds.records.push_back(random_record(1, 8, 7 + i));
    FpcaBasis basis = fpca_fit(ds, 2);

    std::vector<double> mean(8, 0.0);
    for (const auto& rec : ds.records)
        for (size_t j = 0; j < 8; ++j) mean[j] += rec.samples[j] / 3.0;
    std::vector<double> cov(64, 0.0);
    for (const auto& rec : ds.records)
        for (size_t a = 0; a < 8; ++a)
            for (size_t b = 0; b < 8; ++b)
                cov[a * 8 + b] +=
                    (rec.samples[a] - mean[a]) * (rec.samples[b] - mean[b]) / 3.0;

    for (int k = 0; k < 2; ++k) {
        const auto& comp = basis.components[size_t(k)];
        double lambda = basis.eigenvalues[size_t(k)];
        CHECK(lambda > 1e-8);
        for (size_t a = 0; a < 8; ++a) {
            double cv = 0.0;
            for (size_t b = 0; b < 8; ++b) cv += cov[a * 8 + b] * comp[b];
            CHECK(cv == doctest::Approx(lambda * comp[a]).epsilon(1e-8));
        }
    }
}

TEST_CASE("reconstruction error shrinks with more components") {
    Dataset ds;
    for (int i = 0; i < 10; ++i) ds.records.push_back(random_record(1, 24, 200 + i));
    FpcaBasis basis = fpca_fit(ds, 10);

    double prev = 1e300;
    for (int k = 0; k <= 10; ++k) {
        auto [err, rec] = fpca_reconstruct(basis, ds.records[4], k);
        CHECK(err <= prev + 1e-12);
        CHECK(rec.length == 24);
        prev = err;
    }
    auto [full_err, full] = fpca_reconstruct(basis, ds.records[4], 10);
    CHECK(full_err < 1e-18);

    auto [scores, recon] = fpca_project_reconstruct(basis, ds.records[4]);
    REQUIRE(scores.size() == 10);
    for (size_t j = 0; j < full.samples.size(); ++j)
        CHECK(recon.samples[j] == doctest::Approx(full.samples[j]).epsilon(1e-12));
}

TEST_CASE("identical records leave only the mean") {
    Dataset ds;
    Record rec = random_record(1, 12, 42);
    for (int i = 0; i < 5; ++i) ds.records.push_back(rec);
    FpcaBasis basis = fpca_fit(ds, 3);

    for (double ev : basis.eigenvalues) CHECK(std::abs(ev) < 1e-12);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b <= a; ++b)
            CHECK(dot(basis.components[size_t(a)], basis.components[size_t(b)]) ==
                  doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-9));

    auto [err, back] = fpca_reconstruct(basis, rec, 0);
    CHECK(err < 1e-20);
}

TEST_CASE("component count is limited by records and grid") {
    Dataset ds;
    for (int i = 0; i < 4; ++i) ds.records.push_back(random_record(1, 6, 300 + i));
    CHECK_THROWS(fpca_fit(ds, 7));
    CHECK_THROWS(fpca_fit(ds, 0));
    FpcaBasis basis = fpca_fit(ds, 4);
    CHECK(basis.k() == 4);
    auto [err, back] = fpca_reconstruct(basis, ds.records[1], 4);
    CHECK(err < 1e-18);
}

TEST_CASE("basis dumps as a dataset") {
    Dataset ds;
    for (int i = 0; i < 6; ++i) ds.records.push_back(random_record(2, 10, 400 + i));
    FpcaBasis basis = fpca_fit(ds, 3);
    Dataset dump = basis_as_dataset(basis);
    CHECK(dump.count() == 4);
    CHECK(dump.channels() == 2);
    CHECK(dump.length() == 10);
    CHECK(dump.records[0].samples == basis.mean_curve);
    CHECK(dump.records[1].samples == basis.components[0]);
}

}  // TEST_SUITE
