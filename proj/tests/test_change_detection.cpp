#include <doctest.h>

#include <cmath>

#include "benchprio/change_detection.hpp"
#include "benchprio/rng.hpp"

using namespace benchprio;

namespace {

MeasurementSet constant_set(double value, std::size_t trials = 2, std::size_t iters = 3,
                            std::size_t invocations = 4) {
    MeasurementSet::Trials t(trials,
                             std::vector<std::vector<double>>(
                                     iters, std::vector<double>(invocations, value)));
    return MeasurementSet(std::move(t));
}

MeasurementSet noisy_set(Rng& rng, double mean, double sd, std::size_t trials,
                         std::size_t iters, std::size_t invocations) {
    MeasurementSet::Trials t;
    for (std::size_t a = 0; a < trials; ++a) {
        std::vector<std::vector<double>> iterations;
        for (std::size_t b = 0; b < iters; ++b) {
            std::vector<double> samples;
            for (std::size_t c = 0; c < invocations; ++c)
                samples.push_back(std::max(1e-6, mean + sd * rng.normal()));
            iterations.push_back(std::move(samples));
        }
        t.push_back(std::move(iterations));
    }
    return MeasurementSet(std::move(t));
}

MeasurementSet scaled(const MeasurementSet& in, double factor) {
    auto trials = in.trials();
    for (auto& t : trials)
        for (auto& i : t)
            for (auto& v : i) v *= factor;
    return MeasurementSet(std::move(trials));
}

}  // namespace

TEST_CASE("measurement set validation") {
    using Trials = MeasurementSet::Trials;
    CHECK_THROWS_AS(MeasurementSet(Trials{}), DegenerateInput);
    CHECK_THROWS_AS(MeasurementSet(Trials{{}}), DegenerateInput);
    CHECK_THROWS_AS(MeasurementSet(Trials{{{}}}), DegenerateInput);
    CHECK_THROWS_AS(MeasurementSet(Trials{{{1.0, -2.0}}}), DegenerateInput);
    CHECK_THROWS_AS(MeasurementSet(Trials{{{0.0}}}), DegenerateInput);
    CHECK_NOTHROW(MeasurementSet(Trials{{{1.0}}}));
}

TEST_CASE("identical data puts 1 inside the interval") {
    Rng rng(41);
    const auto data = noisy_set(rng, 100.0, 5.0, 3, 5, 10);
    const auto [low, high] = bootstrap_ratio_ci(data, data, {.iterations = 500, .seed = 9});
    CHECK(low <= 1.0);
    CHECK(high >= 1.0);
}

TEST_CASE("constant data collapses the interval exactly") {
    const auto old_v = constant_set(50.0);
    const auto new_v = constant_set(100.0);
    const auto [low, high] = bootstrap_ratio_ci(old_v, new_v, {.iterations = 200, .seed = 1});
    CHECK(low == 2.0);
    CHECK(high == 2.0);

    const auto result = change_size({low, high});
    CHECK(result.significant);
    CHECK(result.change_percent == doctest::Approx(100.0));
}

TEST_CASE("doubling every sample brackets ratio 2 tightly") {
    Rng rng(42);
    const auto old_v = noisy_set(rng, 100.0, 0.0, 2, 3, 5);  // sd 0: constant 100
    const auto new_v = scaled(old_v, 2.0);
    const auto [low, high] = bootstrap_ratio_ci(old_v, new_v, {.iterations = 300, .seed = 2});
    CHECK(std::abs(low - 2.0) < 1e-9);
    CHECK(std::abs(high - 2.0) < 1e-9);
}

TEST_CASE("scale equivariance") {
    Rng rng(43);
    const auto old_v = noisy_set(rng, 80.0, 4.0, 2, 4, 6);
    const auto new_v = noisy_set(rng, 90.0, 4.0, 2, 4, 6);
    const BootstrapOptions opts{.iterations = 400, .seed = 77};
    const auto base = bootstrap_ratio_ci(old_v, new_v, opts);

    // powers of two scale exactly
    const auto doubled = bootstrap_ratio_ci(scaled(old_v, 2.0), scaled(new_v, 2.0), opts);
    CHECK(doubled.first == base.first);
    CHECK(doubled.second == base.second);

    const auto odd = bootstrap_ratio_ci(scaled(old_v, 3.7), scaled(new_v, 3.7), opts);
    CHECK(odd.first == doctest::Approx(base.first).epsilon(1e-12));
    CHECK(odd.second == doctest::Approx(base.second).epsilon(1e-12));
}

TEST_CASE("fixed seed reproduces the interval, endpoints never cross") {
    Rng rng(44);
    const auto old_v = noisy_set(rng, 100.0, 10.0, 3, 4, 5);
    const auto new_v = noisy_set(rng, 104.0, 10.0, 3, 4, 5);
    const BootstrapOptions opts{.iterations = 600, .seed = 123};
    const auto a = bootstrap_ratio_ci(old_v, new_v, opts);
    const auto b = bootstrap_ratio_ci(old_v, new_v, opts);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    CHECK(a.first <= a.second);
}

TEST_CASE("change_size endpoint rules") {
    SUBCASE("interval containing 1 is no change") {
        const auto r = change_size({0.98, 1.03});
        CHECK_FALSE(r.significant);
        CHECK(r.change_percent == 0.0);
    }
    SUBCASE("regression uses the low endpoint") {
        const auto r = change_size({1.10, 1.25});
        CHECK(r.significant);
        CHECK(r.change_percent == doctest::Approx(10.0).epsilon(1e-12));
    }
    SUBCASE("improvement uses the high endpoint") {
        const auto r = change_size({0.80, 0.95});
        CHECK(r.significant);
        CHECK(r.change_percent == doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("crossed endpoints rejected") {
        CHECK_THROWS(change_size({1.2, 1.1}));
    }
    SUBCASE("change 0 iff not significant") {
        Rng rng(45);
        for (int i = 0; i < 200; ++i) {
            const double a = 0.8 + 0.4 * rng.next_double();
            const double b = a + 0.3 * rng.next_double();
            const auto r = change_size({a, b});
            CHECK((r.change_percent == 0.0) == !r.significant);
        }
    }
}

TEST_CASE("bootstrap covers a true null ratio at roughly nominal rate") {
    // scaled-down twin of the acceptance calibration
    std::size_t covered = 0;
    const std::size_t reps = 40;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(1000 + rep);
        const auto old_v = noisy_set(rng, 100.0, 5.0, 3, 10, 10);
        const auto new_v = noisy_set(rng, 100.0, 5.0, 3, 10, 10);
        const auto [low, high] =
                bootstrap_ratio_ci(old_v, new_v, {.iterations = 400, .seed = 2000 + rep});
        if (low <= 1.0 && 1.0 <= high) ++covered;
    }
    CHECK(covered >= 36);  // 90% of 40 at 99% nominal
}

TEST_CASE("measurements json round-trips") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "benchprio-meas-test.json";

    Rng rng(46);
    std::vector<MeasurementFile> files;
    files.push_back({BenchmarkId{"pkg.B.run", {{"size", "10"}}},
                     noisy_set(rng, 50.0, 2.0, 2, 3, 4)});
    files.push_back({BenchmarkId{"pkg.B.other", {}}, constant_set(7.0)});
    save_measurements(files, path);

    const auto loaded = load_measurements(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].benchmark == BenchmarkId{"pkg.B.run", {{"size", "10"}}});
    CHECK(loaded[0].measurements.trials() == files[0].measurements.trials());
    CHECK(loaded[1].measurements.trials() == files[1].measurements.trials());
    std::filesystem::remove(path);
}
