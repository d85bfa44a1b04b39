#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "benchprio/ingest.hpp"
#include "benchprio/objectives.hpp"
#include "benchprio/rng.hpp"
#include "helpers.hpp"

using namespace benchprio;
using testing::bid;
using testing::make_coverage;
using testing::make_ranking;

namespace {

// Independent oracle: literal double-loop evaluation of the cumulative-share
// formula, no memoization.
double aptec_oracle(const std::vector<double>& elements) {
    const double m_total = std::accumulate(elements.begin(), elements.end(), 0.0);
    if (m_total == 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t b = 1; b <= elements.size(); ++b) {
        double prefix = 0.0;
        for (std::size_t i = 0; i < b; ++i) prefix += elements[i];
        sum += prefix / m_total;
    }
    return sum / static_cast<double>(elements.size());
}

ObjectiveContext simple_context(std::vector<double> cov, std::vector<double> ovl,
                                std::vector<double> hist) {
    std::vector<BenchmarkId> ids;
    for (std::size_t i = 0; i < cov.size(); ++i) ids.push_back(bid("b" + std::to_string(i)));
    return ObjectiveContext(std::move(ids), std::move(cov), std::move(ovl), std::move(hist),
                            Mode::nca);
}

}  // namespace

TEST_CASE("aptec matches frozen hand values") {
    CHECK(aptec(std::vector<double>{4, 2, 2}) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(aptec(std::vector<double>{5, 5, 5}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(aptec(std::vector<double>{0, 0, 0}) == 0.0);
    // closed form (n+1)/(2n) for equal elements, several n
    for (std::size_t n = 1; n <= 9; ++n) {
        std::vector<double> equal(n, 3.0);
        CHECK(aptec(equal) ==
              doctest::Approx((double)(n + 1) / (2.0 * (double)n)).epsilon(1e-12));
    }
}

TEST_CASE("aptec equals the direct double-loop oracle") {
    Rng rng(5);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 1 + rng.bounded(12);
        std::vector<double> elements(n);
        for (auto& e : elements) e = rng.bounded(4) == 0 ? 0.0 : 10.0 * rng.next_double();
        CHECK(aptec(elements) == doctest::Approx(aptec_oracle(elements)).epsilon(1e-12));
    }
}

TEST_CASE("aptec stays in [0,1] and is maximal for descending order") {
    Rng rng(6);
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 2 + rng.bounded(6);  // n <= 7
        std::vector<double> elements(n);
        for (auto& e : elements) e = 10.0 * rng.next_double();

        std::vector<double> descending = elements;
        std::sort(descending.begin(), descending.end(), std::greater<>());
        const double best = aptec(descending);

        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end());
        do {
            std::vector<double> arranged(n);
            for (std::size_t i = 0; i < n; ++i) arranged[i] = elements[perm[i]];
            const double value = aptec(arranged);
            CHECK(value >= 0.0);
            CHECK(value <= 1.0);
            CHECK(value <= best + 1e-12);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("monotone exchange: promoting the larger element helps") {
    Rng rng(8);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 2 + rng.bounded(10);
        std::vector<double> elements(n);
        for (auto& e : elements) e = 10.0 * rng.next_double();
        const std::size_t i = rng.bounded(n - 1);
        if (elements[i] >= elements[i + 1]) std::swap(elements[i], elements[i + 1]);
        // now elements[i] < elements[i+1] almost surely
        if (elements[i] == elements[i + 1]) continue;
        const double before = aptec(elements);
        std::swap(elements[i], elements[i + 1]);
        CHECK(aptec(elements) > before);
    }
}

TEST_CASE("build_context element values") {
    SUBCASE("identical coverage gives overlap 1") {
        auto cov = make_coverage({{"b1", {"m1", "m2"}}, {"b2", {"m1", "m2"}}});
        const auto ctx = build_context(cov, ChangeHistory{}, nullptr, Mode::nca);
        CHECK(ctx.elem_overlap()[0] == 1.0);
        CHECK(ctx.elem_overlap()[1] == 1.0);
    }
    SUBCASE("disjoint coverage gives overlap 0") {
        auto cov = make_coverage({{"b1", {"m1"}}, {"b2", {"m2"}}});
        const auto ctx = build_context(cov, ChangeHistory{}, nullptr, Mode::nca);
        CHECK(ctx.elem_overlap()[0] == 0.0);
        CHECK(ctx.elem_overlap()[1] == 0.0);
    }
    SUBCASE("hand-enumerated jaccard means") {
        auto cov = make_coverage(
                {{"b1", {"m1", "m2"}}, {"b2", {"m2", "m3"}}, {"b3", {"m3"}}});
        const auto ctx = build_context(cov, ChangeHistory{}, nullptr, Mode::nca);
        // J(b1,b2)=1/3, J(b1,b3)=0, J(b2,b3)=1/2
        CHECK(ctx.elem_overlap()[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
        CHECK(ctx.elem_overlap()[1] == doctest::Approx((1.0 / 3 + 0.5) / 2).epsilon(1e-12));
        CHECK(ctx.elem_overlap()[2] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(ctx.elem_coverage()[0] == 2.0);
        CHECK(ctx.elem_coverage()[2] == 1.0);
    }
    SUBCASE("history aggregation mean and median") {
        auto cov = make_coverage({{"b1", {"m"}}, {"b2", {"m"}}});
        ChangeHistory hist;
        hist.add(bid("b1"), "v1", 1.0);
        hist.add(bid("b1"), "v2", 2.0);
        hist.add(bid("b1"), "v3", 9.0);
        const auto mean_ctx = build_context(cov, hist, nullptr, Mode::nca);
        CHECK(mean_ctx.elem_hist()[0] == doctest::Approx(4.0));
        CHECK(mean_ctx.elem_hist()[1] == 0.0);  // missing history contributes 0
        const auto median_ctx = build_context(cov, hist, nullptr, Mode::nca,
                                              {.hist_agg = HistAgg::median});
        CHECK(median_ctx.elem_hist()[0] == 2.0);
    }
    SUBCASE("both-empty pair has overlap 0") {
        auto cov = make_coverage({{"b1", {}}, {"b2", {}}});
        const auto ctx = build_context(cov, ChangeHistory{}, nullptr, Mode::nca);
        CHECK(ctx.elem_overlap()[0] == 0.0);
    }
    SUBCASE("cac filters through the diff") {
        auto cov = make_coverage({{"b1", {"m1", "m2"}}, {"b2", {"m2", "m3"}}});
        DiffSet diff{{"m2"}};
        const auto ctx = build_context(cov, ChangeHistory{}, &diff, Mode::cac);
        CHECK(ctx.elem_coverage()[0] == 1.0);
        CHECK(ctx.elem_coverage()[1] == 1.0);
        CHECK(ctx.elem_overlap()[0] == 1.0);  // filtered sets are identical {m2}
    }
    SUBCASE("cac and car demand a diff") {
        auto cov = make_coverage({{"b1", {"m1"}}, {"b2", {"m2"}}});
        CHECK_THROWS_AS(build_context(cov, ChangeHistory{}, nullptr, Mode::cac), MissingDiff);
        CHECK_THROWS_AS(build_context(cov, ChangeHistory{}, nullptr, Mode::car), MissingDiff);
    }
}

TEST_CASE("cac with the full universe reproduces nca") {
    Rng rng(10);
    auto cov = testing::random_coverage(rng, 15, 10);
    ChangeHistory hist;
    hist.add(bid("b3"), "v1", 2.0);
    DiffSet diff{cov.universe()};

    const auto nca_ctx = build_context(cov, hist, nullptr, Mode::nca);
    const auto cac_ctx = build_context(cov, hist, &diff, Mode::cac);
    for (std::size_t i = 0; i < nca_ctx.size(); ++i) {
        CHECK(nca_ctx.elem_coverage()[i] == cac_ctx.elem_coverage()[i]);
        CHECK(nca_ctx.elem_overlap()[i] == cac_ctx.elem_overlap()[i]);
        CHECK(nca_ctx.elem_hist()[i] == cac_ctx.elem_hist()[i]);
    }
}

TEST_CASE("containment overlap is the asymmetric alternative") {
    auto cov = make_coverage({{"b1", {"m1"}}, {"b2", {"m1", "m2", "m3"}}});
    const auto ctx = build_context(cov, ChangeHistory{}, nullptr, Mode::nca,
                                   {.overlap = OverlapMeasure::containment});
    CHECK(ctx.elem_overlap()[0] == 1.0);                              // {m1} fully inside b2
    CHECK(ctx.elem_overlap()[1] == doctest::Approx(1.0 / 3.0));       // one of three shared
}

TEST_CASE("evaluate scores rankings through the context") {
    // one benchmark holds all coverage
    auto cov = make_coverage({{"b1", {"m1", "m2", "m3"}}, {"b2", {}}, {"b3", {}}});
    const auto ctx = build_context(cov, ChangeHistory{}, nullptr, Mode::nca);

    const auto first = evaluate(make_ranking({"b1", "b2", "b3"}), ctx);
    CHECK(first.coverage() == doctest::Approx(1.0).epsilon(1e-12));
    const auto last = evaluate(make_ranking({"b2", "b3", "b1"}), ctx);
    CHECK(last.coverage() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    SUBCASE("permutation mismatch throws") {
        CHECK_THROWS_AS(evaluate(make_ranking({"b1", "b2"}), ctx), PermutationMismatch);
        CHECK_THROWS_AS(evaluate(make_ranking({"b1", "b2", "bX"}), ctx), PermutationMismatch);
        CHECK_THROWS_AS(evaluate(make_ranking({"b1", "b2", "b1"}), ctx), PermutationMismatch);
    }
}

TEST_CASE("equal element values make order irrelevant") {
    auto cov = make_coverage({{"b1", {"m1"}}, {"b2", {"m2"}}, {"b3", {"m3"}}});
    ChangeHistory hist;
    for (const char* b : {"b1", "b2", "b3"}) hist.add(bid(b), "v1", 4.0);
    const auto ctx = build_context(cov, hist, nullptr, Mode::nca);

    const auto a = evaluate(make_ranking({"b1", "b2", "b3"}), ctx);
    const auto b = evaluate(make_ranking({"b3", "b1", "b2"}), ctx);
    CHECK(a == b);
}

TEST_CASE("evaluate is pure") {
    Rng rng(21);
    auto cov = testing::random_coverage(rng, 10, 8);
    const auto ctx = build_context(cov, ChangeHistory{}, nullptr, Mode::nca);
    std::vector<std::int32_t> genes(10);
    std::iota(genes.begin(), genes.end(), 0);
    rng.shuffle(genes);
    const auto a = evaluate_genes(genes, ctx);
    const auto b = evaluate_genes(genes, ctx);
    CHECK(a == b);
}

TEST_CASE("evaluate_genes agrees with aptec on gathered elements") {
    Rng rng(22);
    for (int round = 0; round < 30; ++round) {
        const std::size_t n = 2 + rng.bounded(10);
        std::vector<double> c(n), o(n), h(n);
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = 5.0 * rng.next_double();
            o[i] = rng.next_double();
            h[i] = 3.0 * rng.next_double();
        }
        const auto ctx = simple_context(c, o, h);
        auto genes = rng.permutation(static_cast<std::int32_t>(n));
        std::vector<double> rc(n), ro(n), rh(n);
        for (std::size_t i = 0; i < n; ++i) {
            rc[i] = c[static_cast<std::size_t>(genes[i])];
            ro[i] = o[static_cast<std::size_t>(genes[i])];
            rh[i] = h[static_cast<std::size_t>(genes[i])];
        }
        const auto v = evaluate_genes(genes, ctx);
        CHECK(v.coverage() == doctest::Approx(aptec(rc)).epsilon(1e-12));
        CHECK(v.overlap() == doctest::Approx(aptec(ro)).epsilon(1e-12));
        CHECK(v.hist_change() == doctest::Approx(aptec(rh)).epsilon(1e-12));
    }
}
