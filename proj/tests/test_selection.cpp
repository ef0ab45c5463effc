#include "doctest.h"
#include <stdexcept>
#include <string>
#include "dst/selection.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dst/rng.hpp"
#include "stream_util.hpp"

using namespace dst;

namespace {

// Brute-force oracle: full sort by (delta desc, index asc), take k.
std::vector<size_t> topk_oracle(const std::vector<double>& delta, size_t k) {
    std::vector<size_t> order(delta.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return delta[a] > delta[b] || (delta[a] == delta[b] && a < b);
    });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

SiloPartition single_silo(size_t n) {
    SiloPartition p;
    p.scheme = SiloScheme::none;
    p.total = n;
    p.silos.push_back({"ALL", {{0, n}}, n});
    return p;
}

}  // namespace

TEST_CASE("topk_exact matches the examples") {
    CHECK(topk_exact(std::vector<double>{0.9, 0.1, 0.5, 0.3}, 2) ==
          std::vector<size_t>{0, 2});
    CHECK(topk_exact(std::vector<double>{0.9, 0.1, 0.5, 0.3}, 0).empty());
    CHECK(topk_exact(std::vector<double>{0.5, 0.5, 0.1}, 1) == std::vector<size_t>{0});
    CHECK_THROWS(topk_exact(std::vector<double>{1.0}, 2));
}

TEST_CASE("topk_exact equals the sort oracle, ties included") {
    Xoshiro256 rng(101);
    for (int rep = 0; rep < 300; ++rep) {
        const size_t n = 1 + rng.below(200);
        std::vector<double> delta(n);
        // quantized values force plenty of ties
        for (auto& d : delta) d = static_cast<double>(rng.below(8)) / 4.0;
        const size_t k = rng.below(n + 1);
        CHECK(topk_exact(delta, k) == topk_oracle(delta, k));
    }
}

TEST_CASE("count_above uses strict inequality") {
    const std::vector<double> delta = {1, 2, 3, 4};
    CHECK(count_above(delta, 2.5) == doctest::Approx(0.5));
    CHECK(count_above(delta, 0.5) == doctest::Approx(1.0));
    CHECK(count_above(delta, 4.0) == 0.0);
    CHECK_THROWS(count_above({}, 1.0));
}

TEST_CASE("refine_threshold hand trace") {
    // bounds [1.5, 6]; probes 3 -> hi, 2.25 -> lo, 2.625 -> lo;
    // |c(2.625)-eps| = 0.25 vs |c(3)-eps| = 0 -> returns 3
    const std::vector<double> delta = {1, 2, 3, 4};
    CHECK(refine_threshold(3.0, delta, 0.25, 3, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("refine_threshold validates arguments") {
    const std::vector<double> delta = {1, 2};
    CHECK_THROWS(refine_threshold(0.0, delta, 0.5, 3, 2.0));
    CHECK_THROWS(refine_threshold(-1.0, delta, 0.5, 3, 2.0));
    CHECK_THROWS(refine_threshold(1.0, delta, 1.0, 3, 2.0));
    CHECK_THROWS(refine_threshold(1.0, delta, 0.5, 0, 2.0));
    CHECK_THROWS(refine_threshold(1.0, delta, 0.5, 3, 1.0));
}

TEST_CASE("refine_threshold on constant vectors realizes 0 or 1") {
    const std::vector<double> delta(64, 2.0);
    const double q = refine_threshold(1.7, delta, 0.25, 3, 2.0);
    const double realized = count_above(delta, q);
    CHECK((realized == 0.0 || realized == 1.0));
}

TEST_CASE("refining an already exact threshold does not lose accuracy") {
    Xoshiro256 rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        const size_t n = 1000;
        std::vector<double> delta(n);
        for (auto& d : delta) d = std::exp(rng.normal());
        const double eps = 0.1;
        // exact quantile oracle: boundary between top-k and the rest
        std::vector<double> sorted = delta;
        std::sort(sorted.begin(), sorted.end(), std::greater<double>());
        const double q_exact = sorted[100];  // count_above == eps exactly
        REQUIRE(count_above(delta, q_exact) == doctest::Approx(eps));

        const double q = refine_threshold(q_exact, delta, eps, 3, 2.0);
        const double err = std::abs(count_above(delta, q) - eps);
        const double err_start = std::abs(count_above(delta, q_exact) - eps);
        CHECK(err <= err_start + 1e-12);
    }
}

TEST_CASE("select exact mode fills every silo budget") {
    const std::vector<double> delta = {0.4, 0.1, 0.3, 0.05};
    const auto result =
        select(delta, single_silo(4), 0.5, {SelectionMode::Kind::exact_topk}, {});
    CHECK(result.indices == std::vector<size_t>{0, 2});
    CHECK(result.silos[0].budget == 2);
    CHECK(result.silos[0].selected == 2);
}

TEST_CASE("select with epsilon 1 takes everything") {
    std::vector<double> delta(10, 0.0);
    const auto result =
        select(delta, single_silo(10), 1.0, {SelectionMode::Kind::exact_topk}, {});
    CHECK(result.indices.size() == 10);
}

TEST_CASE("two silos get exactly their budgets") {
    SiloPartition p;
    p.scheme = SiloScheme::per_module;
    p.total = 1000;
    p.silos.push_back({"small", {{0, 100}}, 100});
    p.silos.push_back({"large", {{100, 1000}}, 900});
    Xoshiro256 rng(5);
    std::vector<double> delta(1000);
    for (auto& d : delta) d = rng.uniform();
    const auto result = select(delta, p, 0.1, {SelectionMode::Kind::exact_topk}, {});
    size_t in_small = 0;
    for (size_t i : result.indices) in_small += i < 100 ? 1 : 0;
    CHECK(in_small == 10);
    CHECK(result.indices.size() - in_small == 90);
}

TEST_CASE("exact selection equals whole-sort selection per silo") {
    Xoshiro256 rng(303);
    for (int rep = 0; rep < 100; ++rep) {
        const size_t n = 50 + rng.below(500);
        std::vector<double> delta(n);
        for (auto& d : delta) d = static_cast<double>(rng.below(64));
        const double eps = 0.01 + 0.5 * rng.uniform();
        const auto result =
            select(delta, single_silo(n), eps, {SelectionMode::Kind::exact_topk}, {});
        CHECK(result.indices == topk_oracle(delta, silo_budget(n, eps)));
    }
}

TEST_CASE("iterative bootstrap realizes the budget on distinct values") {
    Xoshiro256 rng(41);
    std::vector<double> delta(5000);
    for (auto& d : delta) d = std::exp(rng.normal());
    SelectionMode mode{SelectionMode::Kind::iterative, 3, 2.0};
    const auto result = select(delta, single_silo(delta.size()), 0.01, mode, {});
    CHECK(result.indices.size() == 50);
    CHECK(result.state.initialized("ALL"));
    CHECK(result.state.get("ALL") > 0.0);
}

TEST_CASE("iterative mode tracks a drifting stream within 1 percent") {
    const size_t n = 20000;
    const double eps = 0.01;
    testutil::DriftStream stream(n, 9);
    SelectionMode mode{SelectionMode::Kind::iterative, 3, 2.0};
    const auto partition = single_silo(n);

    ThresholdState state;
    auto boot = select(stream.delta, partition, eps, mode, state);
    state = boot.state;
    double err_sum = 0.0;
    int count = 0;
    for (int step = 1; step <= 120; ++step) {
        stream.step();
        auto sel = select(stream.delta, partition, eps, mode, state);
        state = sel.state;
        const double realized =
            static_cast<double>(sel.indices.size()) / static_cast<double>(n);
        if (step >= 20) {
            err_sum += std::abs(realized - eps) / eps;
            ++count;
        }
    }
    CHECK(err_sum / count < 0.01);
}

TEST_CASE("selection is deterministic") {
    Xoshiro256 rng(59);
    std::vector<double> delta(777);
    for (auto& d : delta) d = rng.uniform();
    SelectionMode mode{SelectionMode::Kind::iterative, 3, 2.0};
    ThresholdState state;
    state.set("ALL", 0.9);
    const auto a = select(delta, single_silo(777), 0.05, mode, state);
    const auto b = select(delta, single_silo(777), 0.05, mode, state);
    CHECK(a.indices == b.indices);
    CHECK(a.state.thresholds() == b.state.thresholds());
}

TEST_CASE("iterative mode refuses epsilon >= 1") {
    std::vector<double> delta(4, 1.0);
    SelectionMode mode{SelectionMode::Kind::iterative, 3, 2.0};
    CHECK_THROWS(select(delta, single_silo(4), 1.0, mode, {}));
}

TEST_CASE("threshold state enforces positivity") {
    ThresholdState state;
    CHECK_THROWS(state.set("x", 0.0));
    CHECK_THROWS(state.set("x", -1.0));
    CHECK_THROWS(state.get("missing"));
    state.set("x", 2.5);
    CHECK(state.initialized("x"));
    CHECK(state.get("x") == 2.5);
}
