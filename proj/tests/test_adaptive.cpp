#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hlest/adaptive.hpp"
#include "hlest/experiments.hpp"

using namespace hlest;
using std::numbers::pi;

TEST_CASE("shot count")
{
    const double c = default_confidence();
    CHECK(c == doctest::Approx(0.021862332971949255));
    CHECK(shot_count(30, delta_schedule(c, 0, 4)) == 140);  // oracle value
    CHECK(shot_count(1, std::exp(-9.0)) == 81);
    CHECK(shot_count(30, 0.01) >= shot_count(30, 0.02));
    CHECK(shot_count(60, 0.01) >= shot_count(30, 0.01));
    CHECK(shot_count(30, 0.01, 4.0) < shot_count(30, 0.01));
    CHECK_THROWS_AS(shot_count(30, 1.5), std::invalid_argument);
}

TEST_CASE("coordinate median")
{
    CHECK(coordinate_median({{0.1875, -0.0625}}) == std::vector<double>{0.1875, -0.0625});
    CHECK(coordinate_median({{-0.0625}, {-0.0625}, {0.1875}}) == std::vector<double>{-0.0625});
    CHECK(coordinate_median({{-0.0625}, {0.1875}}) == std::vector<double>{-0.0625});
    CHECK(coordinate_median({{0.4375, 0.1}, {-0.4375, 0.3}, {0.0625, 0.2}}) == std::vector<double>{0.0625, 0.2});
    CHECK_THROWS_AS(coordinate_median({}), std::invalid_argument);
}

TEST_CASE("update step")
{
    CHECK(update_step(0, 0.25, 0) == doctest::Approx(pi / 4));
    CHECK(update_step(0.9, 0.5, 0) == 1.0);
    CHECK(update_step(-0.9, -0.5, 0) == -1.0);

    // Contraction: |O - u| <= 2^-q and |median - g_eff| <= 1/(2 pi) give |O - u'| <= 2^-(q+1).
    for (int q = 0; q <= 6; ++q) {
        for (double o : {-1.0, -0.7, 0.0, 0.33, 1.0}) {
            for (double off : {-1.0, -0.5, 0.0, 0.8, 1.0}) {
                const double u = std::clamp(o + off * std::ldexp(1.0, -q), -1.0, 1.0);
                const double geff = std::ldexp(o - u, q) / pi;
                for (double err : {-1.0, 0.0, 1.0}) {
                    const double med = std::clamp(geff + err / (2 * pi), -0.5, 0.5);
                    CHECK(std::abs(o - update_step(u, med, q)) <= std::ldexp(1.0, -q - 1) + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("run_adaptive basics")
{
    AdaptiveConfig cfg;
    cfg.M = 3;
    cfg.eps = std::ldexp(1.0, -6);
    cfg.g_true = {0.2, -0.7, 0.95};
    cfg.seed = 3;
    const auto r = run_adaptive(cfg);
    REQUIRE(r.ledger.size() == 7);
    std::uint64_t sum = 0;
    for (const auto& rec : r.ledger) {
        CHECK(rec.shots == shot_count(3, rec.delta_q));
        CHECK(rec.queries_this_round == static_cast<std::uint64_t>(rec.shots) * per_shot_queries(cfg, rec.q, false));
        for (double m : rec.medians) CHECK(std::abs(m) <= 0.5);
        for (double u : rec.u_after) CHECK(std::abs(u) <= 1.0);
        sum += rec.queries_this_round;
    }
    CHECK(sum == r.total_queries);
    if (r.all_rounds_succeeded)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(r.estimates[j] - cfg.g_true[j]) <= std::ldexp(1.0, -7) + 1e-12);

    const auto r2 = run_adaptive(cfg);
    CHECK(r2.estimates == r.estimates);
    CHECK(r2.total_queries == r.total_queries);

    cfg.c = 1.0;
    CHECK_THROWS_AS(run_adaptive(cfg), std::invalid_argument);
}

TEST_CASE("zero gradient success frequency")
{
    AdaptiveConfig cfg;
    cfg.M = 4;
    cfg.eps = std::ldexp(1.0, -4);
    cfg.g_true.assign(4, 0.0);
    int good = 0;
    const int runs = 300;
    for (int i = 0; i < runs; ++i) {
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        const auto r = run_adaptive(cfg);
        bool ok = true;
        for (double u : r.estimates) ok = ok && std::abs(u) <= cfg.eps;
        good += ok;
    }
    CHECK(good / double(runs) >= 1 - 8 * cfg.c / 7);
}

TEST_CASE("failed-round error bound under heavy corruption")
{
    AdaptiveConfig cfg;
    cfg.M = 2;
    cfg.eps = std::ldexp(1.0, -5);
    cfg.g_true = {0.6, -0.2};
    cfg.model = HamiltonianSim{1e-5, 1e-3};
    cfg.shot_constant = 0.3;  // few shots so that rounds fail
    int failures = 0;
    for (int i = 0; i < 400; ++i) {
        cfg.seed = static_cast<std::uint64_t>(i);
        const auto r = run_adaptive(cfg);
        if (r.first_failed_round >= 0) {
            ++failures;
            for (int j = 0; j < 2; ++j)
                CHECK(std::abs(r.estimates[j] - cfg.g_true[j]) <= (1 + pi) / std::ldexp(1.0, r.first_failed_round) + 1e-12);
        }
    }
    CHECK(failures > 0);
}

TEST_CASE("grover model routes")
{
    AdaptiveConfig cfg;
    cfg.M = 2;
    cfg.eps = std::ldexp(1.0, -5);
    cfg.g_true = {0.3, -0.6};
    cfg.model = GroverRepetition{};
    const auto r = run_adaptive(cfg);
    const int from = static_cast<int>(std::ceil(grover_threshold(2, 1).q_star));
    for (const auto& rec : r.ledger) {
        CHECK(rec.route == (rec.q >= from ? "grover-exact" : "hs"));
        CHECK(rec.queries_this_round == static_cast<std::uint64_t>(rec.shots) * per_shot_queries(cfg, rec.q, rec.q >= from));
    }
    for (int j = 0; j < 2; ++j) CHECK(std::abs(r.estimates[j] - cfg.g_true[j]) <= cfg.eps);

    cfg.allow_fallback = false;
    CHECK_THROWS_AS(run_adaptive(cfg), std::invalid_argument);
}

TEST_CASE("mse harness")
{
    AdaptiveConfig cfg;
    cfg.M = 3;
    cfg.eps = std::ldexp(1.0, -4);
    cfg.g_true = random_g_set(3, 7, 0);
    const auto a = mse_harness(cfg, 200);
    const auto b = mse_harness(cfg, 200);
    CHECK(a.per_observable_mse == b.per_observable_mse);
    CHECK(a.max_mse <= cfg.eps * cfg.eps);
    CHECK_THROWS_AS(mse_harness(cfg, 50), std::invalid_argument);

    // Halving eps lowers the MSE and roughly doubles the queries.
    AdaptiveConfig fine = cfg;
    fine.eps /= 2;
    const auto f = mse_harness(fine, 200);
    CHECK(f.max_mse < a.max_mse);
    CHECK(f.mean_total_queries / a.mean_total_queries == doctest::Approx(2.0).epsilon(0.25));
}
