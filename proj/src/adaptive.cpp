#include "hlest/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "hlest/rng.hpp"

namespace hlest {

namespace {
constexpr double kPi = std::numbers::pi;

struct RoundPlan {
    std::string route;
    std::uint64_t shot_cost = 0;
};
}  // namespace

void AdaptiveConfig::validate() const
{
    if (M < 1) throw std::invalid_argument("AdaptiveConfig: M must be positive");
    if (log2_d < 0) throw std::invalid_argument("AdaptiveConfig: d must be a power of 2");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("AdaptiveConfig: eps must be in (0, 1)");
    if (!(c > 0 && c <= default_confidence() * (1 + 1e-12)))
        throw std::invalid_argument("AdaptiveConfig: c must be in (0, 3/(8(1+pi)^2)]");
    if (g_true.size() != static_cast<std::size_t>(M)) throw std::invalid_argument("AdaptiveConfig: g_true must have M entries");
    for (double g : g_true)
        if (std::abs(g) > 1) throw std::invalid_argument("AdaptiveConfig: |g_true| must be <= 1");
    if (!(shot_constant > 0)) throw std::invalid_argument("AdaptiveConfig: shot constant must be positive");
}

int shot_count(int M, double delta_q, double constant)
{
    if (!(delta_q > 0 && delta_q < 1)) throw std::invalid_argument("shot_count: delta must be in (0, 1)");
    return static_cast<int>(std::ceil(constant * std::log(M / delta_q) - 1e-9));
}

std::vector<double> coordinate_median(const std::vector<Outcome>& samples)
{
    if (samples.empty()) throw std::invalid_argument("coordinate_median: empty sample list");
    const std::size_t M = samples.front().size();
    std::vector<double> med(M), col(samples.size());
    const std::size_t mid = (samples.size() - 1) / 2;
    for (std::size_t j = 0; j < M; ++j) {
        for (std::size_t s = 0; s < samples.size(); ++s) col[s] = samples[s].at(j);
        std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(mid), col.end());
        med[j] = col[mid];
    }
    return med;
}

double update_step(double u_q, double median_g, int q)
{
    return std::clamp(u_q + kPi * std::ldexp(median_g, -q), -1.0, 1.0);
}

std::uint64_t per_shot_queries(const AdaptiveConfig& config, int q, bool grover_route)
{
    if (grover_route) {
        const auto& gm = std::get<GroverRepetition>(config.model);
        return grover_shot_queries(config.M, config.log2_d, q, config.p, gm.deltap);
    }
    return 2ULL * static_cast<std::uint64_t>(hamiltonian_sim_Q(hs_evolution_time(config.M, config.log2_d, q)));
}

RunResult run_adaptive(const AdaptiveConfig& config)
{
    config.validate();
    const int qm = q_max_for(config.eps);
    const std::size_t M = static_cast<std::size_t>(config.M);

    int grover_from = 0;
    if (const auto* gm = std::get_if<GroverRepetition>(&config.model)) {
        grover_from = std::max(0, static_cast<int>(std::ceil(
            grover_threshold(config.M, config.log2_d, config.p, gm->deltap).q_star)));
        if (grover_from > 0 && !config.allow_fallback)
            throw std::invalid_argument("run_adaptive: Grover threshold not met at q = 0 and fallback is disabled");
    }

    RunResult res;
    std::vector<double> u(M, 0.0);
    for (int q = 0; q <= qm; ++q) {
        IterationRecord rec;
        rec.q = q;
        rec.delta_q = delta_schedule(config.c, q, qm);
        rec.shots = shot_count(config.M, rec.delta_q, config.shot_constant);
        rec.u_before = u;

        ProbingSpec spec{config.p, q, u, config.g_true};
        const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(q));
        std::vector<Outcome> samples;
        bool grover_route = false;
        if (std::holds_alternative<Ideal>(config.model)) {
            rec.route = "ideal";
            samples = ideal_sampler(spec, rec.shots, seed);
        } else if (const auto* gm = std::get_if<GroverRepetition>(&config.model); gm && q >= grover_from) {
            grover_route = true;
            if (static_cast<std::size_t>(config.p) * M + 1 <= 24) {
                rec.route = "grover-exact";
                const auto gs = grover_state(spec, *gm, config.log2_d);
                const auto probs = fourier_outcome_probabilities(sign_correction(gs.state));
                samples = sample_outcomes(probs, config.p, M, rec.shots, seed);
            } else {
                rec.route = "grover-bound";
                samples = corrupted_sampler(spec, rec.shots, 1.0 / 12.0, seed);
            }
        } else {
            rec.route = "hs";
            const HamiltonianSim hs = std::holds_alternative<HamiltonianSim>(config.model)
                                          ? std::get<HamiltonianSim>(config.model)
                                          : HamiltonianSim{};
            samples = corrupted_sampler(spec, rec.shots, hs_error_budget(hs.eps2, hs.deltap), seed);
        }

        rec.medians = coordinate_median(samples);
        const auto geff = effective_gradients(spec);
        for (std::size_t j = 0; j < M; ++j) {
            if (std::abs(rec.medians[j] - geff[j]) > 1.0 / (2.0 * kPi)) rec.succeeded = false;
            u[j] = update_step(u[j], rec.medians[j], q);
        }
        rec.u_after = u;
        rec.queries_this_round = static_cast<std::uint64_t>(rec.shots) * per_shot_queries(config, q, grover_route);
        res.total_queries += rec.queries_this_round;
        if (!rec.succeeded && res.all_rounds_succeeded) {
            res.all_rounds_succeeded = false;
            res.first_failed_round = q;
        }
        res.ledger.push_back(std::move(rec));
    }
    res.estimates = u;
    return res;
}

MseReport mse_harness(const AdaptiveConfig& config, int n_runs)
{
    if (n_runs < 100) throw std::invalid_argument("mse_harness: n_runs must be >= 100");
    config.validate();
    const std::size_t M = static_cast<std::size_t>(config.M);
    std::vector<std::vector<double>> sq(static_cast<std::size_t>(n_runs), std::vector<double>(M));
    std::vector<double> queries(static_cast<std::size_t>(n_runs));
    std::vector<char> ok(static_cast<std::size_t>(n_runs));

    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16u));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < static_cast<std::size_t>(n_runs); r += workers) {
                    AdaptiveConfig cfg = config;
                    cfg.seed = derive_seed(config.seed, r);
                    const RunResult rr = run_adaptive(cfg);
                    for (std::size_t j = 0; j < M; ++j) {
                        const double e = rr.estimates[j] - config.g_true[j];
                        sq[r][j] = e * e;
                    }
                    queries[r] = static_cast<double>(rr.total_queries);
                    ok[r] = rr.all_rounds_succeeded;
                }
            });
        }
    }

    MseReport rep;
    rep.per_observable_mse.assign(M, 0.0);
    rep.ci95.assign(M, 0.0);
    const double n = n_runs;
    for (std::size_t j = 0; j < M; ++j) {
        double s = 0, s2 = 0;
        for (const auto& row : sq) {
            s += row[j];
            s2 += row[j] * row[j];
        }
        const double mean = s / n;
        const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1));
        rep.per_observable_mse[j] = mean;
        rep.ci95[j] = 1.96 * std::sqrt(var / n);
    }
    const auto it = std::max_element(rep.per_observable_mse.begin(), rep.per_observable_mse.end());
    rep.max_mse = *it;
    rep.argmax = static_cast<std::size_t>(it - rep.per_observable_mse.begin());
    double qsum = 0;
    for (double qv : queries) qsum += qv;
    rep.mean_total_queries = qsum / n;
    for (char o : ok) rep.success_rate += o ? 1.0 / n : 0.0;
    return rep;
}

}  // namespace hlest
