#include "hlest/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hlest/baseline.hpp"
#include "hlest/block_encoding.hpp"
#include "hlest/rng.hpp"

namespace hlest {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"adaptive", "baseline", "resources", "threshold",
                                            "micro",    "fig4",     "fig5",      "fig6"};

std::string num(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

int line_of(const std::string& text, std::size_t pos)
{
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(pos, text.size())), '\n'));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16u));
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
}

double effective_c(const ExperimentConfig& cfg, double fallback)
{
    return cfg.c > 0 ? cfg.c : fallback;
}

}  // namespace

ConfigError::ConfigError(int line_, const std::string& msg)
    : std::runtime_error("config line " + std::to_string(line_) + ": " + msg), line(line_)
{
}

int ExperimentConfig::log2_d() const
{
    return std::countr_zero(d);
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) fail("unknown command: " + command);
    if (M < 1) fail("M must be positive");
    if (d < 1 || !std::has_single_bit(d)) fail("d must be a power of 2");
    if (!(eps > 0 && eps < 1)) fail("eps must be in (0, 1)");
    for (double e : eps_add)
        if (!(e > 0)) fail("eps_add must be positive");
    for (double dl : delta)
        if (!(dl > 0 && dl <= 1)) fail("delta must be in (0, 1]");
    if (c < 0) fail("c must be positive");
    if (runs < 1) fail("runs must be positive");
    if (model != "ideal" && model != "hs" && model != "grover") fail("model must be ideal, hs or grover");
    if (overhead < 1) fail("overhead must be positive");
    if (g_sets < 1) fail("g_sets must be positive");
    if (n_mc < 1) fail("n_mc must be positive");
    if (a < 0) fail("a must be nonnegative");
}

std::string ExperimentConfig::to_json() const
{
    json j;
    j["command"] = command;
    j["M"] = M;
    j["d"] = d;
    j["eps"] = eps;
    j["eps_add"] = eps_add;
    j["delta"] = delta;
    j["c"] = c;
    j["runs"] = runs;
    j["seed"] = seed;
    j["model"] = model;
    j["out"] = out;
    j["overhead"] = overhead;
    j["g_sets"] = g_sets;
    j["n_mc"] = n_mc;
    j["a"] = a;
    return j.dump();
}

void apply_config_json(const std::string& text, ExperimentConfig& cfg)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!j.is_object()) throw ConfigError(1, "top level must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        const int line = line_of(text, text.find("\"" + key + "\""));
        try {
            auto list = [&](std::vector<double>& dst) {
                dst = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
            };
            if (key == "command") cfg.command = value.get<std::string>();
            else if (key == "M") cfg.M = value.get<int>();
            else if (key == "d") cfg.d = value.get<std::uint64_t>();
            else if (key == "eps") cfg.eps = value.get<double>();
            else if (key == "eps_add") list(cfg.eps_add);
            else if (key == "delta") list(cfg.delta);
            else if (key == "c") cfg.c = value.get<double>();
            else if (key == "runs") cfg.runs = value.get<int>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "model") cfg.model = value.get<std::string>();
            else if (key == "out") cfg.out = value.get<std::string>();
            else if (key == "overhead") cfg.overhead = value.get<int>();
            else if (key == "g_sets") cfg.g_sets = value.get<int>();
            else if (key == "n_mc") cfg.n_mc = value.get<int>();
            else if (key == "a") cfg.a = value.get<int>();
            else throw ConfigError(line, "unknown key \"" + key + "\"");
        } catch (const json::exception& e) {
            throw ConfigError(line, "bad value for \"" + key + "\": " + e.what());
        }
    }
}

std::vector<double> default_eps_add_grid()
{
    std::vector<double> g;
    for (int a = -3; a <= 13; ++a) g.push_back(std::ldexp(1.0, -a));
    return g;
}

std::vector<double> default_delta_grid()
{
    std::vector<double> g;
    for (int j = 0; j <= 12; ++j) g.push_back(std::ldexp(1.0, -j));
    return g;
}

std::vector<double> random_g_set(int M, std::uint64_t seed, std::uint64_t set_index)
{
    Rng rng(derive_seed(seed, set_index));
    std::vector<double> g(static_cast<std::size_t>(M));
    for (auto& v : g) v = 2.0 * uniform01(rng) - 1.0;
    return g;
}

ProbingModel model_from_name(const std::string& name)
{
    if (name == "ideal") return Ideal{};
    if (name == "hs") return HamiltonianSim{};
    if (name == "grover") return GroverRepetition{};
    throw std::invalid_argument("unknown model: " + name);
}

std::string provenance_header(const ExperimentConfig& cfg)
{
    return "# " + std::string(kVersion) + " command=" + cfg.command + " seed=" + std::to_string(cfg.seed) +
           "\n# config=" + cfg.to_json() + "\n";
}

std::vector<Fig4Row> run_fig4(const ExperimentConfig& cfg)
{
    const auto grid = cfg.eps_add.empty() ? default_eps_add_grid() : cfg.eps_add;
    std::vector<Fig4Row> rows;
    for (double e : grid)
        rows.push_back({e, qubit_counts(cfg.M, cfg.log2_d(), cfg.a, QubitMethod::HS),
                        qubit_counts(cfg.M, cfg.log2_d(), cfg.a, QubitMethod::BaselineApprox, e)});
    return rows;
}

std::vector<Fig5Row> run_fig5(const ExperimentConfig& cfg, bool include_adaptive)
{
    const auto eps_grid = cfg.eps_add.empty() ? default_eps_add_grid() : cfg.eps_add;
    const auto delta_grid = cfg.delta.empty() ? default_delta_grid() : cfg.delta;
    const double cb = effective_c(cfg, 2.0);
    const std::size_t ns = static_cast<std::size_t>(cfg.g_sets);

    std::vector<std::vector<double>> gsets;
    for (std::size_t s = 0; s < ns; ++s) gsets.push_back(random_g_set(cfg.M, cfg.seed, s));

    // Marginals depend on (eps_add, g-set) only; delta enters through the median.
    std::vector<OutcomeDistribution> marg(eps_grid.size() * ns);
    parallel_for(marg.size(), [&](std::size_t task) {
        const std::size_t ie = task / ns, is = task % ns;
        const auto bp = baseline_params(cfg.M, eps_grid[ie], 1.0, cb);
        marg[task] = marginal_distribution(gsets[is], bp, cfg.n_mc, derive_seed(cfg.seed, 1'000'000 + task));
    });

    std::vector<Fig5Row> rows;
    for (std::size_t ie = 0; ie < eps_grid.size(); ++ie) {
        for (double dl : delta_grid) {
            const auto bp = baseline_params(cfg.M, eps_grid[ie], dl, cb);
            const auto q = baseline_queries(bp, cfg.overhead);
            double worst = 0, sum = 0;
            for (std::size_t is = 0; is < ns; ++is) {
                const double mse = baseline_mse(marg[ie * ns + is], gsets[is][0], bp);
                worst = std::max(worst, mse);
                sum += mse;
            }
            rows.push_back({"baseline", eps_grid[ie], dl, bp.N_med, static_cast<double>(q.T_NonIter), q.T_tilde,
                            std::sqrt(worst), std::sqrt(sum / static_cast<double>(ns))});
        }
    }
    if (include_adaptive) {
        const double ca = effective_c(cfg, default_confidence());
        for (int k = 2; k <= 13; ++k) {
            const double e = std::ldexp(1.0, -k);
            const auto led = adaptive_queries(cfg.M, cfg.log2_d(), e, ca, cfg.a);
            rows.push_back({"adaptive", e, ca, 0, led.t_adapt, led.t_adapt, e, e});
        }
    }
    return rows;
}

std::vector<Fig6Row> run_fig6(const ExperimentConfig&)
{
    std::vector<Fig6Row> rows;
    const int p = 3;
    for (int k = 1; k <= 10; ++k) {
        const double N = std::ldexp(1.0, k);
        for (int e = 2; e <= 4; ++e) {
            const double M = std::pow(N, e);
            rows.push_back({N, "N^" + std::to_string(e), M,
                            grover_threshold(M, static_cast<int>(N), p, kDeltaGrover).q_star});
        }
    }
    for (int N = 1; N <= 64; ++N) {
        const double M = std::ldexp(1.0, N);
        rows.push_back({static_cast<double>(N), "2^N", M, grover_threshold(M, N, p, kDeltaGrover).q_star});
    }
    for (double e : {1e-2, 1e-4, 1e-6}) rows.push_back({0, "qmax", e, static_cast<double>(q_max_for(e))});
    return rows;
}

std::string fig4_csv(const ExperimentConfig& cfg)
{
    std::string s = provenance_header(cfg) + "eps_add,adaptive_qubits,baseline_qubits\n";
    for (const auto& r : run_fig4(cfg))
        s += num(r.eps_add) + "," + std::to_string(r.adaptive_qubits) + "," + std::to_string(r.baseline_qubits) + "\n";
    return s;
}

namespace {
std::string fig5_rows_csv(const ExperimentConfig& cfg, const std::vector<Fig5Row>& rows)
{
    std::string s = provenance_header(cfg) + "method,eps_add,delta,n_med,t_queries,t_rescaled,rmse_worst,rmse_avg\n";
    for (const auto& r : rows)
        s += r.method + "," + num(r.eps_add) + "," + num(r.delta) + "," + std::to_string(r.n_med) + "," +
             num(r.t_queries) + "," + num(r.t_rescaled) + "," + num(r.rmse_worst) + "," + num(r.rmse_avg) + "\n";
    return s;
}
}  // namespace

std::string fig5_csv(const ExperimentConfig& cfg)
{
    return fig5_rows_csv(cfg, run_fig5(cfg, true));
}

std::string baseline_csv(const ExperimentConfig& cfg)
{
    return fig5_rows_csv(cfg, run_fig5(cfg, false));
}

std::string fig6_csv(const ExperimentConfig& cfg)
{
    std::string s = provenance_header(cfg) + "n_qubits,m_law,m_value,q_star\n";
    for (const auto& r : run_fig6(cfg))
        s += num(r.n_qubits) + "," + r.m_law + "," + num(r.m_value) + "," + num(r.q_star) + "\n";
    return s;
}

std::string adaptive_csv(const ExperimentConfig& cfg)
{
    AdaptiveConfig ac;
    ac.M = cfg.M;
    ac.log2_d = cfg.log2_d();
    ac.eps = cfg.eps;
    ac.c = effective_c(cfg, default_confidence());
    ac.g_true = random_g_set(cfg.M, cfg.seed, 0);
    ac.model = model_from_name(cfg.model);
    ac.seed = cfg.seed;
    const auto rep = mse_harness(ac, std::max(cfg.runs, 100));
    std::string s = provenance_header(cfg) + "m,d,eps,c,model,runs,seed,max_mse,mean_queries,ci95\n";
    s += std::to_string(cfg.M) + "," + std::to_string(cfg.d) + "," + num(cfg.eps) + "," + num(ac.c) + "," +
         cfg.model + "," + std::to_string(std::max(cfg.runs, 100)) + "," + std::to_string(cfg.seed) + "," +
         num(rep.max_mse) + "," + num(rep.mean_total_queries) + "," + num(rep.ci95[rep.argmax]) + "\n";
    return s;
}

std::string resources_csv(const ExperimentConfig& cfg)
{
    const double c = effective_c(cfg, default_confidence());
    const auto led = adaptive_queries(cfg.M, cfg.log2_d(), cfg.eps, c, cfg.a);
    const auto sg = sigma(cfg.M, cfg.log2_d(), kDeltaHS);
    std::string s = provenance_header(cfg);
    s += "# total=" + std::to_string(led.total) + " t_adapt=" + num(led.t_adapt) +
         " qubits_hs=" + std::to_string(qubit_counts(cfg.M, cfg.log2_d(), cfg.a, QubitMethod::HS)) +
         " qubits_grover=" + std::to_string(qubit_counts(cfg.M, cfg.log2_d(), cfg.a, QubitMethod::Grover)) +
         " sigma=" + num(sg.value) + " sigma_valid=" + (sg.valid ? "1" : "0") + "\n";
    s += "q,t,Q,shots,shot_weight,queries,grover_shot_queries\n";
    for (const auto& r : led.per_q)
        s += std::to_string(r.q) + "," + num(r.t) + "," + std::to_string(r.Q) + "," + std::to_string(r.shots) + "," +
             num(r.shot_weight) + "," + std::to_string(r.queries) + "," +
             std::to_string(grover_shot_queries(cfg.M, cfg.log2_d(), r.q)) + "\n";
    return s;
}

std::string threshold_csv(const ExperimentConfig& cfg)
{
    const auto t = grover_threshold(cfg.M, cfg.log2_d(), 3, kDeltaGrover, cfg.eps);
    std::string s = provenance_header(cfg) + "m,d,delta_p,sigma_p,q_star,eps_star,q_max,range_lo,range_hi\n";
    s += std::to_string(cfg.M) + "," + std::to_string(cfg.d) + "," + num(t.delta_p) + "," + num(t.sigma_p) + "," +
         num(t.q_star) + "," + num(t.eps_star) + "," + std::to_string(*t.q_max) + "," +
         (t.grover_range ? std::to_string(t.grover_range->first) + "," + std::to_string(t.grover_range->second)
                         : std::string(","))
         + "\n";
    return s;
}

std::string micro_csv(const ExperimentConfig& cfg)
{
    std::string s = provenance_header(cfg) + "check,value,bound,pass\n";
    auto row = [&](const std::string& name, double v, double bound, bool ok) {
        s += name + "," + num(v) + "," + num(bound) + "," + (ok ? "1" : "0") + "\n";
    };

    double lcu = 0;
    Rng rng(derive_seed(cfg.seed, 7));
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 << (1 + i % 3);
        const auto o = random_observable(dim, derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(i)));
        const double u = 2.0 * uniform01(rng) - 1.0;
        const auto be = lcu_shift_encode(o, u);
        const Eigen::MatrixXcd target = (o.matrix - u * Eigen::MatrixXcd::Identity(dim, dim)) / 2.0;
        const Eigen::MatrixXcd blk = be.unitary.topLeftCorner(dim, dim);
        const auto n = be.unitary.rows();
        const double unit = (be.unitary * be.unitary.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
        lcu = std::max({lcu, (blk - target).cwiseAbs().maxCoeff(), unit});
    }
    row("lcu_shift_max_error", lcu, 1e-10, lcu <= 1e-10);

    for (double dp : {0.05, 0.1}) {
        const int M = 64, n_mc = 100000;
        std::vector<DenseObservable> obs;
        for (int j = 0; j < M; ++j) {
            Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2, 2);
            z(0, 0) = uniform01(rng) < 0.5 ? 1.0 : -1.0;
            z(1, 1) = uniform01(rng) < 0.5 ? 1.0 : -1.0;
            obs.push_back({z});
        }
        const double f = subset_fraction(obs, 3, subset_gamma(M, 2, dp), n_mc, derive_seed(cfg.seed, 11));
        const double bound = dp + 3.0 * std::sqrt(dp * (1 - dp) / n_mc);
        row(dp == 0.05 ? "subset_fraction_delta_0.05" : "subset_fraction_delta_0.1", f, bound, f <= bound);
    }

    double worst = 0;
    for (int i = 0; i <= 10000; ++i) {
        const double x = -0.25 + 0.5 * i / 10000.0;
        if (x != 0) worst = std::max(worst, arccos_linearity_gap(x) / (std::abs(x * x * x) / 5.0));
    }
    row("arccos_gap_over_bound", worst, 1.0, worst <= 1.0);
    return s;
}

std::string run_command(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.command == "fig4") return fig4_csv(cfg);
    if (cfg.command == "fig5") return fig5_csv(cfg);
    if (cfg.command == "fig6") return fig6_csv(cfg);
    if (cfg.command == "adaptive") return adaptive_csv(cfg);
    if (cfg.command == "baseline") return baseline_csv(cfg);
    if (cfg.command == "resources") return resources_csv(cfg);
    if (cfg.command == "threshold") return threshold_csv(cfg);
    return micro_csv(cfg);
}

}  // namespace hlest
