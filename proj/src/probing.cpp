#include "hlest/probing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hlest/grid.hpp"
#include "hlest/rng.hpp"

namespace hlest {

namespace {
constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

std::size_t sample_index(const std::vector<double>& cdf, Rng& rng)
{
    const double u = uniform01(rng) * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> cumulative(const std::vector<double>& pmf)
{
    std::vector<double> cdf(pmf.size());
    double s = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i) cdf[i] = (s += pmf[i]);
    return cdf;
}

}  // namespace

void ProbingSpec::validate() const
{
    if (p < 1) throw std::invalid_argument("ProbingSpec: p must be positive");
    if (q < 0) throw std::invalid_argument("ProbingSpec: q must be nonnegative");
    if (u_tilde.size() != g_true.size() || g_true.empty())
        throw std::invalid_argument("ProbingSpec: u_tilde and g_true must have equal nonzero length");
    for (std::size_t j = 0; j < g_true.size(); ++j)
        if (std::abs(g_true[j]) > 1 || std::abs(u_tilde[j]) > 1)
            throw std::invalid_argument("ProbingSpec: entries must lie in [-1, 1]");
}

double AmplitudeState::norm() const
{
    double s = 0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

void AmplitudeState::normalize()
{
    const double n = norm();
    if (n == 0) throw std::domain_error("AmplitudeState::normalize: zero vector");
    for (auto& a : amplitudes) a /= n;
}

std::vector<double> effective_gradients(const ProbingSpec& spec)
{
    std::vector<double> g(spec.M());
    for (std::size_t j = 0; j < g.size(); ++j)
        g[j] = std::ldexp(spec.g_true[j] - spec.u_tilde[j], spec.q) / kPi;
    return g;
}

namespace {
// Outcome statistics are 1-periodic in the effective gradient.
double wrap_half(double g) { return g - std::round(g); }
}  // namespace

std::vector<Outcome> ideal_sampler(const ProbingSpec& spec, int shots, std::uint64_t seed)
{
    spec.validate();
    const auto geff = effective_gradients(spec);
    const auto pts = grid_points(spec.p);
    std::vector<std::vector<double>> cdfs;
    for (double g : geff) {
        const double w = std::abs(g) <= 0.5 ? g : wrap_half(g);
        cdfs.push_back(cumulative(linear_phase_outcome_dist(spec.p, w).pmf));
    }
    Rng rng(seed);
    std::vector<Outcome> out(static_cast<std::size_t>(shots), Outcome(spec.M()));
    for (auto& shot : out)
        for (std::size_t j = 0; j < shot.size(); ++j) shot[j] = pts[sample_index(cdfs[j], rng)];
    return out;
}

std::vector<Outcome> corrupted_sampler(const ProbingSpec& spec, int shots, double corruption, std::uint64_t seed)
{
    if (corruption < 0 || corruption > 1.0 / 12.0)
        throw std::invalid_argument("corrupted_sampler: corruption must be in [0, 1/12]");
    auto out = ideal_sampler(spec, shots, seed);
    if (corruption == 0) return out;
    const auto geff = effective_gradients(spec);
    const auto pts = grid_points(spec.p);
    Outcome worst(spec.M());
    for (std::size_t j = 0; j < worst.size(); ++j) {
        const double g = std::abs(geff[j]) <= 0.5 ? geff[j] : wrap_half(geff[j]);
        worst[j] = std::abs(pts.front() - g) >= std::abs(pts.back() - g) ? pts.front() : pts.back();
    }
    Rng coin(derive_seed(seed, 0xC0FFEE));
    for (auto& shot : out)
        if (uniform01(coin) < corruption) shot = worst;
    return out;
}

AmplitudeState probing_state(const ProbingSpec& spec)
{
    spec.validate();
    const std::size_t M = spec.M();
    if (static_cast<std::size_t>(spec.p) * M > 24) throw std::invalid_argument("probing_state: p M must be <= 24");
    const auto geff = effective_gradients(spec);
    const std::size_t n = std::size_t{1} << spec.p;
    const double scale = std::ldexp(1.0, spec.p);

    AmplitudeState s;
    s.p_per_register.assign(M, spec.p);
    s.amplitudes.assign(std::size_t{1} << (spec.p * M), cd(1.0, 0.0));
    const double amp = 1.0 / std::sqrt(static_cast<double>(s.amplitudes.size()));
    for (std::size_t idx = 0; idx < s.amplitudes.size(); ++idx) {
        double phase = 0;
        std::size_t rest = idx;
        for (std::size_t j = 0; j < M; ++j, rest /= n) phase += grid_point(spec.p, rest % n) * geff[j];
        s.amplitudes[idx] = std::polar(amp, 2.0 * kPi * scale * phase);
    }
    return s;
}

std::vector<double> fourier_outcome_probabilities(const AmplitudeState& state)
{
    std::vector<cd> a = state.amplitudes;
    std::vector<cd> buf;
    std::size_t stride = 1;
    for (int p : state.p_per_register) {
        const Eigen::MatrixXcd qd = qft_grid(p).adjoint();
        const std::size_t n = std::size_t{1} << p;
        buf.resize(n);
        for (std::size_t base = 0; base < a.size(); ++base) {
            if ((base / stride) % n != 0) continue;
            for (std::size_t k = 0; k < n; ++k) {
                cd s = 0;
                for (std::size_t x = 0; x < n; ++x) s += qd(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(x)) * a[base + x * stride];
                buf[k] = s;
            }
            for (std::size_t k = 0; k < n; ++k) a[base + k * stride] = buf[k];
        }
        stride *= n;
    }
    std::vector<double> probs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) probs[i] = std::norm(a[i]);
    return probs;
}

std::vector<Outcome> sample_outcomes(const std::vector<double>& probs, int p, std::size_t M, int shots,
                                     std::uint64_t seed)
{
    const auto cdf = cumulative(probs);
    const std::size_t n = std::size_t{1} << p;
    Rng rng(seed);
    std::vector<Outcome> out(static_cast<std::size_t>(shots), Outcome(M));
    for (auto& shot : out) {
        std::size_t idx = sample_index(cdf, rng);
        for (std::size_t j = 0; j < M; ++j, idx /= n) shot[j] = grid_point(p, idx % n);
    }
    return out;
}

double extra_observable(int p, int q, int l)
{
    return kPi * (0.25 + 4.0 * l) / std::ldexp(1.0, p + q);
}

int choose_extra_l(int p, int q, int l)
{
    while (std::ldexp(std::abs(extra_observable(p, q, l)), q + 1) > 1.0) {
        if (l == 0) throw std::invalid_argument("choose_extra_l: no admissible l");
        l += l > 0 ? -1 : 1;
    }
    return l;
}

GroverResult grover_state(const ProbingSpec& spec, const GroverRepetition& model, int log2_d)
{
    spec.validate();
    const std::size_t M = spec.M();
    const std::size_t bits = static_cast<std::size_t>(spec.p) * M;
    if (bits + 1 > 24) throw std::invalid_argument("grover_state: p M + 1 must be <= 24");

    GroverResult r;
    r.sigmap = model.sigmap > 0 ? model.sigmap : sigma_grover(static_cast<double>(M), log2_d, model.deltap);
    r.t = std::ldexp(r.sigmap, spec.p + spec.q + 2);
    r.l_used = choose_extra_l(spec.p, spec.q, model.l);
    const double o_extra = extra_observable(spec.p, spec.q, r.l_used);

    std::vector<double> otilde(M);
    for (std::size_t j = 0; j < M; ++j) otilde[j] = 0.5 * (spec.g_true[j] - spec.u_tilde[j]);

    const std::size_t n = std::size_t{1} << spec.p;
    const std::size_t half = std::size_t{1} << bits;
    r.state.p_per_register.assign(M, spec.p);
    r.state.p_per_register.push_back(1);
    r.state.amplitudes.resize(2 * half);
    const double scale = 1.0 / std::sqrt(static_cast<double>(half));
    const long double tt = r.t;
    for (std::size_t idx = 0; idx < half; ++idx) {
        double s = 0;
        std::size_t rest = idx;
        for (std::size_t j = 0; j < M; ++j, rest /= n) s += grid_point(spec.p, rest % n) * otilde[j];
        for (std::size_t y = 0; y < 2; ++y) {
            const double f = (grid_point(1, y) * o_extra + s) / r.sigmap;
            r.max_abs_argument = std::max(r.max_abs_argument, std::abs(f));
            const double fc = std::clamp(f, -1.0, 1.0);
            // cos(t acos f) with the angle reduced in extended precision.
            const long double ang = std::fmod(tt * std::acos(static_cast<long double>(fc)), 2.0L * std::numbers::pi_v<long double>);
            r.state.amplitudes[idx + y * half] = scale * static_cast<double>(std::cos(ang));
        }
    }
    r.outside_linear_region = r.max_abs_argument > 0.25;
    r.N_t = r.state.norm();
    r.success_prob = r.N_t * r.N_t / 2.0;
    r.state.normalize();
    return r;
}

AmplitudeState sign_correction_unitary(const AmplitudeState& state)
{
    if (state.p_per_register.empty() || state.p_per_register.back() != 1)
        throw std::invalid_argument("sign_correction: last register must have p = 1");
    const std::size_t half = state.amplitudes.size() / 2;
    const Eigen::MatrixXcd qd = qft_grid(1).adjoint();
    AmplitudeState out = state;
    for (std::size_t i = 0; i < half; ++i) {
        const cd a0 = state.amplitudes[i], a1 = state.amplitudes[i + half];
        out.amplitudes[i] = qd(0, 0) * a0 + qd(0, 1) * a1;
        out.amplitudes[i + half] = qd(1, 0) * a0 + qd(1, 1) * a1;
    }
    // Complementing every bit maps mu -> 2^p - 1 - mu in each register, i.e. x -> -x.
    const std::size_t mask = half - 1;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t j = mask ^ i;
        if (i < j) std::swap(out.amplitudes[i], out.amplitudes[j]);
    }
    return out;
}

AmplitudeState sign_correction(const AmplitudeState& state)
{
    const AmplitudeState full = sign_correction_unitary(state);
    const std::size_t half = full.amplitudes.size() / 2;
    AmplitudeState out;
    out.p_per_register.assign(full.p_per_register.begin(), full.p_per_register.end() - 1);
    out.amplitudes.resize(half);
    for (std::size_t i = 0; i < half; ++i)
        out.amplitudes[i] = (full.amplitudes[i] + full.amplitudes[i + half]) / std::sqrt(2.0);
    out.normalize();
    return out;
}

AmplitudeState with_plus_ancilla(const AmplitudeState& state)
{
    AmplitudeState out = state;
    out.p_per_register.push_back(1);
    const std::size_t half = state.amplitudes.size();
    out.amplitudes.resize(2 * half);
    for (std::size_t i = 0; i < half; ++i) {
        out.amplitudes[i] = state.amplitudes[i] / std::sqrt(2.0);
        out.amplitudes[i + half] = out.amplitudes[i];
    }
    return out;
}

double hs_error_budget(double eps2, double deltap)
{
    if (eps2 < 0 || eps2 >= 1 || deltap < 0 || deltap >= 1)
        throw std::invalid_argument("hs_error_budget: arguments must be in [0, 1)");
    return eps2 + std::sqrt(2.0 * eps2) + std::sqrt(5.0 * deltap);
}

double arccos_linearity_gap(double x)
{
    if (std::abs(x) > 0.25) throw std::domain_error("arccos_linearity_gap: |x| must be <= 1/4");
    return std::abs(std::acos(x) - kPi / 2.0 + x);
}

double euclidean_distance(const AmplitudeState& a, const AmplitudeState& b)
{
    if (a.amplitudes.size() != b.amplitudes.size())
        throw std::invalid_argument("euclidean_distance: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) s += std::norm(a.amplitudes[i] - b.amplitudes[i]);
    return std::sqrt(s);
}

double hoeffding_fraction(const std::vector<double>& weights, int p, double deltap, int n_mc, std::uint64_t seed)
{
    if (weights.size() < 2) throw std::invalid_argument("hoeffding_fraction: need M + 1 >= 2 weights");
    double w2 = 0;
    for (double w : weights) w2 += w * w;
    const double radius = std::sqrt(std::log(2.0 / deltap) / 2.0 * w2);
    const std::uint64_t n = std::uint64_t{1} << p;
    Rng rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1), bit(0, 1);
    int hits = 0;
    for (int i = 0; i < n_mc; ++i) {
        double s = 0;
        for (std::size_t j = 0; j + 1 < weights.size(); ++j) s += weights[j] * grid_point(p, pick(rng));
        s += weights.back() * grid_point(1, bit(rng));
        if (std::abs(s) >= radius) ++hits;
    }
    return static_cast<double>(hits) / n_mc;
}

}  // namespace hlest
