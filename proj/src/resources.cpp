#include "hlest/resources.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hlest {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

double log_term(double t, int Q)
{
    return std::log(4.0) + Q * std::log(t) - Q * kLn2 - std::lgamma(Q + 1.0);
}

int ceil_log2(double x) { return static_cast<int>(std::ceil(std::log2(x) - 1e-12)); }
}  // namespace

double default_confidence() { return 3.0 / (8.0 * (1.0 + kPi) * (1.0 + kPi)); }

int q_max_for(double eps)
{
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must be in (0,1)");
    return ceil_log2(1.0 / eps);
}

double delta_schedule(double c, int q, int q_max)
{
    return c / std::pow(8.0, q_max - q);
}

double log_ratio(int log2_d, double delta_p)
{
    return (1.0 + log2_d) * kLn2 - std::log(delta_p);
}

int hamiltonian_sim_Q(double t)
{
    if (!(t > 0)) throw std::invalid_argument("hamiltonian_sim_Q: t must be positive");
    const double target = -17.0 * kLn2;
    // The term is unimodal in Q with peak near t/2 where it is at least 4,
    // so the answer lies past the peak and the predicate is monotone there.
    int lo = std::max(1, static_cast<int>(std::floor(t / 2.0)));
    if (log_term(t, lo) <= target) return lo;
    int hi = lo;
    while (log_term(t, hi) > target) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (log_term(t, mid) <= target ? hi : lo) = mid;
    }
    return hi;
}

double hs_evolution_time(double M, int log2_d, int q)
{
    return std::ldexp(1.0, 5 + q) * std::sqrt(2.0 * M * log_ratio(log2_d, kDeltaHS));
}

QueryLedger adaptive_queries(int M, int log2_d, double eps, double c, int a)
{
    QueryLedger led;
    led.method = Method::HS;
    led.qubit_count = qubit_counts(M, log2_d, a, QubitMethod::HS);
    const int qm = q_max_for(eps);
    for (int q = 0; q <= qm; ++q) {
        QueryRow row;
        row.q = q;
        row.t = hs_evolution_time(M, log2_d, q);
        row.Q = hamiltonian_sim_Q(row.t);
        row.shot_weight = 9.0 * std::log(M / delta_schedule(c, q, qm));
        row.shots = static_cast<int>(std::ceil(row.shot_weight));
        row.queries = 2ULL * static_cast<std::uint64_t>(row.Q) * static_cast<std::uint64_t>(row.shots);
        led.total += row.queries;
        led.t_adapt += 2.0 * row.Q * row.shot_weight;
        led.per_q.push_back(row);
    }
    return led;
}

double shot_log_sum_direct(double M, double c, int q_max)
{
    double s = 0;
    for (int q = 0; q <= q_max; ++q) s += std::ldexp(1.0, q) * std::log(M / delta_schedule(c, q, q_max));
    return s;
}

double shot_log_sum_closed(double M, double c, int q_max)
{
    return std::ldexp(1.0, q_max + 1) * std::log(8.0 * M / c) - (q_max + 2) * std::log(8.0) - std::log(M / c);
}

int qubit_counts(int M, int log2_d, int a, QubitMethod method, double eps_add)
{
    switch (method) {
    case QubitMethod::HS:
        return 3 * M + ceil_log2(M) + log2_d + a + 9;
    case QubitMethod::Grover:
        return 3 * M + ceil_log2(M + 1.0) + log2_d + a + 8;
    case QubitMethod::BaselineApprox:
        if (!(eps_add > 0)) throw std::invalid_argument("qubit_counts: eps_add must be positive");
        return ceil_log2(24.0 / eps_add) * M;
    }
    throw std::invalid_argument("qubit_counts: unknown method");
}

SigmaResult sigma(double M, int log2_d, double delta_p)
{
    if (!(delta_p > 0 && delta_p < 1)) throw std::invalid_argument("sigma: delta' must be in (0,1)");
    SigmaResult r;
    r.value = std::ceil(std::sqrt(2.0 * M * log_ratio(log2_d, delta_p)));
    r.valid = r.value < M;
    return r;
}

double sigma_grover(double M, int log2_d, double delta_p)
{
    return std::ceil(std::sqrt(2.0 * (M + 1.0) * log_ratio(log2_d, delta_p)));
}

ThresholdReport grover_threshold(double M, int log2_d, int p, double delta_p, std::optional<double> eps)
{
    if (!(M >= 1)) throw std::invalid_argument("grover_threshold: M must be >= 1");
    ThresholdReport r;
    r.M = M;
    r.log2_d = log2_d;
    r.delta_p = delta_p;
    r.sigma_p = sigma_grover(M, log2_d, delta_p);
    const double L = log_ratio(log2_d, delta_p);
    const double C = std::ldexp(1.0, p) * 33.0 * 33.0 * 33.0 / 625.0;
    // q >= log_4[C / L * sigma' / sqrt(L)], so 1/eps* = sqrt(C L^{-3/2} sigma').
    r.eps_star = 1.0 / std::sqrt(C * std::pow(L, -1.5) * r.sigma_p);
    r.q_star = std::log2(1.0 / r.eps_star);
    if (eps) {
        r.q_max = q_max_for(*eps);
        const int lo = std::max(0, static_cast<int>(std::ceil(r.q_star)));
        if (lo <= *r.q_max) r.grover_range = std::make_pair(lo, *r.q_max);
    }
    return r;
}

std::uint64_t grover_shot_queries(double M, int log2_d, int q, int p, double delta_p)
{
    const double t = std::ldexp(1.0, p + q + 2) * sigma_grover(M, log2_d, delta_p);
    return static_cast<std::uint64_t>(std::ceil(2.0 * t / kGroverSuccess));
}

BmVariant bm_variant(int M, int log2_d, double B_M, int q, double eps, double c, int p)
{
    if (!(B_M > 0) || B_M > M) throw std::invalid_argument("bm_variant: B_M must be in (0, M]");
    BmVariant r;
    const double Lhs = log_ratio(log2_d, kDeltaHS);
    const double Lg = log_ratio(log2_d, kDeltaGrover);
    const double L2 = std::log(2.0 / kDeltaGrover);
    const double extra = std::sqrt(2.0 * (M + 1.0) * L2);
    const double shifted = std::sqrt(2.0 * (B_M + std::ldexp(1.0, -2 * q - 2)) * Lg);

    r.sigma_bar = std::sqrt(2.0 * B_M * Lhs);
    r.sigma_bar_p = std::ceil(shifted + std::ldexp(extra, -q - 1));
    r.cond1 = std::ldexp(shifted, q + 1) > extra;
    const double t = std::ldexp(r.sigma_bar_p, p + q + 2);
    const double inner = (std::sqrt(kDeltaGrover) / std::ldexp(1.0, p) + extra) / std::ldexp(r.sigma_bar_p, q + 2);
    r.cond2 = t / 5.0 * inner * inner * inner <= std::sqrt(kDeltaGrover);

    // The HS accounting with sqrt(2 M ln(2^11 d)) replaced by sigma_bar.
    const int qm = q_max_for(eps);
    for (int k = 0; k <= qm; ++k) {
        const double tk = std::ldexp(r.sigma_bar, 5 + k);
        r.t_adapt_bm += 2.0 * hamiltonian_sim_Q(tk) * 9.0 * std::log(M / delta_schedule(c, k, qm));
    }
    return r;
}

}  // namespace hlest
