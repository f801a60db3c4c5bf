#include "hlest/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "hlest/rng.hpp"

namespace hlest {

namespace {
constexpr double kPi = std::numbers::pi;
std::mutex planner_mutex;  // FFTW planning is not thread-safe

int ceil_log2(double x) { return static_cast<int>(std::ceil(std::log2(x) - 1e-12)); }

Rational binom(int n, int k)
{
    boost::multiprecision::cpp_int v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return Rational(v);
}

// 2^n h as a function of z = sum_j x_j g_j, using a_{-l} = -a_l.
struct PhaseOfZ {
    std::vector<double> a_pos;  // a_1..a_m
    double two_r = 0;
    double scale = 0;  // 2^{n - s}

    double operator()(double z) const
    {
        const double th = two_r * z;
        const double c2 = 2.0 * std::cos(th);
        double prev = 0, cur = std::sin(th), acc = 0;
        for (double al : a_pos) {
            acc += al * cur;
            const double next = c2 * cur - prev;
            prev = cur;
            cur = next;
        }
        return scale * acc;
    }
};
}  // namespace

std::vector<Rational> central_diff_coeffs_exact(int m)
{
    if (m < 1 || m > 40) throw std::invalid_argument("central_diff_coeffs: m must be in [1, 40]");
    std::vector<Rational> a(static_cast<std::size_t>(2 * m + 1), Rational(0));
    for (int l = 1; l <= m; ++l) {
        Rational v = binom(m, l) / binom(m + l, l) / l;
        if (l % 2 == 0) v = -v;
        a[static_cast<std::size_t>(m + l)] = v;
        a[static_cast<std::size_t>(m - l)] = -v;
    }
    return a;
}

std::vector<double> central_diff_coeffs(int m)
{
    const auto ex = central_diff_coeffs_exact(m);
    std::vector<double> a(ex.size());
    for (std::size_t i = 0; i < ex.size(); ++i) a[i] = static_cast<double>(ex[i]);
    return a;
}

BaselineParams baseline_params(int M, double eps_add, double delta, double c)
{
    if (M < 1) throw std::invalid_argument("baseline_params: M must be positive");
    if (!(eps_add > 0)) throw std::invalid_argument("baseline_params: eps_add must be positive");
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("baseline_params: delta must be in (0, 1]");
    if (!(c > 0)) throw std::invalid_argument("baseline_params: c must be positive");
    BaselineParams bp;
    bp.M = M;
    bp.eps_add = eps_add;
    bp.c = c;
    bp.delta = delta;
    const double csm = c * std::sqrt(static_cast<double>(M));
    bp.m = std::max(1, ceil_log2(csm / eps_add));
    const double rinv = 9.0 * c * bp.m * std::sqrt(static_cast<double>(M)) *
                        std::pow(81.0 * 8.0 * 42.0 * kPi * bp.m * csm / eps_add, 1.0 / (2.0 * bp.m));
    bp.r = 1.0 / rinv;
    bp.s = ceil_log2(3.0 * c * bp.r);
    bp.n1 = ceil_log2(4.0 / (eps_add * bp.r));
    bp.n = bp.n1 + bp.s;
    bp.N_med = 2 * std::max(0, ceil_log2(1.0 / delta)) + 1;
    bp.a = central_diff_coeffs(bp.m);
    return bp;
}

double h_function(const std::vector<double>& x, const std::vector<double>& g_true, const BaselineParams& params)
{
    if (x.size() != g_true.size()) throw std::invalid_argument("h_function: size mismatch");
    double z = 0;
    for (std::size_t j = 0; j < x.size(); ++j) z += x[j] * g_true[j];
    double acc = 0;
    for (int l = -params.m; l <= params.m; ++l) {
        const double f = 0.5 + 0.5 * std::sin(2.0 * l * params.r * z);
        acc += params.a[static_cast<std::size_t>(l + params.m)] * f;
    }
    return std::ldexp(acc, -params.s);
}

OutcomeDistribution marginal_distribution(const std::vector<double>& g_true, const BaselineParams& params, int n_mc,
                                          std::uint64_t seed)
{
    if (g_true.empty() || g_true.size() != static_cast<std::size_t>(params.M))
        throw std::invalid_argument("marginal_distribution: g_true must have M entries");
    if (params.n < 1 || params.n > 24) throw std::invalid_argument("marginal_distribution: n out of range");
    const int n = params.n;
    const std::size_t N = std::size_t{1} << n;
    const double Nd = static_cast<double>(N);
    const double centre = Nd / 2.0 - 0.5;

    PhaseOfZ phase;
    phase.a_pos.assign(params.a.begin() + params.m + 1, params.a.end());
    phase.two_r = 2.0 * params.r;
    phase.scale = std::ldexp(1.0, n - params.s);

    OutcomeDistribution out{GridRegister::make(n), std::vector<double>(N, 0.0)};
    fftw_complex* buf = nullptr;
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex);
        buf = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * N));
        plan = fftw_plan_dft_1d(static_cast<int>(N), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }

    // p(k_nu) = |DFT_nu(exp(2 pi i (2^n h(x_mu) + c mu / 2^n)))|^2 / 4^n with c = 2^{n-1} - 1/2.
    auto accumulate = [&](double shift, double weight) {
        for (std::size_t mu = 0; mu < N; ++mu) {
            const double x = out.reg.points[mu];
            double ph = phase(x * g_true[0] + shift) + centre * static_cast<double>(mu) / Nd;
            ph -= std::floor(ph);
            buf[mu][0] = std::cos(2.0 * kPi * ph);
            buf[mu][1] = std::sin(2.0 * kPi * ph);
        }
        fftw_execute(plan);
        for (std::size_t k = 0; k < N; ++k)
            out.pmf[k] += weight * (buf[k][0] * buf[k][0] + buf[k][1] * buf[k][1]) / (Nd * Nd);
    };

    if (params.M == 1) {
        accumulate(0.0, 1.0);
    } else {
        if (n_mc < 1) throw std::invalid_argument("marginal_distribution: n_mc must be positive");
        Rng rng(seed);
        std::uniform_int_distribution<std::uint64_t> pick(0, N - 1);
        for (int i = 0; i < n_mc; ++i) {
            double shift = 0;
            for (std::size_t j = 1; j < g_true.size(); ++j) shift += out.reg.points[pick(rng)] * g_true[j];
            accumulate(shift, 1.0 / n_mc);
        }
    }
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
    fftw_free(buf);
    return out;
}

MedianDistribution median_distribution(const OutcomeDistribution& p_single, int N_med)
{
    if (N_med < 1 || N_med % 2 == 0) throw std::invalid_argument("median_distribution: N_med must be odd and >= 1");
    // Pr(median <= x_i) = sum_{l >= (N+1)/2} C(N,l) P_i^l (1 - P_i)^{N-l}
    std::vector<double> binom_coef(static_cast<std::size_t>(N_med) + 1);
    for (int l = 0; l <= N_med; ++l)
        binom_coef[static_cast<std::size_t>(l)] = std::exp(std::lgamma(N_med + 1.0) - std::lgamma(l + 1.0) - std::lgamma(N_med - l + 1.0));
    auto upper = [&](double P) {
        P = std::clamp(P, 0.0, 1.0);
        double s = 0;
        for (int l = (N_med + 1) / 2; l <= N_med; ++l)
            s += binom_coef[static_cast<std::size_t>(l)] * std::pow(P, l) * std::pow(1.0 - P, N_med - l);
        return s;
    };
    MedianDistribution out{p_single.reg, std::vector<double>(p_single.pmf.size())};
    double P = 0, prev = 0;
    for (std::size_t i = 0; i < p_single.pmf.size(); ++i) {
        P += p_single.pmf[i];
        const double cur = i + 1 == p_single.pmf.size() ? upper(1.0) : upper(P);
        out.pmf[i] = cur - prev;
        prev = cur;
    }
    return out;
}

BaselineQueries baseline_queries(const BaselineParams& params, int overhead)
{
    if (overhead < 1) throw std::invalid_argument("baseline_queries: overhead must be positive");
    const double scale = 2.0 * kPi * std::ldexp(1.0, params.n1);
    std::uint64_t per = 0;
    for (double al : params.a) per += static_cast<std::uint64_t>(std::ceil(scale * std::abs(al)));
    BaselineQueries q;
    q.T_NonIter = static_cast<std::uint64_t>(overhead) * static_cast<std::uint64_t>(params.N_med) * per;
    q.T_tilde = static_cast<double>(q.T_NonIter) / std::pow(81.0 * 8.0, 1.0 / (2.0 * params.m));
    return q;
}

double baseline_estimate(double k, const BaselineParams& params)
{
    return std::ldexp(1.0, params.s) / params.r * k;
}

double baseline_mse(const OutcomeDistribution& marginal, double g1, const BaselineParams& params)
{
    const auto med = median_distribution(marginal, params.N_med);
    double mse = 0;
    for (std::size_t i = 0; i < med.pmf.size(); ++i) {
        const double e = baseline_estimate(med.reg.points[i], params) - g1;
        mse += med.pmf[i] * e * e;
    }
    return mse;
}

int baseline_qubits_exact(const BaselineParams& params, int log2_d)
{
    return params.n * params.M + 1 + log2_d;
}

}  // namespace hlest
