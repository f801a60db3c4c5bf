#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hlest/baseline.hpp"
#include "hlest/rng.hpp"

using namespace hlest;
using std::numbers::pi;

namespace {
double tv(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / 2;
}
}  // namespace

TEST_CASE("central difference coefficients")
{
    const auto a1 = central_diff_coeffs(1);
    CHECK(a1 == std::vector<double>{-0.5, 0.0, 0.5});
    // Oracle: m = 3 gives 3/4, -3/20, 1/60.
    const auto a3 = central_diff_coeffs_exact(3);
    CHECK(a3[4] == Rational(3, 4));
    CHECK(a3[5] == Rational(-3, 20));
    CHECK(a3[6] == Rational(1, 60));
    for (int m = 1; m <= 20; ++m) {
        const auto a = central_diff_coeffs_exact(m);
        Rational s1 = 0, s0 = 0;
        for (int l = -m; l <= m; ++l) {
            s1 += Rational(l) * a[static_cast<std::size_t>(l + m)];
            s0 += a[static_cast<std::size_t>(l + m)];
            CHECK(a[static_cast<std::size_t>(m - l)] == -a[static_cast<std::size_t>(m + l)]);
        }
        CHECK(s1 == 1);
        CHECK(s0 == 0);
        CHECK(a[static_cast<std::size_t>(m)] == 0);
    }
    CHECK(central_diff_coeffs(40).size() == 81);
    CHECK_THROWS_AS(central_diff_coeffs(41), std::invalid_argument);
}

TEST_CASE("baseline parameters")
{
    const auto bp = baseline_params(30, 0.125, 0.25);
    CHECK(bp.m == 7);
    CHECK(bp.N_med == 5);
    CHECK(bp.s == -8);
    CHECK(bp.n == 9);  // oracle: n1 = 17, s = -8
    CHECK(baseline_params(30, 1.0 / 1024, 1.0).N_med == 1);
    double prev = 1;
    for (int a = 0; a <= 13; ++a) {
        const auto p = baseline_params(30, std::ldexp(1.0, -a), 1.0);
        if (a >= 3) CHECK(p.r < prev);  // the ceiling in m breaks monotonicity for larger eps_add
        prev = p.r;
        const int approx = static_cast<int>(std::ceil(std::log2(24.0 * std::ldexp(1.0, a)))) * 30;
        CHECK(std::abs(p.n * 30 - approx) <= 60);
    }
}

TEST_CASE("h function")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int inst = 0; inst < 50; ++inst) {
        const int M = 1 + inst % 6;
        const double eps = std::ldexp(1.0, -(inst % 10));
        const auto bp = baseline_params(M, eps, 0.5);
        std::vector<double> g(static_cast<std::size_t>(M)), x(static_cast<std::size_t>(M), 0.0);
        for (auto& v : g) v = U(rng);
        CHECK(std::abs(h_function(x, g, bp)) <= 1e-13);
        for (int j = 0; j < M; ++j) {
            const double hstep = 1e-4 / bp.r;
            auto xp = x, xm = x;
            xp[static_cast<std::size_t>(j)] += hstep;
            xm[static_cast<std::size_t>(j)] -= hstep;
            const double fd = (h_function(xp, g, bp) - h_function(xm, g, bp)) / (2 * hstep);
            const double exact = bp.r * g[static_cast<std::size_t>(j)] / std::ldexp(1.0, bp.s);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact) + 1e-14);
        }
    }
    const auto bp = baseline_params(3, 0.1, 0.5);
    CHECK(std::abs(h_function({0.3, -0.2, 0.1}, {0, 0, 0}, bp)) <= 1e-13);
}

TEST_CASE("marginal distribution, M = 1 exact")
{
    const auto bp = baseline_params(1, 0.02, 1.0);
    const std::vector<double> g{0.37};
    const auto d = marginal_distribution(g, bp);
    const auto pts = d.reg.points;
    const double N = std::ldexp(1.0, bp.n);
    // Oracle: direct O(N^2) sum over the phase 2^n h(x).
    std::vector<double> ref;
    for (double k : pts) {
        std::complex<double> s = 0;
        for (double x : pts) s += std::polar(1.0, 2 * pi * N * (h_function({x}, g, bp) - x * k));
        ref.push_back(std::norm(s / N));
    }
    CHECK(tv(d.pmf, ref) < 1e-10);
    double sum = 0;
    for (double v : d.pmf) sum += v;
    CHECK(std::abs(sum - 1) < 1e-10);
    const auto mode = static_cast<std::size_t>(std::max_element(d.pmf.begin(), d.pmf.end()) - d.pmf.begin());
    CHECK(std::abs(pts[mode] - bp.r * g[0] / std::ldexp(1.0, bp.s)) <= 3 / N);
}

TEST_CASE("marginal distribution, Monte-Carlo convergence")
{
    const auto bp = baseline_params(4, 0.25, 1.0);
    const std::vector<double> g{0.5, -0.3, 0.8, 0.1};
    const auto a = marginal_distribution(g, bp, 10000, 1);
    const auto b = marginal_distribution(g, bp, 20000, 2);
    double sum = 0;
    for (double v : a.pmf) sum += v;
    CHECK(std::abs(sum - 1) < 1e-10);
    CHECK(tv(a.pmf, b.pmf) <= 0.01);
    const auto mode = static_cast<std::size_t>(std::max_element(a.pmf.begin(), a.pmf.end()) - a.pmf.begin());
    CHECK(std::abs(a.reg.points[mode] - bp.r * g[0] / std::ldexp(1.0, bp.s)) <= 3 / std::ldexp(1.0, bp.n));
}

TEST_CASE("median distribution")
{
    OutcomeDistribution p{GridRegister::make(3), {0.05, 0.1, 0.3, 0.25, 0.1, 0.1, 0.05, 0.05}};
    CHECK(tv(median_distribution(p, 1).pmf, p.pmf) < 1e-15);
    CHECK_THROWS_AS(median_distribution(p, 4), std::invalid_argument);

    for (int N : {3, 7, 21}) {
        const auto med = median_distribution(p, N);
        double s = 0;
        for (double v : med.pmf) s += v;
        CHECK(std::abs(s - 1) < 1e-10);
        // Oracle: simulated medians.
        Rng rng(N);
        std::discrete_distribution<int> draw(p.pmf.begin(), p.pmf.end());
        std::vector<double> emp(8, 0.0);
        const int T = 100000;
        std::vector<int> buf(static_cast<std::size_t>(N));
        for (int t = 0; t < T; ++t) {
            for (auto& v : buf) v = draw(rng);
            std::nth_element(buf.begin(), buf.begin() + N / 2, buf.end());
            emp[static_cast<std::size_t>(buf[static_cast<std::size_t>(N / 2)])] += 1.0 / T;
        }
        CHECK(tv(med.pmf, emp) <= 0.02);
    }

    // Tail mass outside a window around the mode is nonincreasing in N.
    double prev = 1;
    for (int N = 1; N <= 15; N += 2) {
        const auto med = median_distribution(p, N);
        const double tail = med.pmf[0] + med.pmf[5] + med.pmf[6] + med.pmf[7];
        CHECK(tail <= prev + 1e-15);
        prev = tail;
    }
}

TEST_CASE("baseline queries and MSE")
{
    const auto b1 = baseline_params(30, 0.01, 1.0);
    const auto b3 = baseline_params(30, 0.01, 0.5);
    const auto b5 = baseline_params(30, 0.01, 0.25);
    const auto q1 = baseline_queries(b1), q3 = baseline_queries(b3), q5 = baseline_queries(b5);
    CHECK(q3.T_NonIter == 3 * q1.T_NonIter);
    CHECK(q5.T_NonIter == 5 * q1.T_NonIter);
    CHECK(baseline_queries(b1, 20).T_NonIter == 2 * q1.T_NonIter);
    for (int m = 1; m <= 20; ++m) {
        const auto bp = baseline_params(1, 2.0 / std::ldexp(1.0, m), 1.0);
        const auto q = baseline_queries(bp);
        CHECK(q.T_tilde < static_cast<double>(q.T_NonIter));
    }

    // Symmetric marginal for g = 0: zero bias, MSE = rescaled second moment.
    const auto bp = baseline_params(1, 0.05, 1.0);
    const auto d = marginal_distribution({0.0}, bp);
    double m2 = 0, m1 = 0;
    for (std::size_t i = 0; i < d.pmf.size(); ++i) {
        const double e = baseline_estimate(d.reg.points[i], bp);
        m1 += d.pmf[i] * e;
        m2 += d.pmf[i] * e * e;
    }
    CHECK(std::abs(m1) < 1e-12);
    CHECK(baseline_mse(d, 0.0, bp) == doctest::Approx(m2).epsilon(1e-12));

    const auto dg = marginal_distribution({0.41}, bp);
    double prev = 1e9;
    for (double delta : {1.0, 0.5, 0.25, 0.125, 1.0 / 64}) {
        const auto p = baseline_params(1, 0.05, delta);
        const double mse = baseline_mse(dg, 0.41, p);
        CHECK(mse <= prev);
        prev = mse;
    }
    CHECK(baseline_qubits_exact(b1, 1) == b1.n * 30 + 2);
}
