#include "hlest/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hlest {

namespace {
constexpr double kPi = std::numbers::pi;
}

double grid_point(int p, std::uint64_t mu)
{
    const double n = std::ldexp(1.0, p);
    return (static_cast<double>(mu) + 0.5) / n - 0.5;
}

std::vector<double> grid_points(int p)
{
    if (p < 1 || p > 20) throw std::invalid_argument("grid_points: p must be in [1, 20]");
    const std::uint64_t n = std::uint64_t{1} << p;
    std::vector<double> pts(n);
    for (std::uint64_t mu = 0; mu < n; ++mu) pts[mu] = grid_point(p, mu);
    return pts;
}

GridRegister GridRegister::make(int p)
{
    return GridRegister{p, grid_points(p)};
}

std::size_t GridRegister::index_of(double x) const
{
    const double n = static_cast<double>(points.size());
    const double mu = std::round((x + 0.5) * n - 0.5);
    if (mu < 0 || mu >= n || std::abs(points[static_cast<std::size_t>(mu)] - x) > 1e-9)
        throw std::invalid_argument("GridRegister::index_of: value is not a grid point");
    return static_cast<std::size_t>(mu);
}

Eigen::MatrixXcd qft_grid(int p)
{
    if (p < 1 || p > 12) throw std::invalid_argument("qft_grid: p must be in [1, 12]");
    const std::int64_t n = std::int64_t{1} << p;
    const std::int64_t mod = n << 2;
    // 2^p x k = (2mu - 2^p + 1)(2nu - 2^p + 1) / 2^{p+2}; keep the numerator exact.
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    Eigen::MatrixXcd m(n, n);
    for (std::int64_t nu = 0; nu < n; ++nu) {
        const std::int64_t a = 2 * nu - n + 1;
        for (std::int64_t mu = 0; mu < n; ++mu) {
            const std::int64_t b = 2 * mu - n + 1;
            std::int64_t r = (a * b) % mod;
            if (r < 0) r += mod;
            const double theta = 2.0 * kPi * static_cast<double>(r) / static_cast<double>(mod);
            m(nu, mu) = std::polar(norm, theta);
        }
    }
    return m;
}

double phase_kernel(int p, double delta)
{
    const double n = std::ldexp(1.0, p);
    const double den = std::sin(kPi * delta);
    if (std::abs(den) < 1e-15) return 1.0;
    const double k = std::sin(kPi * n * delta) / (n * den);
    return k * k;
}

OutcomeDistribution linear_phase_outcome_dist(int p, double g)
{
    OutcomeDistribution out{GridRegister::make(p), {}};
    out.pmf.resize(out.reg.size());
    for (std::size_t i = 0; i < out.pmf.size(); ++i)
        out.pmf[i] = phase_kernel(p, g - out.reg.points[i]);
    return out;
}

double tail_probability(const OutcomeDistribution& dist, double g, double threshold)
{
    double s = 0;
    for (std::size_t i = 0; i < dist.pmf.size(); ++i)
        if (std::abs(dist.reg.points[i] - g) > threshold) s += dist.pmf[i];
    return s;
}

double tail_probability(int p, double g, double threshold)
{
    return tail_probability(linear_phase_outcome_dist(p, g), g, threshold);
}

SineState sine_state(int p)
{
    SineState s{GridRegister::make(p), {}};
    const double n = static_cast<double>(s.reg.size());
    s.amplitudes.resize(s.reg.size());
    for (std::size_t k = 0; k < s.amplitudes.size(); ++k)
        s.amplitudes[k] = std::sqrt(2.0 / n) * std::sin(static_cast<double>(k) * kPi / n);
    return s;
}

double min_expected_cos(const std::vector<double>& a)
{
    // sum_k a_{k-1} a_k + a_0 a_{N-1} cos(...); the cosine term reaches -1 for some g'.
    double s = 0;
    for (std::size_t k = 1; k < a.size(); ++k) s += a[k - 1] * a[k];
    return s - std::abs(a.front() * a.back());
}

SineStateCheck sine_state_mse_check(int p)
{
    if (p < 2 || p > 12) throw std::invalid_argument("sine_state_mse_check: p must be in [2, 12]");
    const Eigen::Index dim = (Eigen::Index{1} << p) - 1;
    Eigen::VectorXd diag = Eigen::VectorXd::Ones(dim);
    Eigen::VectorXd off = Eigen::VectorXd::Constant(dim - 1, -0.5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("sine_state_mse_check: eigensolver failed");

    SineStateCheck r;
    r.min_eigenvalue = es.eigenvalues()(0);

    const SineState s = sine_state(p);
    Eigen::VectorXd v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = s.amplitudes[static_cast<std::size_t>(k + 1)];
    Eigen::VectorXd av = v;  // A v for the tridiagonal A
    for (Eigen::Index k = 0; k < dim; ++k) {
        av(k) = v(k);
        if (k > 0) av(k) -= 0.5 * v(k - 1);
        if (k + 1 < dim) av(k) -= 0.5 * v(k + 1);
    }
    const double rayleigh = v.dot(av);
    r.eigenvector_residual = (av - r.min_eigenvalue * v).norm();
    Eigen::VectorXd e = es.eigenvectors().col(0);
    if (e.dot(v) < 0) e = -e;
    r.eigenvector_distance = (e - v).norm();

    const double n = std::ldexp(1.0, p);
    r.proxy_mse_sine = rayleigh / (2.0 * kPi * kPi);
    r.proxy_mse_uniform_worst = (2.0 / n) / (2.0 * kPi * kPi);
    return r;
}

}  // namespace hlest
