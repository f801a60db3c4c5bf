#include <doctest.h>

#include <cmath>
#include <random>

#include "hlest/block_encoding.hpp"

using namespace hlest;
using Mat = Eigen::MatrixXcd;

namespace {
Mat pauli_z()
{
    Mat z = Mat::Zero(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    return z;
}

double unitarity_error(const Mat& u)
{
    return (u * u.adjoint() - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("LCU shift encoding")
{
    const auto id = lcu_shift_encode({Mat::Identity(2, 2)}, 1.0);
    CHECK(id.unitary.topLeftCorner(2, 2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(id.ancilla_count == 2);

    const auto z = lcu_shift_encode({pauli_z()}, 0.0);
    CHECK((z.unitary.topLeftCorner(2, 2) - pauli_z() / 2.0).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int i = 0; i < 100; ++i) {
        const int dim = 1 << (1 + i % 3);
        const auto o = random_observable(dim, 1000 + static_cast<std::uint64_t>(i));
        o.validate();
        const double u = i == 0 ? -1.0 : U(rng);
        const auto be = lcu_shift_encode(o, u);
        CHECK(be.ancilla_count == 3);
        CHECK(unitarity_error(be.unitary) < 1e-10);
        const Mat target = (o.matrix - u * Mat::Identity(dim, dim)) / 2.0;
        CHECK((be.unitary.topLeftCorner(dim, dim) - target).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((be.block() - (o.matrix - u * Mat::Identity(dim, dim))).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(lcu_shift_encode({pauli_z()}, 1.2), std::invalid_argument);
    Mat bad = Mat::Zero(2, 2);
    bad(0, 1) = 1;
    CHECK_THROWS_AS(lcu_shift_encode({bad}, 0.0), std::invalid_argument);
}

TEST_CASE("subset fraction")
{
    std::vector<DenseObservable> zeros(8, DenseObservable{Mat::Zero(2, 2)});
    CHECK(subset_fraction(zeros, 3, 2.0, 1000, 1) == 0.0);

    CHECK(subset_gamma(64, 2, 0.05) == doctest::Approx(64.0 / 24));
    std::mt19937_64 rng(9);
    for (double dp : {0.05, 0.1}) {
        std::vector<DenseObservable> obs;
        for (int j = 0; j < 64; ++j) {
            Mat d = Mat::Zero(2, 2);
            d(0, 0) = rng() % 2 ? 1.0 : -1.0;
            d(1, 1) = rng() % 2 ? 1.0 : -1.0;
            obs.push_back({d});
        }
        const int n = 100000;
        const double gamma = subset_gamma(64, 2, dp);
        const double f = subset_fraction(obs, 3, gamma, n, 5);
        CHECK(f <= dp + 3 * std::sqrt(dp * (1 - dp) / n));
        // Smaller gamma means a larger radius and a nested event.
        CHECK(subset_fraction(obs, 3, gamma * 0.8, n, 5) <= f);
    }
}

TEST_CASE("chebyshev on a diagonal")
{
    const std::vector<double> v{-1.0, -0.3, 0.0, 0.5, 0.99, 1.0};
    CHECK(chebyshev_diagonal(v, 0) == std::vector<double>(v.size(), 1.0));
    const auto t1 = chebyshev_diagonal(v, 1);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(t1[i] == doctest::Approx(v[i]).epsilon(1e-15));
    CHECK_THROWS_AS(chebyshev_diagonal({1.1}, 3), std::domain_error);

    for (int t : {2, 17, 1000, 10000}) {
        double worst = 0;
        std::vector<double> xs, th;
        for (int i = 0; i < 1000; ++i) {
            th.push_back(3.14159 * i / 999.0);
            xs.push_back(std::cos(th.back()));
        }
        const auto out = chebyshev_diagonal(xs, t);
        for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(out[i] - std::cos(t * th[i])));
        CHECK(worst < 1e-12 * t);  // input rounding is amplified by t
    }

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> xs(500);
    for (auto& x : xs) x = U(rng);
    for (int t : {1, 5, 40, 300}) {
        const auto a = chebyshev_diagonal(xs, t), a2 = chebyshev_diagonal(xs, 2 * t), r = chebyshev_recurrence(xs, t);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            CHECK(std::abs(a2[i] - (2 * a[i] * a[i] - 1)) < 1e-8);
            CHECK(std::abs(a[i] - r[i]) < 1e-9);
        }
    }
}

TEST_CASE("eigenphase oracle")
{
    for (double x : {0.0, 0.3, 1.7}) CHECK(std::abs(eigenphase_oracle_check(0.0, x) - 1.0) < 1e-12);
    for (double x = -2; x <= 2; x += 0.25) {
        CHECK(std::abs(eigenphase_oracle_check(1.0, x) - std::polar(1.0, -2 * x)) < 1e-12);
        for (double g : {-0.8, 0.35}) {
            const auto v = eigenphase_oracle_check(g, x, 0.9);
            CHECK(std::abs(v.imag() + std::sin(2 * x * g)) < 1e-12);
            CHECK(std::abs(v.real() - std::cos(2 * x * g)) < 1e-12);
        }
    }
}
