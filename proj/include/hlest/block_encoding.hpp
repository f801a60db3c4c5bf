#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hlest {

struct DenseObservable {
    Eigen::MatrixXcd matrix;  // Hermitian, dimension a power of 2 up to 16, norm <= 1

    void validate() const;
};

// Ancilla qubits are the most significant; the encoded block is the top-left corner.
struct BlockEncoding {
    int ancilla_count = 0;
    Eigen::MatrixXcd unitary;
    double alpha = 1.0;
    double eps = 0.0;

    Eigen::MatrixXcd block() const;
};

// Hermitian with spectral norm drawn uniformly in [0.2, 1].
DenseObservable random_observable(int dim, std::uint64_t seed);

// O itself when O^2 = I, otherwise [[O, S], [S, -O]] with S = sqrt(I - O^2).
BlockEncoding unitary_dilation(const DenseObservable& O);

// Two extra ancillas around the dilation of O; block = (O - u I) / 2.
BlockEncoding lcu_shift_encode(const DenseObservable& O, double u);

// Monte-Carlo fraction of x in G_p^M with ||M^{-1} sum_j x_j O_j|| >= 1 / (2 gamma).
double subset_fraction(const std::vector<DenseObservable>& observables, int p, double gamma, int n_mc,
                       std::uint64_t seed);

// gamma = M / sigma with sigma = ceil(sqrt(2 M ln(2 dim / delta'))).
double subset_gamma(int M, int dim, double delta_p);

std::vector<double> chebyshev_diagonal(const std::vector<double>& values, int t);
// Three-term recurrence; loses accuracy for large t, kept as a cross-check.
std::vector<double> chebyshev_recurrence(const std::vector<double>& values, int t);

// <psi| exp(-2 i x O) |psi> for O = g V Z V^dagger, |psi> = V|0>, V = exp(-i Y angle / 2).
std::complex<double> eigenphase_oracle_check(double g, double x, double basis_angle = 0.0);

}  // namespace hlest
