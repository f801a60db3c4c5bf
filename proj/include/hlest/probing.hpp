#pragma once

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "hlest/resources.hpp"

namespace hlest {

struct Ideal {};

struct HamiltonianSim {
    double eps2 = 1.0 / 16384.0;  // 2^-14
    double deltap = kDeltaHS;
};

struct GroverRepetition {
    double deltap = kDeltaGrover;
    int l = 0;
    double sigmap = 0;  // 0 means: derive from (M, d, deltap)
};

using ProbingModel = std::variant<Ideal, HamiltonianSim, GroverRepetition>;

struct ProbingSpec {
    int p = 3;
    int q = 0;
    std::vector<double> u_tilde;
    std::vector<double> g_true;

    std::size_t M() const { return g_true.size(); }
    void validate() const;
};

// Register j occupies bits [p_0 + ... + p_{j-1}, ...) of the flat index.
struct AmplitudeState {
    std::vector<int> p_per_register;
    std::vector<std::complex<double>> amplitudes;

    std::size_t num_registers() const { return p_per_register.size(); }
    double norm() const;
    void normalize();
};

using Outcome = std::vector<double>;

std::vector<double> effective_gradients(const ProbingSpec& spec);

std::vector<Outcome> ideal_sampler(const ProbingSpec& spec, int shots, std::uint64_t seed);

// Each shot is replaced with probability `corruption` by the per-coordinate
// farthest grid point. Uses a separate stream for the coin flips, so
// corruption = 0 reproduces ideal_sampler exactly.
std::vector<Outcome> corrupted_sampler(const ProbingSpec& spec, int shots, double corruption, std::uint64_t seed);

// The ideal |Upsilon(q)>, requires p M <= 24.
AmplitudeState probing_state(const ProbingSpec& spec);

// Outcome probabilities after QFT_{G_p}^dagger on every register.
std::vector<double> fourier_outcome_probabilities(const AmplitudeState& state);

std::vector<Outcome> sample_outcomes(const std::vector<double>& probs, int p, std::size_t M, int shots,
                                     std::uint64_t seed);

struct GroverResult {
    AmplitudeState state;  // normalized, registers G_p^M then G_1
    double N_t = 0;
    double success_prob = 0;
    double t = 0;
    double sigmap = 0;
    int l_used = 0;
    double max_abs_argument = 0;
    bool outside_linear_region = false;  // some |f'| > 1/4
};

// Keeps |2^{q+1} O_{M+1}| <= 1 by moving l toward 0; throws if l = 0 fails too.
int choose_extra_l(int p, int q, int l);
double extra_observable(int p, int q, int l);  // pi (1/4 + 4l) / 2^{p+q}

GroverResult grover_state(const ProbingSpec& spec, const GroverRepetition& model, int log2_d = 1);

// QFT_{G_1}^dagger on the last register, then x -> -x controlled on its |0>.
AmplitudeState sign_correction_unitary(const AmplitudeState& state);
// As above, then project the last register on |+> and renormalize.
AmplitudeState sign_correction(const AmplitudeState& state);

// |Upsilon> (x) |+>
AmplitudeState with_plus_ancilla(const AmplitudeState& state);

double hs_error_budget(double eps2, double deltap);

double arccos_linearity_gap(double x);

double euclidean_distance(const AmplitudeState& a, const AmplitudeState& b);

// Fraction of uniform (x, y) in G_p^M x G_1 with |sum_j w_j x_j| at or above the
// Hoeffding radius sqrt(ln(2/delta') / 2 * sum_j w_j^2). weights has M + 1 entries.
double hoeffding_fraction(const std::vector<double>& weights, int p, double deltap, int n_mc, std::uint64_t seed);

}  // namespace hlest
