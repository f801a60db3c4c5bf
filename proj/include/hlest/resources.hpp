#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hlest {

// d is always carried as its base-2 logarithm (number of system qubits).
inline constexpr double kDeltaHS = 1.0 / 1024.0;        // 2^-10
inline constexpr double kDeltaGrover = 1.0 / 16384.0;   // 2^-14

double default_confidence();  // 3 / (8 (1 + pi)^2)
int q_max_for(double eps);
double delta_schedule(double c, int q, int q_max);  // c / 8^{q_max - q}

// ln(2d / delta')
double log_ratio(int log2_d, double delta_p);

// Smallest Q with 4 t^Q / (2^Q Q!) <= 2^-17.
int hamiltonian_sim_Q(double t);

// t = 2^{5+q} sqrt(2 M ln(2^11 d))
double hs_evolution_time(double M, int log2_d, int q);

struct QueryRow {
    int q = 0;
    double t = 0;
    int Q = 0;
    int shots = 0;             // ceil(9 ln(M / delta^(q)))
    double shot_weight = 0;    // 9 ln(M / delta^(q)), as written in T_adapt
    std::uint64_t queries = 0; // 2 Q shots
};

enum class Method { HS, Grover };

struct QueryLedger {
    std::vector<QueryRow> per_q;
    std::uint64_t total = 0;
    double t_adapt = 0;  // sum_q 2 Q(q) 9 ln(M / delta^(q))
    Method method = Method::HS;
    int qubit_count = 0;
};

QueryLedger adaptive_queries(int M, int log2_d, double eps, double c, int a = 1);

// sum_q 2^q ln(M / delta^(q)), by direct summation and by the closed form.
double shot_log_sum_direct(double M, double c, int q_max);
double shot_log_sum_closed(double M, double c, int q_max);

enum class QubitMethod { HS, Grover, BaselineApprox };
int qubit_counts(int M, int log2_d, int a, QubitMethod method, double eps_add = 0);

struct SigmaResult {
    double value = 0;  // integer valued
    bool valid = false;  // sigma < M
};

SigmaResult sigma(double M, int log2_d, double delta_p);
double sigma_grover(double M, int log2_d, double delta_p);  // ceil(sqrt(2 (M+1) ln(2d/delta')))

struct ThresholdReport {
    double M = 0;
    int log2_d = 0;
    double delta_p = kDeltaGrover;
    double sigma_p = 0;
    double q_star = 0;
    double eps_star = 0;
    std::optional<int> q_max;
    std::optional<std::pair<int, int>> grover_range;  // [ceil(q*), q_max] when nonempty
};

ThresholdReport grover_threshold(double M, int log2_d, int p = 3, double delta_p = kDeltaGrover,
                                 std::optional<double> eps = std::nullopt);

// Grover-route cost per shot: 2t with t = 2^{p+q+2} sigma', inflated by the
// expected number of post-selection attempts.
inline constexpr double kGroverSuccess = 0.462;
std::uint64_t grover_shot_queries(double M, int log2_d, int q, int p = 3, double delta_p = kDeltaGrover);

struct BmVariant {
    double sigma_bar = 0;
    double sigma_bar_p = 0;
    bool cond1 = false;
    bool cond2 = false;
    double t_adapt_bm = 0;
};

BmVariant bm_variant(int M, int log2_d, double B_M, int q, double eps,
                     double c = default_confidence(), int p = 3);

}  // namespace hlest
