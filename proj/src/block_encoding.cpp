#include "hlest/block_encoding.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "hlest/grid.hpp"
#include "hlest/rng.hpp"

namespace hlest {

namespace {
using Mat = Eigen::MatrixXcd;

Mat ry(double angle)
{
    Mat r(2, 2);
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    r << c, -s, s, c;
    return r;
}

double spectral_norm_hermitian(const Mat& h)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(h.rows() - 1)));
}
}  // namespace

void DenseObservable::validate() const
{
    const auto n = matrix.rows();
    if (n != matrix.cols() || n < 1 || n > 16 || (n & (n - 1)) != 0)
        throw std::invalid_argument("DenseObservable: dimension must be a power of 2 up to 16");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("DenseObservable: matrix is not Hermitian");
    if (spectral_norm_hermitian(matrix) > 1 + 1e-12) throw std::invalid_argument("DenseObservable: norm exceeds 1");
}

DenseObservable random_observable(int dim, std::uint64_t seed)
{
    Rng rng(seed);
    std::normal_distribution<double> nd;
    Mat a(dim, dim);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = {nd(rng), nd(rng)};
    Mat h = (a + a.adjoint()) / 2.0;
    h *= (0.2 + 0.8 * uniform01(rng)) / spectral_norm_hermitian(h);
    return DenseObservable{h};
}

Mat BlockEncoding::block() const
{
    const auto n = unitary.rows() >> ancilla_count;
    return alpha * unitary.topLeftCorner(n, n);
}

BlockEncoding unitary_dilation(const DenseObservable& O)
{
    O.validate();
    const Mat& o = O.matrix;
    const auto n = o.rows();
    const Mat id = Mat::Identity(n, n);
    BlockEncoding be;
    if ((o * o - id).cwiseAbs().maxCoeff() < 1e-12) {
        be.unitary = o;
        return be;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(id - o * o);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Mat s = es.eigenvectors() * ev.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
    be.ancilla_count = 1;
    be.unitary.resize(2 * n, 2 * n);
    be.unitary << o, s, s, -o;
    return be;
}

BlockEncoding lcu_shift_encode(const DenseObservable& O, double u)
{
    if (std::abs(u) > 1) throw std::invalid_argument("lcu_shift_encode: |u| must be <= 1");
    const BlockEncoding b = unitary_dilation(O);
    const auto dim = b.unitary.rows();
    const double au = std::abs(u);
    const double theta = 2.0 * std::atan(std::sqrt(au));
    const double phi = 2.0 * std::atan(std::sqrt(4.0 - (1.0 + au) * (1.0 + au)) / (1.0 + au));
    const double sgn = u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0);

    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    // At u = 0 the |1> branch carries zero weight; keep it unitary with +I.
    const double branch = sgn == 0 ? 1.0 : -sgn;
    const Mat sel = Eigen::kroneckerProduct(p0, b.unitary).eval() +
                    Eigen::kroneckerProduct(p1, Mat(branch * Mat::Identity(dim, dim))).eval();
    const Mat idb = Mat::Identity(dim, dim);
    const Mat rot = Eigen::kroneckerProduct(ry(theta), idb).eval();
    const Mat inner = rot.adjoint() * sel * rot;

    BlockEncoding be;
    be.ancilla_count = b.ancilla_count + 2;
    be.unitary = Eigen::kroneckerProduct(ry(phi), inner).eval();
    be.alpha = 2.0;
    return be;
}

double subset_fraction(const std::vector<DenseObservable>& observables, int p, double gamma, int n_mc,
                       std::uint64_t seed)
{
    if (observables.empty()) throw std::invalid_argument("subset_fraction: no observables");
    const auto n = observables.front().matrix.rows();
    const double M = static_cast<double>(observables.size());
    const double bound = 1.0 / (2.0 * gamma);
    const std::uint64_t npts = std::uint64_t{1} << p;
    Rng rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, npts - 1);
    int hits = 0;
    Mat acc(n, n);
    for (int i = 0; i < n_mc; ++i) {
        acc.setZero();
        for (const auto& o : observables) acc += grid_point(p, pick(rng)) * o.matrix;
        if (spectral_norm_hermitian(acc) / M >= bound) ++hits;
    }
    return static_cast<double>(hits) / n_mc;
}

double subset_gamma(int M, int dim, double delta_p)
{
    const double sigma = std::ceil(std::sqrt(2.0 * M * std::log(2.0 * dim / delta_p)));
    return M / sigma;
}

std::vector<double> chebyshev_diagonal(const std::vector<double>& values, int t)
{
    if (t < 0) throw std::invalid_argument("chebyshev_diagonal: t must be nonnegative");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) > 1) throw std::domain_error("chebyshev_diagonal: value outside [-1, 1]");
        out[i] = std::cos(t * std::acos(values[i]));
    }
    return out;
}

std::vector<double> chebyshev_recurrence(const std::vector<double>& values, int t)
{
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double prev = 1, cur = values[i];
        if (t == 0) cur = 1;
        for (int k = 1; k < t; ++k) {
            const double next = 2 * values[i] * cur - prev;
            prev = cur;
            cur = next;
        }
        out[i] = cur;
    }
    return out;
}

std::complex<double> eigenphase_oracle_check(double g, double x, double basis_angle)
{
    if (std::abs(g) > 1) throw std::invalid_argument("eigenphase_oracle_check: |g| must be <= 1");
    Mat z = Mat::Zero(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    const Mat v = ry(basis_angle);
    const Mat o = g * v * z * v.adjoint();
    const Mat e = (std::complex<double>(0, -2.0 * x) * o).exp();
    const Eigen::VectorXcd psi = v.col(0);
    return psi.dot(e * psi);
}

}  // namespace hlest
