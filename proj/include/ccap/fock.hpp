// fock.hpp — Truncated-Fock-space states: coherent vectors, thermal states,
// displaced-thermal channel outputs, entropy and energy functionals

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ccap {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;

// Raised when a truncation keeps less probability mass than the caller asked for.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double captured)
        : std::runtime_error(what), captured_mass(captured) {}
    double captured_mass;
};

// --------------------------- truncated states -------------------------------

// Unnormalized density matrix on span{|0>,...,|dim-1>}. captured_mass is the
// trace before any renormalization; bounds on it are part of the contracts
// in bounds.hpp, so nothing here renormalizes silently.
struct TruncatedState {
    int dim = 0;
    Matrix matrix;
    double captured_mass = 0.0;
};

struct GaussianChannelParams {
    double sigma = 0.0;       // thermal noise mean photon number
    double attenuation = 1.0; // transmissivity s in [0,1]
    double phase = 0.0;       // rotation angle theta in [0, 2pi)
};

inline void check_params(const GaussianChannelParams& p) {
    if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma))
        throw std::invalid_argument("check_params: sigma must be >= 0");
    if (!(p.attenuation >= 0.0 && p.attenuation <= 1.0))
        throw std::invalid_argument("check_params: attenuation must be in [0,1]");
    if (!std::isfinite(p.phase))
        throw std::invalid_argument("check_params: phase must be finite");
}

// --------------------------- coherent states --------------------------------

// <n|alpha> = exp(-|alpha|^2/2) alpha^n / sqrt(n!), evaluated in log space so
// large |alpha| neither overflows alpha^n nor loses the tiny head entries.
// The vector is not renormalized: its squared norm is the mass of |alpha>
// captured by the rank-dim number projector.
inline Vector coherent_vector(Complex alpha, int dim) {
    if (dim < 1) throw std::invalid_argument("coherent_vector: dim must be >= 1");
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw std::invalid_argument("coherent_vector: alpha must be finite");
    Vector v(dim);
    const double a2 = std::norm(alpha);
    if (a2 == 0.0) {
        v.setZero();
        v(0) = 1.0;
        return v;
    }
    const double lna = std::log(std::abs(alpha));
    const double arg = std::arg(alpha);
    for (int n = 0; n < dim; ++n) {
        double lamp = -0.5 * a2 + n * lna - 0.5 * std::lgamma(n + 1.0);
        v(n) = std::exp(lamp) * Complex(std::cos(n * arg), std::sin(n * arg));
    }
    return v;
}

// --------------------------- thermal states ---------------------------------

// Geometric photon-number distribution: <n|tau|n> = sigma^n / (sigma+1)^(n+1).
inline TruncatedState thermal_state(double sigma, int dim) {
    if (dim < 1) throw std::invalid_argument("thermal_state: dim must be >= 1");
    if (!(sigma >= 0.0)) throw std::invalid_argument("thermal_state: sigma must be >= 0");
    TruncatedState rho;
    rho.dim = dim;
    rho.matrix = Matrix::Zero(dim, dim);
    if (sigma == 0.0) {
        rho.matrix(0, 0) = 1.0;
        rho.captured_mass = 1.0;
        return rho;
    }
    const double q = sigma / (sigma + 1.0);
    double p = 1.0 / (sigma + 1.0);
    for (int n = 0; n < dim; ++n) {
        rho.matrix(n, n) = p;
        p *= q;
    }
    rho.captured_mass = 1.0 - std::pow(q, dim);
    return rho;
}

// --------------------------- displacement operator --------------------------

// D(beta) = exp(beta a† - conj(beta) a). The exponent is anti-Hermitian, so
// write it as exp(iH) with H Hermitian and diagonalize H.
inline Matrix displacement_operator(Complex beta, int dim) {
    if (dim < 1) throw std::invalid_argument("displacement_operator: dim must be >= 1");
    Matrix H = Matrix::Zero(dim, dim);
    const Complex mi(0.0, -1.0);
    for (int n = 0; n + 1 < dim; ++n) {
        H(n + 1, n) = mi * beta * std::sqrt(n + 1.0);
        H(n, n + 1) = std::conj(H(n + 1, n));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    Vector phases(dim);
    for (int k = 0; k < dim; ++k)
        phases(k) = std::exp(Complex(0.0, es.eigenvalues()(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Padding for the displacement construction: exp truncation error piles up at
// the top of the basis, so build on dim+pad and crop back to dim.
inline int displacement_padding(Complex beta, int dim) {
    int pad = static_cast<int>(std::ceil(4.0 * std::abs(beta) * std::sqrt(double(dim))));
    return std::max(16, pad);
}

// --------------------------- channel outputs --------------------------------

// Output of the Gaussian channel on input |alpha>: the displaced thermal state
// D(beta) tau_sigma D(beta)† with beta = sqrt(s) e^{i theta} alpha, truncated
// to dim. For sigma = 0 the output is exactly the coherent state |beta>.
// Throws accuracy_error when the truncation keeps less than 0.999 of the mass.
inline TruncatedState gaussian_channel_output(Complex alpha, const GaussianChannelParams& params, int dim) {
    if (dim < 1) throw std::invalid_argument("gaussian_channel_output: dim must be >= 1");
    check_params(params);
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw std::invalid_argument("gaussian_channel_output: alpha must be finite");
    const Complex beta = std::sqrt(params.attenuation) *
                         std::exp(Complex(0.0, params.phase)) * alpha;
    TruncatedState rho;
    rho.dim = dim;
    if (params.sigma == 0.0) {
        Vector v = coherent_vector(beta, dim);
        rho.matrix = v * v.adjoint();
        rho.captured_mass = v.squaredNorm();
    } else if (beta == Complex(0.0, 0.0)) {
        rho = thermal_state(params.sigma, dim);
    } else {
        const int work = dim + displacement_padding(beta, dim);
        Matrix D = displacement_operator(beta, work);
        TruncatedState tau = thermal_state(params.sigma, work);
        Matrix full = D * tau.matrix * D.adjoint();
        rho.matrix = full.topLeftCorner(dim, dim);
        rho.matrix = 0.5 * (rho.matrix + rho.matrix.adjoint().eval());
        rho.captured_mass = rho.matrix.trace().real();
    }
    if (rho.captured_mass < 0.999)
        throw accuracy_error("gaussian_channel_output: captured mass " +
                                 std::to_string(rho.captured_mass) + " < 0.999, increase dim",
                             rho.captured_mass);
    return rho;
}

// --------------------------- quadrature oracle ------------------------------

struct QuadratureGrid {
    int radial = 401;    // Simpson nodes (forced odd)
    int angular = 256;   // trapezoid nodes on [0, 2pi)
    double k_sigma = 6.0; // radial extent beyond |beta| in units of sqrt(sigma)
};

// Independent construction of the same output by integrating the P-function
// representation (1/(pi sigma)) \int exp(-|z-beta|^2/sigma) |z><z| d^2z on a
// polar grid centered at the origin. Slow but free of the displacement
// machinery; used to cross-check gaussian_channel_output.
inline TruncatedState gaussian_channel_output_quadrature(Complex alpha, const GaussianChannelParams& params,
                                                         int dim, const QuadratureGrid& grid = {}) {
    if (dim < 1) throw std::invalid_argument("gaussian_channel_output_quadrature: dim must be >= 1");
    check_params(params);
    if (params.sigma == 0.0)
        throw std::invalid_argument("gaussian_channel_output_quadrature: sigma = 0 is exact, use gaussian_channel_output");
    if (grid.radial < 5 || grid.angular < 8 || grid.k_sigma < 6.0)
        throw std::invalid_argument("gaussian_channel_output_quadrature: grid too coarse");

    const double sigma = params.sigma;
    const Complex beta = std::sqrt(params.attenuation) *
                         std::exp(Complex(0.0, params.phase)) * alpha;
    const double babs = std::abs(beta);
    const double barg = std::arg(beta);
    const double rmax = babs + grid.k_sigma * std::sqrt(sigma);
    int nr = grid.radial | 1; // Simpson needs an odd node count
    const int na = grid.angular;
    const double dr = rmax / (nr - 1);
    const double dphi = 2.0 * M_PI / na;

    Eigen::VectorXd half_lfact(dim);
    for (int n = 0; n < dim; ++n) half_lfact(n) = 0.5 * std::lgamma(n + 1.0);

    Matrix rho = Matrix::Zero(dim, dim);
    Matrix C(dim, na);
    Eigen::VectorXd w(na);
    for (int i = 0; i < nr; ++i) {
        const double r = i * dr;
        if (r == 0.0) continue; // measure factor r kills the center node
        double simp = (i == 0 || i == nr - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double ring = simp * (dr / 3.0) * dphi * r / (M_PI * sigma);
        // radial amplitude profile of <n|z> for |z| = r, phases added per node
        Eigen::VectorXd amp(dim);
        const double lnr = std::log(r);
        for (int n = 0; n < dim; ++n)
            amp(n) = std::exp(-0.5 * r * r + n * lnr - half_lfact(n));
        const Complex rot(std::cos(dphi), std::sin(dphi));
        Complex e1(1.0, 0.0);
        for (int j = 0; j < na; ++j) {
            const double phi = j * dphi;
            // |z - beta|^2 with z = r e^{i phi}
            const double d2 = r * r + babs * babs - 2.0 * r * babs * std::cos(phi - barg);
            w(j) = ring * std::exp(-d2 / sigma);
            Complex en(1.0, 0.0);
            for (int n = 0; n < dim; ++n) {
                C(n, j) = amp(n) * en;
                en *= e1;
            }
            e1 *= rot;
        }
        rho.noalias() += C * w.cast<Complex>().asDiagonal() * C.adjoint();
    }
    TruncatedState out;
    out.dim = dim;
    out.matrix = 0.5 * (rho + rho.adjoint().eval());
    out.captured_mass = out.matrix.trace().real();
    return out;
}

// --------------------------- functionals ------------------------------------

// H(rho) = -tr(rho log2 rho) in bits; eigenvalues below 1e-15 contribute 0.
inline double von_neumann_entropy(const TruncatedState& rho) {
    if (rho.matrix.rows() != rho.dim || rho.matrix.cols() != rho.dim)
        throw std::invalid_argument("von_neumann_entropy: matrix/dim mismatch");
    const double herm = (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
        throw std::invalid_argument("von_neumann_entropy: input not Hermitian within 1e-10");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix, Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (int k = 0; k < rho.dim; ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam > 1e-15) h -= lam * std::log2(lam);
    }
    return h;
}

// tr(rho n) = sum_n n rho_nn, the mean photon number of the captured mass.
inline double mean_photon_number(const TruncatedState& rho) {
    if (rho.matrix.rows() != rho.dim || rho.matrix.cols() != rho.dim)
        throw std::invalid_argument("mean_photon_number: matrix/dim mismatch");
    double e = 0.0;
    for (int n = 0; n < rho.dim; ++n) e += n * rho.matrix(n, n).real();
    return e;
}

} // namespace ccap
