// capacity.hpp — Capacity functionals: g-formulas for the Gaussian compound
// channels, Holevo quantity, Blahut–Arimoto single-channel capacity, the
// minimax compound solver max_p min_s I(p;W_s), and the coherent-constellation
// lower bound on the classical-quantum compound capacity

#pragma once

#include <ccap/fock.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccap {

// --------------------------- scalar functions --------------------------------

// g(x) = (x+1) log2(x+1) - x log2 x, the entropy of a thermal state with mean
// photon number x, in bits.
inline double g(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("g: x must be >= 0");
    if (x == 0.0) return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

inline double binary_entropy(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("binary_entropy: q must be in [0,1]");
    if (q == 0.0 || q == 1.0) return 0.0;
    return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

// --------------------------- classical channels -------------------------------

// Row-stochastic transition matrix W(y|x); rows are inputs.
struct DMC {
    Eigen::MatrixXd W;
    int rows() const { return static_cast<int>(W.rows()); }
    int cols() const { return static_cast<int>(W.cols()); }
};

using Prior = Eigen::VectorXd;
using CompoundSet = std::vector<DMC>;

inline void check_dmc(const DMC& W) {
    if (W.rows() < 1 || W.cols() < 1)
        throw std::invalid_argument("check_dmc: empty transition matrix");
    for (int x = 0; x < W.rows(); ++x) {
        double s = 0.0;
        for (int y = 0; y < W.cols(); ++y) {
            const double v = W.W(x, y);
            if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
                throw std::invalid_argument("check_dmc: row " + std::to_string(x) +
                                            " has entry outside [0,1]");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-12)
            throw std::invalid_argument("check_dmc: row " + std::to_string(x) +
                                        " sums to " + std::to_string(s) + ", not 1");
    }
}

inline void check_prior(const Prior& p) {
    if (p.size() < 1) throw std::invalid_argument("check_prior: empty prior");
    double s = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (!(p(i) >= -1e-12)) throw std::invalid_argument("check_prior: negative entry");
        s += p(i);
    }
    if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument("check_prior: entries sum to " + std::to_string(s));
}

inline void check_compound_set(const CompoundSet& S) {
    if (S.empty()) throw std::invalid_argument("check_compound_set: empty set");
    for (std::size_t s = 0; s < S.size(); ++s) {
        check_dmc(S[s]);
        if (S[s].rows() != S[0].rows() || S[s].cols() != S[0].cols())
            throw std::invalid_argument("check_compound_set: channel " + std::to_string(s) +
                                        " has mismatched shape");
    }
}

struct CapacityResult {
    double value = 0.0;      // bits
    Prior optimizer;         // achieving input distribution
    int worst_index = 0;     // argmin channel state
    long iterations = 0;
    double gap = 0.0;        // certified optimality gap
    std::string stopped_by;  // "gap" or "iteration-cap"
};

// --------------------------- mutual information -------------------------------

// I(p;W) = H(q) - sum_x p_x H(W_x) with q = W^T p, in bits, 0 log 0 = 0.
inline double mutual_information(const Prior& p, const DMC& W) {
    if (p.size() != W.rows())
        throw std::invalid_argument("mutual_information: prior/channel shape mismatch");
    Eigen::VectorXd q = W.W.transpose() * p;
    double hq = 0.0;
    for (int y = 0; y < q.size(); ++y)
        if (q(y) > 0.0) hq -= q(y) * std::log2(q(y));
    double hrows = 0.0;
    for (int x = 0; x < W.rows(); ++x) {
        if (p(x) <= 0.0) continue;
        double h = 0.0;
        for (int y = 0; y < W.cols(); ++y) {
            const double v = W.W(x, y);
            if (v > 0.0) h -= v * std::log2(v);
        }
        hrows += p(x) * h;
    }
    return hq - hrows;
}

namespace detail {

// D(W_x || q) in bits for every input row; the Arimoto quantities whose
// p-average is I(p;W) and whose max upper-bounds the capacity.
inline Eigen::VectorXd row_divergences(const Prior& p, const DMC& W) {
    Eigen::VectorXd q = W.W.transpose() * p;
    Eigen::VectorXd D(W.rows());
    for (int x = 0; x < W.rows(); ++x) {
        double d = 0.0;
        for (int y = 0; y < W.cols(); ++y) {
            const double v = W.W(x, y);
            if (v > 0.0) d += v * std::log2(v / q(y));
        }
        D(x) = d;
    }
    return D;
}

} // namespace detail

// --------------------------- Blahut–Arimoto -----------------------------------

// Alternating maximization with the standard certificate: at each iterate,
// sum_x p_x D(W_x||q) <= C <= max_x D(W_x||q). Stops when the sandwich is
// tighter than tol or after 1e5 iterations.
inline CapacityResult dmc_capacity(const DMC& W, double tol = 1e-6) {
    check_dmc(W);
    if (!(tol > 0.0)) throw std::invalid_argument("dmc_capacity: tol must be > 0");
    const int m = W.rows();
    Prior p = Prior::Constant(m, 1.0 / m);
    CapacityResult res;
    const long max_iter = 100000;
    for (long it = 1; it <= max_iter; ++it) {
        Eigen::VectorXd D = detail::row_divergences(p, W);
        const double lower = p.dot(D);
        const double upper = D.maxCoeff();
        res.value = lower;
        res.optimizer = p;
        res.iterations = it;
        res.gap = std::max(0.0, upper - lower);
        if (res.gap < tol) {
            res.stopped_by = "gap";
            return res;
        }
        // p <- p 2^D / Z
        Eigen::VectorXd np = p.array() * (D.array() * std::log(2.0)).exp();
        p = np / np.sum();
    }
    res.stopped_by = "iteration-cap";
    return res;
}

// --------------------------- compound minimax solver --------------------------

namespace detail {

inline double min_mi(const Prior& p, const CompoundSet& S, int* argmin = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    int bi = 0;
    for (std::size_t s = 0; s < S.size(); ++s) {
        const double v = mutual_information(p, S[s]);
        if (v < best - 1e-15) { best = v; bi = static_cast<int>(s); }
    }
    if (argmin) *argmin = bi;
    return best;
}

// Certified upper bound at prior p: every channel satisfies
// C(W_s) <= max_x D(W_x^s || q_s), and compound capacity <= min_s C(W_s).
inline double compound_upper(const Prior& p, const CompoundSet& S) {
    double u = std::numeric_limits<double>::infinity();
    for (const DMC& W : S) u = std::min(u, row_divergences(p, W).maxCoeff());
    return u;
}

// Euclidean projection onto the probability simplex: the active support is a
// prefix of the sorted entries, theta the last admissible prefix average.
inline Prior project_simplex(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = u[0] - 1.0;
    for (int i = 0; i < n; ++i) {
        css += u[i];
        const double t = (css - 1.0) / (i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    Prior p(n);
    for (int i = 0; i < n; ++i) p(i) = std::max(0.0, v(i) - theta);
    return p;
}

// Supergradient of p -> min_s I(p;W_s): gradient of I at the minimizing s is
// D(W_x||q) - I (the -I shift is constant and drops under projection); ties
// within 1e-9 are averaged uniformly for a deterministic choice.
inline Eigen::VectorXd min_mi_supergradient(const Prior& p, const CompoundSet& S) {
    std::vector<double> vals(S.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < S.size(); ++s) {
        vals[s] = mutual_information(p, S[s]);
        best = std::min(best, vals[s]);
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
    int ties = 0;
    for (std::size_t s = 0; s < S.size(); ++s) {
        if (vals[s] <= best + 1e-9) {
            grad += row_divergences(p, S[s]);
            ++ties;
        }
    }
    return grad / double(ties);
}

} // namespace detail

// max_p min_s I(p;W_s). Singletons delegate to Blahut–Arimoto. Binary inputs
// use golden-section search (the objective is concave, hence unimodal, as a
// minimum of concave functions). Larger alphabets run projected supergradient
// ascent with iterate averaging, keeping the best iterate seen.
inline CapacityResult compound_capacity(const CompoundSet& S, double tol = 1e-6) {
    check_compound_set(S);
    if (!(tol > 0.0)) throw std::invalid_argument("compound_capacity: tol must be > 0");
    const int m = S[0].rows();
    const long max_iter = 100000;

    if (S.size() == 1) {
        CapacityResult res = dmc_capacity(S[0], tol);
        res.worst_index = 0;
        return res;
    }

    CapacityResult res;
    if (m == 2) {
        auto f = [&](double t) {
            Prior p(2);
            p << t, 1.0 - t;
            return detail::min_mi(p, S);
        };
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = 0.0, hi = 1.0;
        double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        long evals = 2;
        while (hi - lo > 1e-12 && evals < max_iter) {
            if (f1 < f2) { lo = x1; x1 = x2; f1 = f2; x2 = lo + invphi * (hi - lo); f2 = f(x2); }
            else { hi = x2; x2 = x1; f2 = f1; x1 = hi - invphi * (hi - lo); f1 = f(x1); }
            ++evals;
        }
        const double t = 0.5 * (lo + hi);
        Prior p(2);
        p << t, 1.0 - t;
        res.value = detail::min_mi(p, S, &res.worst_index);
        res.optimizer = p;
        res.iterations = evals;
    } else {
        Prior p = Prior::Constant(m, 1.0 / m);
        Prior best_p = p;
        Eigen::VectorXd avg = Eigen::VectorXd::Zero(m);
        double best = detail::min_mi(p, S);
        const double eta0 = 0.25;
        long it = 1;
        for (; it <= max_iter; ++it) {
            Eigen::VectorXd grad = detail::min_mi_supergradient(p, S);
            p = detail::project_simplex(p + (eta0 / std::sqrt(double(it))) * grad);
            avg += p;
            const double v = detail::min_mi(p, S);
            if (v > best) { best = v; best_p = p; }
            if (it % 64 == 0) {
                Prior pa = avg / avg.sum();
                const double va = detail::min_mi(pa, S);
                if (va > best) { best = va; best_p = pa; }
                if (detail::compound_upper(best_p, S) - best < tol) { ++it; break; }
            }
        }
        res.value = detail::min_mi(best_p, S, &res.worst_index);
        res.optimizer = best_p;
        res.iterations = std::min(it, max_iter);
    }
    res.gap = std::max(0.0, detail::compound_upper(res.optimizer, S) - res.value);
    res.stopped_by = (res.gap < tol && res.iterations < max_iter) ? "gap" : "iteration-cap";
    return res;
}

// --------------------------- Holevo quantity ----------------------------------

// chi = H(sum_i p_i rho_i) - sum_i p_i H(rho_i) in bits.
inline double holevo_quantity(const Prior& p, const std::vector<TruncatedState>& states) {
    check_prior(p);
    if (static_cast<std::size_t>(p.size()) != states.size())
        throw std::invalid_argument("holevo_quantity: prior/state count mismatch");
    const int dim = states[0].dim;
    for (const auto& r : states)
        if (r.dim != dim) throw std::invalid_argument("holevo_quantity: state dim mismatch");
    TruncatedState mix;
    mix.dim = dim;
    mix.matrix = Matrix::Zero(dim, dim);
    double avg_h = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        mix.matrix += p(int(i)) * states[i].matrix;
        if (p(int(i)) > 0.0) avg_h += p(int(i)) * von_neumann_entropy(states[i]);
    }
    mix.captured_mass = mix.matrix.trace().real();
    return von_neumann_entropy(mix) - avg_h;
}

// --------------------------- g-formula capacities -----------------------------

// Unknown noise sigma in [A,B]: the worst state is the largest noise.
inline double gaussian_compound_capacity_noise(double A, double B, double E) {
    if (!(A >= 0.0 && B >= A)) throw std::invalid_argument("gaussian_compound_capacity_noise: need 0 <= A <= B");
    if (!(E >= 0.0)) throw std::invalid_argument("gaussian_compound_capacity_noise: E must be >= 0");
    return g(B + E) - g(B);
}

// Unknown phase: the rotation never changes the spectrum, so the capacity is
// the single-channel value at noise sigma.
inline double gaussian_compound_capacity_phase(double sigma, double E) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian_compound_capacity_phase: sigma must be >= 0");
    if (!(E >= 0.0)) throw std::invalid_argument("gaussian_compound_capacity_phase: E must be >= 0");
    return g(sigma + E) - g(sigma);
}

// Unknown attenuation s in [A,B] at fixed noise: the worst state is the
// smallest transmissivity A; sigma = 0 degenerates to g(A E).
inline double gaussian_compound_capacity_attenuation(double A, double B, double sigma, double E) {
    if (!(A >= 0.0 && B >= A && B <= 1.0))
        throw std::invalid_argument("gaussian_compound_capacity_attenuation: need 0 <= A <= B <= 1");
    if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian_compound_capacity_attenuation: sigma must be >= 0");
    if (!(E >= 0.0)) throw std::invalid_argument("gaussian_compound_capacity_attenuation: E must be >= 0");
    return g(sigma + A * E) - g(sigma);
}

// --------------------------- constellations -----------------------------------

enum class EnergyConstraint { hard_per_point, mean };

// Finite set of coherent amplitudes with a prior under an energy budget E.
// hard_per_point keeps every |point|^2 <= E (the per-letter constraint);
// mean only restricts sum_i p_i |point_i|^2 <= E.
struct Constellation {
    std::vector<Complex> points;
    Prior prior;
    double energy_budget = 0.0;
    EnergyConstraint constraint = EnergyConstraint::hard_per_point;
};

inline double mean_energy(const Constellation& con) {
    double e = 0.0;
    for (std::size_t i = 0; i < con.points.size(); ++i)
        e += con.prior(int(i)) * std::norm(con.points[i]);
    return e;
}

inline void check_constellation(const Constellation& con) {
    if (con.points.empty()) throw std::invalid_argument("check_constellation: no points");
    if (static_cast<std::size_t>(con.prior.size()) != con.points.size())
        throw std::invalid_argument("check_constellation: prior/point count mismatch");
    check_prior(con.prior);
    if (!(con.energy_budget >= 0.0))
        throw std::invalid_argument("check_constellation: energy budget must be >= 0");
    if (mean_energy(con) > con.energy_budget + 1e-9)
        throw std::invalid_argument("check_constellation: mean energy exceeds budget");
    if (con.constraint == EnergyConstraint::hard_per_point)
        for (const Complex& z : con.points)
            if (std::norm(z) > con.energy_budget + 1e-9)
                throw std::invalid_argument("check_constellation: point energy exceeds budget");
}

namespace detail {

// Gauss–Laguerre nodes/weights for \int_0^inf e^{-x} f(x) dx via the
// symmetric tridiagonal Jacobi matrix (Golub–Welsch).
inline void gauss_laguerre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = 2.0 * i + 1.0;
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = double(i + 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int k = 0; k < n; ++k) {
        nodes[k] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        weights[k] = v0 * v0;
    }
}

} // namespace detail

// Vacuum plus `rings` concentric rings of `phases` equally spaced points.
// hard_per_point: ring energies E k/rings (outermost exactly at E), uniform
// initial prior. mean: ring energies at Gauss–Laguerre nodes scaled by E
// (quadrature of the isotropic Gaussian prior), initial prior from the
// quadrature weights.
inline Constellation make_ring_constellation(double E, int rings, int phases,
                                             EnergyConstraint constraint = EnergyConstraint::hard_per_point) {
    if (!(E >= 0.0)) throw std::invalid_argument("make_ring_constellation: E must be >= 0");
    if (rings < 0 || phases < 1) throw std::invalid_argument("make_ring_constellation: bad ring/phase count");
    Constellation con;
    con.energy_budget = E;
    con.constraint = constraint;
    con.points.push_back(Complex(0.0, 0.0));
    std::vector<double> ring_e, ring_w;
    if (E > 0.0 && rings > 0) {
        if (constraint == EnergyConstraint::hard_per_point) {
            for (int k = 1; k <= rings; ++k) {
                ring_e.push_back(E * double(k) / rings);
                ring_w.push_back(1.0);
            }
        } else {
            detail::gauss_laguerre(rings, ring_e, ring_w);
            for (double& x : ring_e) x *= E;
        }
        for (std::size_t k = 0; k < ring_e.size(); ++k) {
            const double r = std::sqrt(ring_e[k]);
            for (int j = 0; j < phases; ++j) {
                const double phi = 2.0 * M_PI * j / phases;
                con.points.push_back(r * Complex(std::cos(phi), std::sin(phi)));
            }
        }
    }
    const int n = static_cast<int>(con.points.size());
    con.prior = Prior(n);
    if (constraint == EnergyConstraint::hard_per_point || ring_e.empty()) {
        con.prior.setConstant(1.0 / n);
    } else {
        // vacuum starts at zero weight; the optimizer may raise it
        con.prior(0) = 0.0;
        double wsum = 0.0;
        for (double w : ring_w) wsum += w;
        for (std::size_t k = 0; k < ring_e.size(); ++k)
            for (int j = 0; j < phases; ++j)
                con.prior(1 + int(k) * phases + j) = ring_w[k] / (wsum * phases);
    }
    return con;
}

namespace detail {

// Projection onto {p >= 0, sum p = 1, e.p <= E}: simplex projection, then if
// the energy cap binds, bisect the multiplier of the energy constraint.
inline Prior project_energy_simplex(const Eigen::VectorXd& v, const Eigen::VectorXd& e, double E) {
    Prior p = project_simplex(v);
    if (e.dot(p) <= E + 1e-9) return p;
    double lo = 0.0, hi = 1.0;
    while (e.dot(project_simplex(v - hi * e)) > E && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (e.dot(project_simplex(v - mid * e)) > E) lo = mid;
        else hi = mid;
    }
    return project_simplex(v - hi * e);
}

// d chi / d p_i at the minimizing channel: -tr(rho_i log2 rho_mix) - H(rho_i),
// up to an additive constant that projection ignores.
inline Eigen::VectorXd chi_supergradient(const Prior& p,
                                         const std::vector<TruncatedState>& states,
                                         const std::vector<double>& entropies) {
    const int dim = states[0].dim;
    Matrix mix = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < states.size(); ++i) mix += p(int(i)) * states[i].matrix;
    Eigen::SelfAdjointEigenSolver<Matrix> es(mix);
    Vector llam(dim);
    for (int k = 0; k < dim; ++k)
        llam(k) = std::log2(std::max(es.eigenvalues()(k), 1e-300));
    Matrix logmix = es.eigenvectors() * llam.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::VectorXd grad(p.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        grad(int(i)) = -(states[i].matrix * logmix).trace().real() - entropies[i];
    return grad;
}

} // namespace detail

// Optimizes the prior on a fixed constellation to maximize min_s chi over the
// given channel states; the achieved value is a lower bound on the compound
// capacity up to truncation error. Deterministic: starts from the
// constellation's own prior, projected supergradient ascent, best iterate kept.
inline double constellation_lower_bound(const std::vector<GaussianChannelParams>& params_set,
                                        const Constellation& con, int dim, long iterations = 2000) {
    if (params_set.empty()) throw std::invalid_argument("constellation_lower_bound: no channel states");
    check_constellation(con);
    if (dim < 2) throw std::invalid_argument("constellation_lower_bound: dim must be >= 2");
    const int npts = static_cast<int>(con.points.size());
    const int ns = static_cast<int>(params_set.size());

    // channel outputs and their entropies, fixed for the whole optimization;
    // gaussian_channel_output raises accuracy_error below 0.999 capture
    std::vector<std::vector<TruncatedState>> states(ns);
    std::vector<std::vector<double>> ent(ns);
    for (int s = 0; s < ns; ++s) {
        states[s].reserve(npts);
        ent[s].reserve(npts);
        for (int i = 0; i < npts; ++i) {
            states[s].push_back(gaussian_channel_output(con.points[i], params_set[s], dim));
            ent[s].push_back(von_neumann_entropy(states[s].back()));
        }
    }
    Eigen::VectorXd e(npts);
    for (int i = 0; i < npts; ++i) e(i) = std::norm(con.points[i]);

    auto chi_of = [&](const Prior& p, int s) {
        double avg = 0.0;
        Matrix mix = Matrix::Zero(dim, dim);
        for (int i = 0; i < npts; ++i) {
            mix += p(i) * states[s][i].matrix;
            avg += p(i) * ent[s][i];
        }
        TruncatedState m;
        m.dim = dim;
        m.matrix = mix;
        m.captured_mass = mix.trace().real();
        return von_neumann_entropy(m) - avg;
    };
    auto min_chi = [&](const Prior& p) {
        double best = std::numeric_limits<double>::infinity();
        for (int s = 0; s < ns; ++s) best = std::min(best, chi_of(p, s));
        return best;
    };
    auto project = [&](const Eigen::VectorXd& v) {
        if (con.constraint == EnergyConstraint::mean)
            return detail::project_energy_simplex(v, e, con.energy_budget);
        return detail::project_simplex(v);
    };

    Prior p = project(con.prior);
    double best = min_chi(p);
    const double eta0 = 0.25;
    for (long t = 1; t <= iterations; ++t) {
        // supergradient at the (tie-averaged) worst channel
        std::vector<double> vals(ns);
        double lo = std::numeric_limits<double>::infinity();
        for (int s = 0; s < ns; ++s) {
            vals[s] = chi_of(p, s);
            lo = std::min(lo, vals[s]);
        }
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(npts);
        int ties = 0;
        for (int s = 0; s < ns; ++s)
            if (vals[s] <= lo + 1e-9) {
                grad += detail::chi_supergradient(p, states[s], ent[s]);
                ++ties;
            }
        grad /= double(ties);
        p = project(p + (eta0 / std::sqrt(double(t))) * grad);
        best = std::max(best, min_chi(p));
    }
    return best;
}

} // namespace ccap
