// kennedy.hpp — Kennedy-receiver channels under compound loss: the induced
// binary DMCs, the Z-channel limit family, displacement schedules, and
// Figure-style displacement sweeps

#pragma once

#include <ccap/capacity.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ccap {

// --------------------------- configuration -----------------------------------

// Binary coherent signaling alpha_x = a (-1)^x through loss eta, displaced by
// -b at the receiver, then photodetection (outcome 0 = no click).
struct KennedyConfig {
    double a = 0.0;   // signal amplitude, > 0
    double eta = 1.0; // transmissivity, in (0,1]
    double b = 0.0;   // displacement parameter
};

enum class ScheduleKind { worst_case, balanced };

// b(a) = a - c nulls the attenuated symbol when eta = eps(a); the balanced
// variant splits the offset, b~(a) = a - c/2.
struct DisplacementSchedule {
    double c = 0.0;
    ScheduleKind kind = ScheduleKind::worst_case;
    double displacement(double a) const {
        if (!(c > 0.0)) throw std::invalid_argument("DisplacementSchedule: c must be > 0");
        return kind == ScheduleKind::worst_case ? a - c : a - 0.5 * c;
    }
};

// eps(a) = ((a-c)/a)^2, the loss that makes sqrt(eps) a = a - c.
inline double eps_schedule(double a, double c) {
    if (!(c > 0.0) || !(a > c)) throw std::invalid_argument("eps_schedule: requires a > c > 0");
    const double r = (a - c) / a;
    return r * r;
}

// --------------------------- induced channels ---------------------------------

// W(0|x) = exp(-(b - sqrt(eta) a (-1)^x)^2): no-click probability of the
// displaced coherent state. Exponents below -700 underflow double range and
// are clamped to exactly 0, matching the a -> infinity limits.
inline DMC kennedy_channel(const KennedyConfig& cfg) {
    if (!(cfg.a > 0.0)) throw std::invalid_argument("kennedy_channel: a must be > 0");
    if (!(cfg.eta > 0.0 && cfg.eta <= 1.0))
        throw std::invalid_argument("kennedy_channel: eta must be in (0,1]");
    DMC W;
    W.W.resize(2, 2);
    const double se = std::sqrt(cfg.eta);
    for (int x = 0; x < 2; ++x) {
        const double d = cfg.b - se * cfg.a * (x == 0 ? 1.0 : -1.0);
        const double ex = -d * d;
        const double p0 = ex < -700.0 ? 0.0 : std::exp(ex);
        W.W(x, 0) = p0;
        W.W(x, 1) = 1.0 - p0;
    }
    return W;
}

// w_p: input 1 passes untouched, input 0 flips to 1 with probability 1-p.
inline DMC z_channel(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("z_channel: p must be in [0,1]");
    DMC W;
    W.W.resize(2, 2);
    W.W << p, 1.0 - p,
           0.0, 1.0;
    return W;
}

// Capacity of w_p in closed form, with q = 1-p the 0 -> 1 crossover:
// C = log2(1 + (1-q) q^{q/(1-q)}). Oracle for the iterative solvers.
inline double z_channel_capacity(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("z_channel_capacity: p must be in [0,1]");
    if (p == 0.0) return 0.0; // both inputs land on output 1
    if (p == 1.0) return 1.0;
    const double q = 1.0 - p;
    return std::log2(1.0 + (1.0 - q) * std::pow(q, q / (1.0 - q)));
}

inline double frobenius_distance(const DMC& W, const DMC& V) {
    if (W.rows() != V.rows() || W.cols() != V.cols())
        throw std::invalid_argument("frobenius_distance: shape mismatch");
    return (W.W - V.W).norm();
}

// --------------------------- compound rates -----------------------------------

// C({p_{1,b}, p_{eps,b}}): the receiver fixes b, the loss is unknown.
inline CapacityResult compound_rate(double a, double eps, double b, double tol = 1e-6) {
    CompoundSet S;
    S.push_back(kennedy_channel({a, 1.0, b}));
    S.push_back(kennedy_channel({a, eps, b}));
    return compound_capacity(S, tol);
}

struct SweepRow {
    double b = 0.0;
    double cap_eta1 = 0.0;    // C({p_{1,b}})
    double cap_eps = 0.0;     // C({p_{eps,b}})
    double cap_compound = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    int argmax_index = 0; // row with the largest compound capacity
};

// Capacity columns versus displacement b; rows keep grid order.
inline SweepTable displacement_sweep(double a, double eps, const std::vector<double>& b_grid,
                                     double tol = 1e-6) {
    if (b_grid.empty()) throw std::invalid_argument("displacement_sweep: empty grid");
    SweepTable table;
    table.rows.reserve(b_grid.size());
    for (double b : b_grid) {
        SweepRow row;
        row.b = b;
        row.cap_eta1 = dmc_capacity(kennedy_channel({a, 1.0, b}), tol).value;
        row.cap_eps = dmc_capacity(kennedy_channel({a, eps, b}), tol).value;
        row.cap_compound = compound_rate(a, eps, b, tol).value;
        table.rows.push_back(row);
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].cap_compound > table.rows[table.argmax_index].cap_compound)
            table.argmax_index = static_cast<int>(i);
    return table;
}

} // namespace ccap
