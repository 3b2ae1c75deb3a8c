// acceptance.cpp — one test case per release criterion. Each case prints a
// one-line summary with the measured numbers so a red case documents exactly
// what was observed, not just that an assertion tripped.

#include "doctest.h"

#include <ccap/bounds.hpp>
#include <ccap/capacity.hpp>
#include <ccap/kennedy.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace ccap;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

const double kC = std::sqrt(std::log(2.0));

Prior uniform2() {
    Prior p(2);
    p << 0.5, 0.5;
    return p;
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    if (WIFEXITED(st)) r.code = WEXITSTATUS(st);
    return r;
}

} // namespace

TEST_CASE("criterion_01_z_channel_value") {
    Timer t;
    CapacityResult r = dmc_capacity(z_channel(0.5), 1e-8);
    const double target = std::log2(1.25);
    std::printf("criterion 01: C(w_1/2) = %.9f vs log2(5/4) = %.9f (gap %.2e), %.2f s\n",
                r.value, target, std::abs(r.value - target), t.seconds());
    CHECK(std::abs(r.value - target) <= 1e-6);
    CHECK(t.seconds() < 1.0);
}

TEST_CASE("criterion_02_compound_reduction") {
    Timer t;
    CompoundSet S{z_channel(1.0), z_channel(0.5)};
    CapacityResult r = compound_capacity(S, 1e-8);
    double grid_best = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        Prior p(2);
        p << i * 1e-4, 1.0 - i * 1e-4;
        grid_best = std::max(grid_best,
                             std::min(mutual_information(p, S[0]), mutual_information(p, S[1])));
    }
    std::printf("criterion 02: compound = %.9f, grid oracle = %.9f, %.2f s\n", r.value,
                grid_best, t.seconds());
    CHECK(std::abs(r.value - 0.321928) <= 1e-5);
    CHECK(std::abs(r.value - grid_best) <= 1e-5);
    CHECK(t.seconds() < 5.0);
}

TEST_CASE("criterion_03_kennedy_worst_case_schedule") {
    Timer t;
    const double a = 200.0;
    const double eps = eps_schedule(a, kC);
    const double b = a - kC;
    const double single = dmc_capacity(kennedy_channel({a, eps, b}), 1e-8).value;
    const double compound = compound_rate(a, eps, b, 1e-8).value;
    std::printf("criterion 03: C(p_eps,b) = %.6f, compound = %.6f, %.2f s\n", single, compound,
                t.seconds());
    CHECK(single >= 0.999);
    CHECK(compound <= 0.3230);
    CHECK(t.seconds() < 5.0);
}

TEST_CASE("criterion_04_kennedy_balanced_schedule") {
    Timer t;
    const double a = 200.0;
    const double eps = eps_schedule(a, kC);
    const double compound = compound_rate(a, eps, a - 0.5 * kC, 1e-8).value;
    const double oracle = z_channel_capacity(std::exp(-std::log(2.0) / 4.0));
    std::printf("criterion 04: compound = %.9f, Z oracle = %.9f, %.2f s\n", compound, oracle,
                t.seconds());
    CHECK(compound >= 0.625);
    CHECK(std::abs(compound - oracle) <= 1e-3);
    CHECK(t.seconds() < 5.0);
}

TEST_CASE("criterion_05_frobenius_limits") {
    Timer t;
    // family f: distance of the schedule channel at amplitude a to its limit
    // channel; exactly sqrt(2) e^{-q_f(a)^2} because the matched row agrees to
    // the last bit and only the no-click entry of the other row survives
    auto direct = [](int fam, double a) {
        const double eps = eps_schedule(a, kC);
        switch (fam) {
            case 0: return frobenius_distance(kennedy_channel({a, eps, a - kC}), z_channel(1.0));
            case 1: return frobenius_distance(kennedy_channel({a, 1.0, a - kC}), z_channel(0.5));
            case 2: return frobenius_distance(kennedy_channel({a, 1.0, a - 0.5 * kC}),
                                              z_channel(std::exp(-std::log(2.0) / 4.0)));
            default: return frobenius_distance(kennedy_channel({a, eps, a - 0.5 * kC}),
                                               z_channel(std::exp(-std::log(2.0) / 4.0)));
        }
    };
    auto q = [](int fam, double a) {
        switch (fam) {
            case 0: return 2.0 * (a - kC);
            case 1: return 2.0 * a - kC;
            case 2: return 2.0 * a - 0.5 * kC;
            default: return 2.0 * a - 1.5 * kC;
        }
    };
    // the closed form is trusted only after matching the direct evaluation
    // where the exponentials are still representable
    for (int fam = 0; fam < 4; ++fam)
        for (double a : {1.5, 2.0, 2.5}) {
            const double d = direct(fam, a);
            const double cf = std::sqrt(2.0) * std::exp(-q(fam, a) * q(fam, a));
            // 1e-15 absolute floor: forming 1 - W(0|1) rounds at ulp(1)/2,
            // which caps agreement near 4e-17 once the distance is ~1e-9
            CHECK(std::abs(d - cf) <= 1e-9 * cf + 1e-15);
        }
    // along the published ladder the raw doubles underflow to zero, so the
    // strict decrease is certified in the log domain via the validated form
    double final_logd = 0.0;
    for (int fam = 0; fam < 4; ++fam) {
        double prev = std::numeric_limits<double>::infinity();
        for (double a : {25.0, 50.0, 100.0, 200.0}) {
            const double logd = 0.5 * std::log(2.0) - q(fam, a) * q(fam, a);
            CHECK(logd < prev);
            prev = logd;
            CHECK(direct(fam, a) <= 1e-3);
        }
        final_logd = prev;
        CHECK(final_logd < std::log(1e-3));
    }
    std::printf("criterion 05: all 4 limit families strictly decreasing (log domain), "
                "final log-distance %.1f, %.2f s\n", final_logd, t.seconds());
    CHECK(t.seconds() < 1.0);
}

TEST_CASE("criterion_06_gaussian_tail_bound") {
    Timer t;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> Ed(0.0, 4.0), sd(0.1, 2.0), Epd(0.1, 4.0),
        u(0.0, 1.0), ang(0.0, 2.0 * M_PI);
    int violations = 0, shifted_violations = 0;
    double worst_ratio = 0.0, worst_E = 0.0, worst_Ep = 0.0, worst_s = 0.0, worst_a = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double E = Ed(rng);
        const Complex alpha = std::polar(std::sqrt(u(rng) * E), ang(rng));
        const double Ep = Epd(rng), s = sd(rng);
        TailBoundReport r = gaussian_tail(E, Ep, s, alpha);
        if (!r.satisfied) {
            ++violations;
            if (r.exact / r.bound > worst_ratio) {
                worst_ratio = r.exact / r.bound;
                worst_E = E;
                worst_Ep = Ep;
                worst_s = s;
                worst_a = std::abs(alpha);
            }
        }
        if (!r.shifted_satisfied) ++shifted_violations;
    }
    std::printf("criterion 06: %d/200 samples exceed exp(-E'/sigma); worst exact/bound = %.3g "
                "at (E=%.3f, E'=%.3f, sigma=%.3f, |alpha|=%.3f); shifted-bound violations: %d; "
                "%.2f s\n",
                violations, worst_ratio, worst_E, worst_Ep, worst_s, worst_a, shifted_violations,
                t.seconds());
    // the stated inequality drops the cross term 2 sqrt(E E') and genuinely
    // fails off-center; recorded as an honest failure, with the always-true
    // shifted bound reported alongside
    CHECK(violations == 0);
    CHECK(shifted_violations == 0);
    CHECK(t.seconds() < 30.0);
}

TEST_CASE("criterion_07_coherent_capture_bound") {
    Timer t;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> Nd(1, 64);
    std::uniform_real_distribution<double> u(0.0, 1.0), ang(0.0, 2.0 * M_PI);
    int fails = 0;
    for (int i = 0; i < 200; ++i) {
        const int N = Nd(rng);
        const Complex alpha = std::polar(std::sqrt(u(rng) * 0.5 * (N + 1)), ang(rng));
        if (coherent_capture(alpha, N) < coherent_capture_lower_bound(alpha, N) - 1e-14) ++fails;
    }
    const int N = 17;
    const double trace_pn = Eigen::MatrixXcd::Identity(N, N).trace().real();
    std::printf("criterion 07: %d/200 capture samples below the bound; tr(P_%d) = %g; %.2f s\n",
                fails, N, trace_pn, t.seconds());
    CHECK(fails == 0);
    CHECK(trace_pn == double(N));
    CHECK(t.seconds() < 5.0);
}

TEST_CASE("criterion_08_channel_capture") {
    Timer t;
    int failing_cells = 0;
    for (double sigma : {0.1, 0.5, 1.0})
        for (int N : {20, 40}) {
            const double bound = std::pow(1.0 - std::exp(-double(N)), 2.0) - 1e-9;
            for (double aa : {0.0, 0.5, 1.0}) {
                GaussianChannelParams p{sigma, 1.0, 0.0};
                const double captured = gaussian_channel_output(Complex(aa, 0.0), p, N).captured_mass;
                const double margin = captured - bound;
                if (margin < 0.0) {
                    ++failing_cells;
                    std::printf("criterion 08: sigma=%.1f N=%d |alpha|=%.1f captured=%.12f "
                                "deficit=%.3g\n", sigma, N, aa, captured, -margin);
                }
            }
        }
    std::printf("criterion 08: %d/18 cells below (1-e^-N)^2 - 1e-9; %.2f s\n", failing_cells,
                t.seconds());
    // the thermal tail (sigma/(sigma+1))^N dominates 2e^{-N} once sigma is
    // moderate, so the quoted bound is unattainable in those cells; honest red
    CHECK(failing_cells == 0);
    CHECK(t.seconds() < 60.0);
}

TEST_CASE("criterion_09_energy_identity") {
    Timer t;
    double worst = 0.0;
    for (double sigma : {0.1, 0.5, 1.0})
        for (double s : {0.25, 0.5, 1.0})
            for (double aa : {0.0, 1.0, 1.5}) {
                GaussianChannelParams p{sigma, s, 0.0};
                TruncatedState rho = gaussian_channel_output(Complex(aa, 0.0), p, 100);
                const double expect = sigma + s * aa * aa;
                worst = std::max(worst, std::abs(mean_photon_number(rho) - expect));
            }
    std::printf("criterion 09: worst |mean - (sigma + s|alpha|^2)| = %.3g over 27 cells, %.2f s\n",
                worst, t.seconds());
    CHECK(worst <= 1e-4);
    CHECK(t.seconds() < 60.0);
}

TEST_CASE("criterion_10_entropy_g_consistency") {
    Timer t;
    double worst_thermal = 0.0;
    for (double sigma : {0.5, 1.0, 2.0})
        worst_thermal = std::max(worst_thermal,
                                 std::abs(von_neumann_entropy(thermal_state(sigma, 400)) - g(sigma)));
    double worst_disp = 0.0;
    const int dims[] = {40, 80, 170};
    const double amps[] = {0.0, 1.0, 2.0};
    for (int i = 0; i < 3; ++i) {
        GaussianChannelParams p{0.5, 1.0, 0.0};
        TruncatedState rho = gaussian_channel_output(Complex(amps[i], 0.0), p, dims[i]);
        worst_disp = std::max(worst_disp, std::abs(von_neumann_entropy(rho) - g(0.5)));
    }
    std::printf("criterion 10: worst |S(thermal) - g| = %.3g, worst displaced deviation = %.3g, "
                "%.2f s\n", worst_thermal, worst_disp, t.seconds());
    CHECK(worst_thermal <= 1e-4);
    CHECK(worst_disp <= 1e-4);
}

TEST_CASE("criterion_11_constellation_convergence") {
    Timer t;
    const double target = g(1.5) - g(0.5);
    Constellation con = make_ring_constellation(1.0, 3, 8, EnergyConstraint::hard_per_point);
    GaussianChannelParams base{0.5, 1.0, 0.0};
    const double lb = constellation_lower_bound({base}, con, 60, 2000);

    std::vector<GaussianChannelParams> phases;
    for (int j = 0; j < 8; ++j) phases.push_back({0.5, 1.0, 2.0 * M_PI * j / 8.0});
    const double lb_compound = constellation_lower_bound(phases, con, 60, 2000);

    std::printf("criterion 11: lower bound = %.9f (%.2f%% of target %.9f); phase-compound "
                "delta = %.3g; %.1f s\n", lb, 100.0 * lb / target, target,
                std::abs(lb_compound - lb), t.seconds());
    CHECK(lb >= 0.95 * target);
    CHECK(lb <= target + 1e-3);
    CHECK(std::abs(lb_compound - lb) < 1e-3);
    CHECK(t.seconds() < 600.0);
}

TEST_CASE("criterion_12_scaling_predicate") {
    Timer t;
    long long kstar = -1;
    for (int j = 2; j <= 30; ++j)
        if (scaling_w(1LL << j, 1.0) < 0.01) { kstar = 1LL << j; break; }
    bool decreasing = true;
    double prev = scaling_w(16, 1.0);
    for (int j = 5; j <= 30; ++j) {
        const double w = scaling_w(1LL << j, 1.0);
        if (w >= prev) decreasing = false;
        prev = w;
    }
    std::printf("criterion 12: first power of two with w < 0.01 is 2^%d; decreasing beyond peak: "
                "%s; %.2f s\n", kstar > 0 ? int(std::log2(double(kstar))) : -1,
                decreasing ? "yes" : "no", t.seconds());
    CHECK(kstar > 0);
    CHECK(kstar <= (1LL << 30));
    CHECK(decreasing);
    CHECK(t.seconds() < 1.0);
}

TEST_CASE("criterion_13_heavy_tail_counterexample") {
    Timer t;
    for (int N : {100, 1000, 10000}) {
        const double ratio = (1.0 - heavy_tail_capture(N)) * double(N) * N;
        std::printf("criterion 13: N=%d ratio=%.6f\n", N, ratio);
        CHECK(ratio >= 0.3);
        CHECK(ratio <= 0.7);
    }
    std::printf("criterion 13: mean energy = %.6f, %.2f s\n", heavy_tail_mean_energy(),
                t.seconds());
    CHECK(t.seconds() < 5.0);
}

TEST_CASE("criterion_14_cli_golden") {
    Timer t;
    {
        std::ofstream f("acceptance_channels.json");
        f << R"({"channels": [[[1, 0], [0, 1]], [[0.5, 0.5], [0, 1]]]})";
    }
    const std::string goldens[] = {
        "gcap noise --A 0 --B 1 --energy 1 --format json",
        "compound --file acceptance_channels.json --format json",
        "kennedy-sweep --a 200 --bmin 199.4 --bmax 199.8 --steps 3 --format json",
        "verify scaling --format json",
        "constellation --sigma 0.5 --energy 1 --dim 16 --rings 1 --phases 4 --iterations 40 "
        "--format json",
    };
    for (const std::string& args : goldens) {
        RunResult r1 = run_cli(args), r2 = run_cli(args);
        CAPTURE(args);
        CHECK(r1.code == 0);
        CHECK(r1.out == r2.out);
        CHECK(!r1.out.empty());
    }
    // documented exit codes on malformed input
    {
        std::ofstream f("acceptance_bad_rows.json");
        f << R"({"channels": [[[0.6, 0.6], [0, 1]]]})";
    }
    const int usage = run_cli("gcap noise --A 0 --B 1 --energy 1 --bogus 1").code;
    const int domain_rows = run_cli("compound --file acceptance_bad_rows.json").code;
    const int domain_range = run_cli("kennedy-sweep --bmin 5 --bmax 4").code;
    std::printf("criterion 14: goldens byte-identical; malformed exits = %d/%d/%d "
                "(want 2/1/1); %.2f s\n", usage, domain_rows, domain_range, t.seconds());
    CHECK(usage == 2);
    CHECK(domain_rows == 1);
    CHECK(domain_range == 1);
    CHECK(t.seconds() < 120.0);
}
