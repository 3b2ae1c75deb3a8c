// ccap_cli.cpp — command-line surface for the compound-channel toolkit:
// closed-form Gaussian capacities, the classical compound solver, Kennedy
// displacement sweeps, property-suite verification, and constellation bounds.
// Exit codes: 0 success, 1 domain/accuracy error, 2 usage error.

#include <ccap/bounds.hpp>
#include <ccap/capacity.hpp>
#include <ccap/kennedy.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;

namespace {

// ---- formatting helpers ----

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void deliver(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("deliver: cannot open " + out_path);
    f << text;
}

std::string render_text(const json& doc) {
    std::string s;
    s += "resolved config:\n";
    for (const auto& [k, v] : doc.at("resolved_config").items())
        s += "  " + k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    for (const auto& [k, v] : doc.items()) {
        if (k == "resolved_config") continue;
        s += k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
    return s;
}

void emit(const json& doc, const std::string& format, const std::string& out_path) {
    if (format == "json") deliver(doc.dump(2) + "\n", out_path);
    else deliver(render_text(doc), out_path);
}

// ---- gcap ----

struct GcapArgs {
    double A = 0.0, B = 0.0, sigma = 0.0, energy = 0.0;
    std::string format = "text", out;
};

int run_gcap(const std::string& kind, const GcapArgs& a) {
    json doc;
    doc["kind"] = kind;
    double value = 0.0;
    std::string formula;
    json params;
    if (kind == "noise") {
        value = ccap::gaussian_compound_capacity_noise(a.A, a.B, a.energy);
        params = {{"A", a.A}, {"B", a.B}, {"energy", a.energy}};
        formula = "g(B+E) - g(B) = g(" + fmt12(a.B + a.energy) + ") - g(" + fmt12(a.B) + ")";
    } else if (kind == "phase") {
        value = ccap::gaussian_compound_capacity_phase(a.sigma, a.energy);
        params = {{"sigma", a.sigma}, {"energy", a.energy}};
        formula = "g(sigma+E) - g(sigma) = g(" + fmt12(a.sigma + a.energy) + ") - g(" +
                  fmt12(a.sigma) + ")";
    } else {
        value = ccap::gaussian_compound_capacity_attenuation(a.A, a.B, a.sigma, a.energy);
        params = {{"A", a.A}, {"B", a.B}, {"sigma", a.sigma}, {"energy", a.energy}};
        formula = "g(sigma+A*E) - g(sigma) = g(" + fmt12(a.sigma + a.A * a.energy) + ") - g(" +
                  fmt12(a.sigma) + ")";
    }
    doc["params"] = params;
    doc["capacity_bits"] = value;
    doc["formula"] = formula;
    json rc = params;
    rc["kind"] = kind;
    rc["format"] = a.format;
    rc["out"] = a.out;
    doc["resolved_config"] = rc;
    emit(doc, a.format, a.out);
    return 0;
}

// ---- compound ----

struct CompoundArgs {
    std::string file;
    double tol = 1e-6;
    std::string format = "text", out;
};

ccap::CompoundSet load_channels(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("compound: cannot open " + path);
    json doc = json::parse(f); // malformed JSON raises parse_error -> exit 1
    if (!doc.contains("channels") || !doc["channels"].is_array() || doc["channels"].empty())
        throw std::invalid_argument("compound: expected nonempty \"channels\" array");
    ccap::CompoundSet S;
    for (std::size_t s = 0; s < doc["channels"].size(); ++s) {
        const json& ch = doc["channels"][s];
        if (!ch.is_array() || ch.empty() || !ch[0].is_array())
            throw std::invalid_argument("compound: channel " + std::to_string(s) +
                                        " is not a matrix");
        const std::size_t cols = ch[0].size();
        ccap::DMC W;
        W.W.resize(static_cast<int>(ch.size()), static_cast<int>(cols));
        for (std::size_t x = 0; x < ch.size(); ++x) {
            if (!ch[x].is_array() || ch[x].size() != cols)
                throw std::invalid_argument("compound: channel " + std::to_string(s) + " row " +
                                            std::to_string(x) + " has inconsistent length");
            for (std::size_t y = 0; y < cols; ++y)
                W.W(int(x), int(y)) = ch[x][y].get<double>();
        }
        try {
            ccap::check_dmc(W);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("compound: channel " + std::to_string(s) + ": " + e.what());
        }
        S.push_back(std::move(W));
    }
    ccap::check_compound_set(S); // names the channel on shape mismatch
    return S;
}

int run_compound(const CompoundArgs& a) {
    ccap::CompoundSet S = load_channels(a.file);
    ccap::CapacityResult res = ccap::compound_capacity(S, a.tol);
    json doc;
    doc["value_bits"] = res.value;
    std::vector<double> prior(res.optimizer.data(), res.optimizer.data() + res.optimizer.size());
    doc["optimizer"] = prior;
    doc["worst_index"] = res.worst_index;
    doc["gap"] = res.gap;
    doc["iterations"] = res.iterations;
    doc["stopped_by"] = res.stopped_by;
    doc["resolved_config"] = {{"file", a.file}, {"tol", a.tol}, {"channels", S.size()},
                              {"format", a.format}, {"out", a.out}};
    emit(doc, a.format, a.out);
    return 0;
}

// ---- kennedy-sweep ----

struct SweepArgs {
    double a = 200.0;
    double eps = -1.0; // < 0: use the schedule value ((a-c)/a)^2 with c = sqrt(ln 2)
    double bmin = 198.0, bmax = 200.5;
    int steps = 251;
    double tol = 1e-6;
    std::string format = "csv", out;
};

int run_sweep(const SweepArgs& a) {
    if (!(a.bmin < a.bmax)) throw std::invalid_argument("kennedy-sweep: need bmin < bmax");
    if (a.steps < 2) throw std::invalid_argument("kennedy-sweep: need steps >= 2");
    const double c = std::sqrt(std::log(2.0));
    const double eps_sched = ccap::eps_schedule(a.a, c);
    const double eps = a.eps < 0.0 ? eps_sched : a.eps;
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("kennedy-sweep: eps must be in (0,1]");

    std::vector<double> grid(a.steps);
    for (int i = 0; i < a.steps; ++i)
        grid[i] = a.bmin + i * (a.bmax - a.bmin) / (a.steps - 1);
    ccap::SweepTable table = ccap::displacement_sweep(a.a, eps, grid, a.tol);
    const ccap::SweepRow& peak = table.rows[table.argmax_index];

    json rc = {{"a", a.a}, {"eps", eps}, {"bmin", a.bmin}, {"bmax", a.bmax},
               {"steps", a.steps}, {"tol", a.tol}, {"format", a.format}, {"out", a.out},
               // both readings of the schedule loss, so runs against the
               // squared form and the raw ratio stay distinguishable
               {"eps_schedule_squared", eps_sched},
               {"eps_schedule_unsquared", (a.a - c) / a.a}};

    std::string summary;
    summary += "resolved config:";
    for (const auto& [k, v] : rc.items()) summary += " " + k + "=" + v.dump();
    summary += "\n";
    summary += "argmax: b = " + fmt12(peak.b) + ", compound capacity = " +
               fmt12(peak.cap_compound) + " bits\n";
    summary += "schedule displacements: a - c = " + fmt12(a.a - c) + ", a - c/2 = " +
               fmt12(a.a - 0.5 * c) + "\n";

    if (a.format == "json") {
        json doc;
        json rows = json::array();
        for (const ccap::SweepRow& r : table.rows)
            rows.push_back({{"b", r.b}, {"cap_eta1", r.cap_eta1}, {"cap_eps", r.cap_eps},
                            {"cap_compound", r.cap_compound}});
        doc["rows"] = rows;
        doc["argmax_b"] = peak.b;
        doc["argmax_compound"] = peak.cap_compound;
        doc["resolved_config"] = rc;
        deliver(doc.dump(2) + "\n", a.out);
        return 0;
    }
    std::string csv = "b,cap_eta1,cap_eps,cap_compound\n";
    for (const ccap::SweepRow& r : table.rows)
        csv += fmt12(r.b) + "," + fmt12(r.cap_eta1) + "," + fmt12(r.cap_eps) + "," +
               fmt12(r.cap_compound) + "\n";
    if (a.out.empty()) {
        std::cout << csv;       // keep stdout valid CSV
        std::cerr << summary;
    } else {
        deliver(csv, a.out);
        std::cout << summary;
    }
    return 0;
}

// ---- verify ----

struct VerifyArgs {
    std::string suite;
    unsigned long seed = 7;
    std::string format = "text", out;
};

struct Check {
    std::string name;
    double exact = 0.0, bound = 0.0;
    bool satisfied = false;
    bool has_shifted = false;
    double shifted_bound = 0.0;
    bool shifted_satisfied = false;
};

std::vector<Check> verify_bounds(unsigned long seed) {
    std::vector<Check> checks;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> Ed(0.1, 4.0), sd(0.1, 2.0), Epd(0.1, 4.0),
        u(0.0, 1.0), ang(0.0, 2.0 * M_PI);
    for (int i = 0; i < 40; ++i) {
        const double E = Ed(rng);
        const ccap::Complex alpha = std::polar(std::sqrt(u(rng) * E), ang(rng));
        ccap::TailBoundReport r = ccap::gaussian_tail(E, Epd(rng), sd(rng), alpha);
        Check c;
        c.name = "gaussian-tail/" + std::to_string(i);
        c.exact = r.exact;
        c.bound = r.bound;
        c.satisfied = r.satisfied;
        c.has_shifted = true;
        c.shifted_bound = r.shifted_bound;
        c.shifted_satisfied = r.shifted_satisfied;
        checks.push_back(c);
    }
    std::uniform_int_distribution<int> Nd(1, 64);
    for (int i = 0; i < 40; ++i) {
        const int N = Nd(rng);
        const ccap::Complex alpha = std::polar(std::sqrt(u(rng) * 0.5 * (N + 1)), ang(rng));
        Check c;
        c.name = "coherent-capture/" + std::to_string(i);
        c.exact = ccap::coherent_capture(alpha, N);
        c.bound = ccap::coherent_capture_lower_bound(alpha, N);
        c.satisfied = c.exact >= c.bound - 1e-14;
        checks.push_back(c);
    }
    for (double E : {0.5, 1.0, 2.0, 4.0}) {
        Check c;
        c.name = "capture-threshold/E=" + fmt12(E);
        c.exact = ccap::verified_capture_threshold(E);
        c.bound = ccap::stirling_threshold(E);
        c.satisfied = c.exact >= 1.0;
        checks.push_back(c);
    }
    return checks;
}

std::vector<Check> verify_scaling() {
    std::vector<Check> checks;
    long long kstar = -1;
    for (int j = 2; j <= 30; ++j)
        if (ccap::scaling_w(1LL << j, 1.0) < 0.01) { kstar = 1LL << j; break; }
    Check exist;
    exist.name = "scaling/first-power-of-two-below-0.01";
    exist.exact = double(kstar);
    exist.bound = double(1LL << 30);
    exist.satisfied = kstar > 0;
    checks.push_back(exist);
    double prev = ccap::scaling_w(16, 1.0);
    bool mono = true;
    for (int j = 5; j <= 30; ++j) {
        const double w = ccap::scaling_w(1LL << j, 1.0);
        if (w >= prev) mono = false;
        prev = w;
    }
    Check dec;
    dec.name = "scaling/decreasing-beyond-peak";
    dec.exact = prev;
    dec.bound = ccap::scaling_w(16, 1.0);
    dec.satisfied = mono;
    checks.push_back(dec);
    for (int j = 4; j <= 30; j += 2) {
        Check c;
        c.name = "scaling/w(2^" + std::to_string(j) + ")";
        c.exact = ccap::scaling_w(1LL << j, 1.0);
        c.bound = kstar > 0 && (1LL << j) >= kstar ? 0.01 : 1e9;
        c.satisfied = c.exact < c.bound;
        checks.push_back(c);
    }
    return checks;
}

std::vector<Check> verify_limits() {
    std::vector<Check> checks;
    const double c = std::sqrt(std::log(2.0));
    // each family's Frobenius distance to its limit is sqrt(2) e^{-q(a)^2}
    // exactly (the no-click row matches the limit bit-for-bit); validated
    // against the direct matrix norm where it does not underflow
    auto dist_small = [&](int fam, double a) {
        const double eps = ccap::eps_schedule(a, c);
        switch (fam) {
            case 0: return ccap::frobenius_distance(ccap::kennedy_channel({a, eps, a - c}),
                                                    ccap::z_channel(1.0));
            case 1: return ccap::frobenius_distance(ccap::kennedy_channel({a, 1.0, a - c}),
                                                    ccap::z_channel(0.5));
            case 2: return ccap::frobenius_distance(ccap::kennedy_channel({a, 1.0, a - 0.5 * c}),
                                                    ccap::z_channel(std::exp(-std::log(2.0) / 4.0)));
            default: return ccap::frobenius_distance(ccap::kennedy_channel({a, eps, a - 0.5 * c}),
                                                     ccap::z_channel(std::exp(-std::log(2.0) / 4.0)));
        }
    };
    auto qval = [&](int fam, double a) {
        switch (fam) {
            case 0: return 2.0 * (a - c);
            case 1: return 2.0 * a - c;
            case 2: return 2.0 * a - 0.5 * c;
            default: return 2.0 * a - 1.5 * c;
        }
    };
    const char* names[] = {"eps-b-to-w1", "eta1-b-to-w-half", "eta1-bt-to-w-2^-1/4",
                           "eps-bt-to-w-2^-1/4"};
    for (int fam = 0; fam < 4; ++fam) {
        for (double a : {1.5, 2.0, 2.5}) {
            const double direct = dist_small(fam, a);
            const double q = qval(fam, a);
            const double closed = std::sqrt(2.0) * std::exp(-q * q);
            Check c1;
            c1.name = std::string("limits/") + names[fam] + "/closed-form-at-a=" + fmt12(a);
            c1.exact = direct;
            c1.bound = closed;
            // absolute floor: forming 1 - W(0|1) rounds at ulp(1)/2, which
            // caps achievable agreement near 4e-17 when the distance is ~1e-9
            c1.satisfied = std::abs(direct - closed) <= 1e-9 * closed + 1e-15;
            checks.push_back(c1);
        }
        // log-domain distances over the published amplitude ladder; the raw
        // doubles underflow to zero well before a = 25
        double prev_logd = std::numeric_limits<double>::infinity();
        bool strict = true;
        double final_logd = 0.0;
        for (double a : {25.0, 50.0, 100.0, 200.0}) {
            const double q = qval(fam, a);
            final_logd = 0.5 * std::log(2.0) - q * q;
            if (!(final_logd < prev_logd)) strict = false;
            prev_logd = final_logd;
        }
        Check c2;
        c2.name = std::string("limits/") + names[fam] + "/strictly-decreasing";
        c2.exact = final_logd;
        c2.bound = std::log(1e-3);
        c2.satisfied = strict && final_logd < std::log(1e-3);
        checks.push_back(c2);
    }
    return checks;
}

int run_verify(const VerifyArgs& a) {
    std::vector<Check> checks;
    if (a.suite == "bounds") checks = verify_bounds(a.seed);
    else if (a.suite == "scaling") checks = verify_scaling();
    else checks = verify_limits();
    int failed = 0;
    json arr = json::array();
    for (const Check& c : checks) {
        if (!c.satisfied) ++failed;
        json j = {{"name", c.name}, {"exact", c.exact}, {"bound", c.bound},
                  {"satisfied", c.satisfied}};
        if (c.has_shifted) {
            j["shifted_bound"] = c.shifted_bound;
            j["shifted_satisfied"] = c.shifted_satisfied;
        }
        arr.push_back(j);
    }
    json doc;
    doc["suite"] = a.suite;
    doc["checks"] = arr;
    doc["failed"] = failed;
    doc["resolved_config"] = {{"suite", a.suite}, {"seed", a.seed}, {"format", a.format},
                              {"out", a.out}};
    if (a.format == "json") {
        deliver(doc.dump(2) + "\n", a.out);
    } else {
        std::string s = "resolved config: suite=" + a.suite + " seed=" + std::to_string(a.seed) + "\n";
        for (const Check& c : checks) {
            s += (c.satisfied ? "  ok   " : "  FAIL ") + c.name +
                 ": exact=" + fmt12(c.exact) + " bound=" + fmt12(c.bound);
            if (c.has_shifted)
                s += " shifted_bound=" + fmt12(c.shifted_bound) +
                     (c.shifted_satisfied ? " (shifted ok)" : " (shifted FAIL)");
            s += "\n";
        }
        s += "failed: " + std::to_string(failed) + " of " + std::to_string(checks.size()) + "\n";
        deliver(s, a.out);
    }
    return failed == 0 ? 0 : 1;
}

// ---- constellation ----

struct ConArgs {
    double sigma = 0.5, energy = 1.0;
    int dim = 60, rings = 3, phases = 8;
    long iterations = 2000;
    std::string mode = "hard", format = "text", out;
};

int run_constellation(const ConArgs& a) {
    if (a.dim < 16) throw std::invalid_argument("constellation: dim must be >= 16");
    const ccap::EnergyConstraint mode = a.mode == "mean" ? ccap::EnergyConstraint::mean
                                                         : ccap::EnergyConstraint::hard_per_point;
    ccap::Constellation con = ccap::make_ring_constellation(a.energy, a.rings, a.phases, mode);
    ccap::GaussianChannelParams params{a.sigma, 1.0, 0.0};
    const double lb = ccap::constellation_lower_bound({params}, con, a.dim, a.iterations);
    const double target = ccap::g(a.sigma + a.energy) - ccap::g(a.sigma);
    const double gap = target > 0.0 ? (target - lb) / target : 0.0;
    json doc;
    doc["lower_bound_bits"] = lb;
    doc["target_bits"] = target;
    doc["relative_gap"] = gap;
    doc["points"] = con.points.size();
    doc["resolved_config"] = {{"sigma", a.sigma}, {"energy", a.energy}, {"dim", a.dim},
                              {"rings", a.rings}, {"phases", a.phases}, {"mode", a.mode},
                              {"iterations", a.iterations}, {"format", a.format}, {"out", a.out}};
    emit(doc, a.format, a.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compound-channel capacity toolkit"};
    app.require_subcommand(1);

    GcapArgs ga;
    CLI::App* gcap = app.add_subcommand("gcap", "closed-form Gaussian compound capacities");
    gcap->require_subcommand(1);
    CLI::App* gnoise = gcap->add_subcommand("noise", "unknown noise sigma in [A,B]");
    gnoise->add_option("--A", ga.A, "noise interval lower end")->required();
    gnoise->add_option("--B", ga.B, "noise interval upper end")->required();
    gnoise->add_option("--energy", ga.energy, "input energy budget E")->required();
    CLI::App* gphase = gcap->add_subcommand("phase", "unknown phase at fixed noise");
    gphase->add_option("--sigma", ga.sigma, "thermal noise")->required();
    gphase->add_option("--energy", ga.energy, "input energy budget E")->required();
    CLI::App* gatten = gcap->add_subcommand("atten", "unknown attenuation in [A,B]");
    gatten->add_option("--A", ga.A, "attenuation lower end")->required();
    gatten->add_option("--B", ga.B, "attenuation upper end")->required();
    gatten->add_option("--sigma", ga.sigma, "thermal noise")->required();
    gatten->add_option("--energy", ga.energy, "input energy budget E")->required();
    for (CLI::App* sub : {gnoise, gphase, gatten}) {
        sub->add_option("--format", ga.format)->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--out", ga.out, "write the report to this path");
    }

    CompoundArgs ca;
    CLI::App* comp = app.add_subcommand("compound", "minimax capacity of a finite channel set");
    comp->add_option("--file", ca.file, "JSON file with a \"channels\" array")->required();
    comp->add_option("--tol", ca.tol, "certificate tolerance in bits");
    comp->add_option("--format", ca.format)->check(CLI::IsMember({"text", "json"}));
    comp->add_option("--out", ca.out);

    SweepArgs sa;
    CLI::App* sweep = app.add_subcommand("kennedy-sweep", "capacity columns versus displacement");
    sweep->add_option("--a", sa.a, "signal amplitude");
    sweep->add_option("--eps", sa.eps, "compound loss (default: schedule value ((a-c)/a)^2)");
    sweep->add_option("--bmin", sa.bmin, "displacement grid start");
    sweep->add_option("--bmax", sa.bmax, "displacement grid end");
    sweep->add_option("--steps", sa.steps, "grid points (>= 2)");
    sweep->add_option("--tol", sa.tol, "capacity solver tolerance");
    sweep->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", sa.out, "write the table to this path");

    VerifyArgs va;
    CLI::App* ver = app.add_subcommand("verify", "run a property suite; nonzero exit on failure");
    ver->add_option("suite", va.suite, "bounds, scaling, or limits")
        ->required()->check(CLI::IsMember({"bounds", "scaling", "limits"}));
    ver->add_option("--seed", va.seed, "sample seed for the bounds suite");
    ver->add_option("--format", va.format)->check(CLI::IsMember({"text", "json"}));
    ver->add_option("--out", va.out);

    ConArgs na;
    CLI::App* con = app.add_subcommand("constellation", "coherent-constellation lower bound");
    con->add_option("--sigma", na.sigma, "thermal noise");
    con->add_option("--energy", na.energy, "energy budget E");
    con->add_option("--dim", na.dim, "Fock truncation (>= 16)");
    con->add_option("--rings", na.rings, "number of amplitude rings");
    con->add_option("--phases", na.phases, "points per ring");
    con->add_option("--iterations", na.iterations, "prior-ascent iterations");
    con->add_option("--mode", na.mode)->check(CLI::IsMember({"hard", "mean"}));
    con->add_option("--format", na.format)->check(CLI::IsMember({"text", "json"}));
    con->add_option("--out", na.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // help exits 0, any usage error exits 2
    }

    try {
        if (gnoise->parsed()) return run_gcap("noise", ga);
        if (gphase->parsed()) return run_gcap("phase", ga);
        if (gatten->parsed()) return run_gcap("atten", ga);
        if (comp->parsed()) return run_compound(ca);
        if (sweep->parsed()) return run_sweep(sa);
        if (ver->parsed()) return run_verify(va);
        if (con->parsed()) return run_constellation(na);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
