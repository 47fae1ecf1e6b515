// Acceptance suite. Usage: qrm_acceptance [criterion ...]; no arguments runs all.
// Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

#include "qrm/cycle.hpp"
#include "qrm/eigen.hpp"
#include "qrm/format.hpp"
#include "qrm/model.hpp"
#include "qrm/scan.hpp"
#include "qrm/splitting.hpp"
#include "qrm_cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace qrm;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> g2_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(0.8 + 0.005 * i);
    return grid;
}

SweepPlan figure_plan(double ratio, double theta) {
    SweepPlan plan;
    plan.variable = SweepVariable::g2;
    plan.grid = g2_grid();
    plan.base.g1 = 0.2;
    plan.base.ratio = ratio;
    plan.base.backend = Backend::spectral;
    plan.theta_cold = theta;
    plan.hot_fraction = 0.1;
    return plan;
}

// Normal-phase specs spanning the ranges of the bound and consistency criteria.
std::vector<CycleSpec> normal_phase_grid() {
    std::vector<CycleSpec> specs;
    for (double g1 : {0.1, 0.4, 0.7})
        for (double g2 : {0.8, 0.9, 0.99, 1.0 - 1e-4, 1.0 - 1e-6})
            for (double theta : {1e-5, 1e-4, 1e-3, 1e-2})
                for (double frac : {0.01, 0.1, 0.5}) {
                    CycleSpec spec;
                    spec.g1 = g1;
                    spec.g2 = g2;
                    spec.ratio = 400.0;
                    spec.t_cold = theta * spec.ratio;
                    spec.t_hot = spec.t_cold * (1.0 + frac);
                    specs.push_back(spec);
                }
    return specs;
}

Outcome criterion_1() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto values = eigh(build_hamiltonian(ModelParams(2.0, 0.0), Truncation(3))).values;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double expected[] = {-1, 0, 1, 1, 2, 2, 3, 4};
    double worst = 0.0;
    for (int i = 0; i < 8; ++i)
        worst = std::max(worst, std::abs(values[i] - expected[i]) / std::max(1.0, std::abs(expected[i])));
    o.require(values.size() == 8 && worst <= 1e-9, "n_max=3 spectrum {-1,0,1,1,2,2,3,4}, max rel err " + num(worst));
    o.require(seconds < 1.0, "runtime " + num(seconds) + " s < 1 s");
    return o;
}

Outcome criterion_2() {
    Outcome o;
    const double ratio = 400.0, t = 1e-4 * ratio;
    CycleSpec spec;
    spec.ratio = ratio;
    spec.t_cold = spec.t_hot = t;
    double worst_u = 0.0, worst_s = 0.0;
    int worst_n = 0;
    for (double g : {0.2, 0.5, 0.8}) {
        const auto spectrum = thermal_spectrum(spec, g);
        const ThermoState s = spectral_state(spectrum->energies, 1.0 / t);
        const ThermoState a = analytic_state(effective_ground_energy(g, Phase::normal, ModelParams(ratio, g)),
                                             effective_excitation(g, Phase::normal), 1.0 / t);
        worst_u = std::max(worst_u, std::abs(s.excitation - a.excitation));
        worst_s = std::max(worst_s, std::abs(s.entropy - a.entropy));
        worst_n = std::max(worst_n, spectrum->n_max_used);
        o.require(spectrum->converged, "g=" + num(g) + " converged");
    }
    o.require(worst_u < 1e-3, "max |dU-E0| " + num(worst_u) + " < 1e-3");
    o.require(worst_s < 1e-3, "max |dS| " + num(worst_s) + " < 1e-3");
    o.require(worst_n <= 1024, "n_max_used " + std::to_string(worst_n) + " <= 1024");
    return o;
}

struct SweepSummary {
    double theta = 0.0;
    double g_m = 0.0;
    double argmax = 0.0;
    double deficit = 0.0;  // (eta_C - max eta) / eta_C
    bool rising = true;
    double steepest = 0.0;  // largest d(eta/eta_C)/dg2 up to g_m
};

SweepSummary summarise(const SweepPlan& plan, const std::vector<CycleResult>& rows) {
    SweepSummary s;
    s.theta = plan.theta_cold;
    const MaximumLocation m = locate_gm(plan.grid, rows, 1e-3);
    s.g_m = m.g_m;
    s.argmax = plan.grid[m.argmax_index];
    const double eta_c = rows.front().eta_carnot;
    s.deficit = (eta_c - m.eta_max) / eta_c;
    for (std::size_t i = 1; i <= m.index; ++i) {
        if (plan.grid[i] < kCriticalCoupling && !(*rows[i].eta > *rows[i - 1].eta)) s.rising = false;
        const double slope = (*rows[i].eta - *rows[i - 1].eta) / eta_c / (plan.grid[i] - plan.grid[i - 1]);
        s.steepest = std::max(s.steepest, slope);
    }
    return s;
}

Outcome criterion_3() {
    Outcome o;
    SpectrumCache cache;
    std::vector<SweepSummary> summaries;
    for (double theta : {1e-3, 1e-4, 1e-5}) {
        const SweepPlan plan = figure_plan(400.0, theta);
        summaries.push_back(summarise(plan, sweep_efficiency(plan, &cache)));
    }
    for (const SweepSummary& s : summaries) {
        const std::string at = "theta_C=" + num(s.theta) + ": ";
        o.require(s.rising, at + "(i) rising below g_c");
        o.require(s.deficit < 0.01, at + "(ii) (eta_C-max eta)/eta_C=" + num(s.deficit) + " < 0.01");
        o.require(s.g_m > 1.0, at + "(iii) g_m=" + num(s.g_m) + " (argmax " + num(s.argmax) + ") > 1");
    }
    const bool steeper = summaries[1].steepest > summaries[0].steepest && summaries[2].steepest > summaries[1].steepest;
    o.require(steeper, "(iv) max slope " + num(summaries[0].steepest) + " < " + num(summaries[1].steepest) + " < " +
                           num(summaries[2].steepest));
    return o;
}

Outcome criterion_4() {
    Outcome o;
    std::vector<std::pair<double, SweepSummary>> rows;
    for (double ratio : {100.0, 200.0, 400.0, 800.0}) {
        const SweepPlan plan = figure_plan(ratio, 1e-4);
        rows.emplace_back(ratio, summarise(plan, sweep_efficiency(plan)));
    }
    std::string listing;
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        listing += (i ? ", " : "") + num(rows[i].first) + ":" + num(rows[i].second.g_m) + " (argmax " +
                   num(rows[i].second.argmax) + ")";
        if (i && rows[i].second.g_m > rows[i - 1].second.g_m) monotone = false;
    }
    o.require(monotone, "g_m non-increasing in ratio [" + listing + "]");
    o.require(rows.back().second.g_m - 1.0 < rows.front().second.g_m - 1.0, "g_m(800)-1 < g_m(100)-1");
    return o;
}

Outcome criterion_5() {
    Outcome o;
    std::vector<double> gaps;
    std::string listing;
    for (double ratio : {100.0, 200.0, 800.0}) {
        const GroundGap g = resolve_ground_gap(ModelParams(ratio, 1.2));
        o.require(g.converged && g.resolved, "ratio " + num(ratio) + " gap resolved");
        gaps.push_back(g.gap);
        listing += (listing.empty() ? "" : ", ") + num(ratio) + ":" + num(g.gap);
    }
    o.require(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gap(g=1.2) decreasing [" + listing + "]");
    const GroundGap normal = resolve_ground_gap(ModelParams(800.0, 0.8));
    o.require(gaps[2] * 100.0 <= normal.gap, "gap(800,1.2)=" + num(gaps[2]) + " <= gap(800,0.8)/100=" + num(normal.gap / 100.0));
    return o;
}

Outcome criterion_6() {
    Outcome o;
    for (double theta : {1e-3, 1e-4, 1e-5}) {
        CycleSpec spec;
        spec.g1 = 0.2;
        spec.ratio = 400.0;
        spec.t_cold = theta * spec.ratio;
        spec.t_hot = spec.t_cold * 1.1;
        std::vector<FitSample> samples;
        double lo = 1e300, hi = 0.0;
        for (double d : cli::log_window(1e-8, 1e-4, 17)) {
            spec.g2 = kCriticalCoupling - d;
            const CycleResult r = run_cycle(spec);
            const double deficit = r.eta_carnot - *r.eta;
            samples.push_back({spec.g2, deficit, deficit > 0.0});
            const double product = deficit * 0.5 * std::abs(std::log(kCriticalCoupling - spec.g2));
            lo = std::min(lo, product);
            hi = std::max(hi, product);
        }
        const FitResult fit = fit_asymptote(samples);
        const double spread = (hi - lo) / lo;
        const std::string at = "theta_C=" + num(theta) + ": ";
        o.require(fit.r2 > 0.99, at + "r2=" + num(fit.r2) + " > 0.99");
        o.require(spread < 0.05, at + "product spread " + num(spread) + " < 0.05");
    }
    return o;
}

Outcome criterion_7() {
    Outcome o;
    std::vector<FitSample> analytic;
    for (double d : cli::log_window(1e-6, 1e-3, 13))
        analytic.push_back({1.0 - d, effective_excitation(1.0 - d, Phase::normal), true});
    const double a = fit_exponent(analytic).estimate;
    o.require(std::abs(a - 0.5) <= 1e-3, "analytic znu=" + num(a) + " in 0.5+-0.001");

    std::vector<FitSample> numerical;
    for (int i = 0; i <= 8; ++i) {
        const double g = 0.90 + 0.01 * i;
        const GroundGap gap = resolve_ground_gap(ModelParams(800.0, g));
        numerical.push_back({g, gap.gap, gap.converged && gap.resolved});
    }
    const FitResult fit = fit_exponent(numerical);
    o.require(fit.estimate >= 0.4 && fit.estimate <= 0.6,
              "numerical znu=" + num(fit.estimate) + " in [0.4,0.6] (" + std::to_string(fit.used) + " points)");
    return o;
}

Outcome criterion_8() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto specs = normal_phase_grid();
    int violated = 0;
    double tightest = 1e300;
    for (const CycleSpec& spec : specs) {
        const BoundReport b = bound_report(run_cycle(spec));
        if (!b.all_satisfied()) ++violated;
        for (const BoundCheck* c : {&b.heat_ratio, &b.isochoric_mismatch, &b.entropy_ratio})
            if (c->rhs > 0.0) tightest = std::min(tightest, c->slack / c->rhs);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(specs.size() >= 100, std::to_string(specs.size()) + " specs");
    o.require(violated == 0, std::to_string(violated) + " specs violate a bound (min relative slack " + num(tightest) + ")");
    o.require(seconds < 60.0, "runtime " + num(seconds) + " s");
    return o;
}

Outcome criterion_9() {
    Outcome o;
    int negative = 0, not_monotone = 0, identity = 0, decomposition = 0, second_law = 0;
    double worst_identity = 0.0, worst_decomposition = 0.0;
    for (const CycleSpec& spec : normal_phase_grid()) {
        const CycleResult r = run_cycle(spec);
        for (const ThermoState* s : {&r.a, &r.b, &r.c, &r.d}) {
            if (s->entropy < 0.0 || s->heat_capacity < 0.0) ++negative;
            const double beta_u = s->beta * s->internal_energy();
            const double err = std::abs(s->entropy - (s->ln_z + beta_u)) / std::max({1.0, std::abs(s->ln_z), std::abs(beta_u)});
            worst_identity = std::max(worst_identity, err);
            if (err > 1e-10) ++identity;
        }
        // Hot corners A, B versus cold corners D, C at the same coupling.
        if (r.a.entropy < r.d.entropy || r.b.entropy < r.c.entropy || r.a.excitation < r.d.excitation ||
            r.b.excitation < r.c.excitation)
            ++not_monotone;
        if (r.eta && r.eta_decomposed) {
            const double err = std::abs(*r.eta - *r.eta_decomposed) / std::abs(*r.eta);
            worst_decomposition = std::max(worst_decomposition, err);
            if (err > 1e-9) ++decomposition;
        } else {
            ++decomposition;
        }
        if (r.work > 0.0 && *r.eta > r.eta_carnot + 1e-10) ++second_law;
    }
    o.require(negative == 0, "S>=0, C>=0");
    o.require(not_monotone == 0, "S, U non-decreasing in T");
    o.require(identity == 0, "S=lnZ+beta U (worst " + num(worst_identity) + ")");
    o.require(decomposition == 0, "sigma decomposition vs direct eta (worst " + num(worst_decomposition) + ")");
    o.require(second_law == 0, "eta <= eta_C + 1e-10");
    return o;
}

Outcome criterion_10() {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "qrm_acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::string> contents;
    for (const char* run : {"a", "b"}) {
        std::ostringstream out, err;
        const int code = cli::main_entry({"sweep", "--backend", "spectral", "--theta-c", "1e-4,1e-5", "--grid-min", "0.9",
                                          "--grid-max", "1.2", "--grid-count", "13", "--out", (root / run).string()},
                                         out, err);
        o.require(code == 0, std::string("run ") + run + " exit code 0");
        std::string all;
        for (const char* name : {"sweep_ratio-400_theta-1e-04.csv", "sweep_ratio-400_theta-1e-05.csv"}) {
            std::ifstream in(root / run / name, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            all += buf.str();
        }
        contents.push_back(all);
    }
    o.require(!contents[0].empty() && contents[0] == contents[1], "byte-identical CSV (" + std::to_string(contents[0].size()) + " bytes)");
    return o;
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::map<int, std::pair<std::string, std::function<Outcome()>>> table{
        {1, {"exact-limit spectrum", criterion_1}},
        {2, {"effective-model agreement", criterion_2}},
        {3, {"efficiency sweeps versus temperature", criterion_3}},
        {4, {"g_m trend with frequency ratio", criterion_4}},
        {5, {"ground-state quasi-degeneracy", criterion_5}},
        {6, {"logarithmic approach to Carnot", criterion_6}},
        {7, {"critical exponent", criterion_7}},
        {8, {"bound inequalities", criterion_8}},
        {9, {"thermodynamic consistency", criterion_9}},
        {10, {"determinism", criterion_10}},
    };
    return table;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& [id, entry] : criteria()) selected.push_back(id);

    int failures = 0;
    for (int id : selected) {
        const auto it = criteria().find(id);
        if (it == criteria().end()) {
            std::printf("FAIL criterion %d: unknown criterion\n", id);
            ++failures;
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = it->second.second();
        } catch (const std::exception& e) {
            outcome.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %d (%s) [%.2f s]: %s\n", outcome.pass ? "PASS" : "FAIL", id, it->second.first.c_str(),
                    seconds, outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
