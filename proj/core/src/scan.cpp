#include "qrm/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace qrm {

namespace {

// Runs body(i) for i in [0, count) on a small thread pool. Each index writes
// only its own output slot, so results are independent of scheduling.
template <class Body>
void parallel_for(std::size_t count, Body body) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

bool strictly_monotone(const std::vector<double>& grid) {
    if (grid.size() < 2) return true;
    const bool ascending = grid[1] > grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (ascending ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1])) return false;
    return true;
}

struct Usable {
    std::vector<double> x, y;
    int excluded = 0;
};

double clamp_unit(double r2) { return std::clamp(r2, 0.0, 1.0); }

}  // namespace

std::string_view to_string(SweepVariable variable) {
    switch (variable) {
    case SweepVariable::g2: return "g2";
    case SweepVariable::g: return "g";
    case SweepVariable::t_cold: return "theta_c";
    case SweepVariable::ratio: return "ratio";
    }
    return "unknown";
}

void SweepPlan::validate() const {
    if (grid.empty()) throw std::invalid_argument("sweep: grid must not be empty");
    for (double v : grid)
        if (!std::isfinite(v)) throw std::invalid_argument("sweep: grid values must be finite");
    if (!strictly_monotone(grid)) throw std::invalid_argument("sweep: grid must be strictly sorted");
    if (!(theta_cold > 0.0) || !std::isfinite(theta_cold))
        throw std::invalid_argument("sweep: theta_cold must be > 0");
    if (!(hot_fraction >= 0.0) || !std::isfinite(hot_fraction))
        throw std::invalid_argument("sweep: hot_fraction must be >= 0");
    if (theta_hot && !(*theta_hot > 0.0 && std::isfinite(*theta_hot)))
        throw std::invalid_argument("sweep: theta_hot must be > 0");
    for (double v : grid) {
        switch (variable) {
        case SweepVariable::g2:
            if (v < base.g1) throw std::invalid_argument("sweep: g2 grid values must be >= g1");
            break;
        case SweepVariable::g:
            if (v < 0.0) throw std::invalid_argument("sweep: g grid values must be >= 0");
            break;
        case SweepVariable::t_cold:
        case SweepVariable::ratio:
            if (v <= 0.0) throw std::invalid_argument("sweep: grid values must be > 0");
            break;
        }
    }
}

CycleSpec point_spec(const SweepPlan& plan, double value) {
    CycleSpec spec = plan.base;
    double theta = plan.theta_cold;
    switch (plan.variable) {
    case SweepVariable::g2: spec.g2 = value; break;
    case SweepVariable::t_cold: theta = value; break;
    case SweepVariable::ratio: spec.ratio = value; break;
    case SweepVariable::g: throw std::invalid_argument("sweep: efficiency sweeps vary g2, theta_c or ratio");
    }
    spec.t_cold = theta * spec.ratio;
    spec.t_hot = plan.theta_hot ? *plan.theta_hot * spec.ratio : spec.t_cold * (1.0 + plan.hot_fraction);
    return spec;
}

std::vector<CycleResult> sweep_efficiency(const SweepPlan& plan, SpectrumCache* cache) {
    plan.validate();
    if (plan.variable == SweepVariable::g)
        throw std::invalid_argument("sweep: efficiency sweeps vary g2, theta_c or ratio");

    SpectrumCache local;
    SpectrumCache* shared = cache ? cache : &local;
    std::vector<CycleResult> rows(plan.grid.size());
    parallel_for(plan.grid.size(), [&](std::size_t i) { rows[i] = run_cycle(point_spec(plan, plan.grid[i]), shared); });
    return rows;
}

std::vector<SpectrumRow> sweep_spectrum(const SweepPlan& plan, int k, const SpectrumOptions& options,
                                        const GapOptions& gap_options) {
    plan.validate();
    if (k < 2) throw std::invalid_argument("sweep_spectrum: k must be >= 2");
    if (plan.variable != SweepVariable::g && plan.variable != SweepVariable::ratio)
        throw std::invalid_argument("sweep_spectrum: spectrum sweeps vary g or ratio");

    std::vector<SpectrumRow> rows(plan.grid.size());
    parallel_for(plan.grid.size(), [&](std::size_t i) {
        const double value = plan.grid[i];
        const ModelParams params = plan.variable == SweepVariable::g ? ModelParams(plan.base.ratio, value)
                                                                     : ModelParams(value, plan.coupling);
        SpectrumOptions opts = options;
        opts.k = std::max(opts.k, k);
        const Spectrum spectrum = converged_spectrum(params, opts);
        const GroundGap gap = resolve_ground_gap(params, gap_options);

        SpectrumRow& row = rows[i];
        row.ratio = params.ratio();
        row.g = params.g();
        row.energies.assign(spectrum.energies.begin(), spectrum.energies.begin() + k);
        row.n_max_used = spectrum.n_max_used;
        row.converged = spectrum.converged;
        row.max_shift = spectrum.max_shift;
        row.gap = gap.gap;
        row.gap_n_max = gap.n_max_used;
        row.gap_converged = gap.converged && gap.resolved;
    });
    return rows;
}

FitResult fit_exponent(std::span<const FitSample> samples, double g_c) {
    Usable data;
    int side = 0;
    for (const FitSample& s : samples) {
        if (!s.usable) {
            ++data.excluded;
            continue;
        }
        if (!std::isfinite(s.x) || !std::isfinite(s.y)) throw std::invalid_argument("fit_exponent: non-finite sample");
        if (!(s.y > 0.0)) throw std::invalid_argument("fit_exponent: excitation energies must be > 0");
        const int this_side = s.x < g_c ? -1 : (s.x > g_c ? 1 : 0);
        if (this_side == 0) throw std::invalid_argument("fit_exponent: sample at the critical point");
        if (side != 0 && this_side != side)
            throw std::invalid_argument("fit_exponent: samples must lie on one side of g_c");
        side = this_side;
        data.x.push_back(std::log(std::abs(g_c - s.x)));
        data.y.push_back(std::log(s.y));
    }
    const auto n = data.x.size();
    if (n < 3) throw std::invalid_argument("fit_exponent: needs at least 3 usable points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += data.x[i];
        my += data.y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = data.x[i] - mx, dy = data.y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: degenerate design (all |g_c - g| equal)");

    FitResult fit;
    fit.estimate = sxy / sxx;
    fit.intercept = my - fit.estimate * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = data.y[i] - (fit.intercept + fit.estimate * data.x[i]);
        fit.residuals.push_back(r);
        ssr += r * r;
    }
    fit.r2 = syy > 0.0 ? clamp_unit(1.0 - ssr / syy) : 1.0;
    fit.std_error = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
    const auto [lo, hi] = std::minmax_element(data.x.begin(), data.x.end());
    fit.window_lo = std::exp(*lo);
    fit.window_hi = std::exp(*hi);
    fit.used = static_cast<int>(n);
    fit.excluded = data.excluded;
    return fit;
}

FitResult fit_asymptote(std::span<const FitSample> samples, double znu, double g_c) {
    if (!(znu > 0.0)) throw std::invalid_argument("fit_asymptote: znu must be > 0");
    Usable data;
    std::vector<double> distances;
    for (const FitSample& s : samples) {
        if (!s.usable) {
            ++data.excluded;
            continue;
        }
        if (!std::isfinite(s.x) || !std::isfinite(s.y)) throw std::invalid_argument("fit_asymptote: non-finite sample");
        if (!(s.x < g_c)) throw std::invalid_argument("fit_asymptote: requires g2 < g_c");
        if (!(s.y > 0.0)) throw std::invalid_argument("fit_asymptote: deficits must be > 0");
        const double distance = g_c - s.x;
        distances.push_back(distance);
        data.x.push_back(1.0 / (znu * std::abs(std::log(distance))));
        data.y.push_back(s.y);
    }
    const auto n = data.x.size();
    if (n < 3) throw std::invalid_argument("fit_asymptote: needs at least 3 usable points");

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += data.x[i] * data.x[i];
        sxy += data.x[i] * data.y[i];
        syy += data.y[i] * data.y[i];
    }

    FitResult fit;
    fit.estimate = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = data.y[i] - fit.estimate * data.x[i];
        fit.residuals.push_back(r);
        ssr += r * r;
    }
    fit.r2 = clamp_unit(1.0 - ssr / syy);
    fit.std_error = std::sqrt(ssr / static_cast<double>(n - 1) / sxx);
    const auto [lo, hi] = std::minmax_element(distances.begin(), distances.end());
    fit.window_lo = *lo;
    fit.window_hi = *hi;
    fit.used = static_cast<int>(n);
    fit.excluded = data.excluded;
    return fit;
}

std::vector<ConvergenceRow> convergence_study(std::span<const double> ratios, std::span<const double> gs,
                                              std::span<const double> tols, int k, int n_start, int n_cap) {
    struct Cell {
        double ratio, g, tol;
    };
    std::vector<Cell> cells;
    for (double ratio : ratios)
        for (double g : gs)
            for (double tol : tols) cells.push_back({ratio, g, tol});

    std::vector<ConvergenceRow> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const Cell& c = cells[i];
        const Spectrum s = converged_spectrum(ModelParams(c.ratio, c.g), {k, c.tol, n_start, n_cap});
        rows[i] = {c.ratio, c.g, c.tol, s.n_max_used, s.max_shift, s.converged, s.work};
    });
    return rows;
}

MaximumLocation locate_gm(std::span<const double> grid, std::span<const CycleResult> results, double tolerance) {
    if (grid.size() != results.size()) throw std::invalid_argument("locate_gm: grid and results differ in length");
    if (!(tolerance >= 0.0)) throw std::invalid_argument("locate_gm: tolerance must be >= 0");

    MaximumLocation loc;
    bool found = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].eta) continue;
        if (!found || *results[i].eta > loc.eta_max) {
            loc.eta_max = *results[i].eta;
            loc.argmax_index = i;
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("locate_gm: no grid point has a defined efficiency");

    const double floor = loc.eta_max - tolerance * results[loc.argmax_index].eta_carnot;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].eta && *results[i].eta >= floor) {
            loc.index = i;
            break;
        }
    }
    loc.g_m = grid[loc.index];
    return loc;
}

}  // namespace qrm
