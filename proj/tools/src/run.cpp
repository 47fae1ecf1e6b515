#include "qrm_cli/run.hpp"

#include "qrm/format.hpp"
#include "qrm/model.hpp"
#include "qrm/splitting.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace qrm::cli {

namespace {

SpectrumOptions solver_options(const RunConfig& c) { return {c.k, c.tol, c.n_start, c.n_cap}; }

CycleSpec base_spec(const RunConfig& c, double ratio) {
    CycleSpec spec;
    spec.g1 = c.g1;
    spec.g2 = c.g2;
    spec.ratio = ratio;
    spec.backend = c.backend;
    spec.spectral = solver_options(c);
    spec.thermal_window = c.thermal_window;
    return spec;
}

std::string extension(const RunConfig& c) { return c.format == OutputFormat::csv ? ".csv" : ".jsonl"; }

std::string path_in(const RunConfig& c, const std::string& name) {
    return (std::filesystem::path(c.output_dir) / name).string();
}

void prepare_directory(const RunConfig& c) {
    std::error_code ec;
    std::filesystem::create_directories(c.output_dir, ec);
    if (ec) throw OutputError(c.output_dir + ": " + ec.message());
}

std::string render_table(const RunConfig& c, const Table& table) {
    std::ostringstream out;
    if (c.format == OutputFormat::csv) write_csv(out, table);
    else write_jsonl(out, table);
    return out.str();
}

std::vector<std::string> metadata(const RunConfig& c) {
    std::vector<std::string> lines;
    if (c.omega_ghz) lines.push_back("omega_ghz=" + format_double(*c.omega_ghz));
    return lines;
}

std::vector<std::string> run_cycle_command(const RunConfig& c, std::ostream& log) {
    CycleSpec spec = base_spec(c, c.ratios.front());
    spec.t_cold = c.theta_cold.front() * spec.ratio;
    spec.t_hot = hot_theta(c, c.theta_cold.front()) * spec.ratio;
    const CycleResult result = run_cycle(spec);
    if (result.status != CycleStatus::ok) log << "cycle: degenerate outcome " << to_string(result.status) << '\n';
    if (!result.spectra_converged) log << "cycle: corner spectra did not converge below n_cap\n";

    Table table = cycle_table({result});
    table.comments = metadata(c);
    const std::string path = path_in(c, "cycle" + extension(c));
    write_file(path, render_table(c, table));
    return {path};
}

std::vector<std::string> run_sweep_command(const RunConfig& c, std::ostream& log) {
    std::vector<std::string> written;
    SpectrumCache cache;
    for (double ratio : c.ratios) {
        for (double theta : c.theta_cold) {
            SweepPlan plan;
            plan.variable = SweepVariable::g2;
            plan.grid = c.grid;
            plan.base = base_spec(c, ratio);
            plan.theta_cold = theta;
            plan.hot_fraction = c.dt_frac;
            plan.theta_hot = c.theta_hot;
            const std::vector<CycleResult> results = sweep_efficiency(plan, &cache);

            const std::string stem = "sweep_ratio-" + format_double(ratio) + "_theta-" + format_double(theta);
            Table table = cycle_table(results);
            table.comments = metadata(c);
            const std::string path = path_in(c, stem + extension(c));
            write_file(path, render_table(c, table));
            written.push_back(path);
            log << "sweep ratio=" << format_double(ratio) << " theta_c=" << format_double(theta) << ": "
                << results.size() << " rows -> " << path << '\n';

            if (c.plot) {
                Plot plot;
                plot.title = "Stirling efficiency, Omega/omega0 = " + format_double(ratio) +
                             ", k_B T_C / Omega = " + format_double(theta);
                plot.x_label = "g2";
                plot.y_label = "eta";
                PlotSeries series{"eta", {}, {}};
                for (const CycleResult& r : results) {
                    series.x.push_back(r.spec.g2);
                    series.y.push_back(r.eta ? *r.eta : std::nan(""));
                }
                plot.series.push_back(std::move(series));
                if (!results.empty()) plot.horizontal = results.front().eta_carnot;
                plot.vertical = kCriticalCoupling;
                std::ostringstream svg;
                write_svg(svg, plot);
                const std::string svg_path = path_in(c, stem + ".svg");
                write_file(svg_path, svg.str());
                written.push_back(svg_path);
            }
        }
    }
    return written;
}

std::vector<std::string> run_spectrum_command(const RunConfig& c, std::ostream& log) {
    std::vector<std::string> written;
    if (!c.dump_matrix.empty()) {
        const ModelParams params(c.ratios.front(), c.grid.front());
        const Truncation trunc(c.dump_n_max);
        std::ostringstream out;
        write_matrix_triplets(out, build_hamiltonian(params, trunc), params, trunc);
        write_file(c.dump_matrix, out.str());
        written.push_back(c.dump_matrix);
    }
    for (double ratio : c.ratios) {
        SweepPlan plan;
        plan.variable = SweepVariable::g;
        plan.grid = c.grid;
        plan.base.ratio = ratio;
        const GapOptions gap_options{c.n_start, c.n_cap, 1e-6};
        const std::vector<SpectrumRow> rows = sweep_spectrum(plan, c.k, solver_options(c), gap_options);

        Table table = spectrum_table(rows, c.k);
        table.comments = {"qrm spectrum ratio=" + format_double(ratio) + " k=" + std::to_string(c.k) +
                          " tol=" + format_double(c.tol) + " n_start=" + std::to_string(c.n_start) +
                          " n_cap=" + std::to_string(c.n_cap) + " units=omega0"};
        for (const std::string& m : metadata(c)) table.comments.push_back(m);
        const std::string stem = "spectrum_ratio-" + format_double(ratio);
        const std::string path = path_in(c, stem + extension(c));
        write_file(path, render_table(c, table));
        written.push_back(path);
        log << "spectrum ratio=" << format_double(ratio) << ": " << rows.size() << " rows -> " << path << '\n';

        if (c.plot) {
            Plot plot;
            plot.title = "Lowest " + std::to_string(c.k) + " levels, Omega/omega0 = " + format_double(ratio);
            plot.x_label = "g";
            plot.y_label = "E_k / omega0";
            for (int j = 0; j < c.k; ++j) {
                PlotSeries series{"E_" + std::to_string(j), {}, {}};
                for (const SpectrumRow& r : rows) {
                    series.x.push_back(r.g);
                    series.y.push_back(r.energies[static_cast<std::size_t>(j)]);
                }
                plot.series.push_back(std::move(series));
            }
            plot.vertical = kCriticalCoupling;
            std::ostringstream svg;
            write_svg(svg, plot);
            const std::string svg_path = path_in(c, stem + ".svg");
            write_file(svg_path, svg.str());
            written.push_back(svg_path);
        }
    }
    return written;
}

std::vector<std::string> run_converge_command(const RunConfig& c, std::ostream& log) {
    const auto rows = convergence_study(c.ratios, c.grid, c.tols, c.k, c.n_start, c.n_cap);
    Table table = convergence_table(rows);
    table.comments = metadata(c);
    const std::string path = path_in(c, "converge" + extension(c));
    write_file(path, render_table(c, table));
    log << "converge: " << rows.size() << " rows -> " << path << '\n';
    return {path};
}

std::string join_cells(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
    return out;
}

}  // namespace

std::vector<double> log_window(double lo, double hi, int points) {
    std::vector<double> d;
    const double a = std::log(hi), b = std::log(lo);
    for (int i = 0; i < points; ++i) {
        if (i == 0) d.push_back(hi);
        else if (i == points - 1) d.push_back(lo);
        else d.push_back(std::exp(a + (b - a) * i / (points - 1)));
    }
    return d;
}

Report fit_report(const RunConfig& c) {
    const double ratio = c.ratios.front();
    Report report{{"kind", to_string(c.fit_kind)}, {"ratio", ratio}};
    const std::vector<double> distances = log_window(c.window_lo, c.window_hi, c.points);
    std::vector<FitSample> samples;
    FitResult fit;

    if (c.fit_kind == FitKind::exponent) {
        report.emplace_back("source", std::string(to_string(c.fit_source)));
        for (double d : distances) {
            const double g = kCriticalCoupling - d;
            if (c.fit_source == Backend::analytic) {
                samples.push_back({g, effective_excitation(g, Phase::normal), true});
            } else {
                const GroundGap gap = resolve_ground_gap(ModelParams(ratio, g), {c.n_start, c.n_cap, 1e-6});
                samples.push_back({g, gap.gap, gap.converged && gap.resolved && gap.gap > 0.0});
            }
        }
        fit = fit_exponent(samples);
    } else {
        CycleSpec spec = base_spec(c, ratio);
        spec.backend = Backend::analytic;
        spec.t_cold = c.theta_cold.front() * ratio;
        spec.t_hot = hot_theta(c, c.theta_cold.front()) * ratio;
        std::vector<double> products;
        for (double d : distances) {
            spec.g2 = kCriticalCoupling - d;
            const CycleResult r = run_cycle(spec);
            const double deficit = r.eta ? r.eta_carnot - *r.eta : std::nan("");
            const bool usable = r.eta && deficit > 0.0;
            samples.push_back({spec.g2, deficit, usable});
            if (usable) products.push_back(deficit * c.znu * std::abs(std::log(kCriticalCoupling - spec.g2)));
        }
        fit = fit_asymptote(samples, c.znu);
        const double d_mid = std::sqrt(c.window_lo * c.window_hi);
        spec.g2 = kCriticalCoupling - d_mid;
        const double alpha_mid = alpha_coefficient(run_cycle(spec));
        const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
        double mean = 0.0;
        for (double p : products) mean += p;
        mean /= static_cast<double>(products.size());
        report.emplace_back("theta_c", c.theta_cold.front());
        report.emplace_back("theta_h", hot_theta(c, c.theta_cold.front()));
        report.emplace_back("g1", c.g1);
        report.emplace_back("znu", c.znu);
        report.emplace_back("alpha_midpoint", alpha_mid);
        report.emplace_back("product_spread", (*hi - *lo) / mean);
    }
    report.emplace_back("estimate", fit.estimate);
    if (c.fit_kind == FitKind::exponent) report.emplace_back("intercept", fit.intercept);
    report.emplace_back("stderr", fit.std_error);
    report.emplace_back("r2", fit.r2);
    report.emplace_back("window_lo", fit.window_lo);
    report.emplace_back("window_hi", fit.window_hi);
    report.emplace_back("used", static_cast<long long>(fit.used));
    report.emplace_back("excluded", static_cast<long long>(fit.excluded));
    report.emplace_back("residuals", join_cells(fit.residuals));
    if (c.omega_ghz) report.emplace_back("omega_ghz", *c.omega_ghz);
    return report;
}

std::vector<std::string> run(const RunConfig& c, std::ostream& log) {
    validate(c);
    prepare_directory(c);
    switch (c.subcommand) {
    case Subcommand::cycle: return run_cycle_command(c, log);
    case Subcommand::sweep: return run_sweep_command(c, log);
    case Subcommand::spectrum: return run_spectrum_command(c, log);
    case Subcommand::converge: return run_converge_command(c, log);
    case Subcommand::fit: {
        const Report report = fit_report(c);
        std::ostringstream out;
        if (c.format == OutputFormat::csv) write_report(out, report);
        else write_report_json(out, report);
        const std::string path =
            path_in(c, "fit_" + to_string(c.fit_kind) + (c.format == OutputFormat::csv ? ".txt" : ".jsonl"));
        write_file(path, out.str());
        log << "fit: report -> " << path << '\n';
        return {path};
    }
    }
    return {};
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const char* env_dir = std::getenv("QRM_OUTPUT_DIR");
    RunConfig config;
    try {
        config = parse_config(args, err, env_dir && *env_dir ? env_dir : ".");
    } catch (const HelpRequest& help) {
        out << help.text;
        if (!help.text.empty() && help.text.back() != '\n') out << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "qrm-stirling: error: " << e.what() << '\n';
        return 2;
    }
    try {
        for (const std::string& path : run(config, err)) out << path << '\n';
    } catch (const OutputError& e) {
        err << "qrm-stirling: cannot write " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "qrm-stirling: computation failed: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace qrm::cli
