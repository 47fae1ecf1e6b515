#include "qrm_cli/config.hpp"

#include "qrm/format.hpp"
#include "qrm/model.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace qrm::cli {

namespace {

const std::map<std::string, Backend> kBackends{{"analytic", Backend::analytic}, {"spectral", Backend::spectral}};
const std::map<std::string, OutputFormat> kFormats{{"csv", OutputFormat::csv}, {"jsonl", OutputFormat::jsonl}};
const std::map<std::string, FitKind> kFitKinds{{"exponent", FitKind::exponent}, {"asymptote", FitKind::asymptote}};

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError("--" + field + ": " + message);
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

// Linear grid with exact endpoints.
std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> grid;
    if (count == 1) return {lo};
    for (int i = 0; i < count; ++i)
        grid.push_back(i == count - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return grid;
}

struct GridInput {
    std::vector<double> values;
    double lo = 0.0, hi = 0.0;
    int count = 0;
};

struct Parser {
    CLI::App app{"Quantum Rabi model Stirling engine laboratory", "qrm-stirling"};
    RunConfig config;
    GridInput grid;
    std::string config_file;
    bool seedless = false;
    double omega_ghz = 0.0;
    double theta_hot = 0.0;
    std::string backend = "analytic", source = "analytic", format = "csv", kind = "exponent";
    std::map<std::string, CLI::App*> subs;

    Parser() {
        app.require_subcommand(1, 1);
        app.set_version_flag("--version", "qrm-stirling 1.0.0");
        app.add_option("--out", config.output_dir, "Output directory");
        app.add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
        app.add_flag("--plot", config.plot, "Also write an SVG plot per series");
        app.add_flag("--seedless", seedless, "Reserved; the tool uses no random numbers");
        app.add_option("--config", config_file, "Flat key=value file of defaults");
        app.add_option("--omega-ghz", omega_ghz, "Omega in GHz, recorded as metadata only");

        auto* spectrum = add_sub("spectrum", "Lowest-k energies and ground gap versus g");
        add_ratio(spectrum);
        add_solver(spectrum);
        add_grid(spectrum, "g values");
        spectrum->add_option("--dump-matrix", config.dump_matrix, "Write the Hamiltonian of the first grid point");
        spectrum->add_option("--dump-n-max", config.dump_n_max, "Fock cutoff of the matrix dump");

        auto* cycle = add_sub("cycle", "A single Stirling cycle");
        add_ratio(cycle);
        add_temperatures(cycle);
        add_couplings(cycle, true);
        add_backend(cycle);
        add_solver(cycle);

        auto* sweep = add_sub("sweep", "Efficiency versus g2, one series per (theta_c, ratio)");
        add_ratio(sweep);
        add_temperatures(sweep);
        add_couplings(sweep, false);
        add_backend(sweep);
        add_solver(sweep);
        add_grid(sweep, "g2 values");

        auto* fit = add_sub("fit", "Critical exponent or Carnot-deficit asymptote fit");
        fit->add_option("--kind", kind, "exponent or asymptote")->check(CLI::IsMember({"exponent", "asymptote"}));
        fit->add_option("--source", source, "exponent fits: analytic or spectral excitation energies")
            ->check(CLI::IsMember({"analytic", "spectral"}));
        fit->add_option("--window-lo", config.window_lo, "Smallest g_c - g");
        fit->add_option("--window-hi", config.window_hi, "Largest g_c - g");
        fit->add_option("--points", config.points, "Log-spaced samples across the window");
        fit->add_option("--znu", config.znu, "Critical exponent product (asymptote fits)");
        add_ratio(fit);
        add_temperatures(fit);
        fit->add_option("--g1", config.g1, "Coupling of the A-D isochore");
        add_solver(fit);

        auto* converge = add_sub("converge", "Truncation convergence table");
        add_ratio(converge);
        add_grid(converge, "g values");
        converge->add_option("--tols", config.tols, "Tolerance ladder")->delimiter(',');
        converge->add_option("--k", config.k, "Tracked eigenvalues");
        converge->add_option("--n-start", config.n_start, "Initial Fock cutoff");
        converge->add_option("--n-cap", config.n_cap, "Largest Fock cutoff");
    }

    CLI::App* add_sub(const std::string& name, const std::string& description) {
        auto* sub = app.add_subcommand(name, description);
        sub->fallthrough();
        subs[name] = sub;
        return sub;
    }

    void add_ratio(CLI::App* sub) {
        sub->add_option("--ratio", config.ratios, "Omega / omega0 (comma list)")->delimiter(',');
    }

    void add_temperatures(CLI::App* sub) {
        sub->add_option("--theta-c", config.theta_cold, "k_B T_C / Omega (comma list)")->delimiter(',');
        auto* hot = sub->add_option("--theta-h", theta_hot, "k_B T_H / Omega");
        auto* frac = sub->add_option("--dt-frac", config.dt_frac, "T_H = T_C (1 + dt-frac)");
        hot->excludes(frac);
    }

    void add_couplings(CLI::App* sub, bool with_g2) {
        sub->add_option("--g1", config.g1, "Coupling at A and D");
        if (with_g2) sub->add_option("--g2", config.g2, "Coupling at B and C");
    }

    void add_backend(CLI::App* sub) {
        sub->add_option("--backend", backend, "analytic or spectral")->check(CLI::IsMember({"analytic", "spectral"}));
        sub->add_option("--thermal-window", config.thermal_window, "Converged levels cover this many T_H");
    }

    void add_solver(CLI::App* sub) {
        sub->add_option("--k", config.k, "Lowest eigenvalues required to converge");
        sub->add_option("--tol", config.tol, "Convergence tolerance in omega0");
        sub->add_option("--n-start", config.n_start, "Initial Fock cutoff");
        sub->add_option("--n-cap", config.n_cap, "Largest Fock cutoff");
    }

    void add_grid(CLI::App* sub, const std::string& what) {
        auto* list = sub->add_option("--grid", grid.values, "Explicit " + what + " (comma list)")->delimiter(',');
        auto* lo = sub->add_option("--grid-min", grid.lo, "First of evenly spaced " + what);
        auto* hi = sub->add_option("--grid-max", grid.hi, "Last of evenly spaced " + what);
        auto* count = sub->add_option("--grid-count", grid.count, "Number of evenly spaced " + what);
        list->excludes(lo)->excludes(hi)->excludes(count);
    }

    CLI::App* selected() const {
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) return sub;
        return nullptr;
    }

    // Options named by the config file are filled only where the command line is silent.
    void merge_file(CLI::App* sub, std::ostream& log) {
        std::vector<CLI::ConfigItem> items;
        try {
            items = CLI::ConfigINI().from_file(config_file);
        } catch (const CLI::Error& e) {
            throw ConfigError("--config: cannot read '" + config_file + "': " + e.what());
        }
        for (const CLI::ConfigItem& item : items) {
            if (!item.parents.empty() || item.name == "config")
                throw ConfigError("--config: unknown key '" + item.fullname() + "'");
            CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
            if (!opt) opt = app.get_option_no_throw("--" + item.name);
            if (!opt || item.name == "help" || item.name == "version")
                throw ConfigError("--config: unknown key '" + item.name + "' for subcommand " + sub->get_name());
            if (opt->count() > 0) {
                log << "config: --" << item.name << " given on the command line overrides the config file\n";
                continue;
            }
            try {
                opt->add_result(item.inputs);
                opt->run_callback();
            } catch (const CLI::Error& e) {
                throw ConfigError("--" + item.name + ": invalid value in config file: " + e.what());
            }
        }
    }

    bool given(CLI::App* sub, const std::string& name) const {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt && opt->count() > 0;
    }
};

}  // namespace

std::string to_string(Subcommand sub) {
    switch (sub) {
    case Subcommand::spectrum: return "spectrum";
    case Subcommand::cycle: return "cycle";
    case Subcommand::sweep: return "sweep";
    case Subcommand::fit: return "fit";
    case Subcommand::converge: return "converge";
    }
    return "unknown";
}

std::string to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "jsonl"; }
std::string to_string(FitKind kind) { return kind == FitKind::exponent ? "exponent" : "asymptote"; }

double hot_theta(const RunConfig& config, double theta_c) {
    return config.theta_hot ? *config.theta_hot : theta_c * (1.0 + config.dt_frac);
}

RunConfig parse_config(const std::vector<std::string>& args, std::ostream& log, const std::string& default_output_dir) {
    Parser p;
    p.config.output_dir = default_output_dir;
    std::vector<const char*> argv{"qrm-stirling"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        p.app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw HelpRequest{p.app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequest{p.app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::CallForVersion& e) {
        throw HelpRequest{e.what()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    CLI::App* sub = p.selected();
    if (!sub) throw ConfigError("a subcommand is required: spectrum, cycle, sweep, fit or converge");
    if (!p.config_file.empty()) p.merge_file(sub, log);

    RunConfig& c = p.config;
    const std::string name = sub->get_name();
    if (name == "spectrum") c.subcommand = Subcommand::spectrum;
    else if (name == "cycle") c.subcommand = Subcommand::cycle;
    else if (name == "sweep") c.subcommand = Subcommand::sweep;
    else if (name == "fit") c.subcommand = Subcommand::fit;
    else c.subcommand = Subcommand::converge;

    if (p.seedless) fail("seedless", "reserved flag; this tool uses no random numbers and output is always deterministic");
    if (p.given(sub, "--theta-h") && p.given(sub, "--dt-frac")) fail("theta-h", "excludes --dt-frac");
    if (p.given(sub, "--theta-h")) c.theta_hot = p.theta_hot;
    if (p.app.get_option("--omega-ghz")->count() > 0) c.omega_ghz = p.omega_ghz;

    auto lookup = [](const auto& table, const std::string& key, const std::string& field) {
        auto it = table.find(key);
        if (it == table.end()) fail(field, "unknown value '" + key + "'");
        return it->second;
    };
    c.format = lookup(kFormats, p.format, "format");
    c.backend = lookup(kBackends, p.backend, "backend");
    c.fit_source = lookup(kBackends, p.source, "source");
    c.fit_kind = lookup(kFitKinds, p.kind, "kind");

    if (sub->get_option_no_throw("--grid")) {
        const bool list = p.given(sub, "--grid");
        const bool range = p.given(sub, "--grid-min") || p.given(sub, "--grid-max") || p.given(sub, "--grid-count");
        if (list && range) fail("grid", "excludes --grid-min/--grid-max/--grid-count");
        if (list) {
            c.grid = p.grid.values;
        } else {
            double lo = 0.0, hi = 2.0;
            int count = 81;
            if (c.subcommand == Subcommand::sweep) {
                lo = 0.8;
                hi = 1.3;
                count = 101;
            } else if (c.subcommand == Subcommand::converge) {
                hi = 1.2;
                count = 4;
            }
            if (p.given(sub, "--grid-min")) lo = p.grid.lo;
            if (p.given(sub, "--grid-max")) hi = p.grid.hi;
            if (p.given(sub, "--grid-count")) count = p.grid.count;
            if (count < 1) fail("grid-count", "must be >= 1");
            if (count > 1 && !(hi > lo)) fail("grid-max", "must exceed --grid-min");
            c.grid = linspace(lo, hi, count);
        }
    }
    if (c.subcommand == Subcommand::converge && !p.given(sub, "--tols")) c.tols = {1e-6, 1e-8, 1e-10};
    if (c.subcommand == Subcommand::fit && c.fit_kind == FitKind::asymptote) {
        if (!p.given(sub, "--window-lo")) c.window_lo = 1e-8;
        if (!p.given(sub, "--window-hi")) c.window_hi = 1e-4;
    }

    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    auto positive = [](double v, const std::string& field) {
        if (!std::isfinite(v) || !(v > 0.0)) fail(field, "must be a finite number > 0 (got " + format_double(v) + ")");
    };
    auto nonempty = [](const std::vector<double>& v, const std::string& field) {
        if (v.empty()) fail(field, "needs at least one value");
    };
    auto single = [](const std::vector<double>& v, const std::string& field) {
        if (v.size() != 1) fail(field, "takes exactly one value for this subcommand");
    };
    auto distinct = [](std::vector<double> v, const std::string& field) {
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end()) fail(field, "values must be distinct");
    };
    auto sorted_grid = [](const std::vector<double>& grid) {
        if (grid.empty()) fail("grid", "needs at least one value");
        for (double v : grid)
            if (!std::isfinite(v)) fail("grid", "values must be finite");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1])) fail("grid", "values must be strictly increasing");
    };
    auto coupling = [](double g, const std::string& field) {
        if (!std::isfinite(g) || g < 0.0) fail(field, "must be a finite number >= 0 (got " + format_double(g) + ")");
    };
    auto solver = [&] {
        if (c.k < 1) fail("k", "must be >= 1");
        positive(c.tol, "tol");
        if (c.n_start < 1) fail("n-start", "must be >= 1");
        if (c.n_cap < c.n_start) fail("n-cap", "must be >= --n-start");
    };
    auto temperatures = [&] {
        nonempty(c.theta_cold, "theta-c");
        for (double t : c.theta_cold) positive(t, "theta-c");
        distinct(c.theta_cold, "theta-c");
        if (c.theta_hot) {
            positive(*c.theta_hot, "theta-h");
            for (double t : c.theta_cold)
                if (!(*c.theta_hot > t)) fail("theta-h", "must exceed every --theta-c value");
        } else {
            positive(c.dt_frac, "dt-frac");
        }
    };

    nonempty(c.ratios, "ratio");
    for (double r : c.ratios) positive(r, "ratio");
    distinct(c.ratios, "ratio");
    if (c.omega_ghz) positive(*c.omega_ghz, "omega-ghz");
    if (c.output_dir.empty()) fail("out", "must not be empty");
    if (c.plot && c.subcommand != Subcommand::spectrum && c.subcommand != Subcommand::sweep)
        fail("plot", "only the spectrum and sweep subcommands produce plots");

    switch (c.subcommand) {
    case Subcommand::spectrum:
        solver();
        if (c.k < 2) fail("k", "spectrum needs k >= 2 for the gap column");
        sorted_grid(c.grid);
        for (double g : c.grid) coupling(g, "grid");
        if (!c.dump_matrix.empty() && c.dump_n_max < 1) fail("dump-n-max", "must be >= 1 when --dump-matrix is set");
        if (c.dump_matrix.empty() && c.dump_n_max != 0) fail("dump-n-max", "requires --dump-matrix");
        if (!c.dump_matrix.empty() && c.ratios.size() != 1) fail("dump-matrix", "requires a single --ratio");
        break;
    case Subcommand::cycle:
        single(c.ratios, "ratio");
        temperatures();
        single(c.theta_cold, "theta-c");
        coupling(c.g1, "g1");
        coupling(c.g2, "g2");
        if (!(c.g1 < c.g2)) fail("g2", "must exceed --g1 (got g1=" + format_double(c.g1) + ", g2=" + format_double(c.g2) + ")");
        if (c.backend == Backend::analytic && (c.g1 == kCriticalCoupling || c.g2 == kCriticalCoupling))
            fail(c.g1 == kCriticalCoupling ? "g1" : "g2", "the analytic backend is undefined at g = 1; use --backend spectral");
        solver();
        positive(c.thermal_window, "thermal-window");
        break;
    case Subcommand::sweep:
        temperatures();
        coupling(c.g1, "g1");
        sorted_grid(c.grid);
        if (!(c.grid.front() > c.g1)) fail("grid", "g2 values must exceed --g1");
        if (c.backend == Backend::analytic) {
            if (c.g1 == kCriticalCoupling) fail("g1", "the analytic backend is undefined at g = 1");
            if (std::find(c.grid.begin(), c.grid.end(), kCriticalCoupling) != c.grid.end())
                fail("grid", "the analytic backend is undefined at g2 = 1; use --backend spectral or omit 1");
        }
        solver();
        positive(c.thermal_window, "thermal-window");
        break;
    case Subcommand::fit:
        single(c.ratios, "ratio");
        positive(c.window_lo, "window-lo");
        positive(c.window_hi, "window-hi");
        if (!(c.window_hi > c.window_lo)) fail("window-hi", "must exceed --window-lo");
        if (!(c.window_hi < 1.0)) fail("window-hi", "must be < 1 (g stays on the normal side of g_c = 1)");
        if (c.points < 3) fail("points", "must be >= 3");
        positive(c.znu, "znu");
        if (c.fit_kind == FitKind::asymptote) {
            if (c.fit_source != Backend::analytic) fail("source", "asymptote fits use the analytic backend");
            temperatures();
            single(c.theta_cold, "theta-c");
            coupling(c.g1, "g1");
            if (!(c.g1 < 1.0 - c.window_hi)) fail("g1", "must lie below the fit window (g1 < 1 - window-hi)");
        }
        solver();
        break;
    case Subcommand::converge:
        sorted_grid(c.grid);
        for (double g : c.grid) coupling(g, "grid");
        nonempty(c.tols, "tols");
        for (double t : c.tols) positive(t, "tols");
        if (c.k < 1) fail("k", "must be >= 1");
        if (c.n_start < 1) fail("n-start", "must be >= 1");
        if (c.n_cap < c.n_start) fail("n-cap", "must be >= --n-start");
        break;
    }
}

std::vector<std::string> render_config(const RunConfig& c) {
    std::vector<std::string> args{to_string(c.subcommand)};
    auto put = [&](const std::string& flag, const std::string& value) {
        args.push_back("--" + flag);
        args.push_back(value);
    };
    auto num = [](double v) { return format_double(v); };
    auto integer = [](int v) { return std::to_string(v); };

    put("out", c.output_dir);
    put("format", to_string(c.format));
    if (c.plot) args.push_back("--plot");
    if (c.omega_ghz) put("omega-ghz", num(*c.omega_ghz));
    put("ratio", join(c.ratios));

    auto temperatures = [&] {
        put("theta-c", join(c.theta_cold));
        if (c.theta_hot) put("theta-h", num(*c.theta_hot));
        else put("dt-frac", num(c.dt_frac));
    };
    auto solver = [&] {
        put("k", integer(c.k));
        put("tol", num(c.tol));
        put("n-start", integer(c.n_start));
        put("n-cap", integer(c.n_cap));
    };

    switch (c.subcommand) {
    case Subcommand::spectrum:
        solver();
        put("grid", join(c.grid));
        if (!c.dump_matrix.empty()) {
            put("dump-matrix", c.dump_matrix);
            put("dump-n-max", integer(c.dump_n_max));
        }
        break;
    case Subcommand::cycle:
    case Subcommand::sweep:
        temperatures();
        put("g1", num(c.g1));
        if (c.subcommand == Subcommand::cycle) put("g2", num(c.g2));
        else put("grid", join(c.grid));
        put("backend", std::string(to_string(c.backend)));
        put("thermal-window", num(c.thermal_window));
        solver();
        break;
    case Subcommand::fit:
        put("kind", to_string(c.fit_kind));
        put("source", std::string(to_string(c.fit_source)));
        put("window-lo", num(c.window_lo));
        put("window-hi", num(c.window_hi));
        put("points", integer(c.points));
        put("znu", num(c.znu));
        temperatures();
        put("g1", num(c.g1));
        solver();
        break;
    case Subcommand::converge:
        put("grid", join(c.grid));
        put("tols", join(c.tols));
        put("k", integer(c.k));
        put("n-start", integer(c.n_start));
        put("n-cap", integer(c.n_cap));
        break;
    }
    return args;
}

}  // namespace qrm::cli
