#include "qrm_cli/output.hpp"

#include "qrm/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace qrm::cli {

namespace {

std::string cell_text(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) return nullptr;
            return v;
        }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    if (std::abs(v) < 1e-12) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

Cell optional_cell(const std::optional<double>& value) {
    if (value) return *value;
    return std::monostate{};
}

const std::vector<std::string>& cycle_columns() {
    static const std::vector<std::string> columns{"g1",   "g2",   "T_C", "T_H", "ratio",      "backend", "Q_AB",  "Q_BC",
                                                  "Q_CD", "Q_DA", "W",   "eta", "eta_carnot", "sigma1",  "sigma2"};
    return columns;
}

Table cycle_table(const std::vector<CycleResult>& results) {
    Table table;
    table.columns = cycle_columns();
    for (const CycleResult& r : results) {
        const CycleSpec& s = r.spec;
        table.rows.push_back({s.g1, s.g2, s.t_cold, s.t_hot, s.ratio, std::string(to_string(s.backend)), r.q_ab,
                              r.q_bc, r.q_cd, r.q_da, r.work, optional_cell(r.eta), r.eta_carnot,
                              optional_cell(r.sigma1), optional_cell(r.sigma2)});
    }
    return table;
}

Table spectrum_table(const std::vector<SpectrumRow>& rows, int k) {
    Table table;
    table.columns = {"index", "g"};
    for (int i = 0; i < k; ++i) table.columns.push_back("E_" + std::to_string(i));
    for (const char* c : {"gap", "n_max_used", "converged", "max_shift", "gap_n_max", "gap_converged"})
        table.columns.emplace_back(c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SpectrumRow& r = rows[i];
        std::vector<Cell> row{static_cast<long long>(i), r.g};
        for (int j = 0; j < k; ++j) row.emplace_back(r.energies.at(static_cast<std::size_t>(j)));
        row.emplace_back(r.gap);
        row.emplace_back(static_cast<long long>(r.n_max_used));
        row.emplace_back(r.converged);
        row.emplace_back(r.max_shift);
        row.emplace_back(static_cast<long long>(r.gap_n_max));
        row.emplace_back(r.gap_converged);
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table convergence_table(const std::vector<ConvergenceRow>& rows) {
    Table table;
    table.columns = {"ratio", "g", "tol", "n_max_used", "max_shift", "converged", "work"};
    for (const ConvergenceRow& r : rows)
        table.rows.push_back({r.ratio, r.g, r.tol, static_cast<long long>(r.n_max_used), r.max_shift, r.converged,
                              static_cast<long long>(r.work)});
    return table;
}

void write_csv(std::ostream& out, const Table& table) {
    for (const std::string& c : table.comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
        out << '\n';
    }
}

void write_jsonl(std::ostream& out, const Table& table) {
    for (const auto& row : table.rows) {
        nlohmann::ordered_json object = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) object[table.columns[i]] = cell_json(row[i]);
        out << object.dump() << '\n';
    }
}

void write_report(std::ostream& out, const Report& report) {
    for (const auto& [key, value] : report) out << key << '=' << cell_text(value) << '\n';
}

void write_report_json(std::ostream& out, const Report& report) {
    nlohmann::ordered_json object = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report) object[key] = cell_json(value);
    out << object.dump() << '\n';
}

void write_svg(std::ostream& out, const Plot& plot) {
    constexpr double width = 720, height = 480;
    constexpr double left = 80, right = 170, top = 40, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const PlotSeries& s : plot.series) {
        for (double x : s.x) {
            if (!std::isfinite(x)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
        }
        for (double y : s.y) {
            if (!std::isfinite(y)) continue;
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (plot.horizontal) {
        y0 = std::min(y0, *plot.horizontal);
        y1 = std::max(y1, *plot.horizontal);
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1;
    if (!std::isfinite(y0)) y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << escape_xml(plot.title) << "</text>\n"
        << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << fixed(pw) << "\" height=\"" << fixed(ph)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
        out << "<line x1=\"" << fixed(sx(xv)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(sx(xv))
            << "\" y2=\"" << fixed(top + ph + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fixed(sx(xv)) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\">"
            << tick_label(xv) << "</text>\n"
            << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(sy(yv)) << "\" x2=\"" << left << "\" y2=\""
            << fixed(sy(yv)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(yv) + 4) << "\" text-anchor=\"end\">"
            << tick_label(yv) << "</text>\n";
    }
    out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(height - 15) << "\" text-anchor=\"middle\">"
        << escape_xml(plot.x_label) << "</text>\n"
        << "<text transform=\"translate(18," << fixed(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape_xml(plot.y_label) << "</text>\n";

    if (plot.horizontal)
        out << "<line x1=\"" << left << "\" y1=\"" << fixed(sy(*plot.horizontal)) << "\" x2=\"" << fixed(left + pw)
            << "\" y2=\"" << fixed(sy(*plot.horizontal)) << "\" stroke=\"gray\" stroke-width=\"1.5\"/>\n";
    if (plot.vertical && *plot.vertical >= x0 && *plot.vertical <= x1)
        out << "<line x1=\"" << fixed(sx(*plot.vertical)) << "\" y1=\"" << top << "\" x2=\"" << fixed(sx(*plot.vertical))
            << "\" y2=\"" << fixed(top + ph) << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";

    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const PlotSeries& series = plot.series[s];
        const char* color = kPalette[s % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < series.x.size() && i < series.y.size(); ++i) {
            if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) continue;
            out << (first ? "" : " ") << fixed(sx(series.x[i])) << ',' << fixed(sy(series.y[i]));
            first = false;
        }
        out << "\"/>\n";
        const double ly = top + 16 + 18 * static_cast<double>(s);
        out << "<line x1=\"" << fixed(left + pw + 10) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(left + pw + 30)
            << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << fixed(left + pw + 35) << "\" y=\"" << fixed(ly + 4) << "\">" << escape_xml(series.label)
            << "</text>\n";
    }
    out << "</svg>\n";
}

void write_file(const std::string& path, const std::string& content) {
    errno = 0;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw OutputError(path + ": " + std::strerror(errno ? errno : EIO));
    file << content;
    file.flush();
    if (!file) throw OutputError(path + ": " + std::strerror(errno ? errno : EIO));
}

}  // namespace qrm::cli
