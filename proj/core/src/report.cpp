#include "corex/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "corex/error.hpp"
#include "corex/numfmt.hpp"

namespace corex {

namespace {

void check_consistent_ratio_keys(std::span<const MetricsRow> rows) {
    if (rows.empty()) return;
    const auto& reference = rows.front().ratios;
    for (const MetricsRow& row : rows) {
        if (row.ratios.size() != reference.size())
            throw ValidationError("metrics rows have inconsistent ratio keys");
        auto it = reference.begin();
        for (const auto& [key, value] : row.ratios) {
            if (key != it->first)
                throw ValidationError("metrics rows have inconsistent ratio keys");
            ++it;
        }
    }
}

struct Accumulator {
    std::size_t n = 0;
    double word_count = 0.0;
    double fkgl = 0.0;
    double yules_k = 0.0;
    std::map<std::string, double> ratios;

    void add(const MetricsRow& row) {
        ++n;
        word_count += static_cast<double>(row.word_count);
        fkgl += row.fkgl;
        yules_k += row.yules_k;
        for (const auto& [key, value] : row.ratios) ratios[key] += value;
    }

    AverageRow mean(std::string sector, std::string continent, bool total) const {
        AverageRow out;
        out.sector = std::move(sector);
        out.continent = std::move(continent);
        out.is_total = total;
        out.n = n;
        double d = static_cast<double>(n);
        out.word_count = word_count / d;
        out.fkgl = fkgl / d;
        out.yules_k = yules_k / d;
        for (const auto& [key, value] : ratios) out.ratios[key] = value / d;
        return out;
    }
};

} // namespace

std::vector<AverageRow> aggregate(std::span<const MetricsRow> rows,
                                  const Corpus& corpus, AggregateKey key) {
    if (rows.empty()) throw ValidationError("aggregate: no rows");
    check_consistent_ratio_keys(rows);

    std::map<std::pair<int, int>, Accumulator> by_cell; // (sector, continent)
    Accumulator total;
    for (const MetricsRow& row : rows) {
        if (!corpus.contains(row.doc_id))
            throw ValidationError("aggregate: doc id '" + row.doc_id +
                                  "' not in corpus");
        const Document& doc = corpus.at(row.doc_id);
        by_cell[{static_cast<int>(doc.sector), static_cast<int>(doc.continent)}]
            .add(row);
        total.add(row);
    }

    std::vector<AverageRow> out;
    auto emit_sector_level = [&](Sector s) {
        Accumulator acc;
        std::vector<std::pair<Continent, const Accumulator*>> cells;
        for (const auto& [cell, a] : by_cell) {
            if (cell.first != static_cast<int>(s)) continue;
            cells.emplace_back(static_cast<Continent>(cell.second), &a);
        }
        if (cells.empty()) return;
        for (const auto& [c, a] : cells) {
            acc.n += a->n;
            acc.word_count += a->word_count;
            acc.fkgl += a->fkgl;
            acc.yules_k += a->yules_k;
            for (const auto& [k, v] : a->ratios) acc.ratios[k] += v;
        }
        out.push_back(acc.mean(std::string(to_string(s)), "", false));
        if (key == AggregateKey::sector_and_continent)
            for (const auto& [c, a] : cells)
                out.push_back(a->mean(std::string(to_string(s)),
                                      std::string(to_string(c)), false));
    };
    auto emit_continent_level = [&](Continent c) {
        Accumulator acc;
        for (const auto& [cell, a] : by_cell) {
            if (cell.second != static_cast<int>(c)) continue;
            acc.n += a.n;
            acc.word_count += a.word_count;
            acc.fkgl += a.fkgl;
            acc.yules_k += a.yules_k;
            for (const auto& [k, v] : a.ratios) acc.ratios[k] += v;
        }
        if (acc.n == 0) return;
        out.push_back(acc.mean("", std::string(to_string(c)), false));
    };

    if (key == AggregateKey::continent) {
        for (Continent c : kAllContinents) emit_continent_level(c);
    } else {
        for (Sector s : kAllSectors) emit_sector_level(s);
    }
    out.push_back(total.mean("Total", "", true));
    return out;
}

namespace {

// Continued-fraction evaluation of the regularized incomplete beta
// (Lentz's method), converging well past the documented 1e-6.
double incbeta_cf(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * incbeta_cf(a, b, x) / a;
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     incbeta_cf(b, a, 1.0 - x) / b;
}

namespace {

double two_sided_p(double r, std::size_t n) {
    if (n < 3) return 1.0;
    double nu = static_cast<double>(n - 2);
    double denom = 1.0 - r * r;
    if (denom <= 0.0) return 0.0; // |r| = 1
    double t = std::abs(r) * std::sqrt(nu / denom);
    // P(|T| >= t) = I_{nu/(nu+t^2)}(nu/2, 1/2)
    return incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
}

std::vector<std::string> variable_names(std::span<const MetricsRow> rows) {
    std::vector<std::string> names = {"word_count", "fkgl", "yules_k"};
    for (const auto& [key, value] : rows.front().ratios) names.push_back(key);
    return names;
}

double variable_value(const MetricsRow& row, const std::string& name,
                      std::size_t index) {
    switch (index) {
    case 0: return static_cast<double>(row.word_count);
    case 1: return row.fkgl;
    case 2: return row.yules_k;
    default: return row.ratios.at(name);
    }
}

CorrelationTable correlations_impl(std::span<const MetricsRow> rows) {
    if (rows.size() < 3)
        throw ValidationError("correlations: need at least 3 rows, got " +
                              std::to_string(rows.size()));
    check_consistent_ratio_keys(rows);

    CorrelationTable table;
    table.variables = variable_names(rows);
    const std::size_t v = table.variables.size();
    const std::size_t n = rows.size();

    std::vector<std::vector<double>> columns(v, std::vector<double>(n));
    for (std::size_t i = 0; i < v; ++i)
        for (std::size_t k = 0; k < n; ++k)
            columns[i][k] = variable_value(rows[k], table.variables[i], i);

    std::vector<bool> constant(v);
    std::vector<double> mean(v, 0.0);
    for (std::size_t i = 0; i < v; ++i) {
        for (double x : columns[i]) mean[i] += x;
        mean[i] /= static_cast<double>(n);
        constant[i] = std::all_of(columns[i].begin(), columns[i].end(),
                                  [&](double x) { return x == columns[i][0]; });
    }

    table.cells.resize(v * v);
    for (std::size_t i = 0; i < v; ++i) {
        for (std::size_t j = 0; j < v; ++j) {
            CorrelationCell& cell = table.cells[i * v + j];
            cell.var_a = table.variables[i];
            cell.var_b = table.variables[j];
            cell.n = n;
            if (constant[i] || constant[j]) {
                cell.defined = false;
                cell.r = std::numeric_limits<double>::quiet_NaN();
                cell.p_value = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            if (j < i) {
                cell.r = table.cells[j * v + i].r;
                cell.p_value = table.cells[j * v + i].p_value;
                continue;
            }
            double sxy = 0.0, sxx = 0.0, syy = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                double dx = columns[i][k] - mean[i];
                double dy = columns[j][k] - mean[j];
                sxy += dx * dy;
                sxx += dx * dx;
                syy += dy * dy;
            }
            cell.r = i == j ? 1.0 : sxy / std::sqrt(sxx * syy);
            cell.r = std::clamp(cell.r, -1.0, 1.0);
            cell.p_value = i == j ? 0.0 : two_sided_p(cell.r, n);
        }
    }
    return table;
}

} // namespace

CorrelationTable correlations(std::span<const MetricsRow> rows) {
    return correlations_impl(rows);
}

CorrelationTable correlations(std::span<const MetricsRow> rows,
                              const Corpus& corpus, Sector partition) {
    std::vector<MetricsRow> subset;
    for (const MetricsRow& row : rows) {
        if (!corpus.contains(row.doc_id))
            throw ValidationError("correlations: doc id '" + row.doc_id +
                                  "' not in corpus");
        if (corpus.at(row.doc_id).sector == partition) subset.push_back(row);
    }
    return correlations_impl(subset);
}

std::string_view significance_stars(const CorrelationCell& cell) {
    if (!cell.defined) return "";
    if (cell.p_value <= 0.001) return "***";
    if (cell.p_value <= 0.01) return "**";
    if (cell.p_value <= 0.05) return "*";
    return "";
}

bool is_strong(const CorrelationCell& cell) {
    return cell.defined && std::abs(cell.r) >= 0.7 && cell.p_value <= 0.001;
}

namespace {

std::string csv_cell(std::string_view s) {
    bool needs_quotes = s.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows,
                         TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::csv) {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                out << csv_cell(row[i]);
            }
            out << "\r\n";
        }
        return out.str();
    }
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << "  ";
            out << row[i];
            if (i + 1 < row.size())
                out << std::string(widths[i] - row[i].size(), ' ');
        }
        out << '\n';
    }
    return out.str();
}

} // namespace

std::string render_group_counts(std::span<const GroupCount> counts,
                                TableFormat format, bool comma_decimal) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"group", "count", "percent"});
    for (const GroupCount& gc : counts)
        rows.push_back({gc.group, std::to_string(gc.count),
                        format_fixed(gc.percent, 2, comma_decimal)});
    return render_table(rows, format);
}

std::string render_averages(std::span<const AverageRow> rows, TableFormat format,
                            bool comma_decimal) {
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header = {"sector", "continent", "n",
                                       "word_count", "fkgl", "yules_k"};
    if (!rows.empty())
        for (const auto& [key, value] : rows.front().ratios) header.push_back(key);
    table.push_back(header);
    const bool full = format == TableFormat::csv;
    for (const AverageRow& row : rows) {
        std::vector<std::string> cells = {row.sector, row.continent,
                                          std::to_string(row.n)};
        auto fmt = [&](double v) {
            return full ? format_double(v) : format_fixed(v, 1, comma_decimal);
        };
        cells.push_back(fmt(row.word_count));
        cells.push_back(fmt(row.fkgl));
        cells.push_back(fmt(row.yules_k));
        for (const auto& [key, value] : row.ratios) cells.push_back(fmt(value));
        table.push_back(std::move(cells));
    }
    return render_table(table, format);
}

std::string render_correlations(const CorrelationTable& table, TableFormat format,
                                bool comma_decimal) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"var_a", "var_b", "n", "r", "p_value", "sig", "strong"});
    const std::size_t v = table.variables.size();
    const bool full = format == TableFormat::csv;
    for (std::size_t i = 0; i < v; ++i) {
        for (std::size_t j = i + 1; j < v; ++j) {
            const CorrelationCell& cell = table.at(i, j);
            std::string r_str, p_str;
            if (!cell.defined) {
                r_str = p_str = "NA";
            } else if (full) {
                r_str = format_double(cell.r);
                p_str = format_double(cell.p_value);
            } else {
                r_str = format_fixed(cell.r, 3, comma_decimal);
                p_str = format_fixed(cell.p_value, 4, comma_decimal);
            }
            rows.push_back({cell.var_a, cell.var_b, std::to_string(cell.n), r_str,
                            p_str, std::string(significance_stars(cell)),
                            is_strong(cell) ? "yes" : ""});
        }
    }
    return render_table(rows, format);
}

} // namespace corex
