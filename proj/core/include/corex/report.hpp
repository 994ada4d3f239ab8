#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corex/corpus.hpp"

namespace corex {

/// Per-document metric bundle feeding the summary tables. `ratios` is
/// keyed "<lexicon>:<category>" and must use the same key set on every row.
struct MetricsRow {
    std::string doc_id;
    std::uint64_t word_count = 0;
    double fkgl = 0.0;
    double yules_k = 0.0;
    std::map<std::string, double> ratios;
};

enum class AggregateKey { sector, continent, sector_and_continent };

/// One averaged row. Sector-level rows leave `continent` empty; the grand
/// total sets `is_total` and labels the sector "Total".
struct AverageRow {
    std::string sector;
    std::string continent;
    bool is_total = false;
    std::size_t n = 0;
    double word_count = 0.0;
    double fkgl = 0.0;
    double yules_k = 0.0;
    std::map<std::string, double> ratios;
};

/// Unweighted means per sector, per (sector, continent) and overall, in
/// enum order with the grand total last. Every row's doc id must exist in
/// the corpus.
std::vector<AverageRow> aggregate(std::span<const MetricsRow> rows,
                                  const Corpus& corpus,
                                  AggregateKey key = AggregateKey::sector_and_continent);

/// Pearson r with a two-sided p-value from t = r*sqrt((n-2)/(1-r^2)),
/// n-2 degrees of freedom. `defined` is false when either variable is
/// constant. p-values are accurate to 1e-6 (regularized incomplete beta).
struct CorrelationCell {
    std::string var_a;
    std::string var_b;
    double r = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    bool defined = true;
};

struct CorrelationTable {
    std::vector<std::string> variables;
    std::vector<CorrelationCell> cells; // row-major, variables^2

    const CorrelationCell& at(std::size_t i, std::size_t j) const {
        return cells[i * variables.size() + j];
    }
};

/// Variables: word_count, fkgl, yules_k plus every ratio key.
/// Needs >= 3 rows and a consistent ratio key set.
CorrelationTable correlations(std::span<const MetricsRow> rows);

/// Same, restricted to documents of one sector.
CorrelationTable correlations(std::span<const MetricsRow> rows,
                              const Corpus& corpus, Sector partition);

/// "", "*", "**" or "***" for p <= .05 / .01 / .001.
std::string_view significance_stars(const CorrelationCell& cell);
/// |r| >= .7 and p <= .001 — the discussion threshold.
bool is_strong(const CorrelationCell& cell);

/// Regularized incomplete beta I_x(a, b); exposed for verification.
double incomplete_beta(double a, double b, double x);

enum class TableFormat { csv, text };

struct GroupCount; // corpus.hpp

std::string render_group_counts(std::span<const GroupCount> counts,
                                TableFormat format, bool comma_decimal = false);
std::string render_averages(std::span<const AverageRow> rows, TableFormat format,
                            bool comma_decimal = false);
std::string render_correlations(const CorrelationTable& table, TableFormat format,
                                bool comma_decimal = false);

} // namespace corex
