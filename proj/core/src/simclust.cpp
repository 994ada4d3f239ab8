#include "corex/simclust.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "corex/csv.hpp"
#include "corex/error.hpp"
#include "corex/numfmt.hpp"

namespace corex {

FeatureMatrix build_dfm(const std::map<std::string, TokenStream>& streams,
                        std::uint64_t min_count) {
    if (streams.empty()) throw ValidationError("build_dfm: no streams");
    std::map<std::string, std::uint64_t> totals;
    for (const auto& [label, stream] : streams)
        for (const std::string& t : stream.tokens) ++totals[t];

    FeatureMatrix m;
    m.min_count = min_count;
    for (const auto& [term, total] : totals)
        if (total > min_count) m.terms.push_back(term);
    if (m.terms.empty())
        throw ValidationError(
            "build_dfm: every term fell at or below min_count=" +
            std::to_string(min_count) + "; lower the threshold");

    std::unordered_map<std::string_view, std::size_t> col_of;
    col_of.reserve(m.terms.size());
    for (std::size_t c = 0; c < m.terms.size(); ++c) col_of.emplace(m.terms[c], c);

    m.row_labels.reserve(streams.size());
    m.cells.assign(streams.size() * m.terms.size(), 0);
    std::size_t r = 0;
    for (const auto& [label, stream] : streams) {
        m.row_labels.push_back(label);
        for (const std::string& t : stream.tokens) {
            auto it = col_of.find(t);
            if (it != col_of.end()) ++m.cells[r * m.terms.size() + it->second];
        }
        ++r;
    }
    return m;
}

FeatureMatrix group_rows(const FeatureMatrix& dfm,
                         const std::map<std::string, std::string>& grouping) {
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t r = 0; r < dfm.row_labels.size(); ++r) {
        auto it = grouping.find(dfm.row_labels[r]);
        if (it == grouping.end())
            throw ValidationError("group_rows: row '" + dfm.row_labels[r] +
                                  "' has no group");
        members[it->second].push_back(r);
    }
    FeatureMatrix out;
    out.terms = dfm.terms;
    out.min_count = dfm.min_count;
    out.cells.assign(members.size() * dfm.terms.size(), 0);
    std::size_t g = 0;
    for (const auto& [group, rows] : members) {
        out.row_labels.push_back(group);
        for (std::size_t r : rows)
            for (std::size_t c = 0; c < dfm.terms.size(); ++c)
                out.cells[g * dfm.terms.size() + c] += dfm.at(r, c);
        ++g;
    }
    return out;
}

namespace {

double cosine_impl(std::size_t n, auto&& get_x, auto&& get_y) {
    double dot = 0.0, nx = 0.0, ny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = get_x(i), y = get_y(i);
        dot += x * y;
        nx += x * x;
        ny += y * y;
    }
    if (nx == 0.0 || ny == 0.0)
        throw ValidationError("cosine_sim: zero vector");
    return dot / std::sqrt(nx * ny);
}

} // namespace

double cosine_sim(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("cosine_sim: length mismatch");
    return cosine_impl(x.size(), [&](std::size_t i) { return x[i]; },
                       [&](std::size_t i) { return y[i]; });
}

double cosine_sim(std::span<const std::uint64_t> x,
                  std::span<const std::uint64_t> y) {
    if (x.size() != y.size())
        throw ValidationError("cosine_sim: length mismatch");
    return cosine_impl(
        x.size(), [&](std::size_t i) { return static_cast<double>(x[i]); },
        [&](std::size_t i) { return static_cast<double>(y[i]); });
}

SimilarityMatrix similarity_matrix(const FeatureMatrix& dfm) {
    const std::size_t n = dfm.row_labels.size();
    if (n < 2)
        throw ValidationError("similarity_matrix: need at least 2 rows");
    SimilarityMatrix sim;
    sim.labels = dfm.row_labels;
    sim.values.assign(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double c = cosine_sim(dfm.row(i), dfm.row(j));
            sim.values[i * n + j] = c;
            sim.values[j * n + i] = c;
        }
    }
    return sim;
}

namespace {

struct Cluster {
    std::size_t id = 0;     // leaf index or n + merge index
    std::size_t size = 0;
    std::string min_label;  // lexicographically smallest member label
};

} // namespace

Dendrogram hac(const SimilarityMatrix& sim, Linkage linkage) {
    const std::size_t n = sim.labels.size();
    if (n < 2) throw ValidationError("hac: need at least 2 rows");

    Dendrogram d;
    d.leaves = sim.labels;

    std::vector<Cluster> active;
    active.reserve(n);
    for (std::size_t i = 0; i < n; ++i) active.push_back({i, 1, sim.labels[i]});

    // dissimilarity between active clusters, indexed by position
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) dist[i][j] = 1.0 - sim.at(i, j);

    constexpr double kTieEps = 1e-12;
    for (std::size_t step = 0; step < n - 1; ++step) {
        std::size_t best_i = 0, best_j = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                double v = dist[i][j];
                bool better = v < best - kTieEps;
                bool tie = !better && v <= best + kTieEps;
                if (tie) {
                    auto key = [&](std::size_t a, std::size_t b) {
                        return std::minmax(active[a].min_label, active[b].min_label);
                    };
                    better = key(i, j) < key(best_i, best_j);
                }
                if (better) {
                    best = std::min(best, v);
                    best_i = i;
                    best_j = j;
                }
            }
        }

        const Cluster a = active[best_i];
        const Cluster b = active[best_j];
        d.merges.push_back({a.id, b.id, dist[best_i][best_j]});

        // Lance-Williams update into slot best_i, drop slot best_j.
        for (std::size_t o = 0; o < active.size(); ++o) {
            if (o == best_i || o == best_j) continue;
            double da = dist[best_i][o], db = dist[best_j][o], merged = 0.0;
            switch (linkage) {
            case Linkage::average:
                merged = (static_cast<double>(a.size) * da +
                          static_cast<double>(b.size) * db) /
                         static_cast<double>(a.size + b.size);
                break;
            case Linkage::complete: merged = std::max(da, db); break;
            case Linkage::single: merged = std::min(da, db); break;
            }
            dist[best_i][o] = dist[o][best_i] = merged;
        }
        active[best_i] = {n + step, a.size + b.size,
                          std::min(a.min_label, b.min_label)};
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
        for (auto& row : dist) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_j));
        dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(best_j));
    }
    return d;
}

namespace {

std::string newick_label(std::string_view label) {
    bool plain = !label.empty();
    for (char c : label) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
              c == '.' || c == '-'))
            plain = false;
    }
    if (plain) return std::string(label);
    std::string out = "'";
    for (char c : label) {
        if (c == '\'') out += "''";
        else out += c;
    }
    out += "'";
    return out;
}

} // namespace

std::string render_dendrogram(const Dendrogram& d, DendroFormat format) {
    const std::size_t n = d.leaves.size();
    if (format == DendroFormat::json) {
        nlohmann::json doc;
        doc["leaves"] = d.leaves;
        nlohmann::json merges = nlohmann::json::array();
        for (const auto& m : d.merges)
            merges.push_back({{"a", m.a}, {"b", m.b}, {"height", m.height}});
        doc["merges"] = std::move(merges);
        return doc.dump(2) + "\n";
    }

    // Elevation of each cluster = merge height / 2; leaves sit at 0.
    std::vector<double> elevation(n + d.merges.size(), 0.0);
    for (std::size_t t = 0; t < d.merges.size(); ++t)
        elevation[n + t] = d.merges[t].height / 2.0;

    auto render = [&](auto&& self, std::size_t cluster) -> std::string {
        if (cluster < n) return newick_label(d.leaves[cluster]);
        const auto& m = d.merges[cluster - n];
        double up = elevation[cluster];
        return "(" + self(self, m.a) + ":" + format_double(up - elevation[m.a]) +
               "," + self(self, m.b) + ":" + format_double(up - elevation[m.b]) +
               ")";
    };
    if (d.merges.empty()) {
        if (n != 1) throw ValidationError("render_dendrogram: empty dendrogram");
        return newick_label(d.leaves[0]) + ";";
    }
    return render(render, n + d.merges.size() - 1) + ";";
}

void export_dendrogram(const Dendrogram& d, DendroFormat format,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << render_dendrogram(d, format);
    if (format == DendroFormat::newick) out << "\n";
    if (!out) throw IoError("failed writing file: " + path.string());
}

Dendrogram parse_dendrogram_json(std::string_view text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("leaves") ||
        !doc.contains("merges"))
        throw SchemaError("dendrogram json: missing 'leaves' or 'merges'");
    Dendrogram d;
    for (const auto& leaf : doc["leaves"]) d.leaves.push_back(leaf.get<std::string>());
    for (const auto& m : doc["merges"])
        d.merges.push_back({m.at("a").get<std::size_t>(),
                            m.at("b").get<std::size_t>(),
                            m.at("height").get<double>()});
    if (!d.leaves.empty() && d.merges.size() != d.leaves.size() - 1)
        throw SchemaError("dendrogram json: expected n-1 merges");
    return d;
}

void save_feature_matrix(const FeatureMatrix& dfm,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    std::vector<std::string> header;
    header.reserve(dfm.terms.size() + 1);
    header.push_back("label");
    for (const std::string& t : dfm.terms) header.push_back(t);
    csv::write_row(out, header);
    for (std::size_t r = 0; r < dfm.row_labels.size(); ++r) {
        std::vector<std::string> row;
        row.reserve(dfm.terms.size() + 1);
        row.push_back(dfm.row_labels[r]);
        for (std::size_t c = 0; c < dfm.terms.size(); ++c)
            row.push_back(std::to_string(dfm.at(r, c)));
        csv::write_row(out, row);
    }
    if (!out) throw IoError("failed writing file: " + path.string());
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    if (table.header.empty() || table.header[0] != "label")
        throw SchemaError(path.string() + ": expected 'label' as first column");
    FeatureMatrix m;
    m.terms.assign(table.header.begin() + 1, table.header.end());
    m.cells.reserve(table.rows.size() * m.terms.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size())
            throw SchemaError(path.string() + ":" +
                              std::to_string(table.row_lines[r]) +
                              ": wrong field count");
        m.row_labels.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            try {
                m.cells.push_back(std::stoull(row[c]));
            } catch (const std::exception&) {
                throw SchemaError(path.string() + ":" +
                                  std::to_string(table.row_lines[r]) +
                                  ": bad count '" + row[c] + "'");
            }
        }
    }
    return m;
}

} // namespace corex
