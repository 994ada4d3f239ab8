#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corex/textprep.hpp"

namespace corex {

/// Row-major counts of terms per labeled document or group. Columns are
/// lexicographically ordered terms whose corpus-wide total exceeded
/// `min_count`; no all-zero columns survive construction.
struct FeatureMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> terms;
    std::vector<std::uint64_t> cells;
    std::uint64_t min_count = 0;

    std::uint64_t at(std::size_t row, std::size_t col) const {
        return cells[row * terms.size() + col];
    }
    std::span<const std::uint64_t> row(std::size_t r) const {
        return {cells.data() + r * terms.size(), terms.size()};
    }
};

/// Streams must be noise-removed. Terms with corpus-wide total <= min_count
/// are excluded (the default threshold 10 keeps strictly-more-than-ten
/// occurrences). Rows follow the map's label order. Throws when every term
/// is filtered out.
FeatureMatrix build_dfm(const std::map<std::string, TokenStream>& streams,
                        std::uint64_t min_count);

/// Sums member rows per group (equivalent to concatenating the documents).
/// Group rows are ordered by group name. Every row label must be mapped.
FeatureMatrix group_rows(const FeatureMatrix& dfm,
                         const std::map<std::string, std::string>& grouping);

/// x.y / (|x||y|), in [0, 1] for non-negative input. Throws on a zero
/// vector or mismatched lengths.
double cosine_sim(std::span<const double> x, std::span<const double> y);
double cosine_sim(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y);

/// Pairwise cosines between matrix rows; symmetric with a unit diagonal.
struct SimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<double> values; // row-major, n x n

    double at(std::size_t i, std::size_t j) const {
        return values[i * labels.size() + j];
    }
};

SimilarityMatrix similarity_matrix(const FeatureMatrix& dfm);

enum class Linkage { average, complete, single };

/// Agglomerative merge tree over dissimilarity 1 - cosine. Leaves are the
/// matrix labels; merge t joins clusters `a` and `b` (leaf i = i, the
/// cluster made by merge t = n + t) at `height`.
struct Dendrogram {
    struct Merge {
        std::size_t a = 0;
        std::size_t b = 0;
        double height = 0.0;
    };
    std::vector<std::string> leaves;
    std::vector<Merge> merges;
};

/// Standard agglomerative clustering (Lance-Williams updates). The pair
/// with the smallest dissimilarity merges first; ties within 1e-12 break
/// on the lexicographically smallest member label. Needs >= 2 rows.
Dendrogram hac(const SimilarityMatrix& sim, Linkage linkage = Linkage::average);

enum class DendroFormat { newick, json };

/// Newick output places every cluster at elevation height/2 (the usual
/// ultrametric midpoint convention), so a two-leaf tree merged at 0.2
/// renders as "(A:0.1,B:0.1);". JSON preserves the merge list exactly.
/// Both renderings are byte-deterministic.
std::string render_dendrogram(const Dendrogram& d, DendroFormat format);
void export_dendrogram(const Dendrogram& d, DendroFormat format,
                       const std::filesystem::path& path);
Dendrogram parse_dendrogram_json(std::string_view text);

/// FeatureMatrix <-> CSV (labels in the first column, terms in the header).
void save_feature_matrix(const FeatureMatrix& dfm, const std::filesystem::path& path);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

} // namespace corex
