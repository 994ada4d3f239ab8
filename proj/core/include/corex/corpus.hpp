#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace corex {

enum class Sector { Government, Health, HigherEd, Others, Private, Mixed };
enum class Continent { Africa, Asia, Europe, LatamCar, NorthAmerica, Oceania };

inline constexpr std::array<Sector, 6> kAllSectors = {
    Sector::Government, Sector::Health, Sector::HigherEd,
    Sector::Others,     Sector::Private, Sector::Mixed};
inline constexpr std::array<Continent, 6> kAllContinents = {
    Continent::Africa,   Continent::Asia,         Continent::Europe,
    Continent::LatamCar, Continent::NorthAmerica, Continent::Oceania};

/// Canonical machine labels ("Government", "HigherEd", "LATAM-CAR", ...).
std::string_view to_string(Sector s);
std::string_view to_string(Continent c);

/// Human-facing labels for tables ("Higher ed.", "North America", ...).
std::string_view display_name(Sector s);
std::string_view display_name(Continent c);

/// Case-insensitive label parsing; accepts the canonical labels plus common
/// spelling variants ("higher ed.", "latam-car", "north america", ...).
std::optional<Sector> parse_sector(std::string_view label);
std::optional<Continent> parse_continent(std::string_view label);

/// One mission statement with its institutional metadata. `country` is
/// stored for provenance but never used by any computation.
struct Document {
    std::string id;
    std::string institution;
    Sector sector = Sector::Government;
    Continent continent = Continent::Africa;
    std::string country;
    std::string text;

    bool operator==(const Document&) const = default;
};

/// An immutable, insertion-ordered document collection with a
/// (sector, continent) stratum index. Construction validates that ids are
/// unique and non-empty and that every text is non-empty.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Document> documents);

    const std::vector<Document>& documents() const { return docs_; }
    std::size_t size() const { return docs_.size(); }
    bool empty() const { return docs_.empty(); }

    bool contains(std::string_view id) const;
    const Document& at(std::string_view id) const;

    /// Ids in one stratum, in insertion order. Missing stratum -> empty.
    const std::vector<std::string>& stratum(Sector s, Continent c) const;
    std::vector<std::string> sector_ids(Sector s) const;
    std::vector<std::string> continent_ids(Continent c) const;
    std::set<Sector> sectors_present() const;
    std::set<Continent> continents_present() const;

    bool operator==(const Corpus& other) const { return docs_ == other.docs_; }

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::map<std::pair<Sector, Continent>, std::vector<std::string>> strata_;
};

enum class CorpusFormat { csv, jsonl };

/// Reads a corpus from CSV (RFC-4180, header row) or JSONL (one object per
/// line). Required columns/keys: id, institution, sector, continent, text;
/// `country` is optional and extra columns are ignored. Errors name the
/// offending column or row.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

/// Writes the same formats load_corpus reads; load(save(c)) == c.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 CorpusFormat format);

enum class GroupKey { sector, continent, sector_x_continent };

struct GroupCount {
    std::string group;
    std::size_t count = 0;
    double percent = 0.0; // full precision; render rounds to two decimals
};

/// Group sizes and percentages in enum order. Throws on an empty corpus.
std::vector<GroupCount> group_counts(const Corpus& corpus, GroupKey key);

/// Relabels every document in `sources` to `target`; order and all other
/// fields preserved. Every source sector must be present in the corpus.
Corpus merge_strata(const Corpus& corpus, const std::set<Sector>& sources,
                    Sector target);

/// Keeps only documents whose sector is in `keep` (insertion order kept).
Corpus filter_sectors(const Corpus& corpus, const std::set<Sector>& keep);

/// Draws n documents per stratum without replacement. Within each stratum
/// the ids are sorted lexicographically and shuffled by a seeded
/// Fisher-Yates pass (mt19937_64 over a per-stratum sub-seed), so the
/// result depends only on (corpus contents, key, n, seed) and never on file
/// order. Output order: strata in enum order, ids sorted within a stratum.
/// `key` must be sector or continent.
Corpus stratified_sample(const Corpus& corpus, GroupKey key,
                         std::size_t n_per_stratum, std::uint64_t seed);

} // namespace corex
