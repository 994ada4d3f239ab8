#include "corex/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "corex/csv.hpp"
#include "corex/error.hpp"
#include "corex/hash.hpp"

namespace corex {

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

const std::map<std::string, Sector, std::less<>>& sector_aliases() {
    static const std::map<std::string, Sector, std::less<>> table = {
        {"government", Sector::Government},
        {"health", Sector::Health},
        {"highered", Sector::HigherEd},
        {"higher ed", Sector::HigherEd},
        {"higher ed.", Sector::HigherEd},
        {"higher_ed", Sector::HigherEd},
        {"higher education", Sector::HigherEd},
        {"others", Sector::Others},
        {"other", Sector::Others},
        {"non-profit", Sector::Others},
        {"private", Sector::Private},
        {"mixed", Sector::Mixed},
    };
    return table;
}

const std::map<std::string, Continent, std::less<>>& continent_aliases() {
    static const std::map<std::string, Continent, std::less<>> table = {
        {"africa", Continent::Africa},
        {"asia", Continent::Asia},
        {"europe", Continent::Europe},
        {"latam-car", Continent::LatamCar},
        {"latamcar", Continent::LatamCar},
        {"latam_car", Continent::LatamCar},
        {"latin america and the caribbean", Continent::LatamCar},
        {"northamerica", Continent::NorthAmerica},
        {"north america", Continent::NorthAmerica},
        {"north_america", Continent::NorthAmerica},
        {"oceania", Continent::Oceania},
    };
    return table;
}

} // namespace

std::string_view to_string(Sector s) {
    switch (s) {
    case Sector::Government: return "Government";
    case Sector::Health: return "Health";
    case Sector::HigherEd: return "HigherEd";
    case Sector::Others: return "Others";
    case Sector::Private: return "Private";
    case Sector::Mixed: return "Mixed";
    }
    return "?";
}

std::string_view to_string(Continent c) {
    switch (c) {
    case Continent::Africa: return "Africa";
    case Continent::Asia: return "Asia";
    case Continent::Europe: return "Europe";
    case Continent::LatamCar: return "LATAM-CAR";
    case Continent::NorthAmerica: return "NorthAmerica";
    case Continent::Oceania: return "Oceania";
    }
    return "?";
}

std::string_view display_name(Sector s) {
    switch (s) {
    case Sector::HigherEd: return "Higher ed.";
    default: return to_string(s);
    }
}

std::string_view display_name(Continent c) {
    switch (c) {
    case Continent::NorthAmerica: return "North America";
    default: return to_string(c);
    }
}

std::optional<Sector> parse_sector(std::string_view label) {
    auto it = sector_aliases().find(lower_ascii(label));
    if (it == sector_aliases().end()) return std::nullopt;
    return it->second;
}

std::optional<Continent> parse_continent(std::string_view label) {
    auto it = continent_aliases().find(lower_ascii(label));
    if (it == continent_aliases().end()) return std::nullopt;
    return it->second;
}

Corpus::Corpus(std::vector<Document> documents) : docs_(std::move(documents)) {
    by_id_.reserve(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        const Document& d = docs_[i];
        if (d.id.empty())
            throw SchemaError("document at position " + std::to_string(i) +
                              " has an empty id");
        if (d.text.empty())
            throw SchemaError("document '" + d.id + "' has empty text");
        auto [it, inserted] = by_id_.emplace(d.id, i);
        if (!inserted)
            throw SchemaError("duplicate document id '" + d.id +
                              "' at positions " + std::to_string(it->second) +
                              " and " + std::to_string(i));
        strata_[{d.sector, d.continent}].push_back(d.id);
    }
}

bool Corpus::contains(std::string_view id) const {
    return by_id_.find(std::string(id)) != by_id_.end();
}

const Document& Corpus::at(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end())
        throw ValidationError("no document with id '" + std::string(id) + "'");
    return docs_[it->second];
}

const std::vector<std::string>& Corpus::stratum(Sector s, Continent c) const {
    static const std::vector<std::string> empty;
    auto it = strata_.find({s, c});
    return it == strata_.end() ? empty : it->second;
}

std::vector<std::string> Corpus::sector_ids(Sector s) const {
    std::vector<std::string> out;
    for (const Document& d : docs_)
        if (d.sector == s) out.push_back(d.id);
    return out;
}

std::vector<std::string> Corpus::continent_ids(Continent c) const {
    std::vector<std::string> out;
    for (const Document& d : docs_)
        if (d.continent == c) out.push_back(d.id);
    return out;
}

std::set<Sector> Corpus::sectors_present() const {
    std::set<Sector> out;
    for (const Document& d : docs_) out.insert(d.sector);
    return out;
}

std::set<Continent> Corpus::continents_present() const {
    std::set<Continent> out;
    for (const Document& d : docs_) out.insert(d.continent);
    return out;
}

namespace {

Corpus load_corpus_csv(const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    const std::vector<std::string> required = {"id", "institution", "sector",
                                               "continent", "text"};
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        col[table.header[i]] = i;
    for (const std::string& name : required)
        if (!col.count(name))
            throw SchemaError(path.string() + ": missing column '" + name + "'");
    bool has_country = col.count("country") > 0;

    std::map<std::string, std::size_t> first_line_of_id;
    std::vector<Document> docs;
    docs.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::size_t line = table.row_lines[r];
        if (row.size() < table.header.size())
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": expected " + std::to_string(table.header.size()) +
                              " fields, got " + std::to_string(row.size()));
        Document d;
        d.id = row[col["id"]];
        d.institution = row[col["institution"]];
        auto sector = parse_sector(row[col["sector"]]);
        if (!sector)
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": unknown sector '" + row[col["sector"]] + "'");
        d.sector = *sector;
        auto continent = parse_continent(row[col["continent"]]);
        if (!continent)
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": unknown continent '" + row[col["continent"]] + "'");
        d.continent = *continent;
        if (has_country) d.country = row[col["country"]];
        d.text = row[col["text"]];
        if (d.id.empty())
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": empty id");
        if (d.text.empty())
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": empty text for id '" + d.id + "'");
        auto [it, inserted] = first_line_of_id.emplace(d.id, line);
        if (!inserted)
            throw SchemaError(path.string() + ": duplicate id '" + d.id +
                              "' on lines " + std::to_string(it->second) +
                              " and " + std::to_string(line));
        docs.push_back(std::move(d));
    }
    return Corpus(std::move(docs));
}

Corpus load_corpus_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::vector<Document> docs;
    std::map<std::string, std::size_t> first_line_of_id;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                              ": not a JSON object");
        auto get_str = [&](const char* key, bool required) -> std::string {
            if (!obj.contains(key)) {
                if (required)
                    throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                                      ": missing key '" + key + "'");
                return {};
            }
            if (!obj[key].is_string())
                throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                                  ": key '" + key + "' is not a string");
            return obj[key].get<std::string>();
        };
        Document d;
        d.id = get_str("id", true);
        d.institution = get_str("institution", true);
        std::string sector_label = get_str("sector", true);
        auto sector = parse_sector(sector_label);
        if (!sector)
            throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                              ": unknown sector '" + sector_label + "'");
        d.sector = *sector;
        std::string continent_label = get_str("continent", true);
        auto continent = parse_continent(continent_label);
        if (!continent)
            throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                              ": unknown continent '" + continent_label + "'");
        d.continent = *continent;
        d.country = get_str("country", false);
        d.text = get_str("text", true);
        if (d.id.empty())
            throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                              ": empty id");
        if (d.text.empty())
            throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                              ": empty text for id '" + d.id + "'");
        auto [it, inserted] = first_line_of_id.emplace(d.id, line_no);
        if (!inserted)
            throw SchemaError(path.string() + ": duplicate id '" + d.id +
                              "' on lines " + std::to_string(it->second) +
                              " and " + std::to_string(line_no));
        docs.push_back(std::move(d));
    }
    return Corpus(std::move(docs));
}

} // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    return format == CorpusFormat::csv ? load_corpus_csv(path)
                                       : load_corpus_jsonl(path);
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    if (format == CorpusFormat::csv) {
        const std::vector<std::string> header = {"id",        "institution",
                                                 "sector",    "continent",
                                                 "country",   "text"};
        csv::write_row(out, header);
        for (const Document& d : corpus.documents()) {
            const std::vector<std::string> row = {
                d.id,
                d.institution,
                std::string(to_string(d.sector)),
                std::string(to_string(d.continent)),
                d.country,
                d.text};
            csv::write_row(out, row);
        }
    } else {
        for (const Document& d : corpus.documents()) {
            nlohmann::json obj = {{"id", d.id},
                                  {"institution", d.institution},
                                  {"sector", std::string(to_string(d.sector))},
                                  {"continent", std::string(to_string(d.continent))},
                                  {"country", d.country},
                                  {"text", d.text}};
            out << obj.dump() << '\n';
        }
    }
    if (!out) throw IoError("failed writing file: " + path.string());
}

std::vector<GroupCount> group_counts(const Corpus& corpus, GroupKey key) {
    if (corpus.empty()) throw ValidationError("group_counts: empty corpus");
    std::map<std::pair<int, int>, std::size_t> counts; // (primary, secondary)
    for (const Document& d : corpus.documents()) {
        std::pair<int, int> g{0, 0};
        switch (key) {
        case GroupKey::sector: g = {static_cast<int>(d.sector), -1}; break;
        case GroupKey::continent: g = {static_cast<int>(d.continent), -1}; break;
        case GroupKey::sector_x_continent:
            g = {static_cast<int>(d.sector), static_cast<int>(d.continent)};
            break;
        }
        ++counts[g];
    }
    std::vector<GroupCount> out;
    out.reserve(counts.size());
    double total = static_cast<double>(corpus.size());
    for (const auto& [g, n] : counts) {
        std::string label;
        switch (key) {
        case GroupKey::sector: label = to_string(static_cast<Sector>(g.first)); break;
        case GroupKey::continent:
            label = to_string(static_cast<Continent>(g.first));
            break;
        case GroupKey::sector_x_continent:
            label = std::string(to_string(static_cast<Sector>(g.first))) + "/" +
                    std::string(to_string(static_cast<Continent>(g.second)));
            break;
        }
        out.push_back({std::move(label), n, 100.0 * static_cast<double>(n) / total});
    }
    return out;
}

Corpus merge_strata(const Corpus& corpus, const std::set<Sector>& sources,
                    Sector target) {
    if (sources.empty())
        throw ValidationError("merge_strata: empty source set");
    if (sources.count(target))
        throw ValidationError("merge_strata: target sector '" +
                              std::string(to_string(target)) +
                              "' is among the sources");
    std::set<Sector> present = corpus.sectors_present();
    for (Sector s : sources)
        if (!present.count(s))
            throw ValidationError("merge_strata: source sector '" +
                                  std::string(to_string(s)) +
                                  "' not present in corpus");
    std::vector<Document> docs = corpus.documents();
    for (Document& d : docs)
        if (sources.count(d.sector)) d.sector = target;
    return Corpus(std::move(docs));
}

Corpus filter_sectors(const Corpus& corpus, const std::set<Sector>& keep) {
    std::vector<Document> docs;
    for (const Document& d : corpus.documents())
        if (keep.count(d.sector)) docs.push_back(d);
    return Corpus(std::move(docs));
}

namespace {

// Unbiased draw in [0, bound) by rejection; avoids the
// implementation-defined std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

} // namespace

Corpus stratified_sample(const Corpus& corpus, GroupKey key,
                         std::size_t n_per_stratum, std::uint64_t seed) {
    if (key == GroupKey::sector_x_continent)
        throw ValidationError("stratified_sample: key must be sector or continent");
    if (n_per_stratum == 0)
        throw ValidationError("stratified_sample: n_per_stratum must be positive");

    std::vector<Document> out;
    auto sample_stratum = [&](std::string_view label,
                              std::vector<std::string> ids) {
        if (ids.empty()) return;
        if (ids.size() < n_per_stratum)
            throw ValidationError("stratified_sample: stratum '" +
                                  std::string(label) + "' has only " +
                                  std::to_string(ids.size()) +
                                  " documents, need " +
                                  std::to_string(n_per_stratum));
        std::sort(ids.begin(), ids.end());
        std::mt19937_64 rng(splitmix64(seed ^ fnv1a64(label)));
        for (std::size_t i = ids.size() - 1; i > 0; --i) {
            std::uint64_t j = uniform_below(rng, i + 1);
            std::swap(ids[i], ids[j]);
        }
        ids.resize(n_per_stratum);
        std::sort(ids.begin(), ids.end());
        for (const std::string& id : ids) out.push_back(corpus.at(id));
    };

    if (key == GroupKey::sector) {
        for (Sector s : kAllSectors) sample_stratum(to_string(s), corpus.sector_ids(s));
    } else {
        for (Continent c : kAllContinents)
            sample_stratum(to_string(c), corpus.continent_ids(c));
    }
    return Corpus(std::move(out));
}

} // namespace corex
