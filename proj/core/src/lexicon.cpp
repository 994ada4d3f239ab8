#include "corex/lexicon.hpp"

#include <algorithm>
#include <cctype>

#include "corex/csv.hpp"
#include "corex/error.hpp"

namespace corex {

namespace {

std::string normalize_entry(std::string_view raw) {
    std::string out;
    bool pending_space = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string> entry_tokens(const std::string& entry) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : entry) {
        if (c == ' ') {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

} // namespace

Lexicon load_lexicon(const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    if (table.header.size() < 2 || table.header[0] != "category" ||
        table.header[1] != "entry")
        throw SchemaError(path.string() + ": expected header 'category,entry'");
    Lexicon lex;
    lex.name = path.stem().string();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::size_t line = table.row_lines[r];
        if (row.size() < 2)
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": expected category,entry");
        std::string category = normalize_entry(row[0]);
        std::string entry = normalize_entry(row[1]);
        if (category.empty())
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": empty category");
        if (entry.empty())
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": empty entry for category '" + category + "'");
        auto [it, inserted] = lex.categories[category].insert(entry);
        if (!inserted)
            throw SchemaError(path.string() + ":" + std::to_string(line) +
                              ": duplicate entry '" + entry + "' in category '" +
                              category + "'");
    }
    if (lex.categories.empty())
        throw SchemaError(path.string() + ": lexicon has no entries");
    return lex;
}

namespace {

// Per-category phrase table: first token -> entries starting with it,
// longest first so the greedy scan prefers the longest match.
struct CategoryMatcher {
    std::map<std::string, std::vector<std::vector<std::string>>> by_first;
};

struct Matcher {
    std::vector<std::pair<std::string, CategoryMatcher>> categories;

    explicit Matcher(const Lexicon& lex) {
        for (const auto& [category, entries] : lex.categories) {
            CategoryMatcher cm;
            for (const std::string& entry : entries) {
                std::vector<std::string> tokens = entry_tokens(entry);
                if (tokens.empty()) continue;
                cm.by_first[tokens.front()].push_back(std::move(tokens));
            }
            for (auto& [first, list] : cm.by_first)
                std::stable_sort(list.begin(), list.end(),
                                 [](const auto& a, const auto& b) {
                                     return a.size() > b.size();
                                 });
            categories.emplace_back(category, std::move(cm));
        }
    }
};

std::int64_t match_category(const TokenStream& stream, const CategoryMatcher& cm) {
    auto bounds = stream.sentence_bounds;
    if (bounds.empty() && !stream.tokens.empty())
        bounds.emplace_back(0, stream.tokens.size());
    std::int64_t matched_tokens = 0;
    for (const auto& [s, e] : bounds) {
        std::size_t i = s;
        while (i < e) {
            auto it = cm.by_first.find(stream.tokens[i]);
            if (it == cm.by_first.end()) {
                ++i;
                continue;
            }
            std::size_t consumed = 0;
            for (const auto& entry : it->second) {
                if (entry.size() > e - i) continue;
                bool match = true;
                for (std::size_t k = 1; k < entry.size(); ++k) {
                    if (stream.tokens[i + k] != entry[k]) {
                        match = false;
                        break;
                    }
                }
                if (match) {
                    consumed = entry.size();
                    break; // longest first
                }
            }
            if (consumed > 0) {
                matched_tokens += static_cast<std::int64_t>(consumed);
                i += consumed;
            } else {
                ++i;
            }
        }
    }
    return matched_tokens;
}

} // namespace

TagResult tag(const TokenStream& stream, const Lexicon& lexicon) {
    if (stream.raw_word_count == 0)
        throw ValidationError("tag: document has no words");
    Matcher matcher(lexicon);
    TagResult result;
    result.lexicon = lexicon.name;
    for (const auto& [category, cm] : matcher.categories) {
        std::int64_t count = match_category(stream, cm);
        result.counts[category] = count;
        result.ratios[category] = 100.0 * static_cast<double>(count) /
                                  static_cast<double>(stream.raw_word_count);
    }
    return result;
}

std::vector<TagResult> tag_corpus(const Corpus& corpus,
                                  const std::vector<Lexicon>& lexicons,
                                  const PrepConfig& config) {
    if (corpus.empty()) throw ValidationError("tag_corpus: empty corpus");
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const Document& d : corpus.documents()) ids.push_back(d.id);
    std::sort(ids.begin(), ids.end());

    std::vector<Matcher> matchers;
    matchers.reserve(lexicons.size());
    for (const Lexicon& lex : lexicons) matchers.emplace_back(lex);

    std::vector<TagResult> rows;
    rows.reserve(ids.size() * lexicons.size());
    for (const std::string& id : ids) {
        const Document& doc = corpus.at(id);
        TokenStream stream = tokenize(doc.text, config.lowercase);
        if (stream.raw_word_count == 0)
            throw ValidationError("tag_corpus: document '" + id + "' has no words");
        for (std::size_t l = 0; l < lexicons.size(); ++l) {
            TagResult row;
            row.doc_id = id;
            row.lexicon = lexicons[l].name;
            for (const auto& [category, cm] : matchers[l].categories) {
                std::int64_t count = match_category(stream, cm);
                row.counts[category] = count;
                row.ratios[category] = 100.0 * static_cast<double>(count) /
                                       static_cast<double>(stream.raw_word_count);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace corex
