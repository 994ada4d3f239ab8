#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "corex/corpus.hpp"
#include "corex/textprep.hpp"

namespace corex {

/// Category dictionary. Entries are lowercase single words or space-
/// separated phrases ("renewable energy"); no entry repeats within a
/// category.
struct Lexicon {
    std::string name;
    std::map<std::string, std::set<std::string>> categories;
};

/// Reads a lexicon from CSV with header category,entry. Entries are
/// lowercased and inner whitespace is collapsed. Throws SchemaError on a
/// duplicate (category, entry) pair or an empty category name, naming the
/// line. The lexicon name is the file stem.
Lexicon load_lexicon(const std::filesystem::path& path);

/// Per-category match counts and per-100-word ratios for one document.
/// A matched phrase of p tokens contributes p to its category count, so
/// ratio = 100 * matched_tokens / raw_word_count stays within [0, 100].
struct TagResult {
    std::string doc_id;
    std::string lexicon;
    std::map<std::string, std::int64_t> counts;
    std::map<std::string, double> ratios;
};

/// Greedy longest-phrase-first, left-to-right matching over the raw
/// lowercase tokens (stopwords retained, since dictionary phrases may
/// contain them). Matching runs per category; a token is consumed by at
/// most one entry per category, and a phrase never crosses a sentence
/// boundary. Throws ValidationError when the stream has no words.
TagResult tag(const TokenStream& stream, const Lexicon& lexicon);

/// One TagResult per document per lexicon, ordered by (doc id, lexicon
/// position). `config` only supplies the tokenizer casing here; noise
/// removal does not apply to dictionary matching.
std::vector<TagResult> tag_corpus(const Corpus& corpus,
                                  const std::vector<Lexicon>& lexicons,
                                  const PrepConfig& config = PrepConfig::defaults());

} // namespace corex
