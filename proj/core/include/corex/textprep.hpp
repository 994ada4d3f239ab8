#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace corex {

/// Ordered lowercase tokens with sentence boundaries. `sentence_bounds`
/// partitions [0, tokens.size()) into half-open [start, end) ranges.
/// `raw_word_count` is the token count before any removal pass, so metrics
/// normalized "per 100 words" stay comparable after cleaning.
struct TokenStream {
    std::vector<std::string> tokens;
    std::vector<std::pair<std::size_t, std::size_t>> sentence_bounds;
    std::size_t raw_word_count = 0;
};

/// Word lists driving remove_noise. The two lists must be disjoint after
/// lowercasing; `make_prep_config` and the file loaders enforce that.
struct PrepConfig {
    std::unordered_set<std::string> stopwords;
    std::unordered_set<std::string> noninformative;
    bool lowercase = true;

    /// Built-in English stopwords + the default non-informative list
    /// (mission(s), aim(s), institution(s), university(ies), and the other
    /// boilerplate words documented in default_noninformative_words()).
    static PrepConfig defaults();
};

/// Validates disjointness and lowercases both lists.
PrepConfig make_prep_config(std::unordered_set<std::string> stopwords,
                            std::unordered_set<std::string> noninformative,
                            bool lowercase = true);

/// The versioned built-in lists. Fixed at compile time; never fetched.
const std::vector<std::string>& default_stopwords();
const std::vector<std::string>& default_noninformative_words();
/// Lowercased abbreviations including the trailing period ("dr.", "u.s.").
const std::vector<std::string>& default_abbreviations();

/// One entry per line, '#' starts a comment, blank lines skipped,
/// entries lowercased.
std::unordered_set<std::string> load_word_list(const std::filesystem::path& path);

/// Splits text into trimmed sentences. A boundary is a run of {. ! ? ;}
/// (optionally followed by closing quotes/brackets) followed by whitespace
/// and an uppercase letter or digit, except when a single '.' terminates
///   - an entry of the abbreviation list ("u.s.", "dr.", ...), or
///   - a single capital letter (an initial, "J. Doe").
/// The remainder after the last boundary is the final sentence. Empty or
/// all-whitespace text yields no sentences.
std::vector<std::string> split_sentences(const std::string& text);
std::vector<std::string> split_sentences(
    const std::string& text,
    const std::unordered_set<std::string>& abbreviations);

/// Sentence-aware tokenizer. A token is a maximal run of ASCII letters or
/// digits (bytes >= 0x80 are treated as letters, so UTF-8 words survive
/// intact) where '-' and an apostrophe (ASCII ' or U+2019, normalized to
/// ASCII) are kept only between two such characters; every other character
/// splits. ASCII letters are lowercased when `lowercase` is set.
/// raw_word_count is set to the resulting token count.
TokenStream tokenize(const std::string& text, bool lowercase = true);

/// Heuristic English syllable count, always >= 1. The word must be
/// alphabetic once '-' and apostrophes are stripped; otherwise throws
/// ValidationError. Rules, applied per hyphen-separated part after removing
/// apostrophes and lowercasing:
///   1. count maximal vowel groups (aeiou, plus y when it is not
///      part-initial and the next letter is not a vowel);
///   2. a trailing "e" is silent unless it follows "l" after a consonant
///      ("table") or is the only vowel group;
///   3. a trailing "es" is silent when preceded by a consonant other than
///      one of {s c x z g l} ("institutes" -> 3, "services" -> 3);
///   4. a trailing "ed" is silent when preceded by a consonant other than
///      {t d} ("developed" -> 3, "needed" -> 2);
///   5. the small exception table in the implementation overrides 1-4
///      ("science" -> 2, "idea" -> 3, ...);
///   6. each part contributes at least 1; parts are summed.
int count_syllables(std::string_view word);

/// Drops stopwords and non-informative words. Token order, sentence count
/// and raw_word_count are preserved; sentence bounds are re-indexed (a
/// sentence may end up empty).
TokenStream remove_noise(const TokenStream& stream, const PrepConfig& config);

} // namespace corex
