#include "corex/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "corex/error.hpp"

namespace corex {

namespace {

bool is_ascii_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_word_byte(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || u >= 0x80;
}

char lower_byte(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_ascii_space(s[b])) ++b;
    while (e > b && is_ascii_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?' || c == ';'; }
bool is_closer(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

const std::unordered_set<std::string>& default_abbreviation_set() {
    static const std::unordered_set<std::string> set(
        default_abbreviations().begin(), default_abbreviations().end());
    return set;
}

} // namespace

std::vector<std::string> split_sentences(const std::string& text) {
    return split_sentences(text, default_abbreviation_set());
}

std::vector<std::string> split_sentences(
    const std::string& text,
    const std::unordered_set<std::string>& abbreviations) {
    std::vector<std::string> out;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_terminal(text[i])) {
            ++i;
            continue;
        }
        std::size_t run_end = i;
        while (run_end < text.size() && is_terminal(text[run_end])) ++run_end;
        bool single_dot = (run_end == i + 1) && text[i] == '.';
        std::size_t close_end = run_end;
        while (close_end < text.size() && is_closer(text[close_end])) ++close_end;
        std::size_t ws = close_end;
        while (ws < text.size() && is_ascii_space(text[ws])) ++ws;
        bool boundary = ws > close_end && ws < text.size() &&
                        (std::isupper(static_cast<unsigned char>(text[ws])) ||
                         std::isdigit(static_cast<unsigned char>(text[ws])));
        if (boundary && single_dot) {
            // word ending at this period, e.g. "U.S." or "Dr."
            std::size_t tok_begin = i;
            while (tok_begin > 0 && !is_ascii_space(text[tok_begin - 1]))
                --tok_begin;
            std::string token = text.substr(tok_begin, i + 1 - tok_begin);
            while (!token.empty() &&
                   (token.front() == '(' || token.front() == '[' ||
                    token.front() == '{' || token.front() == '"' ||
                    token.front() == '\''))
                token.erase(token.begin());
            bool initial = token.size() == 2 &&
                           std::isupper(static_cast<unsigned char>(token[0]));
            std::string lowered;
            lowered.reserve(token.size());
            for (char c : token) lowered += lower_byte(c);
            if (initial || abbreviations.count(lowered)) boundary = false;
        }
        if (!boundary) {
            i = run_end;
            continue;
        }
        std::string sentence = trim(std::string_view(text).substr(start, close_end - start));
        if (!sentence.empty()) out.push_back(std::move(sentence));
        start = ws;
        i = ws;
    }
    std::string last = trim(std::string_view(text).substr(start));
    if (!last.empty()) out.push_back(std::move(last));
    return out;
}

namespace {

// Appends the tokens of one sentence. Apostrophes cover ASCII ' and U+2019.
void tokenize_into(const std::string& sentence, bool lowercase,
                   std::vector<std::string>& tokens) {
    std::string current;
    std::size_t i = 0;
    const std::size_t n = sentence.size();
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    auto apostrophe_width = [&](std::size_t p) -> std::size_t {
        if (sentence[p] == '\'') return 1;
        if (p + 2 < n && sentence[p] == '\xE2' && sentence[p + 1] == '\x80' &&
            sentence[p + 2] == '\x99')
            return 3;
        return 0;
    };
    while (i < n) {
        // apostrophes first: U+2019 starts with a byte that would otherwise
        // be treated as a word byte
        if (std::size_t apos = apostrophe_width(i); apos > 0) {
            if (!current.empty() && i + apos < n && is_word_byte(sentence[i + apos])) {
                current += '\'';
            } else {
                flush();
            }
            i += apos;
            continue;
        }
        char c = sentence[i];
        if (is_word_byte(c)) {
            current += lowercase ? lower_byte(c) : c;
            ++i;
            continue;
        }
        if (c == '-' && !current.empty() && i + 1 < n && is_word_byte(sentence[i + 1])) {
            current += '-';
            ++i;
            continue;
        }
        flush();
        ++i;
    }
    flush();
}

} // namespace

TokenStream tokenize(const std::string& text, bool lowercase) {
    TokenStream ts;
    for (const std::string& sentence : split_sentences(text)) {
        std::size_t begin = ts.tokens.size();
        tokenize_into(sentence, lowercase, ts.tokens);
        ts.sentence_bounds.emplace_back(begin, ts.tokens.size());
    }
    ts.raw_word_count = ts.tokens.size();
    return ts;
}

namespace {

const std::map<std::string, int, std::less<>>& syllable_exceptions() {
    static const std::map<std::string, int, std::less<>> table = {
        {"area", 3},      {"areas", 3},     {"being", 2},
        {"business", 2},  {"businesses", 3}, {"create", 2},
        {"created", 3},   {"creates", 2},   {"doing", 2},
        {"every", 2},     {"everyone", 3},  {"everything", 3},
        {"going", 2},     {"idea", 3},      {"ideas", 3},
        {"science", 2},   {"sciences", 3},  {"seeing", 2}};
    return table;
}

bool is_plain_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

int part_syllables(const std::string& part) {
    if (auto it = syllable_exceptions().find(part); it != syllable_exceptions().end())
        return it->second;

    const std::size_t n = part.size();
    auto vowel_at = [&](std::size_t idx) {
        char c = part[idx];
        if (is_plain_vowel(c)) return true;
        if (c == 'y')
            return idx > 0 && !(idx + 1 < n && is_plain_vowel(part[idx + 1]));
        return false;
    };

    int groups = 0;
    bool in_group = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (vowel_at(i)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }

    if (n >= 3 && groups >= 2) {
        auto consonant = [&](char c) { return !is_plain_vowel(c) && c != 'y'; };
        if (part[n - 1] == 'e') {
            bool le_after_consonant = part[n - 2] == 'l' && consonant(part[n - 3]);
            if (!le_after_consonant) --groups;
        } else if (n >= 4 && part[n - 2] == 'e' && part[n - 1] == 's') {
            char before = part[n - 3];
            static const std::string keep = "scxzgl";
            if (consonant(before) && keep.find(before) == std::string::npos)
                --groups;
        } else if (n >= 4 && part[n - 2] == 'e' && part[n - 1] == 'd') {
            char before = part[n - 3];
            if (consonant(before) && before != 't' && before != 'd') --groups;
        }
    }
    return std::max(1, groups);
}

} // namespace

int count_syllables(std::string_view word) {
    if (word.empty()) throw ValidationError("count_syllables: empty word");
    std::vector<std::string> parts(1);
    for (std::size_t i = 0; i < word.size(); ++i) {
        char c = word[i];
        if (c == '-') {
            parts.emplace_back();
            continue;
        }
        if (c == '\'') continue;
        if (c == '\xE2' && i + 2 < word.size() && word[i + 1] == '\x80' &&
            word[i + 2] == '\x99') {
            i += 2;
            continue;
        }
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalpha(u) == 0 && u < 0x80)
            throw ValidationError("count_syllables: non-alphabetic word '" +
                                  std::string(word) + "'");
        parts.back() += lower_byte(c);
    }
    int total = 0;
    bool any = false;
    for (const std::string& part : parts) {
        if (part.empty()) continue;
        any = true;
        total += part_syllables(part);
    }
    if (!any)
        throw ValidationError("count_syllables: non-alphabetic word '" +
                              std::string(word) + "'");
    return total;
}

PrepConfig PrepConfig::defaults() {
    static const PrepConfig config = make_prep_config(
        {default_stopwords().begin(), default_stopwords().end()},
        {default_noninformative_words().begin(),
         default_noninformative_words().end()});
    return config;
}

PrepConfig make_prep_config(std::unordered_set<std::string> stopwords,
                            std::unordered_set<std::string> noninformative,
                            bool lowercase) {
    auto lowered = [](const std::unordered_set<std::string>& in) {
        std::unordered_set<std::string> out;
        out.reserve(in.size());
        for (const std::string& w : in) {
            std::string l;
            l.reserve(w.size());
            for (char c : w) l += lower_byte(c);
            out.insert(std::move(l));
        }
        return out;
    };
    PrepConfig config;
    config.stopwords = lowered(stopwords);
    config.noninformative = lowered(noninformative);
    config.lowercase = lowercase;
    for (const std::string& w : config.noninformative)
        if (config.stopwords.count(w))
            throw ValidationError(
                "prep config: '" + w +
                "' appears in both the stopword and non-informative lists");
    return config;
}

std::unordered_set<std::string> load_word_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open word list: " + path.string());
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        for (char& c : entry) c = lower_byte(c);
        out.insert(std::move(entry));
    }
    return out;
}

TokenStream remove_noise(const TokenStream& stream, const PrepConfig& config) {
    TokenStream out;
    out.raw_word_count = stream.raw_word_count;
    auto bounds = stream.sentence_bounds;
    if (bounds.empty() && !stream.tokens.empty())
        bounds.emplace_back(0, stream.tokens.size());
    for (const auto& [s, e] : bounds) {
        std::size_t begin = out.tokens.size();
        for (std::size_t i = s; i < e; ++i) {
            const std::string& t = stream.tokens[i];
            if (config.stopwords.count(t) || config.noninformative.count(t))
                continue;
            out.tokens.push_back(t);
        }
        out.sentence_bounds.emplace_back(begin, out.tokens.size());
    }
    return out;
}

} // namespace corex
