#include "corex/lexmetrics.hpp"

#include <cctype>
#include <unordered_map>

#include "corex/error.hpp"

namespace corex {

namespace {

// count_syllables accepts letters, hyphens and apostrophes only.
bool is_alphabetic_token(const std::string& token) {
    bool has_letter = false;
    for (std::size_t i = 0; i < token.size(); ++i) {
        unsigned char u = static_cast<unsigned char>(token[i]);
        if (token[i] == '-' || token[i] == '\'') continue;
        if (u == 0xE2 && i + 2 < token.size() &&
            static_cast<unsigned char>(token[i + 1]) == 0x80 &&
            static_cast<unsigned char>(token[i + 2]) == 0x99) {
            i += 2;
            continue;
        }
        if (std::isalpha(u) == 0 && u < 0x80) return false;
        has_letter = true;
    }
    return has_letter;
}

} // namespace

ReadabilityResult fkgl(const TokenStream& raw_stream) {
    if (raw_stream.tokens.empty())
        throw ValidationError("fkgl: text contains no words");
    ReadabilityResult r;
    r.words = raw_stream.tokens.size();
    r.sentences = std::max<std::size_t>(1, raw_stream.sentence_bounds.size());
    for (const std::string& token : raw_stream.tokens)
        r.syllables += is_alphabetic_token(token)
                           ? static_cast<std::size_t>(count_syllables(token))
                           : 1;
    double words = static_cast<double>(r.words);
    double sentences = static_cast<double>(r.sentences);
    double syllables = static_cast<double>(r.syllables);
    r.fkgl = 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59;
    return r;
}

ReadabilityResult fkgl(const std::string& text) { return fkgl(tokenize(text)); }

std::map<std::size_t, std::size_t> freq_spectrum(std::span<const std::string> tokens) {
    std::unordered_map<std::string_view, std::size_t> type_counts;
    for (const std::string& t : tokens) ++type_counts[t];
    std::map<std::size_t, std::size_t> spectrum;
    for (const auto& [type, count] : type_counts) ++spectrum[count];
    return spectrum;
}

DiversityResult yules_k(std::span<const std::string> tokens) {
    if (tokens.empty()) throw ValidationError("yules_k: empty token list");
    DiversityResult d;
    d.n_tokens = tokens.size();
    d.spectrum = freq_spectrum(tokens);
    double n = static_cast<double>(d.n_tokens);
    double sum = 0.0;
    for (const auto& [i, types] : d.spectrum) {
        d.n_types += types;
        double frac = static_cast<double>(i) / n;
        sum += static_cast<double>(types) * frac * frac;
    }
    d.k = 1e4 * (-1.0 / n + sum);
    if (d.k < 0.0 && d.k > -1e-9) d.k = 0.0; // clamp rounding residue
    return d;
}

} // namespace corex
