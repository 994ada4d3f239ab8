#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "corex/textprep.hpp"

namespace corex {

/// FKGL inputs and result. fkgl = 0.39*(words/sentences)
/// + 11.8*(syllables/words) - 15.59; school-grade units, may be negative.
struct ReadabilityResult {
    std::size_t words = 0;
    std::size_t sentences = 0;
    std::size_t syllables = 0;
    double fkgl = 0.0;
};

/// Yule's K over the token frequency spectrum:
/// k = 1e4 * (-1/N + sum_i f_v(i,N) * (i/N)^2). Lower K means fewer
/// repeated words. spectrum maps occurrence count i -> number of types.
struct DiversityResult {
    std::size_t n_tokens = 0; // N
    std::size_t n_types = 0;  // V
    std::map<std::size_t, std::size_t> spectrum;
    double k = 0.0;
};

/// Computed on raw text, before any stopword or non-informative removal.
/// Words = raw token count; sentence count from the splitter (>= 1);
/// syllables sum count_syllables over alphabetic tokens, any other token
/// contributes 1. Throws ValidationError when the text has no words.
ReadabilityResult fkgl(const std::string& text);
ReadabilityResult fkgl(const TokenStream& raw_stream);

std::map<std::size_t, std::size_t> freq_spectrum(std::span<const std::string> tokens);

/// Raw tokens in, K out. Throws ValidationError on an empty token list.
DiversityResult yules_k(std::span<const std::string> tokens);

} // namespace corex
