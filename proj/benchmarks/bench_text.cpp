#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "corex/lexicon.hpp"
#include "corex/lexmetrics.hpp"
#include "corex/textprep.hpp"

namespace {

std::string synthetic_text(std::size_t words, std::uint64_t seed) {
    static const std::vector<std::string> vocab = {
        "research",   "health",    "innovation", "education", "science",
        "knowledge",  "community", "students",   "discovery", "technology",
        "sustainable", "energy",   "patients",   "care",      "people",
        "world",      "future",    "global",     "excellence", "society"};
    std::mt19937_64 rng(seed);
    std::string text;
    for (std::size_t i = 0; i < words; ++i) {
        if (!text.empty()) text += ' ';
        text += vocab[rng() % vocab.size()];
        if (i % 12 == 11) text += '.';
    }
    text += '.';
    return text;
}

void BM_tokenize(benchmark::State& state) {
    std::string text = synthetic_text(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        auto stream = corex::tokenize(text);
        benchmark::DoNotOptimize(stream);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_tokenize)->Range(64, 16384);

void BM_fkgl(benchmark::State& state) {
    std::string text = synthetic_text(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        auto result = corex::fkgl(text);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_fkgl)->Range(64, 16384);

void BM_yules_k(benchmark::State& state) {
    auto stream = corex::tokenize(synthetic_text(
        static_cast<std::size_t>(state.range(0)), 3));
    for (auto _ : state) {
        auto result = corex::yules_k(stream.tokens);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_yules_k)->Range(64, 16384);

void BM_tag(benchmark::State& state) {
    corex::Lexicon lex;
    lex.name = "bench";
    lex.categories["a"] = {"research", "health care", "sustainable energy"};
    lex.categories["b"] = {"innovation", "global community"};
    auto stream = corex::tokenize(synthetic_text(
        static_cast<std::size_t>(state.range(0)), 4));
    for (auto _ : state) {
        auto result = corex::tag(stream, lex);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_tag)->Range(64, 4096);

} // namespace

BENCHMARK_MAIN();
