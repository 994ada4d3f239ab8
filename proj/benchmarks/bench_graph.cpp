#include <benchmark/benchmark.h>

#include <random>

#include "corex/semnet.hpp"
#include "corex/simclust.hpp"
#include "corex/textprep.hpp"

namespace {

corex::SemanticGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    corex::SemanticGraph g;
    for (std::size_t i = 0; i < n; ++i) {
        std::string term = "t" + std::to_string(i);
        g.term_ids.emplace(term, static_cast<std::uint32_t>(i));
        g.nodes.push_back({term, 1 + rng() % 20});
    }
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b) {
            if (a == b) continue;
            if (static_cast<double>(rng() % 1000) / 1000.0 < p)
                g.edges[{a, b}] = 1 + rng() % 5;
        }
    return g;
}

void BM_build_cooccurrence(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::vector<corex::TokenStream> streams;
    for (int d = 0; d < state.range(0); ++d) {
        corex::TokenStream s;
        std::size_t n = 40 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i)
            s.tokens.push_back("w" + std::to_string(rng() % 400));
        s.sentence_bounds = {{0, s.tokens.size()}};
        s.raw_word_count = n;
        streams.push_back(std::move(s));
    }
    for (auto _ : state) {
        auto g = corex::build_cooccurrence(streams);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_build_cooccurrence)->Range(8, 256);

void BM_louvain(benchmark::State& state) {
    auto g = random_graph(static_cast<std::size_t>(state.range(0)), 0.05, 7);
    for (auto _ : state) {
        auto comm = corex::louvain(g, 1.0, 1);
        benchmark::DoNotOptimize(comm);
    }
}
BENCHMARK(BM_louvain)->Range(32, 512);

void BM_betweenness_weighted(benchmark::State& state) {
    auto g = random_graph(static_cast<std::size_t>(state.range(0)), 0.05, 9);
    for (auto _ : state) {
        auto scores = corex::betweenness(g, corex::CentralityMode::weighted);
        benchmark::DoNotOptimize(scores);
    }
}
BENCHMARK(BM_betweenness_weighted)->Range(16, 256);

void BM_hac_average(benchmark::State& state) {
    std::mt19937_64 rng(11);
    std::size_t rows = static_cast<std::size_t>(state.range(0)), cols = 64;
    corex::FeatureMatrix m;
    for (std::size_t r = 0; r < rows; ++r)
        m.row_labels.push_back("r" + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c)
        m.terms.push_back("t" + std::to_string(c));
    m.cells.assign(rows * cols, 0);
    for (auto& cell : m.cells) cell = rng() % 10;
    for (std::size_t r = 0; r < rows; ++r) m.cells[r * cols] += 1;
    auto sim = corex::similarity_matrix(m);
    for (auto _ : state) {
        auto d = corex::hac(sim, corex::Linkage::average);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_hac_average)->Range(4, 64);

} // namespace

BENCHMARK_MAIN();
