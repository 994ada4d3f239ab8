// Acceptance suite: one pass/fail line per criterion, with wall time.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "corex/corpus.hpp"
#include "corex/error.hpp"
#include "corex/lexicon.hpp"
#include "corex/lexmetrics.hpp"
#include "corex/pipeline.hpp"
#include "corex/report.hpp"
#include "corex/semnet.hpp"
#include "corex/simclust.hpp"
#include "corex/textprep.hpp"
#include "test_support.hpp"

using namespace corex;

namespace {

const std::filesystem::path kDataDir = COREX_DATA_DIR;

struct Outcome {
    bool pass = true;
    bool skipped = false;
    std::string detail;
};

struct Check {
    std::ostringstream log;
    bool ok = true;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (log.tellp() > 0) log << "; ";
            log << what;
        }
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        expect(std::abs(got - want) <= tol,
               what + ": got " + std::to_string(got) + ", want " +
                   std::to_string(want) + " +/- " + std::to_string(tol));
    }
};

// ---------------------------------------------------------------- C1
Outcome c1_fkgl_formula() {
    Check c;
    ReadabilityResult cat = fkgl("The cat sat.");
    c.expect_near(cat.fkgl, -2.62, 1e-9, "fkgl('The cat sat.')");

    std::string mono;
    for (int i = 0; i < 100; ++i) mono += i ? " cat" : "cat";
    mono += ".";
    ReadabilityResult hundred = fkgl(mono);
    c.expect(hundred.words == 100 && hundred.sentences == 1 &&
                 hundred.syllables == 100,
             "100-monosyllable counts");
    c.expect_near(hundred.fkgl, 35.21, 1e-9, "fkgl(100 monosyllables)");
    return {c.ok, false, c.log.str()};
}

// ---------------------------------------------------------------- C2
Outcome c2_yules_k() {
    Check c;
    std::vector<std::string> unique;
    for (int i = 0; i < 10; ++i) unique.push_back("u" + std::to_string(i));
    c.expect_near(yules_k(unique).k, 0.0, 1e-9, "all-unique K");

    std::vector<std::string> repeated(10, "same");
    c.expect_near(yules_k(repeated).k, 9000.0, 1e-9, "10x repeated K");

    std::vector<std::string> aab = {"a", "a", "b"};
    c.expect_near(yules_k(aab).k, 2222.22, 0.01, "[a,a,b] K");
    return {c.ok, false, c.log.str()};
}

// ---------------------------------------------------------------- C3
Outcome c3_published_mission_readability() {
    // Mission of King Mongkut's Institute of Technology Ladkrabang, a
    // published institutional text with a reported grade level of 11.6.
    const std::string mission =
        "Missions of the Institute's Act consist of 4 categories. 1. "
        "Provision of higher education in science and technology of the "
        "highest quality toward international standards with good morality. "
        "2. Advancement of knowledge and research in science, engineering, "
        "and technology to support the sustainable development of the "
        "nation and to ward international excellence 3. Provision of "
        "knowledge and innovation for the best academic and Community "
        "services. 4. Preservation and promotion of Thai Arts and Culture.";
    Check c;
    ReadabilityResult r = fkgl(mission);
    c.expect_near(r.fkgl, 11.6, 1.5, "published mission FKGL");
    return {c.ok, false,
            c.ok ? "fkgl = " + std::to_string(r.fkgl) : c.log.str()};
}

// ---------------------------------------------------------------- C4
Outcome c4_betweenness_oracle() {
    Check c;
    SemanticGraph path;
    for (int i = 0; i < 3; ++i) {
        std::string t(1, char('a' + i));
        path.term_ids.emplace(t, i);
        path.nodes.push_back({t, 1});
    }
    path.edges[{0, 1}] = 1;
    path.edges[{1, 2}] = 1;
    CentralityScores s = betweenness(path, CentralityMode::weighted);
    c.expect_near(s.scores[1], 1.0, 1e-12, "path score(b)");
    c.expect_near(s.scores[0] + s.scores[2], 0.0, 1e-12, "path endpoints");

    std::mt19937_64 rng(20240604);
    for (int trial = 0; trial < 200 && c.ok; ++trial) {
        std::size_t n = 2 + rng() % 7;
        SemanticGraph g = corex::test::random_graph(rng, n, 0.4, 5);
        CentralityMode mode =
            trial % 2 ? CentralityMode::weighted : CentralityMode::binary;
        CentralityScores got = betweenness(g, mode);
        std::vector<double> want = corex::test::oracle_betweenness(g, mode);
        for (std::size_t v = 0; v < n; ++v)
            c.expect(std::abs(got.scores[v] - want[v]) <= 1e-9,
                     "trial " + std::to_string(trial) + " node " +
                         std::to_string(v) + " off by " +
                         std::to_string(got.scores[v] - want[v]));
    }
    return {c.ok, false, c.ok ? "200 random graphs vs oracle" : c.log.str()};
}

// ---------------------------------------------------------------- C5
Outcome c5_louvain() {
    Check c;
    SemanticGraph triangles;
    for (int i = 0; i < 6; ++i) {
        std::string t = "n" + std::to_string(i);
        triangles.term_ids.emplace(t, i);
        triangles.nodes.push_back({t, 1});
    }
    triangles.edges[{0, 1}] = 1;
    triangles.edges[{1, 2}] = 1;
    triangles.edges[{0, 2}] = 1;
    triangles.edges[{3, 4}] = 1;
    triangles.edges[{4, 5}] = 1;
    triangles.edges[{3, 5}] = 1;
    CommunityAssignment two = louvain(triangles, 1.0, 3);
    c.expect(two.community_count() == 2, "two triangle communities");
    c.expect_near(two.modularity_q, 0.5, 1e-9, "triangle Q");

    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50 && c.ok; ++trial) {
        std::size_t n = 10 + rng() % 21;
        SemanticGraph g = corex::test::random_graph(rng, n, 0.12, 4);
        if (g.edges.empty()) continue;
        CommunityAssignment r = louvain(g, 1.0, trial);
        double oracle = corex::test::oracle_modularity(g, r.membership, 1.0);
        c.expect(std::abs(r.modularity_q - oracle) <= 1e-9,
                 "trial " + std::to_string(trial) + " Q mismatch " +
                     std::to_string(r.modularity_q - oracle));
        for (std::size_t i = 1; i < r.pass_q.size(); ++i)
            c.expect(r.pass_q[i] >= r.pass_q[i - 1],
                     "trial " + std::to_string(trial) + " Q decreased across passes");
    }
    return {c.ok, false, c.ok ? "50 random graphs vs recomputation" : c.log.str()};
}

// ---------------------------------------------------------------- C6
Outcome c6_cosine_hac() {
    Check c;
    std::vector<double> x = {1, 2, 0}, y = {2, 1, 0};
    c.expect(cosine_sim(x, y) == 0.8, "cosine((1,2,0),(2,1,0)) == 0.8 exactly");

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        std::size_t rows = 2 + rng() % 5;
        std::size_t cols = 3 + rng() % 5;
        FeatureMatrix m;
        for (std::size_t r = 0; r < rows; ++r)
            m.row_labels.push_back("r" + std::to_string(r));
        for (std::size_t col = 0; col < cols; ++col)
            m.terms.push_back("t" + std::to_string(col));
        m.cells.assign(rows * cols, 0);
        for (auto& cell : m.cells) cell = rng() % 6;
        for (std::size_t r = 0; r < rows; ++r) m.cells[r * cols] += 1;
        SimilarityMatrix sim = similarity_matrix(m);
        Linkage linkage = trial % 3 == 0   ? Linkage::average
                          : trial % 3 == 1 ? Linkage::complete
                                           : Linkage::single;
        Dendrogram got = hac(sim, linkage);
        Dendrogram want = corex::test::oracle_hac(sim, linkage);
        c.expect(got.merges.size() == want.merges.size(), "merge count");
        for (std::size_t i = 0; i < got.merges.size() && c.ok; ++i) {
            c.expect(got.merges[i].a == want.merges[i].a &&
                         got.merges[i].b == want.merges[i].b,
                     "trial " + std::to_string(trial) + " merge " +
                         std::to_string(i) + " pair differs");
            c.expect(std::abs(got.merges[i].height - want.merges[i].height) <= 1e-12,
                     "trial " + std::to_string(trial) + " merge " +
                         std::to_string(i) + " height differs");
        }
    }
    return {c.ok, false, c.ok ? "100 random matrices vs oracle" : c.log.str()};
}

// ---------------------------------------------------------------- C7
Outcome c7_lexicon_ratios() {
    Check c;
    Lexicon lex;
    lex.name = "probe";
    lex.categories["hits"] = {"serve"};

    TokenStream stream;
    for (int i = 0; i < 75; ++i)
        stream.tokens.push_back(i % 15 == 0 ? "serve" : "w" + std::to_string(i));
    stream.sentence_bounds = {{0, 75}};
    stream.raw_word_count = 75;
    TagResult r = tag(stream, lex);
    c.expect(r.counts.at("hits") == 5, "5 matches");
    c.expect_near(r.ratios.at("hits"), 6.67, 0.01, "ratio 100*5/75");

    std::mt19937_64 rng(123);
    std::vector<std::string> vocab = {"serve",  "care", "energy", "people",
                                      "planet", "we",   "growth", "good"};
    Lexicon rand_lex;
    rand_lex.name = "rand";
    rand_lex.categories["a"] = {"serve", "good people"};
    rand_lex.categories["b"] = {"energy", "care"};
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        std::size_t n = 3 + rng() % 50;
        TokenStream one;
        for (std::size_t i = 0; i < n; ++i)
            one.tokens.push_back(vocab[rng() % vocab.size()]);
        one.sentence_bounds = {{0, n}};
        one.raw_word_count = n;
        TokenStream doubled;
        doubled.tokens = one.tokens;
        doubled.tokens.insert(doubled.tokens.end(), one.tokens.begin(),
                              one.tokens.end());
        doubled.sentence_bounds = {{0, n}, {n, 2 * n}};
        doubled.raw_word_count = 2 * n;
        TagResult r1 = tag(one, rand_lex);
        TagResult r2 = tag(doubled, rand_lex);
        for (const auto& [cat, ratio] : r1.ratios)
            c.expect(std::abs(r2.ratios.at(cat) - ratio) <= 1e-9,
                     "trial " + std::to_string(trial) + " ratio moved for " + cat);
    }
    return {c.ok, false, c.ok ? "ratios stable under doubling" : c.log.str()};
}

// ---------------------------------------------------------------- C8
Outcome c8_sampling_shapes() {
    Check c;
    Corpus corpus = corex::test::table1_shaped_corpus();
    Corpus s120 = stratified_sample(corpus, GroupKey::sector, 24, 4242);
    c.expect(s120.size() == 120, "stratified_sample(sector, 24) -> 120");
    for (Sector s : {Sector::Government, Sector::Health, Sector::HigherEd,
                     Sector::Others, Sector::Private})
        c.expect(s120.sector_ids(s).size() == 24,
                 std::string(to_string(s)) + " stratum of 24");

    Corpus merged =
        merge_strata(corpus, {Sector::Others, Sector::Private}, Sector::Mixed);
    Corpus non_gov =
        filter_sectors(merged, {Sector::Health, Sector::HigherEd, Sector::Mixed});
    Corpus s171 = stratified_sample(non_gov, GroupKey::sector, 57, 4242);
    c.expect(s171.size() == 171, "merged-stratum design -> 171");

    Corpus again = stratified_sample(corpus, GroupKey::sector, 24, 4242);
    std::set<std::string> a, b;
    for (const Document& d : s120.documents()) a.insert(d.id);
    for (const Document& d : again.documents()) b.insert(d.id);
    c.expect(a == b, "identical seeds give identical id sets");
    return {c.ok, false, c.log.str()};
}

// ---------------------------------------------------------------- C9
Outcome c9_pipeline_determinism() {
    Check c;
    auto dir = corex::test::fresh_dir("acceptance_determinism");
    RunConfig cfg = validate_config(kDataDir / "demo" / "run.json");
    cfg.out_dir = dir / "run1";
    RunManifest m1 = run_pipeline(cfg, all_stages());
    cfg.out_dir = dir / "run2";
    RunManifest m2 = run_pipeline(cfg, all_stages());
    c.expect(m1.to_json() == m2.to_json(), "manifests differ");
    c.expect(corex::test::read_file(dir / "run1" / "manifest.json") ==
                 corex::test::read_file(dir / "run2" / "manifest.json"),
             "manifest files differ");
    for (const Artifact& a : m1.artifacts)
        c.expect(corex::test::read_file(dir / "run1" / a.path) ==
                     corex::test::read_file(dir / "run2" / a.path),
                 "artifact differs: " + a.path);
    return {c.ok, false,
            c.ok ? std::to_string(m1.artifacts.size()) + " artifacts byte-identical"
                 : c.log.str()};
}

// ---------------------------------------------------------------- C10
std::filesystem::path dataset_dir() {
    if (const char* env = std::getenv("COREX_DATASET_DIR")) return env;
    return kDataDir / "external";
}

Outcome c10_dataset_conditional() {
    std::filesystem::path dir = dataset_dir();
    std::filesystem::path corpus_path = dir / "missions.csv";
    std::filesystem::path lsd_path = dir / "lexicoder.csv";
    std::filesystem::path csr_path = dir / "csr.csv";
    if (!std::filesystem::exists(corpus_path) ||
        !std::filesystem::exists(lsd_path) ||
        !std::filesystem::exists(csr_path)) {
        return {true, true,
                "dataset/dictionaries not present under " + dir.string()};
    }

    Check c;
    Corpus corpus = load_corpus(corpus_path, CorpusFormat::csv);
    std::vector<Lexicon> lexicons = {load_lexicon(lsd_path),
                                     load_lexicon(csr_path)};
    PrepConfig prep = PrepConfig::defaults();

    auto rows = compute_metrics(corpus, lexicons, prep);
    auto averages = aggregate(rows, corpus, AggregateKey::sector);
    const AverageRow& total = averages.back();
    c.expect(std::abs(total.word_count - 75.0) <= 7.5,
             "grand word count " + std::to_string(total.word_count));
    c.expect(std::abs(total.fkgl - 19.8) <= 1.98,
             "grand FKGL " + std::to_string(total.fkgl));
    c.expect(std::abs(total.yules_k - 528.3) <= 52.83,
             "grand Yule's K " + std::to_string(total.yules_k));

    Corpus sampled = stratified_sample(corpus, GroupKey::sector, 24, 1);
    auto streams = prepared_streams(sampled, prep);
    std::vector<TokenStream> list;
    for (const auto& [id, stream] : streams) list.push_back(stream);
    SemanticGraph graph = build_cooccurrence(list, {});
    c.expect(graph.node_count() >= 2130 * 0.85 && graph.node_count() <= 2130 * 1.15,
             "node count " + std::to_string(graph.node_count()));
    c.expect(graph.edge_count() >= 150000,
             "link count " + std::to_string(graph.edge_count()));

    CommunityAssignment comm = louvain(graph, 1.0, 1);
    CentralityScores cent = betweenness(graph, CentralityMode::weighted);
    TopTerms top = top_terms(graph, comm, cent, 5);
    c.expect(std::find(top.global.begin(), top.global.end(), "research") !=
                 top.global.end(),
             "'research' missing from global top-5 betweenness");

    FeatureMatrix dfm = build_dfm(streams, 10);
    std::map<std::string, std::string> grouping;
    for (const Document& d : sampled.documents())
        grouping[d.id] = std::string(to_string(d.sector));
    FeatureMatrix grouped = group_rows(dfm, grouping);
    Dendrogram dendro = hac(similarity_matrix(grouped), Linkage::average);

    // merge-order checks over the growing cluster sets
    auto leaf_index = [&](const std::string& label) {
        for (std::size_t i = 0; i < dendro.leaves.size(); ++i)
            if (dendro.leaves[i] == label) return i;
        return dendro.leaves.size();
    };
    std::size_t health = leaf_index("Health"), priv = leaf_index("Private");
    std::size_t higher = leaf_index("HigherEd"), others = leaf_index("Others");
    std::vector<std::set<std::size_t>> clusters;
    for (std::size_t i = 0; i < dendro.leaves.size(); ++i) clusters.push_back({i});
    std::size_t hp_step = dendro.merges.size(), hh_step = dendro.merges.size();
    for (std::size_t t = 0; t < dendro.merges.size(); ++t) {
        std::set<std::size_t> merged = clusters[dendro.merges[t].a];
        merged.insert(clusters[dendro.merges[t].b].begin(),
                      clusters[dendro.merges[t].b].end());
        clusters.push_back(merged);
        bool has_h = merged.count(health), has_p = merged.count(priv);
        bool has_he = merged.count(higher);
        if (has_h && has_p && hp_step == dendro.merges.size()) hp_step = t;
        if ((has_h || has_p) && has_he && hh_step == dendro.merges.size())
            hh_step = t;
    }
    c.expect(hp_step < hh_step, "Health+Private must merge before HigherEd joins");
    const auto& last = dendro.merges.back();
    std::set<std::size_t> last_a = clusters[last.a], last_b = clusters[last.b];
    c.expect((last_a.size() == 1 && last_a.count(others)) ||
                 (last_b.size() == 1 && last_b.count(others)),
             "'Others' must attach last");
    return {c.ok, false, c.log.str()};
}

struct Criterion {
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"C1 fkgl-formula-oracle", 1.0, c1_fkgl_formula},
        {"C2 yules-k-oracles", 1.0, c2_yules_k},
        {"C3 published-mission-readability", 1.0, c3_published_mission_readability},
        {"C4 betweenness-vs-enumeration", 60.0, c4_betweenness_oracle},
        {"C5 louvain-modularity", 60.0, c5_louvain},
        {"C6 cosine-hac-vs-oracle", 30.0, c6_cosine_hac},
        {"C7 lexicon-ratios", 10.0, c7_lexicon_ratios},
        {"C8 sampling-shapes", 5.0, c8_sampling_shapes},
        {"C9 pipeline-determinism", 30.0, c9_pipeline_determinism},
        {"C10 dataset-conditional", 600.0, c10_dataset_conditional},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = {false, false, std::string("exception: ") + e.what()};
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (!outcome.skipped && seconds > criterion.limit_seconds) {
            outcome.pass = false;
            outcome.detail += (outcome.detail.empty() ? "" : "; ") +
                              std::string("runtime limit exceeded");
        }
        const char* verdict =
            outcome.skipped ? "SKIP" : outcome.pass ? "PASS" : "FAIL";
        std::printf("[%s] %s (%.2fs)%s%s\n", verdict, criterion.name.c_str(),
                    seconds, outcome.detail.empty() ? "" : ": ",
                    outcome.detail.c_str());
        if (!outcome.pass && !outcome.skipped) ++failures;
    }
    if (failures)
        std::printf("%d criterion(s) failed\n", failures);
    else
        std::printf("all criteria passed\n");
    return failures;
}
