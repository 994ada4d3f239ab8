#include <doctest.h>

#include <random>

#include "corex/error.hpp"
#include "corex/simclust.hpp"
#include "test_support.hpp"

using namespace corex;

namespace {

TokenStream stream_of(std::vector<std::string> tokens) {
    TokenStream s;
    s.tokens = std::move(tokens);
    s.sentence_bounds = {{0, s.tokens.size()}};
    s.raw_word_count = s.tokens.size();
    return s;
}

FeatureMatrix matrix_of(std::vector<std::string> labels,
                        std::vector<std::string> terms,
                        std::vector<std::uint64_t> cells) {
    FeatureMatrix m;
    m.row_labels = std::move(labels);
    m.terms = std::move(terms);
    m.cells = std::move(cells);
    return m;
}

} // namespace

TEST_CASE("build_dfm counts and filters") {
    std::map<std::string, TokenStream> streams;
    streams["doc1"] = stream_of({"a", "a", "b"});
    streams["doc2"] = stream_of({"b", "c"});

    FeatureMatrix m0 = build_dfm(streams, 0);
    CHECK(m0.terms == std::vector<std::string>{"a", "b", "c"});
    CHECK(m0.row_labels == std::vector<std::string>{"doc1", "doc2"});
    CHECK(m0.at(0, 0) == 2);
    CHECK(m0.at(0, 1) == 1);
    CHECK(m0.at(0, 2) == 0);
    CHECK(m0.at(1, 0) == 0);
    CHECK(m0.at(1, 1) == 1);
    CHECK(m0.at(1, 2) == 1);

    SUBCASE("min_count 1 drops singleton columns") {
        FeatureMatrix m1 = build_dfm(streams, 1);
        CHECK(m1.terms == std::vector<std::string>{"a", "b"});
    }
    SUBCASE("threshold that removes everything errors") {
        CHECK_THROWS_WITH_AS(build_dfm(streams, 10),
                             doctest::Contains("lower the threshold"),
                             ValidationError);
    }
    SUBCASE("no streams errors") {
        CHECK_THROWS_AS(build_dfm({}, 0), ValidationError);
    }
}

TEST_CASE("group_rows sums members and conserves totals") {
    FeatureMatrix m = matrix_of({"r1", "r2", "r3"}, {"t1", "t2"},
                                {1, 2, 3, 4, 5, 6});
    SUBCASE("two identical rows double") {
        FeatureMatrix mm = matrix_of({"x", "y"}, {"t"}, {3, 3});
        FeatureMatrix g = group_rows(mm, {{"x", "g"}, {"y", "g"}});
        CHECK(g.row_labels == std::vector<std::string>{"g"});
        CHECK(g.at(0, 0) == 6);
    }
    SUBCASE("singleton groups only relabel") {
        FeatureMatrix g = group_rows(m, {{"r1", "a"}, {"r2", "b"}, {"r3", "c"}});
        CHECK(g.row_labels == std::vector<std::string>{"a", "b", "c"});
        CHECK(g.cells == m.cells);
    }
    SUBCASE("column totals are conserved") {
        FeatureMatrix g = group_rows(m, {{"r1", "g1"}, {"r2", "g2"}, {"r3", "g1"}});
        for (std::size_t c = 0; c < m.terms.size(); ++c) {
            std::uint64_t before = 0, after = 0;
            for (std::size_t r = 0; r < m.row_labels.size(); ++r) before += m.at(r, c);
            for (std::size_t r = 0; r < g.row_labels.size(); ++r) after += g.at(r, c);
            CHECK(before == after);
        }
    }
    SUBCASE("unmapped label errors") {
        CHECK_THROWS_WITH_AS(group_rows(m, {{"r1", "a"}, {"r2", "b"}}),
                             doctest::Contains("r3"), ValidationError);
    }
}

TEST_CASE("cosine_sim oracles and properties") {
    std::vector<double> x = {1, 2, 0}, y = {2, 1, 0};
    CHECK(cosine_sim(x, y) == 0.8); // 4 / sqrt(5*5), exact

    CHECK(cosine_sim(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> disjoint_a = {1, 0, 0}, disjoint_b = {0, 2, 3};
    CHECK(cosine_sim(disjoint_a, disjoint_b) == 0.0);

    std::vector<double> zero = {0, 0, 0};
    CHECK_THROWS_AS(cosine_sim(x, zero), ValidationError);
    std::vector<double> shorter = {1, 2};
    CHECK_THROWS_AS(cosine_sim(x, shorter), ValidationError);

    SUBCASE("scale invariance") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> a(5), b(5);
            for (int i = 0; i < 5; ++i) {
                a[i] = static_cast<double>(rng() % 9);
                b[i] = static_cast<double>(rng() % 9);
            }
            a[0] += 1;
            b[0] += 1; // keep norms positive
            double c = 0.5 + static_cast<double>(rng() % 10);
            std::vector<double> scaled = a;
            for (double& v : scaled) v *= c;
            CHECK(cosine_sim(scaled, b) ==
                  doctest::Approx(cosine_sim(a, b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("similarity_matrix is symmetric with unit diagonal") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t rows = 2 + rng() % 5, cols = 2 + rng() % 6;
        std::vector<std::uint64_t> cells(rows * cols, 0);
        for (auto& c : cells) c = rng() % 5;
        std::vector<std::string> labels, terms;
        for (std::size_t r = 0; r < rows; ++r) {
            labels.push_back("r" + std::to_string(r));
            cells[r * cols + r % cols] += 1; // no zero rows
        }
        for (std::size_t c = 0; c < cols; ++c) terms.push_back("t" + std::to_string(c));
        FeatureMatrix m = matrix_of(labels, terms, cells);
        SimilarityMatrix sim = similarity_matrix(m);
        for (std::size_t i = 0; i < rows; ++i) {
            CHECK(sim.at(i, i) == 1.0);
            for (std::size_t j = 0; j < rows; ++j) {
                CHECK(sim.at(i, j) == doctest::Approx(sim.at(j, i)).epsilon(1e-12));
                CHECK(sim.at(i, j) >= 0.0);
                CHECK(sim.at(i, j) <= 1.0 + 1e-12);
                if (i != j)
                    CHECK(sim.at(i, j) ==
                          doctest::Approx(cosine_sim(m.row(i), m.row(j)))
                              .epsilon(1e-15));
            }
        }
    }
    FeatureMatrix tiny = matrix_of({"only"}, {"t"}, {1});
    CHECK_THROWS_AS(similarity_matrix(tiny), ValidationError);
}

TEST_CASE("hac merges forced cases") {
    SUBCASE("two groups with cosine 0.8 merge at height 0.2") {
        SimilarityMatrix sim;
        sim.labels = {"A", "B"};
        sim.values = {1.0, 0.8, 0.8, 1.0};
        Dendrogram d = hac(sim, Linkage::average);
        REQUIRE(d.merges.size() == 1);
        CHECK(d.merges[0].a == 0);
        CHECK(d.merges[0].b == 1);
        CHECK(d.merges[0].height == doctest::Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("closest pair merges first (hand-traced average linkage)") {
        SimilarityMatrix sim;
        sim.labels = {"A", "B", "C"};
        sim.values = {1.0, 0.9, 0.1, 0.9, 1.0, 0.12, 0.1, 0.12, 1.0};
        Dendrogram d = hac(sim, Linkage::average);
        REQUIRE(d.merges.size() == 2);
        CHECK(d.merges[0].a == 0); // A and B first
        CHECK(d.merges[0].b == 1);
        CHECK(d.merges[0].height == doctest::Approx(0.1).epsilon(1e-12));
        // then (A,B) with C at mean(0.9, 0.88) = 0.89 dissimilarity
        CHECK(d.merges[1].height == doctest::Approx(0.89).epsilon(1e-12));
    }
    SUBCASE("fewer than 2 rows errors") {
        SimilarityMatrix sim;
        sim.labels = {"A"};
        sim.values = {1.0};
        CHECK_THROWS_AS(hac(sim, Linkage::average), ValidationError);
    }
}

TEST_CASE("hac equals the brute-force agglomeration oracle") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t rows = 2 + rng() % 5; // up to 6 rows
        std::size_t cols = 3 + rng() % 5;
        std::vector<std::uint64_t> cells(rows * cols, 0);
        for (auto& c : cells) c = rng() % 6;
        std::vector<std::string> labels, terms;
        for (std::size_t r = 0; r < rows; ++r) {
            labels.push_back("row" + std::to_string(r));
            cells[r * cols] += 1;
        }
        for (std::size_t c = 0; c < cols; ++c) terms.push_back("t" + std::to_string(c));
        SimilarityMatrix sim = similarity_matrix(matrix_of(labels, terms, cells));
        for (Linkage linkage : {Linkage::average, Linkage::complete, Linkage::single}) {
            Dendrogram got = hac(sim, linkage);
            Dendrogram expected = test::oracle_hac(sim, linkage);
            REQUIRE(got.merges.size() == expected.merges.size());
            for (std::size_t i = 0; i < got.merges.size(); ++i) {
                CHECK(got.merges[i].a == expected.merges[i].a);
                CHECK(got.merges[i].b == expected.merges[i].b);
                CHECK(got.merges[i].height ==
                      doctest::Approx(expected.merges[i].height).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("hac heights are non-decreasing for average and complete linkage") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t rows = 3 + rng() % 6;
        std::size_t cols = 3 + rng() % 6;
        std::vector<std::uint64_t> cells(rows * cols, 0);
        for (auto& c : cells) c = rng() % 7;
        std::vector<std::string> labels, terms;
        for (std::size_t r = 0; r < rows; ++r) {
            labels.push_back("row" + std::to_string(r));
            cells[r * cols + r % cols] += 1;
        }
        for (std::size_t c = 0; c < cols; ++c) terms.push_back("t" + std::to_string(c));
        SimilarityMatrix sim = similarity_matrix(matrix_of(labels, terms, cells));
        for (Linkage linkage : {Linkage::average, Linkage::complete}) {
            Dendrogram d = hac(sim, linkage);
            for (std::size_t i = 1; i < d.merges.size(); ++i)
                CHECK(d.merges[i].height >= d.merges[i - 1].height - 1e-12);
        }
    }
}

TEST_CASE("dendrogram exports") {
    Dendrogram d;
    d.leaves = {"A", "B"};
    d.merges = {{0, 1, 0.2}};

    SUBCASE("newick midpoint convention") {
        CHECK(render_dendrogram(d, DendroFormat::newick) == "(A:0.1,B:0.1);");
    }
    SUBCASE("quoting of awkward labels") {
        Dendrogram q;
        q.leaves = {"North America", "Latin (CAR)"};
        q.merges = {{0, 1, 0.5}};
        std::string newick = render_dendrogram(q, DendroFormat::newick);
        CHECK(newick == "('North America':0.25,'Latin (CAR)':0.25);");
    }
    SUBCASE("json round-trips the merge list exactly") {
        Dendrogram three;
        three.leaves = {"A", "B", "C"};
        three.merges = {{0, 1, 0.125}, {3, 2, 0.625}};
        std::string json = render_dendrogram(three, DendroFormat::json);
        Dendrogram back = parse_dendrogram_json(json);
        CHECK(back.leaves == three.leaves);
        REQUIRE(back.merges.size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(back.merges[i].a == three.merges[i].a);
            CHECK(back.merges[i].b == three.merges[i].b);
            CHECK(back.merges[i].height == three.merges[i].height);
        }
        // a 3-leaf tree has exactly 2 internal nodes
        CHECK(three.merges.size() == three.leaves.size() - 1);
    }
    SUBCASE("file export is byte-deterministic") {
        auto dir = test::fresh_dir("dendro");
        export_dendrogram(d, DendroFormat::newick, dir / "a.nwk");
        export_dendrogram(d, DendroFormat::newick, dir / "b.nwk");
        CHECK(test::read_file(dir / "a.nwk") == test::read_file(dir / "b.nwk"));
        CHECK(test::read_file(dir / "a.nwk") == "(A:0.1,B:0.1);\n");
    }
}

TEST_CASE("feature matrix CSV round-trip") {
    auto dir = test::fresh_dir("dfm_csv");
    std::map<std::string, TokenStream> streams;
    streams["d1"] = stream_of({"research", "health", "research"});
    streams["d2"] = stream_of({"health", "policy"});
    FeatureMatrix m = build_dfm(streams, 0);
    save_feature_matrix(m, dir / "m.csv");
    FeatureMatrix back = load_feature_matrix(dir / "m.csv");
    CHECK(back.row_labels == m.row_labels);
    CHECK(back.terms == m.terms);
    CHECK(back.cells == m.cells);
}
