#include <doctest.h>

#include <random>
#include <sstream>

#include "corex/corpus.hpp"
#include "corex/csv.hpp"
#include "corex/error.hpp"
#include "test_support.hpp"

using namespace corex;

namespace {

Document make_doc(std::string id, Sector s, Continent c, std::string text) {
    Document d;
    d.id = std::move(id);
    d.institution = "Inst " + d.id;
    d.sector = s;
    d.continent = c;
    d.text = std::move(text);
    return d;
}

} // namespace

TEST_CASE("csv parser handles quoting, CRLF and embedded newlines") {
    auto table = csv::parse("a,b\r\n\"x,\"\"y\"\"\",\"line1\nline2\"\r\nplain,2\r\n");
    CHECK(table.header == std::vector<std::string>{"a", "b"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][0] == "x,\"y\"");
    CHECK(table.rows[0][1] == "line1\nline2");
    CHECK(table.rows[1][0] == "plain");
    CHECK(table.row_lines[0] == 2);
    CHECK(table.row_lines[1] == 4); // quoted newline consumed one line
    CHECK_THROWS_AS(csv::parse("a\n\"unterminated"), SchemaError);
}

TEST_CASE("load_corpus reads the table-shaped sample and validates rows") {
    auto dir = test::fresh_dir("corpus_load");
    Corpus table1 = test::table1_shaped_corpus();
    save_corpus(table1, dir / "full.csv", CorpusFormat::csv);

    Corpus loaded = load_corpus(dir / "full.csv", CorpusFormat::csv);
    CHECK(loaded.size() == 1955);
    CHECK(loaded.sector_ids(Sector::Government).size() == 300);
    CHECK(loaded.sector_ids(Sector::Health).size() == 337);
    CHECK(loaded.sector_ids(Sector::HigherEd).size() == 1261);
    CHECK(loaded.sector_ids(Sector::Others).size() == 24);
    CHECK(loaded.sector_ids(Sector::Private).size() == 33);

    SUBCASE("empty file with header only") {
        test::write_file(dir / "empty.csv",
                         "id,institution,sector,continent,country,text\r\n");
        Corpus empty = load_corpus(dir / "empty.csv", CorpusFormat::csv);
        CHECK(empty.size() == 0);
    }
    SUBCASE("unknown sector is a schema error naming the row") {
        test::write_file(dir / "bad.csv",
                         "id,institution,sector,continent,country,text\r\n"
                         "x1,A,Academic,Europe,,Some mission.\r\n");
        CHECK_THROWS_WITH_AS(load_corpus(dir / "bad.csv", CorpusFormat::csv),
                             doctest::Contains("Academic"), SchemaError);
    }
    SUBCASE("missing column is named") {
        test::write_file(dir / "nocol.csv", "id,institution,sector,continent\r\n");
        CHECK_THROWS_WITH_AS(load_corpus(dir / "nocol.csv", CorpusFormat::csv),
                             doctest::Contains("text"), SchemaError);
    }
    SUBCASE("duplicate id names both rows") {
        test::write_file(dir / "dup.csv",
                         "id,institution,sector,continent,country,text\r\n"
                         "x1,A,Health,Europe,,First.\r\n"
                         "x1,B,Health,Europe,,Second.\r\n");
        CHECK_THROWS_WITH_AS(load_corpus(dir / "dup.csv", CorpusFormat::csv),
                             doctest::Contains("lines 2 and 3"), SchemaError);
    }
    SUBCASE("empty text is rejected with the row") {
        test::write_file(dir / "notext.csv",
                         "id,institution,sector,continent,country,text\r\n"
                         "x1,A,Health,Europe,,\r\n");
        CHECK_THROWS_AS(load_corpus(dir / "notext.csv", CorpusFormat::csv),
                        SchemaError);
    }
}

TEST_CASE("load-save-load round-trips both formats field by field") {
    auto dir = test::fresh_dir("corpus_roundtrip");
    std::mt19937_64 rng(7);
    const std::string alphabet = "ab,\"\n'x- ";
    std::vector<Document> docs;
    for (int i = 0; i < 40; ++i) {
        std::string nasty;
        for (int j = 0; j < 12; ++j) nasty += alphabet[rng() % alphabet.size()];
        Document d = make_doc("id" + std::to_string(i),
                              kAllSectors[rng() % 5],
                              kAllContinents[rng() % 6],
                              "Mission text " + nasty + " end.");
        d.country = i % 3 ? "Country X" : "";
        d.institution = "Inst \"quoted\", comma";
        docs.push_back(std::move(d));
    }
    Corpus corpus(docs);
    for (CorpusFormat fmt : {CorpusFormat::csv, CorpusFormat::jsonl}) {
        auto path = dir / (fmt == CorpusFormat::csv ? "c.csv" : "c.jsonl");
        save_corpus(corpus, path, fmt);
        Corpus again = load_corpus(path, fmt);
        CHECK(again == corpus);
        save_corpus(again, dir / "second", fmt);
        CHECK(test::read_file(path) == test::read_file(dir / "second"));
    }
}

TEST_CASE("group_counts matches the published composition") {
    Corpus corpus = test::table1_shaped_corpus();
    auto by_sector = group_counts(corpus, GroupKey::sector);
    bool found = false;
    for (const auto& row : by_sector) {
        if (row.group == "HigherEd") {
            found = true;
            CHECK(row.count == 1261);
            CHECK(row.percent == doctest::Approx(64.50).epsilon(1e-4));
        }
    }
    CHECK(found);

    auto cross = group_counts(corpus, GroupKey::sector_x_continent);
    bool gov_africa = false;
    for (const auto& row : cross)
        if (row.group == "Government/Africa") {
            gov_africa = true;
            CHECK(row.count == 7);
        }
    CHECK(gov_africa);

    SUBCASE("percentages sum to 100 within rounding") {
        for (GroupKey key : {GroupKey::sector, GroupKey::continent,
                             GroupKey::sector_x_continent}) {
            double sum = 0.0;
            for (const auto& row : group_counts(corpus, key))
                sum += std::round(row.percent * 100.0) / 100.0;
            CHECK(std::abs(sum - 100.0) <= 0.05);
        }
    }
    SUBCASE("single document corpus") {
        Corpus single(std::vector<Document>{
            make_doc("a", Sector::Health, Continent::Asia, "One mission.")});
        auto counts = group_counts(single, GroupKey::sector);
        REQUIRE(counts.size() == 1);
        CHECK(counts[0].count == 1);
        CHECK(counts[0].percent == doctest::Approx(100.0));
    }
    SUBCASE("empty corpus errors") {
        CHECK_THROWS_AS(group_counts(Corpus{}, GroupKey::sector), ValidationError);
    }
}

TEST_CASE("merge_strata relabels and preserves everything else") {
    Corpus corpus = test::table1_shaped_corpus();
    Corpus merged = merge_strata(corpus, {Sector::Others, Sector::Private},
                                 Sector::Mixed);
    CHECK(merged.size() == corpus.size());
    CHECK(merged.sector_ids(Sector::Mixed).size() == 57);
    CHECK(merged.sector_ids(Sector::Others).empty());
    CHECK(merged.sector_ids(Sector::Private).empty());

    SUBCASE("target count equals the sum of the sources") {
        std::size_t before = corpus.sector_ids(Sector::Others).size() +
                             corpus.sector_ids(Sector::Private).size();
        auto counts = group_counts(merged, GroupKey::sector);
        for (const auto& row : counts)
            if (row.group == "Mixed") CHECK(row.count == before);
    }
    SUBCASE("merging a sector into itself is rejected") {
        CHECK_THROWS_AS(
            merge_strata(corpus, {Sector::Others, Sector::Mixed}, Sector::Mixed),
            ValidationError);
    }
    SUBCASE("absent source sector errors") {
        Corpus no_private = filter_sectors(
            corpus, {Sector::Government, Sector::Health, Sector::HigherEd,
                     Sector::Others});
        CHECK_THROWS_AS(
            merge_strata(no_private, {Sector::Others, Sector::Private},
                         Sector::Mixed),
            ValidationError);
    }
}

TEST_CASE("stratified_sample reproduces the paper's designs deterministically") {
    Corpus corpus = test::table1_shaped_corpus();

    Corpus sample = stratified_sample(corpus, GroupKey::sector, 24, 20240101);
    CHECK(sample.size() == 120);
    for (Sector s : {Sector::Government, Sector::Health, Sector::HigherEd,
                     Sector::Others, Sector::Private})
        CHECK(sample.sector_ids(s).size() == 24);

    SUBCASE("identical seed, identical ids; sample is a subset") {
        Corpus again = stratified_sample(corpus, GroupKey::sector, 24, 20240101);
        CHECK(again == sample);
        for (const Document& d : sample.documents()) {
            CHECK(corpus.contains(d.id));
            CHECK(corpus.at(d.id) == d);
        }
        Corpus other = stratified_sample(corpus, GroupKey::sector, 24, 8);
        bool any_diff = false;
        for (const Document& d : other.documents())
            if (!sample.contains(d.id)) any_diff = true;
        CHECK(any_diff);
    }
    SUBCASE("sample independent of document file order") {
        std::vector<Document> shuffled = corpus.documents();
        std::mt19937_64 rng(3);
        for (std::size_t i = shuffled.size() - 1; i > 0; --i)
            std::swap(shuffled[i], shuffled[rng() % (i + 1)]);
        Corpus reordered(shuffled);
        Corpus resampled = stratified_sample(reordered, GroupKey::sector, 24, 20240101);
        std::set<std::string> a, b;
        for (const Document& d : sample.documents()) a.insert(d.id);
        for (const Document& d : resampled.documents()) b.insert(d.id);
        CHECK(a == b);
    }
    SUBCASE("merged-stratum design yields 171") {
        Corpus merged = merge_strata(corpus, {Sector::Others, Sector::Private},
                                     Sector::Mixed);
        Corpus non_gov = filter_sectors(
            merged, {Sector::Health, Sector::HigherEd, Sector::Mixed});
        Corpus s171 = stratified_sample(non_gov, GroupKey::sector, 57, 5);
        CHECK(s171.size() == 171);
        for (Sector s : {Sector::Health, Sector::HigherEd, Sector::Mixed})
            CHECK(s171.sector_ids(s).size() == 57);
    }
    SUBCASE("stratum too small is named") {
        CHECK_THROWS_WITH_AS(stratified_sample(corpus, GroupKey::sector, 25, 1),
                             doctest::Contains("Others"), ValidationError);
    }
}
