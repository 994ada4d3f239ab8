#include "corex/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corex/csv.hpp"
#include "corex/error.hpp"
#include "corex/hash.hpp"
#include "corex/lexmetrics.hpp"
#include "corex/numfmt.hpp"
#include "corex/version.hpp"

namespace corex {

namespace {

using nlohmann::json;

std::string loc(const std::string& path) { return "$." + path; }

const json* find(const json& root, std::initializer_list<const char*> keys) {
    const json* node = &root;
    for (const char* key : keys) {
        if (!node->is_object() || !node->contains(key)) return nullptr;
        node = &(*node)[key];
    }
    return node;
}

std::string require_string(const json& node, const std::string& where) {
    if (!node.is_string())
        throw ConfigError(loc(where) + ": expected a string");
    return node.get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& raw) {
    std::filesystem::path p(raw);
    return p.is_absolute() ? p : base / p;
}

void require_file(const std::filesystem::path& path, const std::string& where) {
    if (!std::filesystem::exists(path))
        throw ConfigError(loc(where) + ": file not found: " + path.string());
}

Sector parse_sector_or_throw(const std::string& label, const std::string& where) {
    auto s = parse_sector(label);
    if (!s) throw ConfigError(loc(where) + ": unknown sector '" + label + "'");
    return *s;
}

} // namespace

RunConfig parse_config_text(std::string_view text,
                            const std::filesystem::path& base_dir,
                            const std::string& source_name) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded() || !root.is_object())
        throw ConfigError(source_name + ": not a JSON object");

    RunConfig cfg;
    cfg.config_sha256 = sha256_hex(text);

    const json* corpus_path = find(root, {"corpus", "path"});
    if (!corpus_path)
        throw ConfigError(loc("corpus.path") + ": required field is missing");
    cfg.corpus_path = resolve(base_dir, require_string(*corpus_path, "corpus.path"));
    require_file(cfg.corpus_path, "corpus.path");

    if (const json* fmt = find(root, {"corpus", "format"})) {
        std::string f = require_string(*fmt, "corpus.format");
        if (f == "csv") cfg.corpus_format = CorpusFormat::csv;
        else if (f == "jsonl") cfg.corpus_format = CorpusFormat::jsonl;
        else throw ConfigError(loc("corpus.format") + ": expected csv or jsonl");
    } else {
        cfg.corpus_format = cfg.corpus_path.extension() == ".jsonl"
                                ? CorpusFormat::jsonl
                                : CorpusFormat::csv;
    }

    if (const json* p = find(root, {"prep", "stopwords"});
        p && !p->is_null()) {
        cfg.stopwords_path = resolve(base_dir, require_string(*p, "prep.stopwords"));
        require_file(*cfg.stopwords_path, "prep.stopwords");
    }
    if (const json* p = find(root, {"prep", "noninformative"});
        p && !p->is_null()) {
        cfg.noninformative_path =
            resolve(base_dir, require_string(*p, "prep.noninformative"));
        require_file(*cfg.noninformative_path, "prep.noninformative");
    }

    if (const json* lex = find(root, {"lexicons"})) {
        if (!lex->is_array())
            throw ConfigError(loc("lexicons") + ": expected an array of paths");
        for (std::size_t i = 0; i < lex->size(); ++i) {
            std::string where = "lexicons[" + std::to_string(i) + "]";
            auto path = resolve(base_dir, require_string((*lex)[i], where));
            require_file(path, where);
            cfg.lexicon_paths.push_back(std::move(path));
        }
    }

    if (const json* sampling = find(root, {"sampling"});
        sampling && !sampling->is_null()) {
        cfg.sampling.enabled = true;
        if (const json* key = find(*sampling, {"key"})) {
            std::string k = require_string(*key, "sampling.key");
            if (k == "sector") cfg.sampling.key = GroupKey::sector;
            else if (k == "continent") cfg.sampling.key = GroupKey::continent;
            else
                throw ConfigError(loc("sampling.key") +
                                  ": expected sector or continent");
        }
        const json* n = find(*sampling, {"n_per_stratum"});
        if (!n || !n->is_number_unsigned() || n->get<std::uint64_t>() == 0)
            throw ConfigError(loc("sampling.n_per_stratum") +
                              ": a positive integer is required");
        cfg.sampling.n_per_stratum = n->get<std::size_t>();
        const json* seed = find(*sampling, {"seed"});
        if (!seed || !seed->is_number_unsigned())
            throw ConfigError(loc("sampling.seed") +
                              ": a seed is mandatory when sampling is requested");
        cfg.sampling.seed = seed->get<std::uint64_t>();
        if (const json* merges = find(*sampling, {"merges"})) {
            if (!merges->is_array())
                throw ConfigError(loc("sampling.merges") + ": expected an array");
            for (std::size_t i = 0; i < merges->size(); ++i) {
                std::string where = "sampling.merges[" + std::to_string(i) + "]";
                const json& m = (*merges)[i];
                const json* sources = find(m, {"sources"});
                const json* target = find(m, {"target"});
                if (!sources || !sources->is_array() || !target)
                    throw ConfigError(loc(where) +
                                      ": expected {sources: [...], target: ...}");
                MergeSpec spec;
                for (const auto& s : *sources)
                    spec.sources.insert(parse_sector_or_throw(
                        require_string(s, where + ".sources"), where + ".sources"));
                spec.target = parse_sector_or_throw(
                    require_string(*target, where + ".target"), where + ".target");
                cfg.sampling.merges.push_back(std::move(spec));
            }
        }
        if (const json* restrict_to = find(*sampling, {"restrict_to"})) {
            if (!restrict_to->is_array())
                throw ConfigError(loc("sampling.restrict_to") +
                                  ": expected an array of sectors");
            std::set<Sector> keep;
            for (const auto& s : *restrict_to)
                keep.insert(parse_sector_or_throw(
                    require_string(s, "sampling.restrict_to"),
                    "sampling.restrict_to"));
            cfg.sampling.restrict_to = std::move(keep);
        }
    }

    if (const json* semnet = find(root, {"semnet"}); semnet && !semnet->is_null()) {
        if (const json* w = find(*semnet, {"window"})) {
            std::string s = require_string(*w, "semnet.window");
            if (s == "document") cfg.semnet.window = CoocWindow::document();
            else if (s == "sentence") cfg.semnet.window = CoocWindow::sentence();
            else if (s.rfind("fixed:", 0) == 0) {
                std::size_t k = 0;
                try {
                    k = std::stoull(s.substr(6));
                } catch (const std::exception&) {
                    throw ConfigError(loc("semnet.window") + ": bad fixed window '" +
                                      s + "'");
                }
                if (k < 2)
                    throw ConfigError(loc("semnet.window") +
                                      ": fixed window needs k >= 2");
                cfg.semnet.window = CoocWindow::fixed(k);
            } else
                throw ConfigError(loc("semnet.window") +
                                  ": expected document, sentence or fixed:<k>");
        }
        if (const json* r = find(*semnet, {"resolution"})) {
            if (!r->is_number() || r->get<double>() <= 0.0)
                throw ConfigError(loc("semnet.resolution") + ": must be > 0");
            cfg.semnet.resolution = r->get<double>();
        }
        if (const json* c = find(*semnet, {"centrality"})) {
            std::string s = require_string(*c, "semnet.centrality");
            if (s == "binary") cfg.semnet.centrality = CentralityMode::binary;
            else if (s == "weighted") cfg.semnet.centrality = CentralityMode::weighted;
            else
                throw ConfigError(loc("semnet.centrality") +
                                  ": expected binary or weighted");
        }
        if (const json* k = find(*semnet, {"top_k"})) {
            if (!k->is_number_unsigned() || k->get<std::uint64_t>() == 0)
                throw ConfigError(loc("semnet.top_k") + ": must be >= 1");
            cfg.semnet.top_k = k->get<std::size_t>();
        }
        if (const json* s = find(*semnet, {"seed"})) {
            if (!s->is_number_unsigned())
                throw ConfigError(loc("semnet.seed") + ": expected an integer");
            cfg.semnet.louvain_seed = s->get<std::uint64_t>();
        }
    }

    if (const json* simclust = find(root, {"simclust"});
        simclust && !simclust->is_null()) {
        if (const json* m = find(*simclust, {"min_count"})) {
            if (!m->is_number_unsigned())
                throw ConfigError(loc("simclust.min_count") +
                                  ": expected a non-negative integer");
            cfg.simclust.min_count = m->get<std::uint64_t>();
        }
        if (const json* l = find(*simclust, {"linkage"})) {
            std::string s = require_string(*l, "simclust.linkage");
            if (s == "average") cfg.simclust.linkage = Linkage::average;
            else if (s == "complete") cfg.simclust.linkage = Linkage::complete;
            else if (s == "single") cfg.simclust.linkage = Linkage::single;
            else
                throw ConfigError(loc("simclust.linkage") +
                                  ": expected average, complete or single");
        }
        if (const json* g = find(*simclust, {"groupings"})) {
            if (!g->is_array() || g->empty())
                throw ConfigError(loc("simclust.groupings") +
                                  ": expected a non-empty array");
            cfg.simclust.groupings.clear();
            for (const auto& entry : *g) {
                std::string s = require_string(entry, "simclust.groupings");
                if (s == "sector") cfg.simclust.groupings.push_back(GroupKey::sector);
                else if (s == "continent")
                    cfg.simclust.groupings.push_back(GroupKey::continent);
                else
                    throw ConfigError(loc("simclust.groupings") +
                                      ": expected sector or continent");
            }
        }
    }

    if (const json* out = find(root, {"out_dir"}))
        cfg.out_dir = resolve(base_dir, require_string(*out, "out_dir"));
    if (const json* d = find(root, {"display", "comma_decimal"})) {
        if (!d->is_boolean())
            throw ConfigError(loc("display.comma_decimal") + ": expected a boolean");
        cfg.comma_decimal_display = d->get<bool>();
    }
    return cfg;
}

RunConfig validate_config(const std::filesystem::path& config_path) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + config_path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), config_path.parent_path(),
                             config_path.string());
}

std::set<Stage> all_stages() {
    return {Stage::metrics, Stage::tag, Stage::network, Stage::similarity,
            Stage::report};
}

std::string_view to_string(Stage s) {
    switch (s) {
    case Stage::metrics: return "metrics";
    case Stage::tag: return "tag";
    case Stage::network: return "network";
    case Stage::similarity: return "similarity";
    case Stage::report: return "report";
    }
    return "?";
}

std::optional<Stage> parse_stage(std::string_view name) {
    for (Stage s : all_stages())
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::string RunManifest::to_json() const {
    json doc;
    doc["config_sha256"] = config_sha256;
    doc["stages"] = stages;
    doc["inputs"] = inputs;
    if (sampling_seed) doc["sampling_seed"] = *sampling_seed;
    json artifact_list = json::array();
    for (const Artifact& a : artifacts)
        artifact_list.push_back({{"path", a.path}, {"sha256", a.sha256}});
    doc["artifacts"] = std::move(artifact_list);
    doc["tool_version"] = tool_version;
    return doc.dump(2) + "\n";
}

std::vector<MetricsRow> compute_metrics(const Corpus& corpus,
                                        const std::vector<Lexicon>& lexicons,
                                        const PrepConfig& prep) {
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const Document& d : corpus.documents()) ids.push_back(d.id);
    std::sort(ids.begin(), ids.end());

    std::vector<MetricsRow> rows;
    rows.reserve(ids.size());
    for (const std::string& id : ids) {
        const Document& doc = corpus.at(id);
        TokenStream stream = tokenize(doc.text, prep.lowercase);
        if (stream.tokens.empty())
            throw ValidationError("document '" + id + "' has no words");
        MetricsRow row;
        row.doc_id = id;
        row.word_count = stream.raw_word_count;
        row.fkgl = fkgl(stream).fkgl;
        row.yules_k = yules_k(stream.tokens).k;
        for (const Lexicon& lex : lexicons) {
            TagResult tags = tag(stream, lex);
            for (const auto& [category, ratio] : tags.ratios)
                row.ratios[lex.name + ":" + category] = ratio;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::map<std::string, TokenStream> prepared_streams(const Corpus& corpus,
                                                    const PrepConfig& prep) {
    std::map<std::string, TokenStream> streams;
    for (const Document& d : corpus.documents())
        streams[d.id] = remove_noise(tokenize(d.text, prep.lowercase), prep);
    return streams;
}

std::vector<MetricsRow> load_metrics_rows(
    const std::filesystem::path& metrics_csv,
    const std::optional<std::filesystem::path>& tags_csv) {
    csv::Table table = csv::read_file(metrics_csv);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < table.header.size(); ++i) col[table.header[i]] = i;
    for (const char* name : {"id", "words", "fkgl", "yules_k"})
        if (!col.count(name))
            throw SchemaError(metrics_csv.string() + ": missing column '" +
                              std::string(name) + "'");
    std::map<std::string, MetricsRow> by_id;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        try {
            MetricsRow m;
            m.doc_id = row.at(col["id"]);
            m.word_count = std::stoull(row.at(col["words"]));
            m.fkgl = std::stod(row.at(col["fkgl"]));
            m.yules_k = std::stod(row.at(col["yules_k"]));
            by_id[m.doc_id] = std::move(m);
        } catch (const std::exception&) {
            throw SchemaError(metrics_csv.string() + ":" +
                              std::to_string(table.row_lines[r]) + ": bad record");
        }
    }
    if (tags_csv) {
        csv::Table tags = csv::read_file(*tags_csv);
        std::map<std::string, std::size_t> tcol;
        for (std::size_t i = 0; i < tags.header.size(); ++i)
            tcol[tags.header[i]] = i;
        for (const char* name : {"id", "lexicon", "category", "ratio"})
            if (!tcol.count(name))
                throw SchemaError(tags_csv->string() + ": missing column '" +
                                  std::string(name) + "'");
        for (std::size_t r = 0; r < tags.rows.size(); ++r) {
            const auto& row = tags.rows[r];
            auto it = by_id.find(row.at(tcol["id"]));
            if (it == by_id.end())
                throw SchemaError(tags_csv->string() + ":" +
                                  std::to_string(tags.row_lines[r]) +
                                  ": id '" + row.at(tcol["id"]) +
                                  "' not present in metrics file");
            try {
                it->second.ratios[row.at(tcol["lexicon"]) + ":" +
                                  row.at(tcol["category"])] =
                    std::stod(row.at(tcol["ratio"]));
            } catch (const std::exception&) {
                throw SchemaError(tags_csv->string() + ":" +
                                  std::to_string(tags.row_lines[r]) +
                                  ": bad ratio value");
            }
        }
    }
    std::vector<MetricsRow> rows;
    rows.reserve(by_id.size());
    for (auto& [id, row] : by_id) rows.push_back(std::move(row));
    return rows;
}

namespace {

struct StageContext {
    explicit StageContext(const RunConfig& config) : cfg(config) {}

    const RunConfig& cfg;
    Corpus full_corpus;
    Corpus analysis_corpus;
    PrepConfig prep;
    std::vector<Lexicon> lexicons;
    std::vector<Artifact> artifacts;
    bool sample_written = false;

    void write_artifact(const std::string& name, const std::string& bytes) {
        std::filesystem::path path = cfg.out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write artifact: " + path.string());
        out << bytes;
        if (!out) throw IoError("failed writing artifact: " + path.string());
        artifacts.push_back({name, sha256_hex(bytes)});
    }
};

template <typename Fn>
void run_stage(std::string_view name, Fn&& fn) {
    auto prefix = [&](const char* what) {
        return "stage " + std::string(name) + ": " + what;
    };
    try {
        fn();
    } catch (const SchemaError& e) {
        throw SchemaError(prefix(e.what()));
    } catch (const ConfigError& e) {
        throw ConfigError(prefix(e.what()));
    } catch (const IoError& e) {
        throw IoError(prefix(e.what()));
    } catch (const ValidationError& e) {
        throw ValidationError(prefix(e.what()));
    } catch (const std::exception& e) {
        throw Error(prefix(e.what()));
    }
}

std::string metrics_csv(const Corpus& corpus, const PrepConfig& prep) {
    std::vector<std::string> ids;
    for (const Document& d : corpus.documents()) ids.push_back(d.id);
    std::sort(ids.begin(), ids.end());
    std::ostringstream out;
    const std::vector<std::string> header = {"id",        "words", "sentences",
                                             "syllables", "fkgl",  "yules_k"};
    csv::write_row(out, header);
    for (const std::string& id : ids) {
        TokenStream stream = tokenize(corpus.at(id).text, prep.lowercase);
        if (stream.tokens.empty())
            throw ValidationError("document '" + id + "' has no words");
        ReadabilityResult read = fkgl(stream);
        DiversityResult div = yules_k(stream.tokens);
        const std::vector<std::string> row = {
            id,
            std::to_string(read.words),
            std::to_string(read.sentences),
            std::to_string(read.syllables),
            format_double(read.fkgl),
            format_double(div.k)};
        csv::write_row(out, row);
    }
    return out.str();
}

std::string tags_csv(const Corpus& corpus, const std::vector<Lexicon>& lexicons,
                     const PrepConfig& prep) {
    std::vector<TagResult> rows = tag_corpus(corpus, lexicons, prep);
    std::ostringstream out;
    const std::vector<std::string> header = {"id", "lexicon", "category", "count",
                                             "ratio"};
    csv::write_row(out, header);
    for (const TagResult& r : rows) {
        for (const auto& [category, count] : r.counts) {
            const std::vector<std::string> row = {
                r.doc_id, r.lexicon, category, std::to_string(count),
                format_double(r.ratios.at(category))};
            csv::write_row(out, row);
        }
    }
    return out.str();
}

std::string corpus_csv_bytes(const Corpus& corpus) {
    std::ostringstream out;
    const std::vector<std::string> header = {"id",      "institution", "sector",
                                             "continent", "country",   "text"};
    csv::write_row(out, header);
    for (const Document& d : corpus.documents()) {
        const std::vector<std::string> row = {
            d.id,        d.institution,
            std::string(to_string(d.sector)),
            std::string(to_string(d.continent)),
            d.country,   d.text};
        csv::write_row(out, row);
    }
    return out.str();
}

void ensure_sample_artifact(StageContext& ctx) {
    if (!ctx.cfg.sampling.enabled || ctx.sample_written) return;
    ctx.write_artifact("sample_corpus.csv", corpus_csv_bytes(ctx.analysis_corpus));
    ctx.sample_written = true;
}

void stage_network(StageContext& ctx) {
    ensure_sample_artifact(ctx);
    auto streams = prepared_streams(ctx.analysis_corpus, ctx.prep);
    std::vector<TokenStream> list;
    list.reserve(streams.size());
    for (const auto& [id, stream] : streams) list.push_back(stream);
    BuildOptions opts;
    opts.window = ctx.cfg.semnet.window;
    SemanticGraph graph = build_cooccurrence(list, opts);
    CommunityAssignment communities =
        louvain(graph, ctx.cfg.semnet.resolution, ctx.cfg.semnet.louvain_seed);
    CentralityScores scores = betweenness(graph, ctx.cfg.semnet.centrality);
    TopTerms top = top_terms(graph, communities, scores, ctx.cfg.semnet.top_k);

    ctx.write_artifact("network_graph.graphml",
                       render_graph(graph, &communities, &scores,
                                    GraphFormat::graphml));
    ctx.write_artifact("network_graph.json",
                       render_graph(graph, &communities, &scores,
                                    GraphFormat::json_edgelist));

    std::ostringstream out;
    const std::vector<std::string> header = {"scope", "rank", "term",
                                             "betweenness", "frequency",
                                             "community"};
    csv::write_row(out, header);
    auto emit = [&](const std::string& scope, const std::vector<std::string>& terms) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            std::uint32_t id = graph.term_ids.at(terms[i]);
            const std::vector<std::string> row = {
                scope,
                std::to_string(i + 1),
                terms[i],
                format_double(scores.scores[id]),
                std::to_string(graph.nodes[id].freq),
                std::to_string(communities.membership[id])};
            csv::write_row(out, row);
        }
    };
    emit("global", top.global);
    for (std::size_t c = 0; c < top.per_community.size(); ++c)
        emit("community:" + std::to_string(c), top.per_community[c]);
    ctx.write_artifact("network_top_terms.csv", out.str());
}

std::string similarity_csv(const SimilarityMatrix& sim) {
    std::ostringstream out;
    std::vector<std::string> header = {"label"};
    header.insert(header.end(), sim.labels.begin(), sim.labels.end());
    csv::write_row(out, header);
    for (std::size_t i = 0; i < sim.labels.size(); ++i) {
        std::vector<std::string> row = {sim.labels[i]};
        for (std::size_t j = 0; j < sim.labels.size(); ++j)
            row.push_back(format_double(sim.at(i, j)));
        csv::write_row(out, row);
    }
    return out.str();
}

void stage_similarity(StageContext& ctx) {
    ensure_sample_artifact(ctx);
    auto streams = prepared_streams(ctx.analysis_corpus, ctx.prep);
    FeatureMatrix dfm = build_dfm(streams, ctx.cfg.simclust.min_count);

    for (GroupKey key : ctx.cfg.simclust.groupings) {
        std::string key_name = key == GroupKey::sector ? "sector" : "continent";
        std::map<std::string, std::string> grouping;
        for (const Document& d : ctx.analysis_corpus.documents())
            grouping[d.id] = key == GroupKey::sector
                                 ? std::string(to_string(d.sector))
                                 : std::string(to_string(d.continent));
        FeatureMatrix grouped = group_rows(dfm, grouping);
        if (grouped.row_labels.size() < 2)
            throw ValidationError("similarity by " + key_name +
                                  " needs at least 2 groups");
        SimilarityMatrix sim = similarity_matrix(grouped);
        Dendrogram dendro = hac(sim, ctx.cfg.simclust.linkage);
        ctx.write_artifact("similarity_" + key_name + ".csv", similarity_csv(sim));
        ctx.write_artifact("dendrogram_" + key_name + ".newick",
                           render_dendrogram(dendro, DendroFormat::newick) + "\n");
        ctx.write_artifact("dendrogram_" + key_name + ".json",
                           render_dendrogram(dendro, DendroFormat::json));
    }
}

void stage_report(StageContext& ctx) {
    std::vector<MetricsRow> rows =
        compute_metrics(ctx.full_corpus, ctx.lexicons, ctx.prep);
    std::vector<AverageRow> averages =
        aggregate(rows, ctx.full_corpus, AggregateKey::sector_and_continent);
    ctx.write_artifact("report_averages.csv",
                       render_averages(averages, TableFormat::csv));
    if (rows.size() >= 3) {
        CorrelationTable table = correlations(rows);
        ctx.write_artifact("report_correlations.csv",
                           render_correlations(table, TableFormat::csv));
    }
}

} // namespace

RunManifest run_pipeline(const RunConfig& config, const std::set<Stage>& stages) {
    if (stages.empty()) throw ValidationError("run_pipeline: no stages requested");

    StageContext ctx(config);
    std::filesystem::create_directories(config.out_dir);

    RunManifest manifest;
    manifest.config_sha256 = config.config_sha256;
    manifest.tool_version = COREX_VERSION;
    if (config.sampling.enabled) manifest.sampling_seed = config.sampling.seed;

    manifest.inputs["corpus"] = sha256_file(config.corpus_path);
    if (config.stopwords_path)
        manifest.inputs["stopwords"] = sha256_file(*config.stopwords_path);
    if (config.noninformative_path)
        manifest.inputs["noninformative"] = sha256_file(*config.noninformative_path);

    ctx.full_corpus = load_corpus(config.corpus_path, config.corpus_format);

    std::unordered_set<std::string> stopwords(default_stopwords().begin(),
                                              default_stopwords().end());
    std::unordered_set<std::string> noninformative(
        default_noninformative_words().begin(),
        default_noninformative_words().end());
    if (config.stopwords_path) stopwords = load_word_list(*config.stopwords_path);
    if (config.noninformative_path)
        noninformative = load_word_list(*config.noninformative_path);
    ctx.prep = make_prep_config(std::move(stopwords), std::move(noninformative));

    for (const std::filesystem::path& path : config.lexicon_paths) {
        Lexicon lex = load_lexicon(path);
        manifest.inputs["lexicon:" + lex.name] = sha256_file(path);
        ctx.lexicons.push_back(std::move(lex));
    }

    if (config.sampling.enabled) {
        Corpus prepared = ctx.full_corpus;
        for (const MergeSpec& m : config.sampling.merges)
            prepared = merge_strata(prepared, m.sources, m.target);
        if (config.sampling.restrict_to)
            prepared = filter_sectors(prepared, *config.sampling.restrict_to);
        ctx.analysis_corpus =
            stratified_sample(prepared, config.sampling.key,
                              config.sampling.n_per_stratum, *config.sampling.seed);
    } else {
        ctx.analysis_corpus = ctx.full_corpus;
    }

    for (Stage stage : {Stage::metrics, Stage::tag, Stage::network,
                        Stage::similarity, Stage::report}) {
        if (!stages.count(stage)) continue;
        manifest.stages.emplace_back(to_string(stage));
        switch (stage) {
        case Stage::metrics:
            run_stage("metrics", [&] {
                ctx.write_artifact("metrics.csv", metrics_csv(ctx.full_corpus, ctx.prep));
            });
            break;
        case Stage::tag:
            run_stage("tag", [&] {
                if (ctx.lexicons.empty())
                    throw ValidationError("no lexicons configured");
                ctx.write_artifact("tags.csv",
                                   tags_csv(ctx.full_corpus, ctx.lexicons, ctx.prep));
            });
            break;
        case Stage::network:
            run_stage("network", [&] { stage_network(ctx); });
            break;
        case Stage::similarity:
            run_stage("similarity", [&] { stage_similarity(ctx); });
            break;
        case Stage::report:
            run_stage("report", [&] { stage_report(ctx); });
            break;
        }
    }

    std::sort(ctx.artifacts.begin(), ctx.artifacts.end(),
              [](const Artifact& a, const Artifact& b) { return a.path < b.path; });
    manifest.artifacts = ctx.artifacts;

    std::string manifest_json = manifest.to_json();
    std::filesystem::path manifest_path = config.out_dir / "manifest.json";
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + manifest_path.string());
    out << manifest_json;
    if (!out) throw IoError("failed writing manifest: " + manifest_path.string());
    return manifest;
}

} // namespace corex
