// corex - corpus content-analysis toolkit CLI.
//
// Subcommands: ingest, sample, metrics, tag, network, similarity, report,
// run. Exit codes: 0 ok, 2 usage/config, 3 data/schema, 4 I/O,
// 5 precondition, 70 internal.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "corex/corpus.hpp"
#include "corex/csv.hpp"
#include "corex/error.hpp"
#include "corex/lexicon.hpp"
#include "corex/lexmetrics.hpp"
#include "corex/numfmt.hpp"
#include "corex/pipeline.hpp"
#include "corex/report.hpp"
#include "corex/semnet.hpp"
#include "corex/simclust.hpp"
#include "corex/textprep.hpp"
#include "corex/version.hpp"

namespace {

using namespace corex;

CorpusFormat parse_format(const std::string& format, const std::string& path) {
    if (format == "csv") return CorpusFormat::csv;
    if (format == "jsonl") return CorpusFormat::jsonl;
    if (format == "auto")
        return std::filesystem::path(path).extension() == ".jsonl"
                   ? CorpusFormat::jsonl
                   : CorpusFormat::csv;
    throw ConfigError("unknown corpus format '" + format + "'");
}

GroupKey parse_group_key(const std::string& key) {
    if (key == "sector") return GroupKey::sector;
    if (key == "continent") return GroupKey::continent;
    if (key == "sector_x_continent") return GroupKey::sector_x_continent;
    throw ConfigError("unknown group key '" + key + "'");
}

std::set<Sector> parse_sector_list(const std::string& csv_list) {
    std::set<Sector> out;
    std::stringstream ss(csv_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto s = parse_sector(item);
        if (!s) throw ConfigError("unknown sector '" + item + "'");
        out.insert(*s);
    }
    if (out.empty()) throw ConfigError("empty sector list");
    return out;
}

// "Others+Private=Mixed"
MergeSpec parse_merge_spec(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("merge spec must look like 'Others+Private=Mixed'");
    MergeSpec merge;
    std::stringstream ss(spec.substr(0, eq));
    std::string item;
    while (std::getline(ss, item, '+')) {
        auto s = parse_sector(item);
        if (!s) throw ConfigError("unknown sector '" + item + "' in merge spec");
        merge.sources.insert(*s);
    }
    auto target = parse_sector(spec.substr(eq + 1));
    if (!target)
        throw ConfigError("unknown target sector in merge spec '" + spec + "'");
    merge.target = *target;
    return merge;
}

void write_text(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << bytes;
    if (!out) throw IoError("failed writing file: " + path.string());
}

void emit(const std::optional<std::string>& output, const std::string& bytes) {
    if (output && *output != "-")
        write_text(*output, bytes);
    else
        std::cout << bytes;
}

struct MetricLine {
    std::string id;
    ReadabilityResult read;
    double k = 0.0;
};

std::vector<MetricLine> per_document_metrics(const Corpus& corpus) {
    std::vector<std::string> ids;
    for (const Document& d : corpus.documents()) ids.push_back(d.id);
    std::sort(ids.begin(), ids.end());
    std::vector<MetricLine> lines;
    for (const std::string& id : ids) {
        TokenStream stream = tokenize(corpus.at(id).text);
        if (stream.tokens.empty())
            throw ValidationError("document '" + id + "' has no words");
        lines.push_back({id, fkgl(stream), yules_k(stream.tokens).k});
    }
    return lines;
}

int cmd_ingest(const std::string& input, const std::string& format,
               const std::optional<std::string>& output,
               const std::string& output_format, const std::string& counts_by,
               const std::string& counts_format, bool comma_decimal) {
    Corpus corpus = load_corpus(input, parse_format(format, input));
    std::cerr << "loaded " << corpus.size() << " documents from " << input << "\n";
    if (output) {
        save_corpus(corpus, *output, parse_format(output_format, *output));
        std::cerr << "wrote " << *output << "\n";
    }
    auto counts = group_counts(corpus, parse_group_key(counts_by));
    std::cout << render_group_counts(counts,
                                     counts_format == "csv" ? TableFormat::csv
                                                            : TableFormat::text,
                                     comma_decimal);
    return 0;
}

int cmd_sample(const std::string& input, const std::string& format,
               std::size_t n, std::uint64_t seed, const std::string& key,
               const std::vector<std::string>& merges,
               const std::optional<std::string>& restrict_to,
               const std::string& output, const std::string& output_format) {
    Corpus corpus = load_corpus(input, parse_format(format, input));
    for (const std::string& spec : merges) {
        MergeSpec merge = parse_merge_spec(spec);
        corpus = merge_strata(corpus, merge.sources, merge.target);
    }
    if (restrict_to) corpus = filter_sectors(corpus, parse_sector_list(*restrict_to));
    Corpus sampled = stratified_sample(corpus, parse_group_key(key), n, seed);
    save_corpus(sampled, output, parse_format(output_format, output));
    std::cerr << "wrote " << sampled.size() << " documents to " << output << "\n";
    return 0;
}

int cmd_metrics(const std::string& input, const std::string& format,
                const std::optional<std::string>& output,
                const std::string& output_format) {
    Corpus corpus = load_corpus(input, parse_format(format, input));
    auto lines = per_document_metrics(corpus);
    std::ostringstream out;
    if (output_format == "jsonl") {
        for (const MetricLine& line : lines) {
            nlohmann::json obj = {{"id", line.id},
                                  {"words", line.read.words},
                                  {"sentences", line.read.sentences},
                                  {"syllables", line.read.syllables},
                                  {"fkgl", line.read.fkgl},
                                  {"yules_k", line.k}};
            out << obj.dump() << '\n';
        }
    } else {
        const std::vector<std::string> header = {"id",        "words", "sentences",
                                                 "syllables", "fkgl",  "yules_k"};
        csv::write_row(out, header);
        for (const MetricLine& line : lines) {
            const std::vector<std::string> row = {
                line.id,
                std::to_string(line.read.words),
                std::to_string(line.read.sentences),
                std::to_string(line.read.syllables),
                format_double(line.read.fkgl),
                format_double(line.k)};
            csv::write_row(out, row);
        }
    }
    emit(output, out.str());
    return 0;
}

int cmd_tag(const std::string& input, const std::string& format,
            const std::vector<std::string>& lexicon_paths,
            const std::optional<std::string>& output,
            const std::string& output_format) {
    Corpus corpus = load_corpus(input, parse_format(format, input));
    std::vector<Lexicon> lexicons;
    for (const std::string& path : lexicon_paths)
        lexicons.push_back(load_lexicon(path));
    auto rows = tag_corpus(corpus, lexicons);
    std::ostringstream out;
    if (output_format == "jsonl") {
        for (const TagResult& r : rows) {
            nlohmann::json obj = {{"id", r.doc_id},
                                  {"lexicon", r.lexicon},
                                  {"counts", r.counts},
                                  {"ratios", r.ratios}};
            out << obj.dump() << '\n';
        }
    } else {
        const std::vector<std::string> header = {"id", "lexicon", "category",
                                                 "count", "ratio"};
        csv::write_row(out, header);
        for (const TagResult& r : rows)
            for (const auto& [category, count] : r.counts) {
                const std::vector<std::string> row = {
                    r.doc_id, r.lexicon, category, std::to_string(count),
                    format_double(r.ratios.at(category))};
                csv::write_row(out, row);
            }
    }
    emit(output, out.str());
    return 0;
}

int cmd_network(const std::string& input, const std::string& format,
                const std::string& window, double resolution,
                const std::string& centrality, std::size_t top_k,
                std::uint64_t seed, const std::string& out_prefix,
                std::vector<std::string> graph_formats) {
    Corpus corpus = load_corpus(input, parse_format(format, input));
    PrepConfig prep = PrepConfig::defaults();
    auto streams = prepared_streams(corpus, prep);
    std::vector<TokenStream> list;
    for (const auto& [id, stream] : streams) list.push_back(stream);

    BuildOptions opts;
    if (window == "document") opts.window = CoocWindow::document();
    else if (window == "sentence") opts.window = CoocWindow::sentence();
    else if (window.rfind("fixed:", 0) == 0) {
        try {
            opts.window = CoocWindow::fixed(std::stoull(window.substr(6)));
        } catch (const std::exception&) {
            throw ConfigError("bad fixed window '" + window + "'");
        }
    } else throw ConfigError("unknown window '" + window + "'");

    SemanticGraph graph = build_cooccurrence(list, opts);
    CommunityAssignment comm = louvain(graph, resolution, seed);
    CentralityScores cent = betweenness(graph, centrality == "binary"
                                                   ? CentralityMode::binary
                                                   : CentralityMode::weighted);
    TopTerms top = top_terms(graph, comm, cent, top_k);

    if (graph_formats.empty()) graph_formats = {"graphml", "json"};
    for (const std::string& gf : graph_formats) {
        if (gf == "graphml")
            write_text(out_prefix + ".graphml",
                       render_graph(graph, &comm, &cent, GraphFormat::graphml));
        else if (gf == "dot")
            write_text(out_prefix + ".dot",
                       render_graph(graph, &comm, &cent, GraphFormat::dot));
        else if (gf == "json")
            write_text(out_prefix + ".json",
                       render_graph(graph, &comm, &cent,
                                    GraphFormat::json_edgelist));
        else
            throw ConfigError("unknown graph format '" + gf + "'");
    }

    std::ostringstream out;
    const std::vector<std::string> header = {"scope", "rank", "term",
                                             "betweenness", "frequency",
                                             "community"};
    csv::write_row(out, header);
    auto emit_terms = [&](const std::string& scope,
                          const std::vector<std::string>& terms) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            std::uint32_t id = graph.term_ids.at(terms[i]);
            const std::vector<std::string> row = {
                scope,
                std::to_string(i + 1),
                terms[i],
                format_double(cent.scores[id]),
                std::to_string(graph.nodes[id].freq),
                std::to_string(comm.membership[id])};
            csv::write_row(out, row);
        }
    };
    emit_terms("global", top.global);
    for (std::size_t c = 0; c < top.per_community.size(); ++c)
        emit_terms("community:" + std::to_string(c), top.per_community[c]);
    write_text(out_prefix + "_top_terms.csv", out.str());

    std::cerr << "network: " << graph.node_count() << " nodes, "
              << graph.edge_count() << " links, "
              << comm.community_count() << " communities (Q="
              << format_double(comm.modularity_q) << ")\n";
    return 0;
}

int cmd_similarity(const std::string& input, const std::string& format,
                   const std::string& group_by, std::uint64_t min_count,
                   const std::string& linkage, const std::string& out_prefix,
                   const std::optional<std::string>& out_dfm) {
    Corpus corpus = load_corpus(input, parse_format(format, input));
    PrepConfig prep = PrepConfig::defaults();
    auto streams = prepared_streams(corpus, prep);
    FeatureMatrix dfm = build_dfm(streams, min_count);
    if (out_dfm) save_feature_matrix(dfm, *out_dfm);

    FeatureMatrix grouped = dfm;
    if (group_by != "document") {
        GroupKey key = parse_group_key(group_by);
        if (key == GroupKey::sector_x_continent)
            throw ConfigError("group-by must be sector, continent or document");
        std::map<std::string, std::string> grouping;
        for (const Document& d : corpus.documents())
            grouping[d.id] = key == GroupKey::sector
                                 ? std::string(to_string(d.sector))
                                 : std::string(to_string(d.continent));
        grouped = group_rows(dfm, grouping);
    }
    SimilarityMatrix sim = similarity_matrix(grouped);
    Linkage link = linkage == "complete" ? Linkage::complete
                   : linkage == "single" ? Linkage::single
                                         : Linkage::average;
    Dendrogram dendro = hac(sim, link);

    std::ostringstream matrix_csv;
    std::vector<std::string> header = {"label"};
    header.insert(header.end(), sim.labels.begin(), sim.labels.end());
    csv::write_row(matrix_csv, header);
    for (std::size_t i = 0; i < sim.labels.size(); ++i) {
        std::vector<std::string> row = {sim.labels[i]};
        for (std::size_t j = 0; j < sim.labels.size(); ++j)
            row.push_back(format_double(sim.at(i, j)));
        csv::write_row(matrix_csv, row);
    }
    write_text(out_prefix + "_similarity.csv", matrix_csv.str());
    write_text(out_prefix + "_dendrogram.newick",
               render_dendrogram(dendro, DendroFormat::newick) + "\n");
    write_text(out_prefix + "_dendrogram.json",
               render_dendrogram(dendro, DendroFormat::json));
    std::cerr << "similarity: " << sim.labels.size() << " groups, "
              << dendro.merges.size() << " merges\n";
    return 0;
}

int cmd_report(const std::string& metrics_path,
               const std::optional<std::string>& tags_path,
               const std::string& corpus_path, const std::string& format,
               const std::string& by,
               const std::optional<std::string>& out_averages,
               const std::optional<std::string>& out_correlations, bool text,
               bool comma_decimal) {
    Corpus corpus = load_corpus(corpus_path, parse_format(format, corpus_path));
    std::optional<std::filesystem::path> tags;
    if (tags_path) tags = *tags_path;
    auto rows = load_metrics_rows(metrics_path, tags);

    AggregateKey key = by == "sector"      ? AggregateKey::sector
                       : by == "continent" ? AggregateKey::continent
                                           : AggregateKey::sector_and_continent;
    auto averages = aggregate(rows, corpus, key);
    TableFormat live_format = text ? TableFormat::text : TableFormat::csv;
    std::cout << render_averages(averages, live_format, comma_decimal);
    if (out_averages)
        write_text(*out_averages, render_averages(averages, TableFormat::csv));

    if (rows.size() >= 3) {
        auto table = correlations(rows);
        if (text) std::cout << "\n";
        std::cout << render_correlations(table, live_format, comma_decimal);
        if (out_correlations)
            write_text(*out_correlations,
                       render_correlations(table, TableFormat::csv));
    } else {
        std::cerr << "correlations skipped: fewer than 3 documents\n";
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& stage_list,
            const std::optional<std::uint64_t>& seed_override,
            const std::optional<std::string>& out_dir_override,
            bool comma_decimal) {
    RunConfig cfg = validate_config(config_path);
    if (seed_override) {
        if (!cfg.sampling.enabled)
            throw ConfigError("--seed given but the config requests no sampling");
        cfg.sampling.seed = *seed_override;
    }
    if (out_dir_override) cfg.out_dir = *out_dir_override;
    if (comma_decimal) cfg.comma_decimal_display = true;

    std::set<Stage> stages;
    if (stage_list == "all") {
        stages = all_stages();
    } else {
        std::stringstream ss(stage_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto stage = parse_stage(item);
            if (!stage) throw ConfigError("unknown stage '" + item + "'");
            stages.insert(*stage);
        }
    }
    RunManifest manifest = run_pipeline(cfg, stages);
    std::cerr << "wrote " << manifest.artifacts.size() << " artifacts to "
              << cfg.out_dir.string() << "\n";
    for (const Artifact& a : manifest.artifacts)
        std::cerr << "  " << a.path << "  " << a.sha256.substr(0, 12) << "\n";
    std::cout << (cfg.out_dir / "manifest.json").string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"corex - corpus content-analysis toolkit"};
    app.set_version_flag("--version", COREX_VERSION);
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Load, validate and summarize a corpus");
    std::string in_input, in_format = "auto", in_outfmt = "auto";
    std::optional<std::string> in_output;
    std::string in_counts_by = "sector", in_counts_fmt = "text";
    bool in_comma = false;
    ingest->add_option("--input", in_input, "Corpus file")->required();
    ingest->add_option("--format", in_format, "csv|jsonl|auto");
    ingest->add_option("--output", in_output, "Re-save the validated corpus here");
    ingest->add_option("--output-format", in_outfmt, "csv|jsonl|auto");
    ingest->add_option("--counts-by", in_counts_by,
                       "sector|continent|sector_x_continent");
    ingest->add_option("--counts-format", in_counts_fmt, "text|csv");
    ingest->add_flag("--locale-display", in_comma, "Render decimals with a comma");

    // sample
    auto* sample = app.add_subcommand("sample", "Stratified sampling with optional merges");
    std::string sm_input, sm_format = "auto", sm_key = "sector";
    std::string sm_output, sm_outfmt = "auto";
    std::optional<std::string> sm_restrict;
    std::vector<std::string> sm_merges;
    std::size_t sm_n = 0;
    std::uint64_t sm_seed = 0;
    bool sm_seed_set = false;
    sample->add_option("--input", sm_input, "Corpus file")->required();
    sample->add_option("--format", sm_format, "csv|jsonl|auto");
    sample->add_option("--n", sm_n, "Documents per stratum")->required();
    sample->add_option("--seed", sm_seed, "Sampling seed")
        ->required()
        ->each([&](const std::string&) { sm_seed_set = true; });
    sample->add_option("--key", sm_key, "sector|continent");
    sample->add_option("--merge", sm_merges,
                       "Stratum merge, e.g. 'Others+Private=Mixed' (repeatable)");
    sample->add_option("--restrict", sm_restrict,
                       "Keep only these sectors, e.g. 'Health,HigherEd,Mixed'");
    sample->add_option("--output", sm_output, "Output corpus file")->required();
    sample->add_option("--output-format", sm_outfmt, "csv|jsonl|auto");

    // metrics
    auto* metrics = app.add_subcommand("metrics",
                                       "Per-document readability and diversity");
    std::string me_input, me_format = "auto", me_outfmt = "csv";
    std::optional<std::string> me_output;
    metrics->add_option("--input", me_input, "Corpus file")->required();
    metrics->add_option("--format", me_format, "csv|jsonl|auto");
    metrics->add_option("--output", me_output, "Output file ('-' for stdout)");
    metrics->add_option("--output-format", me_outfmt, "csv|jsonl");

    // tag
    auto* tag_cmd = app.add_subcommand("tag", "Dictionary category counts and ratios");
    std::string tg_input, tg_format = "auto", tg_outfmt = "csv";
    std::vector<std::string> tg_lexicons;
    std::optional<std::string> tg_output;
    tag_cmd->add_option("--input", tg_input, "Corpus file")->required();
    tag_cmd->add_option("--format", tg_format, "csv|jsonl|auto");
    tag_cmd->add_option("--lexicon", tg_lexicons, "Lexicon CSV (repeatable)")
        ->required();
    tag_cmd->add_option("--output", tg_output, "Output file ('-' for stdout)");
    tag_cmd->add_option("--output-format", tg_outfmt, "csv|jsonl");

    // network
    auto* network = app.add_subcommand("network",
                                       "Co-occurrence network, communities, betweenness");
    std::string nw_input, nw_format = "auto", nw_window = "document";
    std::string nw_centrality = "weighted", nw_prefix = "network";
    std::vector<std::string> nw_formats;
    double nw_resolution = 1.0;
    std::size_t nw_topk = 5;
    std::uint64_t nw_seed = 0;
    network->add_option("--input", nw_input, "Corpus file")->required();
    network->add_option("--format", nw_format, "csv|jsonl|auto");
    network->add_option("--window", nw_window, "document|sentence|fixed:<k>");
    network->add_option("--resolution", nw_resolution, "Louvain resolution (> 0)");
    network->add_option("--centrality", nw_centrality, "weighted|binary");
    network->add_option("--top-k", nw_topk, "Top terms per cluster");
    network->add_option("--seed", nw_seed, "Louvain visit-order seed");
    network->add_option("--out-prefix", nw_prefix, "Output path prefix");
    network->add_option("--graph-format", nw_formats,
                        "graphml|dot|json (repeatable; default graphml+json)");

    // similarity
    auto* similarity = app.add_subcommand("similarity",
                                          "Cosine similarity matrix and dendrogram");
    std::string si_input, si_format = "auto", si_group = "sector";
    std::string si_linkage = "average", si_prefix = "similarity";
    std::optional<std::string> si_dfm;
    std::uint64_t si_min_count = 10;
    similarity->add_option("--input", si_input, "Corpus file")->required();
    similarity->add_option("--format", si_format, "csv|jsonl|auto");
    similarity->add_option("--group-by", si_group, "sector|continent|document");
    similarity->add_option("--min-count", si_min_count,
                           "Keep terms with corpus-wide count > this");
    similarity->add_option("--linkage", si_linkage, "average|complete|single");
    similarity->add_option("--out-prefix", si_prefix, "Output path prefix");
    similarity->add_option("--out-dfm", si_dfm,
                           "Also write the document-feature matrix CSV here");

    // report
    auto* report = app.add_subcommand("report",
                                      "Aggregate averages and correlations");
    std::string rp_metrics, rp_corpus, rp_format = "auto", rp_by = "sector_and_continent";
    std::optional<std::string> rp_tags, rp_out_avg, rp_out_corr;
    bool rp_text = false, rp_comma = false;
    report->add_option("--metrics", rp_metrics, "metrics.csv from the metrics stage")
        ->required();
    report->add_option("--tags", rp_tags, "tags.csv from the tag stage");
    report->add_option("--corpus", rp_corpus, "Corpus file (for strata)")->required();
    report->add_option("--format", rp_format, "csv|jsonl|auto");
    report->add_option("--by", rp_by, "sector|continent|sector_and_continent");
    report->add_option("--out-averages", rp_out_avg, "Write averages CSV here");
    report->add_option("--out-correlations", rp_out_corr,
                       "Write correlations CSV here");
    report->add_flag("--text", rp_text, "Aligned text tables on stdout");
    report->add_flag("--locale-display", rp_comma, "Render decimals with a comma");

    // run
    auto* run = app.add_subcommand("run", "Run the configured pipeline");
    std::string rn_config, rn_stages = "all";
    std::optional<std::uint64_t> rn_seed;
    std::optional<std::string> rn_outdir;
    bool rn_comma = false;
    run->add_option("--config", rn_config, "Run config (JSON)")->required();
    run->add_option("--stages", rn_stages,
                    "Comma-separated subset of metrics,tag,network,similarity,report");
    run->add_option("--seed", rn_seed, "Override the sampling seed");
    run->add_option("--out-dir", rn_outdir, "Override the output directory");
    run->add_flag("--locale-display", rn_comma, "Render decimals with a comma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*ingest)
            return cmd_ingest(in_input, in_format, in_output, in_outfmt,
                              in_counts_by, in_counts_fmt, in_comma);
        if (*sample)
            return cmd_sample(sm_input, sm_format, sm_n, sm_seed, sm_key,
                              sm_merges, sm_restrict, sm_output, sm_outfmt);
        if (*metrics) return cmd_metrics(me_input, me_format, me_output, me_outfmt);
        if (*tag_cmd)
            return cmd_tag(tg_input, tg_format, tg_lexicons, tg_output, tg_outfmt);
        if (*network)
            return cmd_network(nw_input, nw_format, nw_window, nw_resolution,
                               nw_centrality, nw_topk, nw_seed, nw_prefix,
                               nw_formats);
        if (*similarity)
            return cmd_similarity(si_input, si_format, si_group, si_min_count,
                                  si_linkage, si_prefix, si_dfm);
        if (*report)
            return cmd_report(rp_metrics, rp_tags, rp_corpus, rp_format, rp_by,
                              rp_out_avg, rp_out_corr, rp_text, rp_comma);
        if (*run)
            return cmd_run(rn_config, rn_stages, rn_seed, rn_outdir, rn_comma);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
