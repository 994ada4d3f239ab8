#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corex/corpus.hpp"
#include "corex/lexicon.hpp"
#include "corex/report.hpp"
#include "corex/semnet.hpp"
#include "corex/simclust.hpp"
#include "corex/textprep.hpp"

namespace corex {

struct MergeSpec {
    std::set<Sector> sources;
    Sector target = Sector::Mixed;
};

/// Sampling design for the network/similarity corpus: optional stratum
/// merges, an optional sector restriction, then a seeded stratified draw.
/// The metrics/tag/report stages always run on the full corpus.
struct SamplingSpec {
    bool enabled = false;
    GroupKey key = GroupKey::sector;
    std::size_t n_per_stratum = 0;
    std::optional<std::uint64_t> seed;
    std::vector<MergeSpec> merges;
    std::optional<std::set<Sector>> restrict_to;
};

struct SemnetSpec {
    CoocWindow window = CoocWindow::document();
    double resolution = 1.0;
    CentralityMode centrality = CentralityMode::weighted;
    std::size_t top_k = 5;
    std::uint64_t louvain_seed = 0;
};

struct SimclustSpec {
    std::uint64_t min_count = 10; // keep terms occurring more than this
    Linkage linkage = Linkage::average;
    std::vector<GroupKey> groupings = {GroupKey::sector, GroupKey::continent};
};

struct RunConfig {
    std::filesystem::path corpus_path;
    CorpusFormat corpus_format = CorpusFormat::csv;
    std::optional<std::filesystem::path> stopwords_path;
    std::optional<std::filesystem::path> noninformative_path;
    std::vector<std::filesystem::path> lexicon_paths;
    SamplingSpec sampling;
    SemnetSpec semnet;
    SimclustSpec simclust;
    std::filesystem::path out_dir = "out";
    bool comma_decimal_display = false;
    std::string config_sha256; // hash of the config file bytes
};

/// Parses and validates a JSON run config. Relative paths resolve against
/// the config file's directory. Defaults: window=document, resolution=1,
/// centrality=weighted, top_k=5, min_count=10, linkage=average,
/// groupings=[sector, continent]. Every referenced file must exist and a
/// seed is mandatory when sampling is requested; violations raise
/// ConfigError naming the JSON location.
RunConfig validate_config(const std::filesystem::path& config_path);
RunConfig parse_config_text(std::string_view text,
                            const std::filesystem::path& base_dir,
                            const std::string& source_name);

enum class Stage { metrics, tag, network, similarity, report };

std::set<Stage> all_stages();
std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

struct Artifact {
    std::string path; // relative to the output directory
    std::string sha256;
};

struct RunManifest {
    std::string config_sha256;
    std::vector<std::string> stages;
    std::map<std::string, std::string> inputs; // config path string -> sha256
    std::optional<std::uint64_t> sampling_seed;
    std::vector<Artifact> artifacts;
    std::string tool_version;

    std::string to_json() const; // sorted keys, no timestamps
};

/// Runs the requested stages, writes their artifacts plus manifest.json
/// under config.out_dir, and returns the manifest. Reruns with identical
/// inputs produce byte-identical outputs. A stage failure halts the run
/// with the stage named; artifacts written so far are kept.
RunManifest run_pipeline(const RunConfig& config, const std::set<Stage>& stages);

/// Per-document metric assembly shared by the metrics stage and the
/// report stage: word count, FKGL, Yule's K and per-lexicon ratios, one
/// row per document ordered by id.
std::vector<MetricsRow> compute_metrics(const Corpus& corpus,
                                        const std::vector<Lexicon>& lexicons,
                                        const PrepConfig& prep);

/// Noise-removed token streams for the network/similarity stages.
std::map<std::string, TokenStream> prepared_streams(const Corpus& corpus,
                                                    const PrepConfig& prep);

/// Rebuilds MetricsRow records from the metrics stage output plus an
/// optional tags stage output, so the report stage can run standalone on
/// prior artifacts.
std::vector<MetricsRow> load_metrics_rows(
    const std::filesystem::path& metrics_csv,
    const std::optional<std::filesystem::path>& tags_csv = std::nullopt);

} // namespace corex
