#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corex/textprep.hpp"

namespace corex {

/// Directed weighted term graph. Node ids are dense and assigned in
/// lexicographic term order, so the graph (ids included) is invariant
/// under document reordering. No self-loops; weights >= 1.
struct SemanticGraph {
    struct Node {
        std::string term;
        std::uint64_t freq = 0; // total occurrences across the input streams
    };
    std::vector<Node> nodes; // node id = index
    std::unordered_map<std::string, std::uint32_t> term_ids;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> edges;
    bool directed = true;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }
};

/// Co-occurrence window. For `document` and `sentence`, each unordered
/// term pair counts once per unit, directed from the term whose first
/// occurrence comes earlier in the unit. For `fixed(k)` (k >= 2), every
/// position pair within k consecutive tokens counts, directed by position.
struct CoocWindow {
    enum class Kind { document, sentence, fixed };
    Kind kind = Kind::document;
    std::size_t k = 0;

    static CoocWindow document() { return {Kind::document, 0}; }
    static CoocWindow sentence() { return {Kind::sentence, 0}; }
    static CoocWindow fixed(std::size_t k) { return {Kind::fixed, k}; }
};

struct BuildOptions {
    CoocWindow window = CoocWindow::document();
    bool keep_isolated = false; // keep terms that never co-occur
};

/// Streams must already be noise-removed; repeated terms within one unit
/// contribute no self-loop.
SemanticGraph build_cooccurrence(std::span<const TokenStream> streams,
                                 const BuildOptions& options = {});

/// Louvain result. `pass_q` records modularity after each local-move
/// phase, evaluated on the original graph; it never decreases.
struct CommunityAssignment {
    std::vector<std::uint32_t> membership; // node id -> dense community id
    double modularity_q = 0.0;
    std::vector<double> pass_q;
    std::size_t community_count() const;
};

/// Newman modularity of a membership on the symmetrized graph (directed
/// weights summed both ways), with a resolution multiplier on the null
/// model term.
double modularity(const SemanticGraph& graph,
                  std::span<const std::uint32_t> membership,
                  double resolution = 1.0);

/// Blondel-style local moves plus aggregation on the symmetrized graph,
/// iterated until the modularity gain drops to 1e-9. Nodes are visited in
/// a seeded-shuffled order, so results are deterministic per seed.
CommunityAssignment louvain(const SemanticGraph& graph, double resolution = 1.0,
                            std::uint64_t seed = 0);

enum class CentralityMode { binary, weighted };

/// Betweenness over directed shortest paths, accumulated across all
/// ordered source/target pairs with fractional credit for ties (Brandes).
/// binary: unit edge lengths. weighted: edge length 1/weight, so heavier
/// co-occurrence means a shorter distance. Unreachable pairs contribute 0.
struct CentralityScores {
    std::vector<double> scores; // node id -> betweenness
    CentralityMode mode = CentralityMode::weighted;
};

CentralityScores betweenness(const SemanticGraph& graph, CentralityMode mode);

/// k highest-betweenness terms per community and globally; ties broken by
/// higher frequency, then lexicographic term order.
struct TopTerms {
    std::vector<std::vector<std::string>> per_community;
    std::vector<std::string> global;
};

TopTerms top_terms(const SemanticGraph& graph,
                   const CommunityAssignment& communities,
                   const CentralityScores& centrality, std::size_t k);

enum class GraphFormat { graphml, dot, json_edgelist };

/// Byte-deterministic serialization (nodes by id, edges by (source,
/// target)). Nodes carry term/frequency plus community and betweenness
/// when provided; edges carry their weight.
std::string render_graph(const SemanticGraph& graph,
                         const CommunityAssignment* communities,
                         const CentralityScores* centrality, GraphFormat format);

void export_graph(const SemanticGraph& graph,
                  const CommunityAssignment* communities,
                  const CentralityScores* centrality, GraphFormat format,
                  const std::filesystem::path& path);

/// Rebuilds a graph from its json_edgelist rendering.
SemanticGraph parse_json_edgelist(std::string_view text);
SemanticGraph import_json_edgelist(const std::filesystem::path& path);

} // namespace corex
