#include "corex/semnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include <json.hpp>

#include "corex/error.hpp"
#include "corex/hash.hpp"
#include "corex/numfmt.hpp"

namespace corex {

std::size_t CommunityAssignment::community_count() const {
    std::size_t max_id = 0;
    for (std::uint32_t c : membership) max_id = std::max<std::size_t>(max_id, c);
    return membership.empty() ? 0 : max_id + 1;
}

SemanticGraph build_cooccurrence(std::span<const TokenStream> streams,
                                 const BuildOptions& options) {
    if (options.window.kind == CoocWindow::Kind::fixed && options.window.k < 2)
        throw ValidationError("build_cooccurrence: fixed window needs k >= 2");

    // Temporary ids in first-encounter order; remapped to sorted-term ids below.
    std::unordered_map<std::string, std::uint32_t> tmp_ids;
    std::vector<std::string> tmp_terms;
    std::vector<std::uint64_t> tmp_freq;
    auto id_of = [&](const std::string& term) {
        auto [it, inserted] = tmp_ids.emplace(term, tmp_terms.size());
        if (inserted) {
            tmp_terms.push_back(term);
            tmp_freq.push_back(0);
        }
        return it->second;
    };

    std::unordered_map<std::uint64_t, std::uint64_t> edge_weights;
    auto add_edge = [&](std::uint32_t a, std::uint32_t b, std::uint64_t w) {
        edge_weights[(std::uint64_t(a) << 32) | b] += w;
    };

    // One count per unit per unordered pair; direction follows the first
    // occurrences inside the unit.
    auto count_unit = [&](std::span<const std::string> tokens) {
        std::vector<std::uint32_t> order;
        std::unordered_map<std::uint32_t, std::size_t> seen;
        for (const std::string& t : tokens) {
            std::uint32_t id = id_of(t);
            if (seen.emplace(id, seen.size()).second) order.push_back(id);
        }
        for (std::size_t i = 0; i < order.size(); ++i)
            for (std::size_t j = i + 1; j < order.size(); ++j)
                add_edge(order[i], order[j], 1);
    };

    for (const TokenStream& stream : streams) {
        for (const std::string& t : stream.tokens) ++tmp_freq[id_of(t)];
        switch (options.window.kind) {
        case CoocWindow::Kind::document:
            count_unit(stream.tokens);
            break;
        case CoocWindow::Kind::sentence: {
            auto bounds = stream.sentence_bounds;
            if (bounds.empty() && !stream.tokens.empty())
                bounds.emplace_back(0, stream.tokens.size());
            for (const auto& [s, e] : bounds)
                count_unit(std::span<const std::string>(stream.tokens).subspan(s, e - s));
            break;
        }
        case CoocWindow::Kind::fixed: {
            const auto& toks = stream.tokens;
            for (std::size_t i = 0; i < toks.size(); ++i) {
                std::size_t hi = std::min(toks.size(), i + options.window.k);
                std::uint32_t a = id_of(toks[i]);
                for (std::size_t j = i + 1; j < hi; ++j) {
                    std::uint32_t b = id_of(toks[j]);
                    if (a != b) add_edge(a, b, 1);
                }
            }
            break;
        }
        }
    }

    // Final node set: terms with at least one edge, unless keep_isolated.
    std::vector<bool> in_edge(tmp_terms.size(), false);
    for (const auto& [key, w] : edge_weights) {
        in_edge[key >> 32] = true;
        in_edge[key & 0xFFFFFFFFu] = true;
    }
    std::vector<std::uint32_t> kept;
    for (std::uint32_t i = 0; i < tmp_terms.size(); ++i)
        if (options.keep_isolated || in_edge[i]) kept.push_back(i);
    std::sort(kept.begin(), kept.end(), [&](std::uint32_t a, std::uint32_t b) {
        return tmp_terms[a] < tmp_terms[b];
    });

    SemanticGraph g;
    std::vector<std::uint32_t> remap(tmp_terms.size(), 0);
    g.nodes.reserve(kept.size());
    for (std::uint32_t new_id = 0; new_id < kept.size(); ++new_id) {
        std::uint32_t old_id = kept[new_id];
        remap[old_id] = new_id;
        g.nodes.push_back({tmp_terms[old_id], tmp_freq[old_id]});
        g.term_ids.emplace(tmp_terms[old_id], new_id);
    }
    for (const auto& [key, w] : edge_weights) {
        std::uint32_t a = remap[key >> 32];
        std::uint32_t b = remap[key & 0xFFFFFFFFu];
        g.edges[{a, b}] += w;
    }
    return g;
}

namespace {

// Symmetrized adjacency: each undirected edge listed from both endpoints
// with the summed directed weight. Lists are sorted by neighbor id.
std::vector<std::vector<std::pair<std::uint32_t, double>>> symmetrize(
    const SemanticGraph& graph) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> sym;
    for (const auto& [edge, w] : graph.edges) {
        auto [a, b] = edge;
        if (a == b) continue; // invariant: no self-loops
        if (a > b) std::swap(a, b);
        sym[{a, b}] += static_cast<double>(w);
    }
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(graph.nodes.size());
    for (const auto& [edge, w] : sym) {
        adj[edge.first].emplace_back(edge.second, w);
        adj[edge.second].emplace_back(edge.first, w);
    }
    for (auto& list : adj)
        std::sort(list.begin(), list.end());
    return adj;
}

} // namespace

double modularity(const SemanticGraph& graph,
                  std::span<const std::uint32_t> membership, double resolution) {
    if (membership.size() != graph.nodes.size())
        throw ValidationError("modularity: membership size mismatch");
    auto adj = symmetrize(graph);
    const std::size_t n = graph.nodes.size();
    std::vector<double> strength(n, 0.0);
    double two_m = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& [v, w] : adj[u]) strength[u] += w;
        two_m += strength[u];
    }
    if (two_m == 0.0) return 0.0;

    std::map<std::uint32_t, double> internal, degree;
    for (std::size_t u = 0; u < n; ++u) {
        degree[membership[u]] += strength[u];
        for (const auto& [v, w] : adj[u])
            if (membership[v] == membership[u]) internal[membership[u]] += w;
    }
    double q = 0.0;
    for (const auto& [c, deg] : degree) {
        double in = internal.count(c) ? internal[c] : 0.0;
        q += in / two_m - resolution * (deg / two_m) * (deg / two_m);
    }
    return q;
}

namespace {

struct LevelGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj; // no self entries
    std::vector<double> self_loop; // full ordered-pair internal weight
    std::vector<double> strength;  // self_loop + sum of adjacent weights
    double two_m = 0.0;
};

LevelGraph level_from_graph(const SemanticGraph& graph) {
    LevelGraph lg;
    lg.n = graph.nodes.size();
    lg.adj = symmetrize(graph);
    lg.self_loop.assign(lg.n, 0.0);
    lg.strength.assign(lg.n, 0.0);
    for (std::size_t u = 0; u < lg.n; ++u) {
        for (const auto& [v, w] : lg.adj[u]) lg.strength[u] += w;
        lg.two_m += lg.strength[u];
    }
    return lg;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                     std::size_t n_comms) {
    LevelGraph out;
    out.n = n_comms;
    out.self_loop.assign(n_comms, 0.0);
    std::vector<std::map<std::uint32_t, double>> acc(n_comms);
    for (std::size_t u = 0; u < lg.n; ++u) {
        std::uint32_t cu = comm[u];
        out.self_loop[cu] += lg.self_loop[u];
        for (const auto& [v, w] : lg.adj[u]) {
            std::uint32_t cv = comm[v];
            if (cu == cv)
                out.self_loop[cu] += w; // both directions visited -> ordered count
            else
                acc[cu][cv] += w;
        }
    }
    out.adj.resize(n_comms);
    out.strength.assign(n_comms, 0.0);
    for (std::size_t c = 0; c < n_comms; ++c) {
        out.adj[c].assign(acc[c].begin(), acc[c].end());
        out.strength[c] = out.self_loop[c];
        for (const auto& [v, w] : out.adj[c]) out.strength[c] += w;
    }
    out.two_m = lg.two_m;
    return out;
}

// One local-move phase; returns true when any node changed community.
bool local_moves(const LevelGraph& lg, std::vector<std::uint32_t>& comm,
                 double resolution, std::mt19937_64& rng) {
    std::vector<std::uint32_t> order(lg.n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = lg.n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i); // shuffle order only
        std::swap(order[i - 1], order[j]);
    }
    std::vector<double> comm_tot(lg.n, 0.0);
    for (std::size_t u = 0; u < lg.n; ++u) comm_tot[comm[u]] += lg.strength[u];

    bool any_move = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::uint32_t node : order) {
            std::uint32_t current = comm[node];
            std::map<std::uint32_t, double> w_to;
            for (const auto& [nb, w] : lg.adj[node]) w_to[comm[nb]] += w;
            double k_node = lg.strength[node];
            comm_tot[current] -= k_node;
            double w_current = 0.0;
            if (auto it = w_to.find(current); it != w_to.end()) w_current = it->second;
            double best_gain =
                w_current - resolution * comm_tot[current] * k_node / lg.two_m;
            std::uint32_t best_comm = current;
            for (const auto& [c, w] : w_to) {
                if (c == current) continue;
                double gain = w - resolution * comm_tot[c] * k_node / lg.two_m;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_comm = c;
                }
            }
            comm_tot[best_comm] += k_node;
            if (best_comm != current) {
                comm[node] = best_comm;
                improved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

std::size_t renumber_dense(std::vector<std::uint32_t>& comm) {
    std::map<std::uint32_t, std::uint32_t> dense;
    for (std::uint32_t& c : comm) {
        auto [it, inserted] = dense.emplace(c, dense.size());
        c = it->second;
    }
    return dense.size();
}

} // namespace

CommunityAssignment louvain(const SemanticGraph& graph, double resolution,
                            std::uint64_t seed) {
    if (graph.nodes.empty())
        throw ValidationError("louvain: graph has no nodes");
    if (resolution <= 0.0)
        throw ValidationError("louvain: resolution must be positive");

    const std::size_t n = graph.nodes.size();
    CommunityAssignment result;
    result.membership.resize(n);
    std::iota(result.membership.begin(), result.membership.end(), 0);

    LevelGraph lg = level_from_graph(graph);
    if (lg.two_m == 0.0) {
        // no edges: everything is one community by convention
        std::fill(result.membership.begin(), result.membership.end(), 0u);
        result.modularity_q = 0.0;
        return result;
    }

    std::vector<std::uint32_t> orig_to_level(n);
    std::iota(orig_to_level.begin(), orig_to_level.end(), 0);
    std::vector<std::uint32_t> best_membership = result.membership;

    for (std::size_t level = 0;; ++level) {
        std::mt19937_64 rng(splitmix64(seed) + level);
        std::vector<std::uint32_t> comm(lg.n);
        std::iota(comm.begin(), comm.end(), 0);
        bool moved = local_moves(lg, comm, resolution, rng);
        if (!moved && level > 0) break;

        std::size_t n_comms = renumber_dense(comm);
        std::vector<std::uint32_t> candidate(n);
        for (std::size_t i = 0; i < n; ++i)
            candidate[i] = comm[orig_to_level[i]];
        double q = modularity(graph, candidate, resolution);

        if (!result.pass_q.empty() && q <= result.pass_q.back()) break;
        result.pass_q.push_back(q);
        best_membership = candidate;
        for (std::size_t i = 0; i < n; ++i)
            orig_to_level[i] = candidate[i];
        if (result.pass_q.size() >= 2 &&
            q - result.pass_q[result.pass_q.size() - 2] <= 1e-9)
            break;
        if (!moved || n_comms == lg.n) break;
        lg = aggregate(lg, comm, n_comms);
    }

    result.membership = std::move(best_membership);
    renumber_dense(result.membership);
    result.modularity_q = modularity(graph, result.membership, resolution);
    return result;
}

CentralityScores betweenness(const SemanticGraph& graph, CentralityMode mode) {
    const std::size_t n = graph.nodes.size();
    if (n == 0) throw ValidationError("betweenness: graph has no nodes");

    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
    for (const auto& [edge, w] : graph.edges) {
        double len = mode == CentralityMode::binary
                         ? 1.0
                         : 1.0 / static_cast<double>(w);
        adj[edge.first].emplace_back(edge.second, len);
    }

    CentralityScores result;
    result.mode = mode;
    result.scores.assign(n, 0.0);
    constexpr double kEps = 1e-12;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<std::vector<std::uint32_t>> preds(n);
    std::vector<std::uint32_t> settle_order;
    settle_order.reserve(n);
    std::vector<bool> settled(n);

    for (std::uint32_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(settled.begin(), settled.end(), false);
        for (auto& p : preds) p.clear();
        settle_order.clear();

        dist[s] = 0.0;
        sigma[s] = 1.0;
        using Entry = std::pair<double, std::uint32_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
        queue.emplace(0.0, s);
        while (!queue.empty()) {
            auto [d, u] = queue.top();
            queue.pop();
            if (settled[u]) continue;
            settled[u] = true;
            settle_order.push_back(u);
            for (const auto& [v, len] : adj[u]) {
                double nd = d + len;
                if (nd < dist[v] - kEps) {
                    dist[v] = nd;
                    sigma[v] = sigma[u];
                    preds[v].assign(1, u);
                    queue.emplace(nd, v);
                } else if (std::abs(nd - dist[v]) <= kEps) {
                    sigma[v] += sigma[u];
                    preds[v].push_back(u);
                }
            }
        }
        for (std::size_t i = settle_order.size(); i-- > 0;) {
            std::uint32_t w = settle_order[i];
            for (std::uint32_t u : preds[w])
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            if (w != s) result.scores[w] += delta[w];
        }
    }
    return result;
}

TopTerms top_terms(const SemanticGraph& graph,
                   const CommunityAssignment& communities,
                   const CentralityScores& centrality, std::size_t k) {
    if (k == 0) throw ValidationError("top_terms: k must be >= 1");
    const std::size_t n = graph.nodes.size();
    if (communities.membership.size() != n || centrality.scores.size() != n)
        throw ValidationError("top_terms: membership/score size mismatch");

    auto rank_less = [&](std::uint32_t a, std::uint32_t b) {
        if (centrality.scores[a] != centrality.scores[b])
            return centrality.scores[a] > centrality.scores[b];
        if (graph.nodes[a].freq != graph.nodes[b].freq)
            return graph.nodes[a].freq > graph.nodes[b].freq;
        return graph.nodes[a].term < graph.nodes[b].term;
    };

    TopTerms out;
    out.per_community.resize(communities.community_count());
    std::vector<std::vector<std::uint32_t>> members(out.per_community.size());
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::uint32_t v = 0; v < n; ++v)
        members[communities.membership[v]].push_back(v);
    for (std::size_t c = 0; c < members.size(); ++c) {
        std::sort(members[c].begin(), members[c].end(), rank_less);
        for (std::size_t i = 0; i < std::min(k, members[c].size()); ++i)
            out.per_community[c].push_back(graph.nodes[members[c][i]].term);
    }
    std::sort(all.begin(), all.end(), rank_less);
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i)
        out.global.push_back(graph.nodes[all[i]].term);
    return out;
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string dot_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string render_graphml(const SemanticGraph& g,
                           const CommunityAssignment* communities,
                           const CentralityScores* centrality) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"term\" for=\"node\" attr.name=\"term\" attr.type=\"string\"/>\n"
        << "  <key id=\"frequency\" for=\"node\" attr.name=\"frequency\" attr.type=\"long\"/>\n";
    if (communities)
        out << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
    if (centrality)
        out << "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n";
    out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
        << "  <graph id=\"G\" edgedefault=\""
        << (g.directed ? "directed" : "undirected") << "\">\n";
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        out << "    <node id=\"n" << v << "\">"
            << "<data key=\"term\">" << xml_escape(g.nodes[v].term) << "</data>"
            << "<data key=\"frequency\">" << g.nodes[v].freq << "</data>";
        if (communities)
            out << "<data key=\"community\">" << communities->membership[v] << "</data>";
        if (centrality)
            out << "<data key=\"betweenness\">" << format_double(centrality->scores[v])
                << "</data>";
        out << "</node>\n";
    }
    for (const auto& [edge, w] : g.edges)
        out << "    <edge source=\"n" << edge.first << "\" target=\"n" << edge.second
            << "\"><data key=\"weight\">" << w << "</data></edge>\n";
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

std::string render_dot(const SemanticGraph& g,
                       const CommunityAssignment* communities,
                       const CentralityScores* centrality) {
    std::ostringstream out;
    out << "digraph semnet {\n";
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        out << "  n" << v << " [label=\"" << dot_escape(g.nodes[v].term)
            << "\", frequency=" << g.nodes[v].freq;
        if (communities) out << ", community=" << communities->membership[v];
        if (centrality)
            out << ", betweenness=\"" << format_double(centrality->scores[v]) << "\"";
        out << "];\n";
    }
    for (const auto& [edge, w] : g.edges)
        out << "  n" << edge.first << " -> n" << edge.second << " [weight=" << w
            << "];\n";
    out << "}\n";
    return out.str();
}

std::string render_json(const SemanticGraph& g,
                        const CommunityAssignment* communities,
                        const CentralityScores* centrality) {
    nlohmann::json doc;
    doc["directed"] = g.directed;
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        nlohmann::json node = {{"id", v},
                               {"term", g.nodes[v].term},
                               {"freq", g.nodes[v].freq}};
        if (communities) node["community"] = communities->membership[v];
        if (centrality) node["betweenness"] = centrality->scores[v];
        nodes.push_back(std::move(node));
    }
    doc["nodes"] = std::move(nodes);
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [edge, w] : g.edges)
        edges.push_back({{"s", edge.first}, {"t", edge.second}, {"w", w}});
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

} // namespace

std::string render_graph(const SemanticGraph& graph,
                         const CommunityAssignment* communities,
                         const CentralityScores* centrality, GraphFormat format) {
    if (graph.nodes.empty())
        throw ValidationError("render_graph: graph has no nodes");
    switch (format) {
    case GraphFormat::graphml: return render_graphml(graph, communities, centrality);
    case GraphFormat::dot: return render_dot(graph, communities, centrality);
    case GraphFormat::json_edgelist:
        return render_json(graph, communities, centrality);
    }
    throw ValidationError("render_graph: unknown format");
}

void export_graph(const SemanticGraph& graph,
                  const CommunityAssignment* communities,
                  const CentralityScores* centrality, GraphFormat format,
                  const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << render_graph(graph, communities, centrality, format);
    if (!out) throw IoError("failed writing file: " + path.string());
}

SemanticGraph parse_json_edgelist(std::string_view text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw SchemaError("json edge list: not a JSON object");
    if (!doc.contains("nodes") || !doc.contains("edges"))
        throw SchemaError("json edge list: missing 'nodes' or 'edges'");
    SemanticGraph g;
    g.directed = doc.value("directed", true);
    g.nodes.resize(doc["nodes"].size());
    for (const auto& node : doc["nodes"]) {
        if (!node.contains("id") || !node.contains("term"))
            throw SchemaError("json edge list: node missing 'id' or 'term'");
        std::size_t id = node["id"].get<std::size_t>();
        if (id >= g.nodes.size())
            throw SchemaError("json edge list: node id out of range");
        g.nodes[id].term = node["term"].get<std::string>();
        g.nodes[id].freq = node.value("freq", std::uint64_t{0});
    }
    for (std::uint32_t v = 0; v < g.nodes.size(); ++v) {
        if (g.nodes[v].term.empty())
            throw SchemaError("json edge list: node ids are not dense");
        g.term_ids.emplace(g.nodes[v].term, v);
    }
    for (const auto& edge : doc["edges"]) {
        if (!edge.contains("s") || !edge.contains("t") || !edge.contains("w"))
            throw SchemaError("json edge list: edge missing 's', 't' or 'w'");
        std::uint32_t s = edge["s"].get<std::uint32_t>();
        std::uint32_t t = edge["t"].get<std::uint32_t>();
        if (s >= g.nodes.size() || t >= g.nodes.size() || s == t)
            throw SchemaError("json edge list: bad edge endpoints");
        g.edges[{s, t}] += edge["w"].get<std::uint64_t>();
    }
    return g;
}

SemanticGraph import_json_edgelist(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_edgelist(buf.str());
}

} // namespace corex
