#pragma once

// Walk-graph of a store floor: nodes, aisles (edges), fixture locations and
// their sublocations. Shortest paths and the exposure tables derived from
// them live here too.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "storelayout/errors.hpp"
#include "storelayout/matrix.hpp"

namespace storelayout {

using NodeIndex = int;
using NodePath = std::vector<NodeIndex>;

struct Node {
    std::string id;
    double x = 0.0;  // meters
    double y = 0.0;
};

struct Edge {
    NodeIndex a = 0;
    NodeIndex b = 0;
    double length = 0.0;
};

struct Location {
    std::string id;
    std::string fixture_type;
    NodeIndex center = 0;
    std::vector<int> sublocations;  // indices into StoreGraph::sublocations()
};

struct Sublocation {
    std::string id;
    int location = 0;
    NodeIndex center = 0;
    std::vector<NodeIndex> facing;
};

enum class ExposureMode { sublocation, location };

class StoreGraphBuilder;

/// Immutable, validated store geometry.
///
/// Position spaces used by the exposure tables put the entrance first and the
/// exit last: sublocation positions are [entrance, sub_0 .. sub_{S-1}, exit],
/// location positions are [entrance, loc_0 .. loc_{L-1}, exit].
class StoreGraph {
public:
    struct Neighbor {
        NodeIndex node;
        double length;
    };

    std::size_t node_count() const noexcept { return nodes_.size(); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& node(NodeIndex i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Location>& locations() const noexcept { return locations_; }
    const std::vector<Sublocation>& sublocations() const noexcept { return sublocations_; }
    NodeIndex entrance() const noexcept { return entrance_; }
    NodeIndex exit() const noexcept { return exit_; }

    bool contains(NodeIndex i) const noexcept {
        return i >= 0 && static_cast<std::size_t>(i) < nodes_.size();
    }

    std::optional<NodeIndex> find_node(const std::string& id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end()) return std::nullopt;
        return it->second;
    }

    NodeIndex node_index(const std::string& id) const {
        if (auto i = find_node(id)) return *i;
        throw InputError("unknown node id '" + id + "'");
    }

    std::optional<int> find_location(const std::string& id) const {
        for (std::size_t i = 0; i < locations_.size(); ++i)
            if (locations_[i].id == id) return static_cast<int>(i);
        return std::nullopt;
    }

    std::optional<int> find_sublocation(const std::string& id) const {
        for (std::size_t i = 0; i < sublocations_.size(); ++i)
            if (sublocations_[i].id == id) return static_cast<int>(i);
        return std::nullopt;
    }

    /// Neighbors sorted by node index.
    std::span<const Neighbor> neighbors(NodeIndex i) const {
        return adjacency_.at(static_cast<std::size_t>(i));
    }

    /// Sublocations having `i` among their facing nodes, ascending.
    std::span<const int> sublocations_facing(NodeIndex i) const {
        return facing_index_.at(static_cast<std::size_t>(i));
    }

    std::size_t sub_position_count() const noexcept { return sublocations_.size() + 2; }
    std::size_t loc_position_count() const noexcept { return locations_.size() + 2; }

    /// Center node of every sublocation position, entrance and exit included.
    std::vector<NodeIndex> sub_position_nodes() const {
        std::vector<NodeIndex> out{entrance_};
        for (const auto& s : sublocations_) out.push_back(s.center);
        out.push_back(exit_);
        return out;
    }

    std::vector<NodeIndex> loc_position_nodes() const {
        std::vector<NodeIndex> out{entrance_};
        for (const auto& l : locations_) out.push_back(l.center);
        out.push_back(exit_);
        return out;
    }

    std::vector<std::string> sub_position_labels() const {
        std::vector<std::string> out{"entrance"};
        for (const auto& s : sublocations_) out.push_back(s.id);
        out.push_back("exit");
        return out;
    }

    std::vector<std::string> loc_position_labels() const {
        std::vector<std::string> out{"entrance"};
        for (const auto& l : locations_) out.push_back(l.id);
        out.push_back("exit");
        return out;
    }

private:
    friend class StoreGraphBuilder;
    StoreGraph() = default;

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<Location> locations_;
    std::vector<Sublocation> sublocations_;
    NodeIndex entrance_ = 0;
    NodeIndex exit_ = 0;
    std::unordered_map<std::string, NodeIndex> node_index_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<std::vector<int>> facing_index_;
};

/// Collects a store by string ids, then validates everything in build().
class StoreGraphBuilder {
public:
    StoreGraphBuilder& add_node(std::string id, double x, double y) {
        nodes_.push_back({std::move(id), x, y});
        return *this;
    }

    /// Edge length defaults to the Euclidean distance between the endpoints.
    StoreGraphBuilder& add_edge(std::string a, std::string b, std::optional<double> length = {}) {
        edges_.push_back({std::move(a), std::move(b), length});
        return *this;
    }

    StoreGraphBuilder& set_entrance(std::string id) {
        entrance_ = std::move(id);
        return *this;
    }
    StoreGraphBuilder& set_exit(std::string id) {
        exit_ = std::move(id);
        return *this;
    }

    StoreGraphBuilder& add_location(std::string id, std::string fixture_type, std::string center) {
        locations_.push_back({std::move(id), std::move(fixture_type), std::move(center)});
        return *this;
    }

    /// Sublocations are appended to their parent's list in call order.
    StoreGraphBuilder& add_sublocation(std::string id, std::string location, std::string center,
                                       std::vector<std::string> facing = {}) {
        sublocations_.push_back(
            {std::move(id), std::move(location), std::move(center), std::move(facing)});
        return *this;
    }

    StoreGraph build() const;

private:
    struct PendingEdge {
        std::string a, b;
        std::optional<double> length;
    };
    struct PendingLocation {
        std::string id, fixture, center;
    };
    struct PendingSublocation {
        std::string id, location, center;
        std::vector<std::string> facing;
    };

    std::vector<Node> nodes_;
    std::vector<PendingEdge> edges_;
    std::vector<PendingLocation> locations_;
    std::vector<PendingSublocation> sublocations_;
    std::string entrance_;
    std::string exit_;
};

inline StoreGraph StoreGraphBuilder::build() const {
    StoreGraph g;
    g.nodes_ = nodes_;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.id.empty()) throw InputError("node " + std::to_string(i) + " has an empty id");
        if (!std::isfinite(n.x) || !std::isfinite(n.y))
            throw InputError("node '" + n.id + "' has non-finite coordinates");
        if (!g.node_index_.emplace(n.id, static_cast<NodeIndex>(i)).second)
            throw InputError("duplicate node id '" + n.id + "'");
    }

    g.adjacency_.assign(nodes_.size(), {});
    for (const auto& e : edges_) {
        const NodeIndex a = g.node_index(e.a);
        const NodeIndex b = g.node_index(e.b);
        if (a == b) throw InputError("self-loop edge at node '" + e.a + "'");
        double len = e.length.value_or(
            std::hypot(nodes_[a].x - nodes_[b].x, nodes_[a].y - nodes_[b].y));
        if (!std::isfinite(len) || len <= 0.0)
            throw InputError("edge " + e.a + "-" + e.b + " must have a finite positive length");
        g.edges_.push_back({a, b, len});
        g.adjacency_[a].push_back({b, len});
        g.adjacency_[b].push_back({a, len});
    }
    for (auto& adj : g.adjacency_) {
        std::sort(adj.begin(), adj.end(), [](const auto& l, const auto& r) {
            return l.node != r.node ? l.node < r.node : l.length < r.length;
        });
        // Parallel edges: keep the shortest.
        adj.erase(std::unique(adj.begin(), adj.end(),
                              [](const auto& l, const auto& r) { return l.node == r.node; }),
                  adj.end());
    }

    if (entrance_.empty() || exit_.empty()) throw InputError("entrance and exit must be set");
    g.entrance_ = g.node_index(entrance_);
    g.exit_ = g.node_index(exit_);
    if (g.entrance_ == g.exit_) throw InputError("entrance and exit must be different nodes");

    std::unordered_map<std::string, int> loc_index;
    for (const auto& pl : locations_) {
        if (pl.fixture.empty())
            throw InputError("location '" + pl.id + "' has an empty fixture type");
        if (!loc_index.emplace(pl.id, static_cast<int>(g.locations_.size())).second)
            throw InputError("duplicate location id '" + pl.id + "'");
        g.locations_.push_back({pl.id, pl.fixture, g.node_index(pl.center), {}});
    }

    std::unordered_map<std::string, int> sub_index;
    for (const auto& ps : sublocations_) {
        auto it = loc_index.find(ps.location);
        if (it == loc_index.end())
            throw InputError("sublocation '" + ps.id + "' references unknown location '" +
                             ps.location + "'");
        const int sid = static_cast<int>(g.sublocations_.size());
        if (!sub_index.emplace(ps.id, sid).second)
            throw InputError("duplicate sublocation id '" + ps.id + "'");
        Sublocation s{ps.id, it->second, g.node_index(ps.center), {}};
        for (const auto& f : ps.facing) s.facing.push_back(g.node_index(f));
        if (s.facing.empty()) {
            s.facing.push_back(s.center);
        } else if (std::find(s.facing.begin(), s.facing.end(), s.center) == s.facing.end()) {
            throw InputError("sublocation '" + ps.id + "' must face its own center node");
        }
        std::sort(s.facing.begin(), s.facing.end());
        s.facing.erase(std::unique(s.facing.begin(), s.facing.end()), s.facing.end());
        g.locations_[it->second].sublocations.push_back(sid);
        g.sublocations_.push_back(std::move(s));
    }
    for (const auto& l : g.locations_)
        if (l.sublocations.empty())
            throw InputError("location '" + l.id + "' has no sublocations");

    g.facing_index_.assign(nodes_.size(), {});
    for (std::size_t s = 0; s < g.sublocations_.size(); ++s)
        for (NodeIndex n : g.sublocations_[s].facing) g.facing_index_[n].push_back(static_cast<int>(s));

    // Connectivity from the entrance.
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<NodeIndex> stack{g.entrance_};
    seen[g.entrance_] = 1;
    while (!stack.empty()) {
        NodeIndex u = stack.back();
        stack.pop_back();
        for (const auto& nb : g.adjacency_[u])
            if (!seen[nb.node]) {
                seen[nb.node] = 1;
                stack.push_back(nb.node);
            }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!seen[i])
            throw ModelError("store graph is disconnected: node '" + nodes_[i].id +
                             "' is unreachable from the entrance");
    return g;
}

/// Dijkstra distances from `source` to every node (infinity if unreachable).
inline std::vector<double> shortest_distances(const StoreGraph& g, NodeIndex source) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.node_count(), inf);
    using Item = std::pair<double, NodeIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (const auto& nb : g.neighbors(u)) {
            const double nd = d + nb.length;
            if (nd < dist[nb.node]) {
                dist[nb.node] = nd;
                queue.push({nd, nb.node});
            }
        }
    }
    return dist;
}

/// All-pairs shortest paths with deterministic tie-breaking.
///
/// Among equal-length paths the lexicographically smallest node-index
/// sequence is returned: walking from the source, the smallest neighbor that
/// still lies on some shortest path to the target is taken at every step.
class ShortestPaths {
public:
    explicit ShortestPaths(const StoreGraph& g) : graph_(&g) {
        dist_.reserve(g.node_count());
        for (std::size_t t = 0; t < g.node_count(); ++t)
            dist_.push_back(shortest_distances(g, static_cast<NodeIndex>(t)));
    }

    double distance(NodeIndex from, NodeIndex to) const {
        check(from);
        check(to);
        return dist_[to][from];
    }

    NodePath path(NodeIndex from, NodeIndex to) const {
        check(from);
        check(to);
        const auto& to_target = dist_[to];
        if (!std::isfinite(to_target[from]))
            throw ModelError("no path between '" + graph_->node(from).id + "' and '" +
                             graph_->node(to).id + "'");
        NodePath out{from};
        NodeIndex u = from;
        while (u != to) {
            const double tol = 1e-9 * std::max(1.0, to_target[u]);
            NodeIndex next = -1;
            for (const auto& nb : graph_->neighbors(u)) {
                if (std::abs(nb.length + to_target[nb.node] - to_target[u]) <= tol) {
                    next = nb.node;
                    break;
                }
            }
            if (next < 0) throw ModelError("shortest path reconstruction failed");
            out.push_back(next);
            u = next;
        }
        return out;
    }

    const StoreGraph& graph() const noexcept { return *graph_; }

private:
    void check(NodeIndex n) const {
        if (!graph_->contains(n)) throw InputError("unknown node index " + std::to_string(n));
    }

    const StoreGraph* graph_;
    std::vector<std::vector<double>> dist_;  // dist_[target][node]
};

inline NodePath shortest_path(const StoreGraph& g, NodeIndex from, NodeIndex to) {
    return ShortestPaths(g).path(from, to);
}

inline double path_length(const StoreGraph& g, std::span<const NodeIndex> path) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        bool found = false;
        for (const auto& nb : g.neighbors(path[i - 1]))
            if (nb.node == path[i]) {
                total += nb.length;
                found = true;
                break;
            }
        if (!found)
            throw InputError("path step '" + g.node(path[i - 1]).id + "' -> '" +
                             g.node(path[i]).id + "' is not an edge");
    }
    return total;
}

/// Sublocation mode: distinct sublocations with a facing node on the path.
/// Location mode: every location with at least one faced sublocation
/// contributes its whole sublocation count.
inline std::size_t path_exposure(const StoreGraph& g, std::span<const NodeIndex> path,
                                 ExposureMode mode) {
    if (path.empty()) throw InputError("path_exposure on an empty path");
    std::vector<char> sub_seen(g.sublocations().size(), 0);
    std::vector<char> loc_seen(g.locations().size(), 0);
    std::size_t count = 0;
    for (NodeIndex n : path) {
        if (!g.contains(n)) throw InputError("unknown node index " + std::to_string(n));
        for (int s : g.sublocations_facing(n)) {
            if (sub_seen[s]) continue;
            sub_seen[s] = 1;
            if (mode == ExposureMode::sublocation) {
                ++count;
            } else {
                const int l = g.sublocations()[s].location;
                if (!loc_seen[l]) {
                    loc_seen[l] = 1;
                    count += g.locations()[l].sublocations.size();
                }
            }
        }
    }
    return count;
}

/// E (sublocation level) and Ē (location level) plus the matching
/// center-to-center walking distances.
struct ExposureMatrices {
    Matrix<double> sub_exposure;
    Matrix<double> loc_exposure;
    Matrix<double> sub_distance;
    Matrix<double> loc_distance;
};

inline ExposureMatrices build_exposure_matrices(const StoreGraph& g, const ShortestPaths& sp) {
    auto fill = [&](const std::vector<NodeIndex>& centers, ExposureMode mode, Matrix<double>& exposure,
                    Matrix<double>& distance) {
        const std::size_t n = centers.size();
        exposure = Matrix<double>::square(n);
        distance = Matrix<double>::square(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const NodePath p = sp.path(centers[a], centers[b]);
                exposure(a, b) = static_cast<double>(path_exposure(g, p, mode));
                distance(a, b) = sp.distance(centers[a], centers[b]);
            }
    };
    ExposureMatrices m;
    fill(g.sub_position_nodes(), ExposureMode::sublocation, m.sub_exposure, m.sub_distance);
    fill(g.loc_position_nodes(), ExposureMode::location, m.loc_exposure, m.loc_distance);
    return m;
}

inline ExposureMatrices build_exposure_matrices(const StoreGraph& g) {
    return build_exposure_matrices(g, ShortestPaths(g));
}

/// Per-node visit counts over a set of walked paths.
struct TrafficDensity {
    std::vector<long long> counts;

    long long min() const { return counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end()); }
    long long max() const { return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end()); }
};

inline TrafficDensity accumulate_traffic(const StoreGraph& g, std::span<const NodePath> paths) {
    TrafficDensity d{std::vector<long long>(g.node_count(), 0)};
    for (const auto& p : paths)
        for (NodeIndex n : p) {
            if (!g.contains(n)) throw InputError("unknown node index " + std::to_string(n));
            ++d.counts[n];
        }
    return d;
}

}  // namespace storelayout
