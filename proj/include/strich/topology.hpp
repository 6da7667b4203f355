#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "strich/stream_graph.hpp"
#include "strich/util.hpp"

namespace strich {

/// Topological weight of an edge in one snapshot:
///   ω_t(u,v) = |N_t(u) ∩ N_t(v)| · |N_t(u)| · |N_t(v)| / (|N_t(u)| + |N_t(v)|),
/// 0 when the edge is absent. The scalar factor is fixed to 1; everything
/// downstream (club extraction, cosine similarity) is invariant to it.
inline double edge_weight_t(const Snapshot& snap, NodeId u, NodeId v) {
    if (u == v) throw domain_error("edge weight undefined for a loop");
    if (!snap.has_edge(u, v)) return 0.0;
    auto nu = snap.neighbors(u);
    auto nv = snap.neighbors(v);
    std::size_t common = 0;
    std::size_t i = 0, j = 0;
    while (i < nu.size() && j < nv.size()) {
        if (nu[i] < nv[j]) ++i;
        else if (nv[j] < nu[i]) ++j;
        else { ++common; ++i; ++j; }
    }
    // both degrees >= 1 because the edge exists, so the denominator is >= 2
    double du = static_cast<double>(nu.size());
    double dv = static_cast<double>(nv.size());
    return static_cast<double>(common) * du * dv / (du + dv);
}

/// δ_t(u) = Σ_{v ∈ N_t(u)} ω_t(u,v); 0 for isolated nodes.
inline double node_strength_t(const Snapshot& snap, NodeId u) {
    double s = 0.0;
    for (NodeId v : snap.neighbors(u)) s += edge_weight_t(snap, u, v);
    return s;
}

struct WeightedEdge {
    NodeId u = 0, v = 0; // u < v
    double omega = 0.0;  // ω̄: window mean of ω_t
    int support = 0;     // steps in the window where the edge exists
};

/// Window-averaged weights and strengths. Edges present anywhere in the
/// window keep an entry even when ω̄ is exactly 0 — the null model permutes
/// weights over present edges.
struct WindowedWeights {
    int window_index = 0;
    int steps = 0;
    std::vector<WeightedEdge> edges;   // sorted by (u,v)
    std::vector<double> strengths;     // δ̄ per node: Σ_v ω̄(u,v) in edge order
};

/// ω̄ over one window: arithmetic mean of ω_t over the window's steps
/// (instants where the edge is absent contribute 0). δ̄ sums ω̄ over each
/// node's distinct window neighbors, which equals the window mean of δ_t.
inline WindowedWeights window_weights(const StreamGraph& sg, const Window& win) {
    if (win.steps <= 0) throw domain_error("window has no grid steps");
    WindowedWeights ww;
    ww.window_index = win.index;
    ww.steps = win.steps;
    ww.strengths.assign(sg.node_count(), 0.0);

    std::map<std::pair<NodeId, NodeId>, std::pair<double, int>> acc; // (Σω_t, support)
    for (int k = 0; k < win.steps; ++k) {
        Timestamp t = win.t_begin + static_cast<Timestamp>(k) * sg.dt();
        Snapshot snap = snapshot(sg, t);
        for (const auto& e : sg.events_at(t)) {
            auto& cell = acc[{e.u, e.v}];
            cell.first += edge_weight_t(snap, e.u, e.v);
            cell.second += 1;
        }
    }
    ww.edges.reserve(acc.size());
    const double inv_p = 1.0 / static_cast<double>(win.steps);
    for (const auto& [uv, cell] : acc) {
        WeightedEdge we;
        we.u = uv.first;
        we.v = uv.second;
        we.omega = cell.first * inv_p;
        we.support = cell.second;
        ww.edges.push_back(we);
        ww.strengths[static_cast<std::size_t>(we.u)] += we.omega;
        ww.strengths[static_cast<std::size_t>(we.v)] += we.omega;
    }
    return ww;
}

/// Per-window weights for a whole WindowSpec; windows are independent and may
/// be computed concurrently, results are identical for any worker count.
inline std::vector<WindowedWeights> all_window_weights(const StreamGraph& sg,
                                                       const WindowSpec& spec,
                                                       unsigned workers = 1) {
    std::vector<WindowedWeights> out(spec.windows.size());
    parallel_for(spec.windows.size(), workers,
                 [&](std::size_t i) { out[i] = window_weights(sg, spec.windows[i]); });
    return out;
}

} // namespace strich
