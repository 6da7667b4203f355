#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "strich/profiles.hpp"
#include "strich/rng.hpp"
#include "strich/stream_graph.hpp"
#include "strich/topology.hpp"

namespace strich {

/// Null-model settings for the per-window club extraction. The null keeps the
/// window's topology fixed and permutes ω̄ values over its present edges.
struct NullModelConfig {
    int samples = 100;
    double alpha = 0.05;
    int min_club_size = 3;
    std::uint64_t seed = 0;
    std::string null_model = "weight-permutation";

    void validate() const {
        if (samples < 1) throw config_error("null model needs samples >= 1");
        if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must lie in (0,1)");
        if (min_club_size < 2) throw config_error("min_club_size must be >= 2");
        if (null_model != "weight-permutation")
            throw config_error("unknown null model '" + null_model + "'");
    }

    NullModelConfig for_window(std::uint64_t master_seed, int window_index) const {
        NullModelConfig c = *this;
        c.seed = mix_seed({master_seed, kSeedItrich, static_cast<std::uint64_t>(window_index)});
        return c;
    }
};

/// One extraction round's club. Layers of a window are pairwise disjoint.
struct ClubLayer {
    int level = 0; // 1-based
    std::vector<NodeId> members; // sorted
};

/// D/S/P split of the node set for one window: dense = union of club layers,
/// sparse = nodes with window support outside every layer, inactive = nodes
/// without any edge in the window.
struct WindowPartition {
    int window_index = 0;
    std::vector<ClubLayer> layers;
    std::vector<NodeId> dense;
    std::vector<NodeId> sparse;
    std::vector<NodeId> inactive;
};

namespace detail {

struct PoolEdge {
    NodeId u, v;
    double w;
};

// Relative tolerance for tie detection. Exact rational weights often produce
// strengths that are equal as real numbers but differ by accumulated rounding;
// treating them as ties (broken by node id) keeps the ranking stable under
// any positive rescaling of the weights.
inline constexpr double kTieRel = 1e-12;

// A club boundary must drop by at least this fraction of the layer's peak
// strength. Triangle-coupled residue (ω̄ rewards whole triangles, so positive
// background weights always share endpoints) stays statistically significant
// against the scatter null yet decays smoothly: its largest boundary drop
// measures <= ~15% of its peak, while genuine planted layers measure 32-99%.
inline constexpr double kBoundaryFrac = 0.25;

/// Ranking positions by strength (descending). Values within kTieRel of their
/// tie-class head collapse into one class ordered by node id.
inline std::vector<std::size_t> ranked_order(const std::vector<double>& strength,
                                             const std::vector<NodeId>& active) {
    const std::size_t m = strength.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (strength[a] != strength[b]) return strength[a] > strength[b];
        return active[a] < active[b];
    });
    std::size_t start = 0;
    auto close_class = [&](std::size_t end) {
        std::sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                  order.begin() + static_cast<std::ptrdiff_t>(end),
                  [&](std::size_t a, std::size_t b) { return active[a] < active[b]; });
        start = end;
    };
    for (std::size_t i = 1; i < m; ++i) {
        double head = strength[order[start]];
        if (head - strength[order[i]] > kTieRel * head) close_class(i);
    }
    close_class(m);
    return order;
}

/// Internal weight of every ranking prefix: out[r] = Σ ω̄ over edges whose
/// endpoints both rank below r.
inline void prefix_internal(const std::vector<double>& weights,
                            const std::vector<std::size_t>& bucket, std::size_t m,
                            std::vector<double>& out) {
    out.assign(m + 1, 0.0);
    for (std::size_t e = 0; e < weights.size(); ++e) out[bucket[e]] += weights[e];
    for (std::size_t r = 1; r <= m; ++r) out[r] += out[r - 1];
}

/// One extraction round on the current weighted subgraph. `active` holds every
/// node incident to a remaining present edge; `edges` holds all those edges,
/// including ω̄ = 0 entries (the zero slots are what lets a permutation
/// scatter heavy weights away from the observed club). Returns the club
/// (sorted node ids), or empty when no prefix is significant.
///
/// Rank active nodes by current strength (desc, ties by id, zero-strength
/// tail last). For every prefix size r >= min_club_size, W(r) sums ω̄ over
/// edges inside the prefix. Each null draw permutes the ω̄ multiset over the
/// same edges and is evaluated under its own re-derived ranking, so the null
/// reproduces the selection effect of ranking by weight-derived strengths;
/// without the re-ranking, exchangeable weights come out wildly
/// anti-conservative. p(r) = (1 + #{W_null(r) >= W(r)}) / (samples + 1), with
/// ties counted under a small relative tolerance (permutations that
/// reproduce the same multiset must count as exceedances despite
/// summation-order rounding).
///
/// Extraction is gated by one global test per round: the max over prefix
/// sizes of the standardized excess (W(r) - mean W_null(r)) / sd W_null(r),
/// compared against the same max computed on every null draw. Testing all
/// prefix sizes at level alpha each would otherwise fire on a fifth of
/// plain exchangeable-weight windows through sheer multiplicity. Among the
/// significant prefixes within the positive-strength part, the club
/// boundary is the one with the largest absolute strength drop, ties to the
/// smaller r. (Multiplicative drops are useless here: consecutive near-zero
/// strengths deep in the tail produce huge ratios and would drag the
/// boundary into the background.) Finally the drop must clear kBoundaryFrac
/// of the layer's peak strength, which is what separates a club boundary
/// from the smooth decay of triangle-coupled background residue.
inline std::vector<NodeId> extract_one_club(const std::vector<NodeId>& active,
                                            const std::vector<PoolEdge>& edges,
                                            const NullModelConfig& cfg, Rng& rng) {
    const std::size_t m = active.size();
    if (m < static_cast<std::size_t>(cfg.min_club_size) || edges.empty()) return {};

    NodeId max_node = 0;
    for (NodeId u : active) max_node = std::max(max_node, u);
    std::vector<NodeId> slot_of(static_cast<std::size_t>(max_node) + 1, -1);
    for (std::size_t i = 0; i < m; ++i)
        slot_of[static_cast<std::size_t>(active[i])] = static_cast<NodeId>(i);

    const std::size_t ne = edges.size();
    std::vector<std::size_t> eu(ne), ev(ne);
    std::vector<double> obs_weights(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        eu[e] = static_cast<std::size_t>(slot_of[static_cast<std::size_t>(edges[e].u)]);
        ev[e] = static_cast<std::size_t>(slot_of[static_cast<std::size_t>(edges[e].v)]);
        obs_weights[e] = edges[e].w;
    }

    std::vector<double> strength(m);
    std::vector<std::size_t> rank(m), bucket(ne);
    auto evaluate = [&](const std::vector<double>& w, std::vector<double>& out)
        -> std::vector<std::size_t> {
        std::fill(strength.begin(), strength.end(), 0.0);
        for (std::size_t e = 0; e < ne; ++e) {
            strength[eu[e]] += w[e];
            strength[ev[e]] += w[e];
        }
        auto order = ranked_order(strength, active);
        for (std::size_t r = 0; r < m; ++r) rank[order[r]] = r;
        for (std::size_t e = 0; e < ne; ++e) bucket[e] = std::max(rank[eu[e]], rank[ev[e]]) + 1;
        prefix_internal(w, bucket, m, out);
        return order;
    };

    std::vector<double> observed(m + 1);
    auto order = evaluate(obs_weights, observed);
    std::vector<double> obs_strength = strength;
    std::size_t positive = 0;
    while (positive < m && obs_strength[order[positive]] > 0.0) ++positive;
    if (positive < static_cast<std::size_t>(cfg.min_club_size)) return {};

    const int S = cfg.samples;
    const std::size_t r_hi = std::min(positive, m - 1);
    const std::size_t r_lo = static_cast<std::size_t>(cfg.min_club_size);
    if (r_lo > r_hi) return {};

    std::vector<int> exceed(m + 1, 0);
    std::vector<std::vector<double>> draws(static_cast<std::size_t>(S));
    std::vector<double> null_w(m + 1);
    std::vector<double> shuffled = obs_weights;
    for (int s = 0; s < S; ++s) {
        for (std::size_t i = shuffled.size(); i > 1; --i) {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(shuffled[i - 1], shuffled[pick(rng)]);
        }
        evaluate(shuffled, null_w);
        for (std::size_t r = 1; r <= m; ++r)
            if (null_w[r] >= observed[r] - 1e-9 * std::max(observed[r], null_w[r])) ++exceed[r];
        draws[static_cast<std::size_t>(s)].assign(null_w.begin() + static_cast<std::ptrdiff_t>(r_lo),
                                                  null_w.begin() + static_cast<std::ptrdiff_t>(r_hi) + 1);
    }

    // global gate: max standardized excess over the prefix family, with the
    // same statistic evaluated on every draw (degenerate coordinates map to
    // +/-1e300 so tie counting stays well defined)
    const std::size_t nr = r_hi - r_lo + 1;
    std::vector<double> mean(nr, 0.0), sd(nr, 0.0);
    for (std::size_t c = 0; c < nr; ++c) {
        for (int s = 0; s < S; ++s) mean[c] += draws[static_cast<std::size_t>(s)][c];
        mean[c] /= static_cast<double>(S);
        double var = 0.0;
        for (int s = 0; s < S; ++s) {
            double d = draws[static_cast<std::size_t>(s)][c] - mean[c];
            var += d * d;
        }
        sd[c] = std::sqrt(var / static_cast<double>(S));
    }
    auto zscore = [&](std::size_t c, double x) {
        if (sd[c] > 1e-9 * std::max(std::abs(mean[c]), 1e-300))
            return (x - mean[c]) / sd[c];
        return x - mean[c] > 1e-9 * std::max(std::abs(mean[c]), std::abs(x)) ? 1e300 : -1e300;
    };
    auto max_z = [&](auto&& value_at) {
        double t = -1e300;
        for (std::size_t c = 0; c < nr; ++c) t = std::max(t, zscore(c, value_at(c)));
        return t;
    };
    double t_obs = max_z([&](std::size_t c) { return observed[r_lo + c]; });
    int global_exceed = 0;
    for (int s = 0; s < S; ++s) {
        double t = max_z([&](std::size_t c) { return draws[static_cast<std::size_t>(s)][c]; });
        if (t >= t_obs - 1e-9 * std::max(std::abs(t_obs), std::abs(t))) ++global_exceed;
    }
    const double denom = static_cast<double>(S + 1);
    if ((1.0 + global_exceed) / denom > cfg.alpha) return {};

    std::size_t best_r = 0;
    double best_gap = -1.0;
    for (std::size_t r = r_lo; r <= r_hi; ++r) {
        if ((1.0 + exceed[r]) / denom > cfg.alpha) continue;
        double gap = obs_strength[order[r - 1]] - obs_strength[order[r]];
        if (gap > best_gap + 1e-9 * std::abs(best_gap)) {
            best_gap = gap;
            best_r = r;
        }
    }
    if (best_r == 0) return {};
    if (best_gap < kBoundaryFrac * obs_strength[order[0]]) return {};

    std::vector<NodeId> club;
    club.reserve(best_r);
    for (std::size_t r = 0; r < best_r; ++r) club.push_back(active[order[r]]);
    std::sort(club.begin(), club.end());
    return club;
}

} // namespace detail

/// Iterative δ̄-weighted rich-club extraction for one window. Deterministic
/// given (weights, cfg.seed). The permutation pool is the window's full
/// present-edge multiset, ω̄ = 0 entries included; clubs are confined to the
/// positive-strength ranking prefix. Each round extracts one significant
/// club, removes its members and incident edges, recomputes strengths and
/// repeats until nothing significant remains. A window without edges yields
/// an all-inactive partition.
inline WindowPartition itrich_window(const WindowedWeights& weights, const NullModelConfig& cfg) {
    cfg.validate();
    const std::size_t n = weights.strengths.size();

    WindowPartition part;
    part.window_index = weights.window_index;

    std::vector<char> has_support(n, 0);
    for (const auto& e : weights.edges) {
        has_support[static_cast<std::size_t>(e.u)] = 1;
        has_support[static_cast<std::size_t>(e.v)] = 1;
    }

    std::vector<detail::PoolEdge> pool;
    pool.reserve(weights.edges.size());
    for (const auto& e : weights.edges) pool.push_back({e.u, e.v, e.omega});

    Rng rng(cfg.seed);
    std::vector<char> in_dense(n, 0);
    for (;;) {
        std::vector<char> seen(n, 0);
        std::vector<NodeId> active;
        for (const auto& e : pool) {
            for (NodeId u : {e.u, e.v})
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = 1;
                    active.push_back(u);
                }
        }
        std::sort(active.begin(), active.end());
        if (active.size() < static_cast<std::size_t>(cfg.min_club_size)) break;
        auto club = detail::extract_one_club(active, pool, cfg, rng);
        if (club.empty()) break;
        ClubLayer layer;
        layer.level = static_cast<int>(part.layers.size()) + 1;
        layer.members = club;
        part.layers.push_back(std::move(layer));
        for (NodeId u : club) in_dense[static_cast<std::size_t>(u)] = 1;
        std::erase_if(pool, [&](const detail::PoolEdge& e) {
            return in_dense[static_cast<std::size_t>(e.u)] ||
                   in_dense[static_cast<std::size_t>(e.v)];
        });
    }

    for (std::size_t u = 0; u < n; ++u) {
        NodeId id = static_cast<NodeId>(u);
        if (in_dense[u]) part.dense.push_back(id);
        else if (has_support[u]) part.sparse.push_back(id);
        else part.inactive.push_back(id);
    }
    return part;
}

/// Partitions for every window; windows run independently with their own RNG
/// stream derived from (master_seed, window index), so the result does not
/// depend on the worker count.
inline std::vector<WindowPartition> itrich_all_windows(const std::vector<WindowedWeights>& weights,
                                                       const NullModelConfig& base,
                                                       std::uint64_t master_seed,
                                                       unsigned workers = 1) {
    std::vector<WindowPartition> parts(weights.size());
    parallel_for(weights.size(), workers, [&](std::size_t i) {
        parts[i] = itrich_window(weights[i], base.for_window(master_seed, weights[i].window_index));
    });
    return parts;
}

/// Window-granularity state of a node: D when dense, S when sparse, P when
/// inactive for the whole window.
inline char window_label(const WindowPartition& part, NodeId u) {
    if (std::binary_search(part.dense.begin(), part.dense.end(), u)) return kDense;
    if (std::binary_search(part.sparse.begin(), part.sparse.end(), u)) return kSparse;
    return kPassive;
}

/// Club layer level of a node in one window, 0 when not dense.
inline int layer_level(const WindowPartition& part, NodeId u) {
    for (const auto& layer : part.layers)
        if (std::binary_search(layer.members.begin(), layer.members.end(), u)) return layer.level;
    return 0;
}

/// Per-instant D/S/P labeling: a node is P at every instant with zero
/// instantaneous degree; otherwise D or S according to the partition of the
/// window containing the instant.
inline std::vector<DSPProfile> label_instants(const std::vector<WindowPartition>& partitions,
                                              const StreamGraph& sg, const WindowSpec& spec) {
    if (partitions.size() != spec.windows.size())
        throw consistency_error("partition/window count mismatch: " +
                                std::to_string(partitions.size()) + " vs " +
                                std::to_string(spec.windows.size()));
    const std::size_t n = sg.node_count();
    const std::size_t steps = sg.num_steps();
    std::vector<DSPProfile> profiles(n);
    for (std::size_t u = 0; u < n; ++u) {
        profiles[u].node = static_cast<NodeId>(u);
        profiles[u].word.assign(steps, kPassive);
    }
    std::vector<char> label_if_active(n);
    for (std::size_t i = 0; i < spec.windows.size(); ++i) {
        const auto& win = spec.windows[i];
        const auto& part = partitions[i];
        if (part.window_index != win.index)
            throw consistency_error("partition order does not match window order");
        std::fill(label_if_active.begin(), label_if_active.end(), kSparse);
        for (NodeId u : part.dense) label_if_active[static_cast<std::size_t>(u)] = kDense;
        for (int k = 0; k < win.steps; ++k) {
            Timestamp t = win.t_begin + static_cast<Timestamp>(k) * sg.dt();
            std::size_t step = static_cast<std::size_t>(t / sg.dt());
            for (const auto& e : sg.events_at(t)) {
                profiles[static_cast<std::size_t>(e.u)].word[step] =
                    label_if_active[static_cast<std::size_t>(e.u)];
                profiles[static_cast<std::size_t>(e.v)].word[step] =
                    label_if_active[static_cast<std::size_t>(e.v)];
            }
        }
    }
    return profiles;
}

} // namespace strich
