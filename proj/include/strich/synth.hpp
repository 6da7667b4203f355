#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strich/rng.hpp"
#include "strich/stream_graph.hpp"

namespace strich {

/// Recipe for a planted-club stream: per instant, club-internal pairs appear
/// with probability p_in, every other pair of active nodes with p_out;
/// nodes switched off by the schedule emit nothing. Edge draws are
/// independent across instants (no persistence), which keeps permutation-null
/// calibration exact.
struct SynthSpec {
    int n = 0;
    std::vector<int> club_sizes;                     // one entry per window; empty = no clubs
    double p_in = 0.8;
    double p_out = 0.02;
    std::vector<std::vector<std::uint8_t>> schedule; // [node][window] activity; empty = always on
    Timestamp dt = 20;
    Timestamp delta = 300;
    int windows = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw config_error("synth needs n >= 1");
        if (windows < 1) throw config_error("synth needs windows >= 1");
        if (dt <= 0 || delta <= 0 || delta % dt != 0)
            throw config_error("synth needs delta a positive multiple of dt");
        if (!(0.0 <= p_out && p_out < p_in && p_in <= 1.0))
            throw config_error("synth needs 0 <= p_out < p_in <= 1");
        if (!club_sizes.empty() && club_sizes.size() != static_cast<std::size_t>(windows))
            throw config_error("club_sizes must have one entry per window");
        for (int c : club_sizes)
            if (c < 0 || c > n) throw config_error("club size outside [0, n]");
        if (!schedule.empty()) {
            if (schedule.size() != static_cast<std::size_t>(n))
                throw config_error("schedule must have one row per node");
            for (const auto& row : schedule)
                if (row.size() != static_cast<std::size_t>(windows))
                    throw config_error("schedule rows must have one entry per window");
        }
    }
};

/// What was planted, for oracle comparisons.
struct GroundTruth {
    std::vector<std::vector<NodeId>> club; // per window, sorted ascending
    std::vector<std::string> node_class;   // "club" | "background" | "off"
};

struct SynthResult {
    StreamGraph graph;
    GroundTruth truth;
};

/// Deterministic given spec.seed. Each window's club is the lowest-indexed
/// active nodes. Ground-truth window indices line up with
/// make_windows(graph, spec.delta) whenever events span the whole period
/// (guaranteed in practice for the densities used in tests).
inline SynthResult generate(const SynthSpec& spec) {
    spec.validate();
    const int p = static_cast<int>(spec.delta / spec.dt);
    auto active_in = [&](int node, int window) -> bool {
        return spec.schedule.empty() ||
               spec.schedule[static_cast<std::size_t>(node)][static_cast<std::size_t>(window)];
    };

    GroundTruth truth;
    truth.club.resize(static_cast<std::size_t>(spec.windows));
    for (int w = 0; w < spec.windows; ++w) {
        int want = spec.club_sizes.empty() ? 0 : spec.club_sizes[static_cast<std::size_t>(w)];
        if (want == 0) continue;
        auto& club = truth.club[static_cast<std::size_t>(w)];
        for (int u = 0; u < spec.n && static_cast<int>(club.size()) < want; ++u)
            if (active_in(u, w)) club.push_back(u);
        if (static_cast<int>(club.size()) < want)
            throw config_error("window " + std::to_string(w) + ": club size " +
                               std::to_string(want) + " exceeds its active node count");
    }

    Rng rng(spec.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<ContactEvent> events;
    std::vector<char> in_club(static_cast<std::size_t>(spec.n));
    for (int w = 0; w < spec.windows; ++w) {
        std::fill(in_club.begin(), in_club.end(), 0);
        for (NodeId u : truth.club[static_cast<std::size_t>(w)])
            in_club[static_cast<std::size_t>(u)] = 1;
        std::vector<NodeId> active;
        for (int u = 0; u < spec.n; ++u)
            if (active_in(u, w)) active.push_back(u);
        for (int k = 0; k < p; ++k) {
            Timestamp t = (static_cast<Timestamp>(w) * p + k) * spec.dt;
            for (std::size_t a = 0; a < active.size(); ++a)
                for (std::size_t b = a + 1; b < active.size(); ++b) {
                    NodeId u = active[a], v = active[b];
                    double prob = (in_club[static_cast<std::size_t>(u)] &&
                                   in_club[static_cast<std::size_t>(v)])
                                      ? spec.p_in
                                      : spec.p_out;
                    if (coin(rng) < prob) events.push_back({t, u, v});
                }
        }
    }

    truth.node_class.assign(static_cast<std::size_t>(spec.n), "off");
    for (int u = 0; u < spec.n; ++u)
        for (int w = 0; w < spec.windows; ++w)
            if (active_in(u, w)) { truth.node_class[static_cast<std::size_t>(u)] = "background"; break; }
    for (const auto& club : truth.club)
        for (NodeId u : club) truth.node_class[static_cast<std::size_t>(u)] = "club";

    int width = 1;
    for (int x = spec.n - 1; x >= 10; x /= 10) ++width;
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(spec.n));
    for (int u = 0; u < spec.n; ++u) {
        std::string s = std::to_string(u);
        names.push_back(std::string(static_cast<std::size_t>(width) - s.size(), '0') + s);
    }

    SynthResult out;
    out.graph = StreamGraph::build(names, truth.node_class, std::move(events), spec.dt);
    out.truth = std::move(truth);
    return out;
}

} // namespace strich
