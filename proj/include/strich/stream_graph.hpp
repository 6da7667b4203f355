#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "strich/errors.hpp"
#include "strich/util.hpp"

namespace strich {

using NodeId = std::int32_t;
using Timestamp = std::int64_t;

/// One undirected contact at a grid instant. Timestamps are normalized
/// (0-based) once inside a StreamGraph; u < v always holds there.
struct ContactEvent {
    Timestamp t;
    NodeId u;
    NodeId v;

    friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
    friend auto operator<=>(const ContactEvent&, const ContactEvent&) = default;
};

/// The instantaneous graph G_t: adjacency over the full (fixed) node set.
class Snapshot {
public:
    Snapshot(Timestamp t, std::vector<std::vector<NodeId>> adjacency)
        : t_(t), adj_(std::move(adjacency)) {}

    Timestamp t() const { return t_; }
    std::size_t node_count() const { return adj_.size(); }
    int degree(NodeId u) const { return static_cast<int>(adj_[check(u)].size()); }
    std::span<const NodeId> neighbors(NodeId u) const {
        const auto& n = adj_[check(u)];
        return {n.data(), n.size()};
    }
    bool has_edge(NodeId u, NodeId v) const {
        const auto& n = adj_[check(u)];
        return std::binary_search(n.begin(), n.end(), check(v));
    }

private:
    std::size_t check(NodeId u) const {
        if (u < 0 || static_cast<std::size_t>(u) >= adj_.size())
            throw domain_error("unknown node id " + std::to_string(u));
        return static_cast<std::size_t>(u);
    }

    Timestamp t_;
    std::vector<std::vector<NodeId>> adj_; // sorted neighbor lists, symmetric
};

/// One aggregation window: `steps` grid instants starting at t_begin.
struct Window {
    int index = 0;
    Timestamp t_begin = 0;
    int steps = 0;

    Timestamp instant(int k) const { return t_begin + static_cast<Timestamp>(k); }
};

/// Disjoint consecutive windows covering the whole observed period. The last
/// window may hold fewer than p steps.
struct WindowSpec {
    Timestamp delta = 0; // window width in seconds
    int p = 0;           // grid steps per full window
    std::vector<Window> windows;
};

struct IngestSummary {
    std::size_t node_count = 0;
    std::size_t event_count = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t grid_violations = 0; // always 0 on success; violations abort the parse
    Timestamp dt = 0;
    Timestamp t_origin = 0;
    std::size_t steps = 0;
};

/// Immutable timestamped contact structure over a fixed node set, on a Δt
/// grid. Safe for shared read access from concurrent workers.
class StreamGraph {
public:
    StreamGraph() = default;

    /// Assembles a stream from absolute-time events. Node identity is the
    /// index into `names`; labels may be empty strings. Deduplicates
    /// (t,{u,v}), normalizes timestamps to the earliest one, and validates
    /// every invariant (no loops, endpoints known, grid alignment).
    static StreamGraph build(std::vector<std::string> names, std::vector<std::string> labels,
                             std::vector<ContactEvent> events, Timestamp dt,
                             std::size_t* duplicates_dropped = nullptr) {
        if (dt <= 0) throw config_error("dt must be positive");
        if (labels.empty()) labels.resize(names.size());
        if (labels.size() != names.size())
            throw consistency_error("labels/names size mismatch");
        StreamGraph sg;
        sg.names_ = std::move(names);
        sg.labels_ = std::move(labels);
        sg.dt_ = dt;
        for (std::size_t i = 0; i < sg.names_.size(); ++i)
            sg.index_.emplace(sg.names_[i], static_cast<NodeId>(i));
        if (sg.index_.size() != sg.names_.size())
            throw consistency_error("duplicate node names");

        const NodeId n = static_cast<NodeId>(sg.names_.size());
        if (!events.empty()) {
            Timestamp t_min = events.front().t;
            for (const auto& e : events) t_min = std::min(t_min, e.t);
            for (auto& e : events) {
                if (e.u == e.v) throw domain_error("loop event on node " + std::to_string(e.u));
                if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
                    throw domain_error("event endpoint outside node set");
                if ((e.t - t_min) % dt != 0)
                    throw domain_error("timestamp " + std::to_string(e.t) +
                                       " is off the " + std::to_string(dt) + " s grid");
                e.t -= t_min;
                if (e.u > e.v) std::swap(e.u, e.v);
            }
            std::sort(events.begin(), events.end());
            auto last = std::unique(events.begin(), events.end());
            if (duplicates_dropped)
                *duplicates_dropped = static_cast<std::size_t>(events.end() - last);
            events.erase(last, events.end());
            sg.t_origin_ = t_min;
            sg.t_end_ = events.back().t;
            sg.empty_ = false;
        } else {
            if (duplicates_dropped) *duplicates_dropped = 0;
            sg.empty_ = true;
        }
        sg.events_ = std::move(events);
        sg.build_step_index();
        return sg;
    }

    std::size_t node_count() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(NodeId u) const { return names_[check(u)]; }
    const std::string& label(NodeId u) const { return labels_[check(u)]; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<NodeId> index_of(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<ContactEvent>& events() const { return events_; }
    Timestamp dt() const { return dt_; }
    Timestamp t_origin() const { return t_origin_; }
    bool empty() const { return empty_; }

    Timestamp t_start() const {
        require_nonempty();
        return 0;
    }
    Timestamp t_end() const {
        require_nonempty();
        return t_end_;
    }
    std::size_t num_steps() const {
        return empty_ ? 0 : static_cast<std::size_t>(t_end_ / dt_) + 1;
    }
    Timestamp instant_at(std::size_t step) const { return static_cast<Timestamp>(step) * dt_; }

    /// Grid-step index of instant t; rejects off-grid or out-of-range t.
    std::size_t step_of(Timestamp t) const {
        require_nonempty();
        if (t < 0 || t > t_end_)
            throw domain_error("instant " + std::to_string(t) + " outside [0, " +
                               std::to_string(t_end_) + "]");
        if (t % dt_ != 0)
            throw domain_error("instant " + std::to_string(t) + " is off the " +
                               std::to_string(dt_) + " s grid");
        return static_cast<std::size_t>(t / dt_);
    }

    std::span<const ContactEvent> events_at(Timestamp t) const {
        std::size_t s = step_of(t);
        return {events_.data() + step_offsets_[s],
                step_offsets_[s + 1] - step_offsets_[s]};
    }

    NodeId require_node(std::string_view name) const {
        auto id = index_of(name);
        if (!id) throw domain_error("unknown node '" + std::string(name) + "'");
        return *id;
    }

    void check_node(NodeId u) const { check(u); }

private:
    std::size_t check(NodeId u) const {
        if (u < 0 || static_cast<std::size_t>(u) >= names_.size())
            throw domain_error("unknown node id " + std::to_string(u));
        return static_cast<std::size_t>(u);
    }
    void require_nonempty() const {
        if (empty_) throw domain_error("empty stream has no time extent");
    }
    void build_step_index() {
        std::size_t steps = num_steps();
        step_offsets_.assign(steps + 1, 0);
        for (const auto& e : events_) ++step_offsets_[static_cast<std::size_t>(e.t / dt_) + 1];
        for (std::size_t s = 1; s <= steps; ++s) step_offsets_[s] += step_offsets_[s - 1];
    }

    std::vector<std::string> names_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<ContactEvent> events_; // normalized, sorted, deduplicated, u < v
    Timestamp dt_ = 20;
    Timestamp t_origin_ = 0;
    Timestamp t_end_ = 0;
    bool empty_ = true;
    std::vector<std::size_t> step_offsets_; // step -> range in events_
};

struct ParseResult {
    StreamGraph graph;
    IngestSummary summary;
};

namespace detail {

inline std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Numeric-aware deterministic node ordering: when every id parses as an
/// integer, order numerically, otherwise lexicographically.
inline void sort_node_names(std::vector<std::string>& names) {
    bool all_numeric = !names.empty();
    for (const auto& n : names)
        if (!parse_int(n)) { all_numeric = false; break; }
    if (all_numeric) {
        std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
            auto ia = *parse_int(a), ib = *parse_int(b);
            return ia != ib ? ia < ib : a < b;
        });
    } else {
        std::sort(names.begin(), names.end());
    }
}

struct RawRecord {
    Timestamp t;
    std::string u, v, label_u, label_v;
    std::size_t line;
};

inline std::vector<RawRecord> scan_contact_lines(std::string_view text) {
    std::vector<RawRecord> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields[0].starts_with('#')) continue;
        if (fields.size() < 3)
            throw parse_error(line_no, "expected at least 3 fields (t, i, j), got " +
                                           std::to_string(fields.size()));
        auto t = parse_int(fields[0]);
        if (!t) throw parse_error(line_no, "non-numeric timestamp '" + std::string(fields[0]) + "'");
        if (fields[1] == fields[2])
            throw parse_error(line_no, "loop record: both endpoints are '" +
                                           std::string(fields[1]) + "'");
        RawRecord r;
        r.t = *t;
        r.u = std::string(fields[1]);
        r.v = std::string(fields[2]);
        if (fields.size() >= 4) r.label_u = std::string(fields[3]);
        if (fields.size() >= 5) r.label_v = std::string(fields[4]);
        r.line = line_no;
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace detail

/// Parses whitespace/tab-separated contact lines `t i j [Ci Cj]` into a
/// StreamGraph. `metadata` optionally holds `id class` lines adding nodes
/// that never appear in events (kept as always-passive) and authoritative
/// class labels.
inline ParseResult parse_contacts(std::string_view text, Timestamp dt,
                                  std::string_view metadata = {}) {
    if (dt <= 0) throw config_error("dt must be positive, got " + std::to_string(dt));
    auto records = detail::scan_contact_lines(text);

    std::unordered_map<std::string, std::string> meta_labels;
    std::vector<std::string> name_set;
    auto see = [&](const std::string& n) {
        if (!meta_labels.count(n)) {
            meta_labels.emplace(n, "");
            name_set.push_back(n);
        }
    };
    if (!metadata.empty()) {
        std::size_t line_no = 0, pos = 0;
        while (pos <= metadata.size()) {
            std::size_t eol = metadata.find('\n', pos);
            std::string_view line = metadata.substr(
                pos, eol == std::string_view::npos ? metadata.size() - pos : eol - pos);
            pos = eol == std::string_view::npos ? metadata.size() + 1 : eol + 1;
            ++line_no;
            auto fields = split_ws(line);
            if (fields.empty() || fields[0].starts_with('#')) continue;
            if (fields.size() < 2)
                throw parse_error(line_no, "metadata line needs `id class`");
            std::string id(fields[0]);
            see(id);
            meta_labels[id] = std::string(fields[1]);
        }
    }
    for (const auto& r : records) {
        see(r.u);
        see(r.v);
        // event-column labels fill gaps; an explicit metadata file wins
        if (!r.label_u.empty() && meta_labels[r.u].empty()) meta_labels[r.u] = r.label_u;
        if (!r.label_v.empty() && meta_labels[r.v].empty()) meta_labels[r.v] = r.label_v;
    }
    detail::sort_node_names(name_set);

    std::unordered_map<std::string, NodeId> idx;
    for (std::size_t i = 0; i < name_set.size(); ++i)
        idx.emplace(name_set[i], static_cast<NodeId>(i));

    Timestamp t_min = 0;
    if (!records.empty()) {
        t_min = records.front().t;
        for (const auto& r : records) t_min = std::min(t_min, r.t);
        for (const auto& r : records)
            if ((r.t - t_min) % dt != 0)
                throw parse_error(r.line, "timestamp " + std::to_string(r.t) + " is off the " +
                                              std::to_string(dt) + " s grid anchored at " +
                                              std::to_string(t_min));
    }

    std::vector<ContactEvent> events;
    events.reserve(records.size());
    for (const auto& r : records)
        events.push_back({r.t, idx.at(r.u), idx.at(r.v)});

    std::vector<std::string> labels;
    labels.reserve(name_set.size());
    for (const auto& n : name_set) labels.push_back(meta_labels.at(n));

    std::size_t dups = 0;
    ParseResult out;
    out.graph = StreamGraph::build(std::move(name_set), std::move(labels), std::move(events), dt,
                                   &dups);
    out.summary.node_count = out.graph.node_count();
    out.summary.event_count = out.graph.events().size();
    out.summary.duplicates_dropped = dups;
    out.summary.grid_violations = 0;
    out.summary.dt = dt;
    out.summary.t_origin = out.graph.t_origin();
    out.summary.steps = out.graph.num_steps();
    return out;
}

/// G_t as explicit adjacency over all nodes.
inline Snapshot snapshot(const StreamGraph& sg, Timestamp t) {
    std::vector<std::vector<NodeId>> adj(sg.node_count());
    for (const auto& e : sg.events_at(t)) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    for (auto& n : adj) std::sort(n.begin(), n.end());
    return Snapshot(t, std::move(adj));
}

/// |N_t(u)| without materializing the whole snapshot.
inline int instantaneous_degree(const StreamGraph& sg, NodeId u, Timestamp t) {
    sg.check_node(u);
    int d = 0;
    for (const auto& e : sg.events_at(t))
        if (e.u == u || e.v == u) ++d;
    return d;
}

/// Splits the observed period into consecutive windows of width `delta`.
/// Emits a final truncated window when the period is not a multiple of delta.
inline WindowSpec make_windows(const StreamGraph& sg, Timestamp delta) {
    if (delta <= 0 || delta % sg.dt() != 0)
        throw config_error("window width " + std::to_string(delta) +
                           " must be a positive multiple of dt=" + std::to_string(sg.dt()));
    WindowSpec spec;
    spec.delta = delta;
    spec.p = static_cast<int>(delta / sg.dt());
    std::size_t steps = sg.num_steps();
    for (std::size_t s = 0; s < steps; s += static_cast<std::size_t>(spec.p)) {
        Window w;
        w.index = static_cast<int>(spec.windows.size());
        w.t_begin = sg.instant_at(s);
        w.steps = static_cast<int>(std::min<std::size_t>(spec.p, steps - s));
        spec.windows.push_back(w);
    }
    return spec;
}

/// Narrows a stream to events with raw timestamps in [raw_lo, raw_hi),
/// keeping the full node set (out-of-range nodes become always-passive).
inline StreamGraph filter_time(const StreamGraph& sg, Timestamp raw_lo, Timestamp raw_hi) {
    if (raw_hi <= raw_lo) throw config_error("time filter bounds must satisfy lo < hi");
    std::vector<ContactEvent> kept;
    for (const auto& e : sg.events()) {
        Timestamp raw = sg.t_origin() + e.t;
        if (raw >= raw_lo && raw < raw_hi) kept.push_back({raw, e.u, e.v});
    }
    return StreamGraph::build(sg.names(), sg.labels(), std::move(kept), sg.dt());
}

/// Canonical sorted event list in the ingestion layout, raw timestamps.
/// Label columns are emitted when both endpoints carry one.
inline std::string export_contacts(const StreamGraph& sg) {
    std::string out;
    for (const auto& e : sg.events()) {
        out += std::to_string(sg.t_origin() + e.t);
        out += '\t';
        out += sg.name(e.u);
        out += '\t';
        out += sg.name(e.v);
        if (!sg.label(e.u).empty() && !sg.label(e.v).empty()) {
            out += '\t';
            out += sg.label(e.u);
            out += '\t';
            out += sg.label(e.v);
        }
        out += '\n';
    }
    return out;
}

} // namespace strich
