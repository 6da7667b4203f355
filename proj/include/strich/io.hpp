#pragma once

#include <zlib.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "strich/clustering.hpp"
#include "strich/errors.hpp"
#include "strich/profiles.hpp"
#include "strich/richclub.hpp"
#include "strich/stream_graph.hpp"
#include "strich/synth.hpp"
#include "strich/topology.hpp"
#include "strich/util.hpp"

namespace strich {

/// Reads a whole file; gzip-compressed input is decompressed transparently
/// (zlib passes plain files through unchanged).
inline std::string read_file(const std::filesystem::path& path) {
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (!f) throw parse_error("cannot open '" + path.string() + "'");
    std::string out;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(n));
    bool bad = n < 0;
    gzclose(f);
    if (bad) throw parse_error("error while reading '" + path.string() + "'");
    return out;
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw config_error("cannot write '" + path.string() + "'");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw config_error("short write to '" + path.string() + "'");
}

namespace csv {

inline std::string field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Splits one CSV line written by field(); handles the minimal quoting above.
inline std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
                else quoted = false;
            } else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline std::vector<std::vector<std::string>> parse(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        if (!line.empty()) rows.push_back(split_line(line));
    }
    return rows;
}

} // namespace csv

inline std::string summary_report(const IngestSummary& s) {
    std::string out;
    out += "nodes=" + std::to_string(s.node_count) + "\n";
    out += "events=" + std::to_string(s.event_count) + "\n";
    out += "duplicates_dropped=" + std::to_string(s.duplicates_dropped) + "\n";
    out += "grid_violations=" + std::to_string(s.grid_violations) + "\n";
    out += "dt=" + std::to_string(s.dt) + "\n";
    out += "t_origin=" + std::to_string(s.t_origin) + "\n";
    out += "steps=" + std::to_string(s.steps) + "\n";
    return out;
}

/// node,class — preserves always-passive nodes that the event list cannot.
inline std::string nodes_csv(const StreamGraph& sg) {
    std::string out = "node,class\n";
    for (std::size_t u = 0; u < sg.node_count(); ++u) {
        out += csv::field(sg.name(static_cast<NodeId>(u)));
        out += ',';
        out += csv::field(sg.label(static_cast<NodeId>(u)));
        out += '\n';
    }
    return out;
}

inline std::string partitions_csv(const std::vector<WindowPartition>& parts,
                                  const StreamGraph& sg) {
    std::string out = "window_index,node,label,layer_level\n";
    for (const auto& part : parts)
        for (std::size_t u = 0; u < sg.node_count(); ++u) {
            NodeId id = static_cast<NodeId>(u);
            out += std::to_string(part.window_index);
            out += ',';
            out += csv::field(sg.name(id));
            out += ',';
            out += window_label(part, id);
            out += ',';
            out += std::to_string(layer_level(part, id));
            out += '\n';
        }
    return out;
}

inline std::string profiles_csv(const std::vector<DSPProfile>& profiles, const StreamGraph& sg) {
    std::string out = "node,class,word\n";
    for (const auto& p : profiles) {
        out += csv::field(sg.name(p.node));
        out += ',';
        out += csv::field(sg.label(p.node));
        out += ',';
        out += p.word;
        out += '\n';
    }
    return out;
}

inline std::string rates_csv(const std::vector<MembershipRates>& rates, const StreamGraph& sg) {
    std::string out = "node,tau_A,tau_D,tau_S,d_bar\n";
    for (std::size_t u = 0; u < rates.size(); ++u) {
        out += csv::field(sg.name(static_cast<NodeId>(u)));
        out += ',';
        out += format_double(rates[u].tau_a);
        out += ',';
        out += format_double(rates[u].tau_d);
        out += ',';
        out += format_double(rates[u].tau_s);
        out += ',';
        out += format_double(rates[u].d_bar);
        out += '\n';
    }
    return out;
}

inline std::string similarity_csv(const SymMatrix& m, const StreamGraph& sg) {
    std::string out = "node";
    for (std::size_t u = 0; u < m.size(); ++u) {
        out += ',';
        out += csv::field(sg.name(static_cast<NodeId>(u)));
    }
    out += '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += csv::field(sg.name(static_cast<NodeId>(i)));
        for (std::size_t j = 0; j < m.size(); ++j) {
            out += ',';
            out += format_double(m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

/// Sparse triple list of pairs at or above the threshold (upper triangle).
inline std::string similarity_sparse_csv(const SymMatrix& m, const StreamGraph& sg,
                                         double threshold) {
    std::string out = "u,v,similarity\n";
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (m.at(i, j) >= threshold) {
                out += csv::field(sg.name(static_cast<NodeId>(i)));
                out += ',';
                out += csv::field(sg.name(static_cast<NodeId>(j)));
                out += ',';
                out += format_double(m.at(i, j));
                out += '\n';
            }
    return out;
}

inline std::string silhouette_csv(const SilhouetteCurve& curve) {
    std::string out = "k,mean_score,std_score\n";
    for (std::size_t i = 0; i < curve.ks.size(); ++i) {
        out += std::to_string(curve.ks[i]);
        out += ',';
        out += format_double(curve.mean[i]);
        out += ',';
        out += format_double(curve.stddev[i]);
        out += '\n';
    }
    return out;
}

inline std::string silhouette_runs_csv(const SilhouetteCurve& curve) {
    std::string out = "k,run,score\n";
    for (std::size_t i = 0; i < curve.ks.size(); ++i)
        for (std::size_t r = 0; r < curve.per_run[i].size(); ++r) {
            out += std::to_string(curve.ks[i]);
            out += ',';
            out += std::to_string(r);
            out += ',';
            out += format_double(curve.per_run[i][r]);
            out += '\n';
        }
    return out;
}

inline std::string assignments_csv(const ClusterResult& res, const StreamGraph& sg) {
    std::string out = "node,class,cluster\n";
    for (std::size_t u = 0; u < res.assignment.size(); ++u) {
        out += csv::field(sg.name(static_cast<NodeId>(u)));
        out += ',';
        out += csv::field(sg.label(static_cast<NodeId>(u)));
        out += ',';
        out += std::to_string(res.assignment[u]);
        out += '\n';
    }
    return out;
}

inline std::string class_or_placeholder(const std::string& label) {
    return label.empty() ? std::string("unlabeled") : label;
}

/// Cluster-by-class contingency counts (rows: clusters, columns: classes).
inline std::string contingency_csv(const ClusterResult& res, const StreamGraph& sg) {
    std::set<std::string> classes;
    for (std::size_t u = 0; u < sg.node_count(); ++u)
        classes.insert(class_or_placeholder(sg.label(static_cast<NodeId>(u))));
    std::string out = "cluster";
    for (const auto& c : classes) {
        out += ',';
        out += csv::field(c);
    }
    out += '\n';
    for (int j = 0; j < res.k; ++j) {
        std::map<std::string, int> counts;
        for (std::size_t u = 0; u < res.assignment.size(); ++u)
            if (res.assignment[u] == j)
                ++counts[class_or_placeholder(sg.label(static_cast<NodeId>(u)))];
        out += std::to_string(j);
        for (const auto& c : classes) {
            out += ',';
            auto it = counts.find(c);
            out += std::to_string(it == counts.end() ? 0 : it->second);
        }
        out += '\n';
    }
    return out;
}

/// Plot-ready label-code matrix (P=0, S=1, D=2), one row per node, ordered by
/// class, then cluster, then node name.
inline std::string heatmap_csv(const std::vector<DSPProfile>& profiles, const ClusterResult& res,
                               const StreamGraph& sg) {
    std::vector<std::size_t> order(profiles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = sg.label(static_cast<NodeId>(a));
        const auto& cb = sg.label(static_cast<NodeId>(b));
        if (ca != cb) return ca < cb;
        if (res.assignment[a] != res.assignment[b]) return res.assignment[a] < res.assignment[b];
        return sg.name(static_cast<NodeId>(a)) < sg.name(static_cast<NodeId>(b));
    });
    std::string out = "node,class,cluster";
    std::size_t steps = profiles.empty() ? 0 : profiles.front().word.size();
    for (std::size_t t = 0; t < steps; ++t) out += ",t" + std::to_string(t);
    out += '\n';
    for (std::size_t i : order) {
        out += csv::field(sg.name(static_cast<NodeId>(i)));
        out += ',';
        out += csv::field(sg.label(static_cast<NodeId>(i)));
        out += ',';
        out += std::to_string(res.assignment[i]);
        for (char c : profiles[i].word) {
            out += ',';
            out += (c == kPassive ? '0' : c == kSparse ? '1' : '2');
        }
        out += '\n';
    }
    return out;
}

inline std::string weights_omega_csv(const std::vector<WindowedWeights>& all,
                                     const StreamGraph& sg) {
    std::string out = "window_index,u,v,omega_bar\n";
    for (const auto& ww : all)
        for (const auto& e : ww.edges) {
            out += std::to_string(ww.window_index);
            out += ',';
            out += csv::field(sg.name(e.u));
            out += ',';
            out += csv::field(sg.name(e.v));
            out += ',';
            out += format_double(e.omega);
            out += '\n';
        }
    return out;
}

inline std::string weights_delta_csv(const std::vector<WindowedWeights>& all,
                                     const StreamGraph& sg) {
    std::string out = "window_index,node,delta_bar\n";
    for (const auto& ww : all)
        for (std::size_t u = 0; u < ww.strengths.size(); ++u) {
            out += std::to_string(ww.window_index);
            out += ',';
            out += csv::field(sg.name(static_cast<NodeId>(u)));
            out += ',';
            out += format_double(ww.strengths[u]);
            out += '\n';
        }
    return out;
}

/// window,node,planted label for every (window, node) pair.
inline std::string ground_truth_csv(const SynthSpec& spec, const GroundTruth& truth,
                                    const StreamGraph& sg) {
    std::string out = "window,node,planted\n";
    for (int w = 0; w < spec.windows; ++w) {
        std::vector<char> in_club(sg.node_count(), 0);
        for (NodeId u : truth.club[static_cast<std::size_t>(w)])
            in_club[static_cast<std::size_t>(u)] = 1;
        for (std::size_t u = 0; u < sg.node_count(); ++u) {
            bool active = spec.schedule.empty() ||
                          spec.schedule[u][static_cast<std::size_t>(w)];
            out += std::to_string(w);
            out += ',';
            out += csv::field(sg.name(static_cast<NodeId>(u)));
            out += ',';
            out += in_club[u] ? "club" : active ? "background" : "off";
            out += '\n';
        }
    }
    return out;
}

} // namespace strich
