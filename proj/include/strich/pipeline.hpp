#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "strich/clustering.hpp"
#include "strich/io.hpp"
#include "strich/profiles.hpp"
#include "strich/richclub.hpp"
#include "strich/stream_graph.hpp"
#include "strich/synth.hpp"
#include "strich/topology.hpp"
#include "strich/version.hpp"

namespace strich {

/// Everything a run needs. `workers` and the output directory are execution
/// knobs: results never depend on them and the manifest does not record them.
struct PipelineConfig {
    std::string input;
    std::string metadata; // optional path with `id class` lines
    Timestamp dt = 20;
    Timestamp delta = 300;
    std::optional<Timestamp> t_min; // raw day bounds, half-open [t_min, t_max)
    std::optional<Timestamp> t_max;
    ChannelWeights weights;
    NullModelConfig null_cfg;
    int k_lo = 2;
    int k_hi = 25;
    int runs = 100;
    std::optional<int> k_select; // default: argmax of the mean silhouette
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    double similarity_threshold = -1.0; // >= 0 switches to sparse triple export
    bool dump_weights = false;
    bool with_baseline = false;
    unsigned workers = 1;

    void validate() const {
        if (dt <= 0) throw config_error("dt must be positive");
        if (delta <= 0 || delta % dt != 0)
            throw config_error("delta must be a positive multiple of dt");
        weights.validate();
        null_cfg.validate();
        if (runs < 1) throw config_error("runs must be >= 1");
        if (k_lo < 2 || k_hi < k_lo) throw config_error("need 2 <= k_lo <= k_hi");
        if (t_min && t_max && *t_max <= *t_min)
            throw config_error("day bounds must satisfy t_min < t_max");
        if (k_select && (*k_select < k_lo || *k_select > k_hi))
            throw config_error("k_select outside the sweep range");
    }

    std::uint64_t require_seed() const {
        if (!seed)
            throw config_error(
                "a master seed is required; implicit time-based seeding is not supported");
        return *seed;
    }
};

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr const char* kNodes = "nodes.csv";
inline constexpr const char* kEvents = "events_canonical.txt";
inline constexpr const char* kSummary = "ingest_summary.txt";
inline constexpr const char* kOmega = "window_weights_omega.csv";
inline constexpr const char* kDelta = "window_weights_delta.csv";
inline constexpr const char* kPartitions = "partitions.csv";
inline constexpr const char* kProfiles = "profiles.csv";
inline constexpr const char* kRates = "rates.csv";
inline constexpr const char* kSimilarity = "similarity.csv";
inline constexpr const char* kSimilaritySparse = "similarity_sparse.csv";
inline constexpr const char* kSilhouette = "silhouette.csv";
inline constexpr const char* kSilhouetteRuns = "silhouette_runs.csv";
inline constexpr const char* kAssignments = "assignments.csv";
inline constexpr const char* kContingency = "contingency.csv";
inline constexpr const char* kHeatmap = "heatmap.csv";
inline constexpr const char* kBaselineSilhouette = "baseline_silhouette.csv";
inline constexpr const char* kBaselineSilhouetteRuns = "baseline_silhouette_runs.csv";
inline constexpr const char* kBaselineAssignments = "baseline_assignments.csv";
inline constexpr const char* kBaselineContingency = "baseline_contingency.csv";
inline constexpr const char* kBaselineHeatmap = "baseline_heatmap.csv";
inline constexpr const char* kManifest = "manifest.json";
} // namespace artifact

/// Staged pipeline over one output directory. Stages cache by a content hash
/// of their inputs plus the relevant config slice; a stage whose key and
/// outputs are unchanged is skipped, which keeps reruns byte-identical and
/// lets k-sweeps reuse similarity matrices.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
        if (cfg_.input.empty()) throw config_error("input path required");
        if (cfg_.out_dir.empty()) throw config_error("output directory required");
        std::filesystem::create_directories(cfg_.out_dir);
        load_previous_manifest();
        manifest_["tool"] = "strich";
        manifest_["version"] = STRICH_VERSION;
        manifest_["format"] = 1;
        manifest_["config"] = config_json();
        manifest_["warnings"] = nlohmann::json::array();
        manifest_["results"] = nlohmann::json::object();
        manifest_["status"] = "complete";
    }

    const nlohmann::json& manifest() const { return manifest_; }

    /// ingest -> (weights dump) -> partition -> profile -> rates -> cluster
    /// (-> baseline). On a stage failure the manifest flags the partial run
    /// with the stage name and cause, then the error propagates.
    void run_all() {
        try {
            ingest();
            if (cfg_.dump_weights) weights();
            partition();
            profile();
            rates();
            cluster();
            if (cfg_.with_baseline) baseline();
        } catch (const std::exception& e) {
            manifest_["status"] = "partial";
            manifest_["error"] = {{"stage", current_stage_}, {"message", e.what()}};
            write_manifest();
            throw;
        }
        write_manifest();
    }

    void ingest() {
        current_stage_ = "ingest";
        std::string key = ingest_key();
        if (stage_fresh("ingest", key)) {
            load_stream();
        } else {
            std::string text = read_file(cfg_.input);
            std::string meta = cfg_.metadata.empty() ? std::string() : read_file(cfg_.metadata);
            auto parsed = parse_contacts(text, cfg_.dt, meta);
            stream_ = std::move(parsed.graph);
            IngestSummary summary = parsed.summary;
            if (cfg_.t_min || cfg_.t_max) {
                Timestamp lo = cfg_.t_min.value_or(std::numeric_limits<Timestamp>::min());
                Timestamp hi = cfg_.t_max.value_or(std::numeric_limits<Timestamp>::max());
                stream_ = filter_time(*stream_, lo, hi);
                summary.event_count = stream_->events().size();
                summary.t_origin = stream_->t_origin();
                summary.steps = stream_->num_steps();
            }
            write_out(artifact::kNodes, nodes_csv(*stream_));
            write_out(artifact::kEvents, export_contacts(*stream_));
            write_out(artifact::kSummary, summary_report(summary));
            record_stage("ingest", key,
                         {artifact::kNodes, artifact::kEvents, artifact::kSummary});
        }
        if (stream_->empty())
            warn("empty stream: every profile is all-P and clustering is skipped");
        manifest_["results"]["nodes"] = stream_->node_count();
        manifest_["results"]["events"] = stream_->events().size();
        manifest_["results"]["steps"] = stream_->num_steps();
    }

    void weights() {
        current_stage_ = "weights";
        ensure_stream();
        std::string key = chain_key("weights", ingest_key(), {std::to_string(cfg_.delta)});
        if (stage_fresh("weights", key)) return;
        ensure_weights();
        write_out(artifact::kOmega, weights_omega_csv(*weights_, *stream_));
        write_out(artifact::kDelta, weights_delta_csv(*weights_, *stream_));
        record_stage("weights", key, {artifact::kOmega, artifact::kDelta});
    }

    void partition() {
        current_stage_ = "partition";
        ensure_stream();
        std::uint64_t seed = cfg_.require_seed();
        std::string key = chain_key(
            "partition", ingest_key(),
            {std::to_string(cfg_.delta), std::to_string(cfg_.null_cfg.samples),
             format_double(cfg_.null_cfg.alpha), std::to_string(cfg_.null_cfg.min_club_size),
             cfg_.null_cfg.null_model, std::to_string(seed)});
        if (stage_fresh("partition", key)) {
            load_partitions();
        } else {
            ensure_weights();
            partitions_ = itrich_all_windows(*weights_, cfg_.null_cfg, seed, cfg_.workers);
            write_out(artifact::kPartitions, partitions_csv(*partitions_, *stream_));
            record_stage("partition", key, {artifact::kPartitions});
        }
        manifest_["results"]["windows"] = partitions_->size();
    }

    void profile() {
        current_stage_ = "profile";
        ensure_stream();
        ensure_partitions();
        std::string key = chain_key("profile", stage_key("partition"), {});
        if (stage_fresh("profile", key)) {
            load_profiles();
            return;
        }
        profiles_ = label_instants(*partitions_, *stream_, window_spec());
        write_out(artifact::kProfiles, profiles_csv(*profiles_, *stream_));
        record_stage("profile", key, {artifact::kProfiles});
    }

    void rates() {
        current_stage_ = "rates";
        ensure_stream();
        ensure_profiles();
        std::string key = chain_key("rates", stage_key("profile"), {});
        if (!stage_fresh("rates", key)) {
            auto degs = degree_sequences(*stream_);
            std::vector<MembershipRates> all;
            all.reserve(profiles_->size());
            for (std::size_t u = 0; u < profiles_->size(); ++u)
                all.push_back(membership_rates((*profiles_)[u], degs[u]));
            write_out(artifact::kRates, rates_csv(all, *stream_));
            record_stage("rates", key, {artifact::kRates});
            rates_cache_ = std::move(all);
        } else if (!rates_cache_) {
            auto degs = degree_sequences(*stream_);
            std::vector<MembershipRates> all;
            all.reserve(profiles_->size());
            for (std::size_t u = 0; u < profiles_->size(); ++u)
                all.push_back(membership_rates((*profiles_)[u], degs[u]));
            rates_cache_ = std::move(all);
        }
        std::vector<double> tau_d;
        for (const auto& r : *rates_cache_) tau_d.push_back(r.tau_d);
        manifest_["results"]["mean_tau_D"] = tau_d.empty() ? 0.0 : mean_of(tau_d);
    }

    void cluster() {
        current_stage_ = "cluster";
        ensure_stream();
        ensure_profiles();
        if (stream_->num_steps() == 0 || stream_->node_count() < 2) {
            warn("clustering skipped: degenerate stream");
            write_out(artifact::kSilhouette, "k,mean_score,std_score\n");
            write_out(artifact::kSilhouetteRuns, "k,run,score\n");
            write_out(artifact::kAssignments, "node,class,cluster\n");
            write_out(artifact::kContingency, "cluster\n");
            write_out(artifact::kHeatmap, "node,class,cluster\n");
            record_stage("cluster", "degenerate",
                         {artifact::kSilhouette, artifact::kSilhouetteRuns,
                          artifact::kAssignments, artifact::kContingency, artifact::kHeatmap});
            return;
        }
        if (static_cast<std::size_t>(cfg_.k_hi) > stream_->node_count())
            throw config_error("k range exceeds the node count " +
                               std::to_string(stream_->node_count()));
        std::uint64_t seed = cfg_.require_seed();

        std::string sim_key = chain_key("similarity", stage_key("profile"),
                                        {format_double(cfg_.weights.alpha_d),
                                         format_double(cfg_.weights.alpha_s),
                                         format_double(cfg_.weights.alpha_p),
                                         format_double(cfg_.similarity_threshold)});
        std::vector<IndicatorTriple> triples = make_triples();
        SymMatrix sim;
        bool sparse = cfg_.similarity_threshold >= 0.0;
        if (stage_fresh("similarity", sim_key) && !sparse) {
            sim = load_similarity();
        } else {
            sim = similarity_matrix(triples, cfg_.weights, cfg_.workers);
            if (!stage_fresh("similarity", sim_key)) {
                if (sparse)
                    write_out(artifact::kSimilaritySparse,
                              similarity_sparse_csv(sim, *stream_, cfg_.similarity_threshold));
                else
                    write_out(artifact::kSimilarity, similarity_csv(sim, *stream_));
                record_stage("similarity", sim_key,
                             {sparse ? artifact::kSimilaritySparse : artifact::kSimilarity});
            }
        }

        std::string key = chain_key("cluster", stage_key("similarity"),
                                    {std::to_string(cfg_.k_lo), std::to_string(cfg_.k_hi),
                                     std::to_string(cfg_.runs),
                                     cfg_.k_select ? std::to_string(*cfg_.k_select) : "argmax",
                                     std::to_string(seed)});
        if (stage_fresh("cluster", key)) {
            recover_sweep_results(artifact::kSilhouette, artifact::kSilhouetteRuns, "");
            return;
        }

        SymMatrix dist = distance_from_similarity(sim);
        auto points = embed(triples, cfg_.weights);
        auto curve = sweep_k(points, dist, cfg_.k_lo, cfg_.k_hi, cfg_.runs, seed, cfg_.workers);
        write_out(artifact::kSilhouette, silhouette_csv(curve));
        write_out(artifact::kSilhouetteRuns, silhouette_runs_csv(curve));

        int k_sel = cfg_.k_select.value_or(curve.argmax_k);
        std::size_t ki = static_cast<std::size_t>(k_sel - cfg_.k_lo);
        std::size_t best_run = 0;
        for (std::size_t r = 1; r < curve.per_run[ki].size(); ++r)
            if (curve.per_run[ki][r] > curve.per_run[ki][best_run]) best_run = r;
        auto final_res = detail::kmeans_gram(
            detail::build_gram(points), k_sel,
            mix_seed({seed, kSeedKmeans, static_cast<std::uint64_t>(k_sel),
                      static_cast<std::uint64_t>(best_run)}));

        write_out(artifact::kAssignments, assignments_csv(final_res, *stream_));
        write_out(artifact::kContingency, contingency_csv(final_res, *stream_));
        write_out(artifact::kHeatmap, heatmap_csv(*profiles_, final_res, *stream_));
        record_stage("cluster", key,
                     {artifact::kSilhouette, artifact::kSilhouetteRuns, artifact::kAssignments,
                      artifact::kContingency, artifact::kHeatmap});
        manifest_["results"]["argmax_k"] = curve.argmax_k;
        manifest_["results"]["local_maxima"] = curve.local_maxima;
        manifest_["results"]["selected_k"] = k_sel;
        manifest_["results"]["selected_run"] = best_run;
    }

    /// Appendix baseline: degree-vector cosine replaces the D/S/P similarity,
    /// same clustering machinery, side-by-side artifact names.
    void baseline() {
        current_stage_ = "baseline-degree";
        ensure_stream();
        ensure_profiles();
        if (stream_->num_steps() == 0 || stream_->node_count() < 2) {
            warn("baseline skipped: degenerate stream");
            return;
        }
        if (static_cast<std::size_t>(cfg_.k_hi) > stream_->node_count())
            throw config_error("k range exceeds the node count");
        std::uint64_t seed = cfg_.require_seed();
        std::string key = chain_key("baseline-degree", ingest_key(),
                                    {std::to_string(cfg_.k_lo), std::to_string(cfg_.k_hi),
                                     std::to_string(cfg_.runs), std::to_string(seed),
                                     stage_key("profile")});
        if (stage_fresh("baseline-degree", key)) {
            recover_sweep_results(artifact::kBaselineSilhouette, artifact::kBaselineSilhouetteRuns,
                                  "baseline_");
            return;
        }

        SymMatrix sim = degree_similarity_matrix(*stream_, cfg_.workers);
        SymMatrix dist = distance_from_similarity(sim);
        auto seqs = degree_sequences(*stream_);
        std::vector<Embedding> points(seqs.size());
        for (std::size_t u = 0; u < seqs.size(); ++u) {
            points[u].node = static_cast<NodeId>(u);
            double norm2 = 0.0;
            for (int d : seqs[u]) norm2 += static_cast<double>(d) * d;
            points[u].vec.assign(seqs[u].begin(), seqs[u].end());
            if (norm2 > 0.0) {
                double inv = 1.0 / std::sqrt(norm2);
                for (auto& x : points[u].vec) x *= inv;
            }
        }
        auto curve = sweep_k(points, dist, cfg_.k_lo, cfg_.k_hi, cfg_.runs, seed, cfg_.workers);
        write_out(artifact::kBaselineSilhouette, silhouette_csv(curve));
        write_out(artifact::kBaselineSilhouetteRuns, silhouette_runs_csv(curve));
        int k_sel = cfg_.k_select.value_or(curve.argmax_k);
        std::size_t ki = static_cast<std::size_t>(k_sel - cfg_.k_lo);
        std::size_t best_run = 0;
        for (std::size_t r = 1; r < curve.per_run[ki].size(); ++r)
            if (curve.per_run[ki][r] > curve.per_run[ki][best_run]) best_run = r;
        auto final_res = detail::kmeans_gram(
            detail::build_gram(points), k_sel,
            mix_seed({seed, kSeedKmeans, static_cast<std::uint64_t>(k_sel),
                      static_cast<std::uint64_t>(best_run)}));
        write_out(artifact::kBaselineAssignments, assignments_csv(final_res, *stream_));
        write_out(artifact::kBaselineContingency, contingency_csv(final_res, *stream_));
        write_out(artifact::kBaselineHeatmap, heatmap_csv(*profiles_, final_res, *stream_));
        record_stage("baseline-degree", key,
                     {artifact::kBaselineSilhouette, artifact::kBaselineSilhouetteRuns,
                      artifact::kBaselineAssignments, artifact::kBaselineContingency,
                      artifact::kBaselineHeatmap});
        manifest_["results"]["baseline_argmax_k"] = curve.argmax_k;
        manifest_["results"]["baseline_local_maxima"] = curve.local_maxima;
        manifest_["results"]["baseline_selected_k"] = k_sel;
    }

    void write_manifest() {
        // carry forward records of stages untouched in this invocation; any
        // later use re-validates their keys before trusting them
        for (auto it = previous_stages_.begin(); it != previous_stages_.end(); ++it)
            if (!manifest_["stages"].contains(it.key()))
                manifest_["stages"][it.key()] = it.value();
        write_out(artifact::kManifest, manifest_.dump(2) + "\n");
    }

    /// Access for tests and the CLI after stages have run.
    const StreamGraph& stream() {
        ensure_stream();
        return *stream_;
    }
    const std::vector<WindowPartition>& partitions() {
        ensure_partitions();
        return *partitions_;
    }
    const std::vector<DSPProfile>& profiles() {
        ensure_profiles();
        return *profiles_;
    }

private:
    std::filesystem::path out_path(const char* name) const {
        return std::filesystem::path(cfg_.out_dir) / name;
    }
    void write_out(const char* name, std::string_view content) {
        write_file(out_path(name), content);
    }
    void warn(const std::string& msg) { manifest_["warnings"].push_back(msg); }

    nlohmann::json config_json() const {
        nlohmann::json j;
        j["input"] = cfg_.input;
        j["input_hash"] = to_hex(fnv1a64(input_bytes()));
        j["metadata"] = cfg_.metadata;
        j["metadata_hash"] = cfg_.metadata.empty() ? "" : to_hex(fnv1a64(metadata_bytes()));
        j["dt"] = cfg_.dt;
        j["delta"] = cfg_.delta;
        if (cfg_.t_min) j["t_min"] = *cfg_.t_min;
        if (cfg_.t_max) j["t_max"] = *cfg_.t_max;
        j["alpha_D"] = cfg_.weights.alpha_d;
        j["alpha_S"] = cfg_.weights.alpha_s;
        j["alpha_P"] = cfg_.weights.alpha_p;
        j["null_model"] = {{"model", cfg_.null_cfg.null_model},
                           {"samples", cfg_.null_cfg.samples},
                           {"alpha", cfg_.null_cfg.alpha},
                           {"min_club_size", cfg_.null_cfg.min_club_size}};
        j["k_lo"] = cfg_.k_lo;
        j["k_hi"] = cfg_.k_hi;
        j["runs"] = cfg_.runs;
        if (cfg_.k_select) j["k_select"] = *cfg_.k_select;
        if (cfg_.seed) j["seed"] = *cfg_.seed;
        j["similarity_threshold"] = cfg_.similarity_threshold;
        j["dump_weights"] = cfg_.dump_weights;
        j["with_baseline"] = cfg_.with_baseline;
        return j;
    }

    const std::string& input_bytes() const {
        if (!input_bytes_) input_bytes_ = cfg_.input.empty() ? std::string() : read_file(cfg_.input);
        return *input_bytes_;
    }
    const std::string& metadata_bytes() const {
        if (!metadata_bytes_)
            metadata_bytes_ = cfg_.metadata.empty() ? std::string() : read_file(cfg_.metadata);
        return *metadata_bytes_;
    }

    std::string ingest_key() const {
        std::string slice = "ingest|1|";
        slice += to_hex(fnv1a64(input_bytes()));
        slice += '|';
        slice += to_hex(fnv1a64(metadata_bytes()));
        slice += '|';
        slice += std::to_string(cfg_.dt);
        slice += '|';
        slice += cfg_.t_min ? std::to_string(*cfg_.t_min) : "-";
        slice += '|';
        slice += cfg_.t_max ? std::to_string(*cfg_.t_max) : "-";
        return to_hex(fnv1a64(slice));
    }

    static std::string chain_key(const std::string& stage, const std::string& upstream,
                                 std::initializer_list<std::string> slice) {
        std::string s = stage + "|1|" + upstream;
        for (const auto& part : slice) {
            s += '|';
            s += part;
        }
        return to_hex(fnv1a64(s));
    }

    void load_previous_manifest() {
        auto path = out_path(artifact::kManifest);
        if (!std::filesystem::exists(path)) return;
        try {
            auto prev = nlohmann::json::parse(read_file(path));
            if (prev.contains("stages")) previous_stages_ = prev["stages"];
        } catch (...) {
            // unreadable manifest: treat everything as stale
        }
    }

    /// A stage is fresh when the previous manifest recorded the same key and
    /// all its outputs still exist. Fresh stages carry their record forward.
    bool stage_fresh(const std::string& name, const std::string& key) {
        if (manifest_["stages"].contains(name) && manifest_["stages"][name]["key"] == key)
            return true; // already ran or validated in this process
        if (!previous_stages_.contains(name)) return false;
        const auto& rec = previous_stages_[name];
        if (rec.value("key", std::string()) != key) return false;
        for (const auto& f : rec["outputs"])
            if (!std::filesystem::exists(out_path(f.get<std::string>().c_str()))) return false;
        manifest_["stages"][name] = rec;
        return true;
    }

    void record_stage(const std::string& name, const std::string& key,
                      std::initializer_list<const char*> outputs) {
        nlohmann::json rec;
        rec["key"] = key;
        rec["outputs"] = nlohmann::json::array();
        for (const char* f : outputs) rec["outputs"].push_back(f);
        manifest_["stages"][name] = rec;
    }

    std::string stage_key(const std::string& name) const {
        if (!manifest_["stages"].contains(name))
            throw consistency_error("stage '" + name + "' has no recorded key");
        return manifest_["stages"][name]["key"].get<std::string>();
    }

    void ensure_stream() {
        if (stream_) return;
        if (stage_fresh("ingest", ingest_key())) {
            load_stream();
            return;
        }
        throw config_error("missing or stale ingest artifacts in '" + cfg_.out_dir +
                           "': run `strich ingest` first");
    }

    void ensure_weights() {
        if (weights_) return;
        ensure_stream();
        weights_ = all_window_weights(*stream_, window_spec(), cfg_.workers);
    }

    void ensure_partitions() {
        if (partitions_) return;
        ensure_stream();
        std::uint64_t seed = cfg_.require_seed();
        std::string key = chain_key(
            "partition", ingest_key(),
            {std::to_string(cfg_.delta), std::to_string(cfg_.null_cfg.samples),
             format_double(cfg_.null_cfg.alpha), std::to_string(cfg_.null_cfg.min_club_size),
             cfg_.null_cfg.null_model, std::to_string(seed)});
        if (stage_fresh("partition", key)) {
            load_partitions();
            return;
        }
        throw config_error("missing or stale partition artifacts in '" + cfg_.out_dir +
                           "': run `strich partition` first");
    }

    void ensure_profiles() {
        if (profiles_) return;
        ensure_stream();
        std::string key = chain_key("profile", stage_key_or_missing("partition"), {});
        if (stage_fresh("profile", key)) {
            load_profiles();
            return;
        }
        throw config_error("missing or stale profile artifacts in '" + cfg_.out_dir +
                           "': run `strich profile` first");
    }

    std::string stage_key_or_missing(const std::string& name) const {
        if (manifest_["stages"].contains(name))
            return manifest_["stages"][name]["key"].get<std::string>();
        if (previous_stages_.contains(name))
            return previous_stages_[name].value("key", std::string("missing"));
        return "missing";
    }

    WindowSpec window_spec() {
        ensure_stream();
        return make_windows(*stream_, cfg_.delta);
    }

    std::vector<IndicatorTriple> make_triples() {
        ensure_profiles();
        std::vector<IndicatorTriple> triples;
        triples.reserve(profiles_->size());
        for (const auto& p : *profiles_) triples.emplace_back(p.word);
        return triples;
    }

    void load_stream() {
        auto rows = csv::parse(read_file(out_path(artifact::kNodes)));
        if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "node")
            throw parse_error("malformed nodes.csv");
        std::vector<std::string> names, labels;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            names.push_back(rows[i][0]);
            labels.push_back(rows[i].size() > 1 ? rows[i][1] : "");
        }
        std::unordered_map<std::string, NodeId> idx;
        for (std::size_t i = 0; i < names.size(); ++i)
            idx.emplace(names[i], static_cast<NodeId>(i));
        auto records = detail::scan_contact_lines(read_file(out_path(artifact::kEvents)));
        std::vector<ContactEvent> events;
        events.reserve(records.size());
        for (const auto& r : records) {
            auto iu = idx.find(r.u), iv = idx.find(r.v);
            if (iu == idx.end() || iv == idx.end())
                throw parse_error(r.line, "event endpoint missing from nodes.csv");
            events.push_back({r.t, iu->second, iv->second});
        }
        stream_ = StreamGraph::build(std::move(names), std::move(labels), std::move(events),
                                     cfg_.dt);
    }

    void load_partitions() {
        ensure_stream();
        auto spec = window_spec();
        auto rows = csv::parse(read_file(out_path(artifact::kPartitions)));
        if (rows.empty() || rows[0].size() != 4)
            throw parse_error("malformed partitions.csv");
        std::vector<WindowPartition> parts(spec.windows.size());
        std::vector<std::map<int, std::vector<NodeId>>> layer_acc(spec.windows.size());
        for (std::size_t i = 0; i < spec.windows.size(); ++i)
            parts[i].window_index = spec.windows[i].index;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            auto w = detail::parse_int(r[0]);
            if (!w || *w < 0 || static_cast<std::size_t>(*w) >= parts.size())
                throw parse_error(i + 1, "bad window index in partitions.csv");
            NodeId u = stream_->require_node(r[1]);
            auto& part = parts[static_cast<std::size_t>(*w)];
            if (r[2] == "D") part.dense.push_back(u);
            else if (r[2] == "S") part.sparse.push_back(u);
            else part.inactive.push_back(u);
            auto lvl = detail::parse_int(r[3]);
            if (lvl && *lvl > 0)
                layer_acc[static_cast<std::size_t>(*w)][static_cast<int>(*lvl)].push_back(u);
        }
        for (std::size_t i = 0; i < parts.size(); ++i) {
            std::sort(parts[i].dense.begin(), parts[i].dense.end());
            std::sort(parts[i].sparse.begin(), parts[i].sparse.end());
            std::sort(parts[i].inactive.begin(), parts[i].inactive.end());
            for (auto& [lvl, members] : layer_acc[i]) {
                std::sort(members.begin(), members.end());
                parts[i].layers.push_back({lvl, std::move(members)});
            }
        }
        partitions_ = std::move(parts);
    }

    void load_profiles() {
        ensure_stream();
        auto rows = csv::parse(read_file(out_path(artifact::kProfiles)));
        if (rows.empty() || rows[0].size() != 3) throw parse_error("malformed profiles.csv");
        std::vector<DSPProfile> profiles(stream_->node_count());
        if (rows.size() != stream_->node_count() + 1)
            throw parse_error("profiles.csv row count does not match the node table");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            NodeId u = stream_->require_node(rows[i][0]);
            profiles[static_cast<std::size_t>(u)].node = u;
            profiles[static_cast<std::size_t>(u)].word = rows[i][2];
        }
        profiles_ = std::move(profiles);
    }

    SymMatrix load_similarity() {
        ensure_stream();
        auto rows = csv::parse(read_file(out_path(artifact::kSimilarity)));
        const std::size_t n = stream_->node_count();
        if (rows.size() != n + 1) throw parse_error("malformed similarity.csv");
        SymMatrix m(n);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() != n + 1) throw parse_error("malformed similarity.csv row");
            for (std::size_t j = 1; j < rows[i].size(); ++j) {
                double v = 0.0;
                auto res = std::from_chars(rows[i][j].data(),
                                           rows[i][j].data() + rows[i][j].size(), v);
                if (res.ec != std::errc{}) throw parse_error("bad similarity value");
                m.set(i - 1, j - 1, v);
            }
        }
        return m;
    }

    /// Rebuilds the manifest result keys of a cached sweep from its CSVs; the
    /// shortest-round-trip number format makes the recovered values identical
    /// to the ones a fresh run records.
    void recover_sweep_results(const char* curve_file, const char* runs_file,
                               const std::string& prefix) {
        auto rows = csv::parse(read_file(out_path(curve_file)));
        if (rows.size() < 2) return;
        std::vector<int> ks;
        std::vector<double> means;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            auto k = detail::parse_int(rows[i][0]);
            double m = 0.0;
            std::from_chars(rows[i][1].data(), rows[i][1].data() + rows[i][1].size(), m);
            if (!k) throw parse_error("malformed silhouette curve row");
            ks.push_back(static_cast<int>(*k));
            means.push_back(m);
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < means.size(); ++i)
            if (means[i] > means[best]) best = i;
        std::vector<int> local;
        for (std::size_t i = 0; i < means.size(); ++i) {
            bool left_ok = i == 0 || means[i] >= means[i - 1];
            bool right_ok = i + 1 == means.size() || means[i] >= means[i + 1];
            if (left_ok && right_ok) local.push_back(ks[i]);
        }
        int k_sel = cfg_.k_select.value_or(ks[best]);
        manifest_["results"][prefix + "argmax_k"] = ks[best];
        manifest_["results"][prefix + "local_maxima"] = local;
        manifest_["results"][prefix + "selected_k"] = k_sel;
        if (prefix.empty()) {
            auto run_rows = csv::parse(read_file(out_path(runs_file)));
            std::size_t best_run = 0;
            double best_score = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < run_rows.size(); ++i) {
                auto k = detail::parse_int(run_rows[i][0]);
                auto run = detail::parse_int(run_rows[i][1]);
                double score = 0.0;
                std::from_chars(run_rows[i][2].data(),
                                run_rows[i][2].data() + run_rows[i][2].size(), score);
                if (k && run && static_cast<int>(*k) == k_sel && score > best_score) {
                    best_score = score;
                    best_run = static_cast<std::size_t>(*run);
                }
            }
            manifest_["results"]["selected_run"] = best_run;
        }
    }

    PipelineConfig cfg_;
    nlohmann::json manifest_ = {{"stages", nlohmann::json::object()}};
    nlohmann::json previous_stages_ = nlohmann::json::object();
    std::string current_stage_ = "setup";

    mutable std::optional<std::string> input_bytes_;
    mutable std::optional<std::string> metadata_bytes_;
    std::optional<StreamGraph> stream_;
    std::optional<std::vector<WindowedWeights>> weights_;
    std::optional<std::vector<WindowPartition>> partitions_;
    std::optional<std::vector<DSPProfile>> profiles_;
    std::optional<std::vector<MembershipRates>> rates_cache_;
};

/// `synth` subcommand payload: contact file, ground truth and a small
/// manifest, deterministic for a given spec.
inline void write_synth(const SynthSpec& spec, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto result = generate(spec);
    std::filesystem::path dir(out_dir);
    write_file(dir / "contacts.txt", export_contacts(result.graph));
    write_file(dir / "ground_truth.csv", ground_truth_csv(spec, result.truth, result.graph));
    nlohmann::json j;
    j["tool"] = "strich synth";
    j["version"] = STRICH_VERSION;
    j["n"] = spec.n;
    j["windows"] = spec.windows;
    j["dt"] = spec.dt;
    j["delta"] = spec.delta;
    j["p_in"] = spec.p_in;
    j["p_out"] = spec.p_out;
    j["club_sizes"] = spec.club_sizes;
    j["seed"] = spec.seed;
    write_file(dir / "synth_manifest.json", j.dump(2) + "\n");
}

} // namespace strich
