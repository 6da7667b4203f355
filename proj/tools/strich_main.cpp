// strich command-line front end: ingest -> weights -> partition -> profile ->
// rates -> cluster (-> baseline-degree), plus a synthetic-stream generator.
// Every randomized stage takes the master seed from the config; there is no
// implicit time-based seeding.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "strich/strich.hpp"

namespace {

// exit codes: 0 ok, 1 internal, 2 parse, 3 config, 4 consistency
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;
constexpr int kExitConsistency = 4;

struct CliOptions {
    strich::PipelineConfig cfg;
    std::int64_t t_min = -1;
    std::int64_t t_max = -1;
    std::int64_t seed = -1;
    int k_select = 0;
};

void add_pipeline_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("-i,--input", opt.cfg.input, "contact file (plain or gzip), lines `t i j [Ci Cj]`");
    cmd->add_option("-o,--out", opt.cfg.out_dir, "output directory")->required();
    cmd->add_option("--metadata", opt.cfg.metadata, "optional node metadata file, lines `id class`");
    cmd->add_option("--dt", opt.cfg.dt, "grid resolution in seconds (default 20)");
    cmd->add_option("--delta", opt.cfg.delta, "aggregation window width in seconds (default 300)");
    cmd->add_option("--t-min", opt.t_min, "keep events with raw timestamp >= t-min");
    cmd->add_option("--t-max", opt.t_max, "keep events with raw timestamp < t-max");
    cmd->add_option("--alpha-d", opt.cfg.weights.alpha_d, "weight of the D channel (default 1/3)");
    cmd->add_option("--alpha-s", opt.cfg.weights.alpha_s, "weight of the S channel (default 1/3)");
    cmd->add_option("--alpha-p", opt.cfg.weights.alpha_p, "weight of the P channel (default 1/3)");
    cmd->add_option("--null-samples", opt.cfg.null_cfg.samples, "null-model permutations (default 100)");
    cmd->add_option("--alpha", opt.cfg.null_cfg.alpha, "significance level (default 0.05)");
    cmd->add_option("--min-club-size", opt.cfg.null_cfg.min_club_size, "smallest extractable club (default 3)");
    cmd->add_option("--k-min", opt.cfg.k_lo, "smallest k in the sweep (default 2)");
    cmd->add_option("--k-max", opt.cfg.k_hi, "largest k in the sweep (default 25)");
    cmd->add_option("--runs", opt.cfg.runs, "k-means runs per k (default 100)");
    cmd->add_option("--k-select", opt.k_select, "cluster count for the exported assignment (default: argmax)");
    cmd->add_option("--seed", opt.seed, "master seed (required for partition/cluster stages)");
    cmd->add_option("--similarity-threshold", opt.cfg.similarity_threshold,
                    "export sparse similarity triples at or above this value instead of the dense matrix");
    cmd->add_flag("--dump-weights", opt.cfg.dump_weights, "also write per-window omega/delta CSVs");
    cmd->add_flag("--baseline", opt.cfg.with_baseline, "also run the degree-vector baseline clustering");
    cmd->add_option("--workers", opt.cfg.workers, "worker threads (results are identical for any value)");
    cmd->set_config("--config", "", "read options from an INI key=value file");
}

strich::PipelineConfig finalize(CliOptions& opt) {
    if (opt.t_min >= 0) opt.cfg.t_min = opt.t_min;
    if (opt.t_max >= 0) opt.cfg.t_max = opt.t_max;
    if (opt.seed >= 0) opt.cfg.seed = static_cast<std::uint64_t>(opt.seed);
    if (opt.k_select > 0) opt.cfg.k_select = opt.k_select;
    if (opt.cfg.input.empty()) throw strich::config_error("--input is required");
    return opt.cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"strich: D/S/P temporal profiles of stream graphs via iterative "
                 "weighted rich-club extraction"};
    app.require_subcommand(1);

    CliOptions opt;
    auto* run = app.add_subcommand("run", "full pipeline: ingest through clustering");
    auto* ingest = app.add_subcommand("ingest", "parse contacts into canonical artifacts");
    auto* weights = app.add_subcommand("weights", "dump per-window omega/delta tables");
    auto* partition = app.add_subcommand("partition", "per-window rich-club extraction");
    auto* profile = app.add_subcommand("profile", "per-instant D/S/P words");
    auto* rates = app.add_subcommand("rates", "membership rates and average degrees");
    auto* cluster = app.add_subcommand("cluster", "similarity, silhouette sweep, assignments");
    auto* baseline = app.add_subcommand("baseline-degree",
                                        "clustering on degree-vector cosine instead of D/S/P");
    for (auto* cmd : {run, ingest, weights, partition, profile, rates, cluster, baseline})
        add_pipeline_options(cmd, opt);

    strich::SynthSpec synth_spec;
    std::string synth_out;
    int synth_club = 0;
    std::int64_t synth_seed = -1;
    auto* synth = app.add_subcommand("synth", "generate a planted-club contact stream");
    synth->add_option("--n", synth_spec.n, "node count")->required();
    synth->add_option("--windows", synth_spec.windows, "window count")->required();
    synth->add_option("--club", synth_club, "planted club size per window (0 = none)");
    synth->add_option("--p-in", synth_spec.p_in, "within-club edge probability per instant");
    synth->add_option("--p-out", synth_spec.p_out, "background edge probability per instant");
    synth->add_option("--dt", synth_spec.dt, "grid resolution in seconds");
    synth->add_option("--delta", synth_spec.delta, "window width in seconds");
    synth->add_option("--seed", synth_seed, "generator seed")->required();
    synth->add_option("-o,--out", synth_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (synth->parsed()) {
            synth_spec.seed = static_cast<std::uint64_t>(synth_seed);
            if (synth_club > 0)
                synth_spec.club_sizes.assign(static_cast<std::size_t>(synth_spec.windows),
                                             synth_club);
            strich::write_synth(synth_spec, synth_out);
            std::cout << "wrote synthetic stream to " << synth_out << "\n";
            return 0;
        }

        strich::Pipeline pipeline(finalize(opt));
        if (run->parsed()) {
            pipeline.run_all();
        } else {
            if (ingest->parsed()) pipeline.ingest();
            if (weights->parsed()) pipeline.weights();
            if (partition->parsed()) pipeline.partition();
            if (profile->parsed()) pipeline.profile();
            if (rates->parsed()) pipeline.rates();
            if (cluster->parsed()) pipeline.cluster();
            if (baseline->parsed()) pipeline.baseline();
            pipeline.write_manifest();
        }
        const auto& m = pipeline.manifest();
        if (m["results"].contains("mean_tau_D"))
            std::cout << "mean tau_D = " << m["results"]["mean_tau_D"].get<double>() << "\n";
        if (m["results"].contains("argmax_k"))
            std::cout << "silhouette argmax k = " << m["results"]["argmax_k"].get<int>()
                      << ", selected k = " << m["results"]["selected_k"].get<int>() << "\n";
        std::cout << "artifacts in " << opt.cfg.out_dir << "\n";
        return 0;
    } catch (const strich::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const strich::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const strich::consistency_error& e) {
        std::cerr << "internal consistency error: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
