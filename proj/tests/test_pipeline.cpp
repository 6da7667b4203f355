#include <catch2/catch_amalgamated.hpp>

#include <zlib.h>

#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "strich/pipeline.hpp"

using namespace strich;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("strich_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_planted_stream(const fs::path& dir, int n = 12, int windows = 6,
                              int club = 5, std::uint64_t seed = 404) {
    SynthSpec spec;
    spec.n = n;
    spec.windows = windows;
    spec.p_in = 1.0;
    spec.p_out = 0.02;
    spec.club_sizes.assign(static_cast<std::size_t>(windows), club);
    spec.seed = seed;
    auto res = generate(spec);
    fs::path file = dir / "contacts.txt";
    write_file(file, export_contacts(res.graph));
    return file;
}

PipelineConfig planted_config(const fs::path& input, const fs::path& out) {
    PipelineConfig cfg;
    cfg.input = input.string();
    cfg.out_dir = out.string();
    cfg.k_lo = 2;
    cfg.k_hi = 4;
    cfg.runs = 10;
    cfg.k_select = 2;
    cfg.seed = 31337;
    return cfg;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file())
            out[entry.path().filename().string()] = read_file(entry.path());
    return out;
}

} // namespace

TEST_CASE("full pipeline on a planted 5-clique stream", "[pipeline]") {
    auto work = fresh_dir("planted");
    auto input = write_planted_stream(work);
    Pipeline p(planted_config(input, work / "out"));
    p.run_all();

    for (const char* name :
         {artifact::kNodes, artifact::kEvents, artifact::kSummary, artifact::kPartitions,
          artifact::kProfiles, artifact::kRates, artifact::kSimilarity, artifact::kSilhouette,
          artifact::kAssignments, artifact::kContingency, artifact::kHeatmap, artifact::kManifest})
        REQUIRE(fs::exists(work / "out" / name));

    // club nodes spend (almost) the whole day dense
    auto rates = csv::parse(read_file(work / "out" / artifact::kRates));
    REQUIRE(rates.size() == 13); // header + 12 nodes
    std::map<std::string, double> tau_d;
    for (std::size_t i = 1; i < rates.size(); ++i)
        tau_d[rates[i][0]] = std::stod(rates[i][2]);
    for (const char* club : {"00", "01", "02", "03", "04"}) REQUIRE(tau_d[club] >= 0.95);

    // at k=2, one cluster holds exactly the club
    auto assign = csv::parse(read_file(work / "out" / artifact::kAssignments));
    std::map<std::string, std::string> cluster_of;
    for (std::size_t i = 1; i < assign.size(); ++i) cluster_of[assign[i][0]] = assign[i][2];
    std::set<std::string> club_clusters, bg_clusters;
    for (const auto& [node, cluster] : cluster_of)
        (node <= "04" ? club_clusters : bg_clusters).insert(cluster);
    REQUIRE(club_clusters.size() == 1);
    REQUIRE(bg_clusters.size() == 1);
    REQUIRE(*club_clusters.begin() != *bg_clusters.begin());

    const auto& m = p.manifest();
    REQUIRE(m["status"] == "complete");
    REQUIRE(m["results"]["selected_k"] == 2);
}

TEST_CASE("an empty stream completes with a manifest warning", "[pipeline]") {
    auto work = fresh_dir("empty");
    fs::path input = work / "contacts.txt";
    write_file(input, "");
    PipelineConfig cfg = planted_config(input, work / "out");
    Pipeline p(cfg);
    p.run_all();
    REQUIRE(p.manifest()["status"] == "complete");
    bool warned = false;
    for (const auto& w : p.manifest()["warnings"])
        if (w.get<std::string>().find("empty stream") != std::string::npos) warned = true;
    REQUIRE(warned);
    auto profiles = csv::parse(read_file(work / "out" / artifact::kProfiles));
    REQUIRE(profiles.size() == 1); // header only: no nodes at all
}

TEST_CASE("staged subcommands reproduce the in-run artifacts byte for byte", "[pipeline]") {
    auto work = fresh_dir("staged");
    auto input = write_planted_stream(work);

    Pipeline full(planted_config(input, work / "full"));
    full.run_all();

    // ingest happens implicitly before weights; partition runs after weights
    {
        Pipeline s1(planted_config(input, work / "staged"));
        s1.ingest();
        s1.write_manifest();
    }
    {
        Pipeline s2(planted_config(input, work / "staged"));
        s2.weights();
        s2.write_manifest();
    }
    {
        Pipeline s3(planted_config(input, work / "staged"));
        s3.partition();
        s3.write_manifest();
    }
    REQUIRE(read_file(work / "full" / artifact::kPartitions) ==
            read_file(work / "staged" / artifact::kPartitions));
    REQUIRE(read_file(work / "full" / artifact::kNodes) ==
            read_file(work / "staged" / artifact::kNodes));
}

TEST_CASE("reruns and worker counts cannot change a single byte", "[pipeline]") {
    auto work = fresh_dir("determinism");
    auto input = write_planted_stream(work);

    auto cfg1 = planted_config(input, work / "a");
    cfg1.workers = 1;
    Pipeline(cfg1).run_all();

    auto cfg4 = planted_config(input, work / "b");
    cfg4.workers = 4;
    Pipeline(cfg4).run_all();

    auto a = read_dir(work / "a");
    auto b = read_dir(work / "b");
    REQUIRE(a.size() == b.size());
    for (const auto& [name, bytes] : a) {
        INFO(name);
        REQUIRE(b.at(name) == bytes);
    }

    // rerunning over the existing directory leaves everything identical
    Pipeline(cfg1).run_all();
    auto again = read_dir(work / "a");
    for (const auto& [name, bytes] : a) {
        INFO(name);
        REQUIRE(again.at(name) == bytes);
    }
}

TEST_CASE("gzip-compressed input parses identically", "[pipeline]") {
    auto work = fresh_dir("gzip");
    auto plain = write_planted_stream(work);
    std::string content = read_file(plain);

    fs::path gz = work / "contacts.txt.gz";
    gzFile f = gzopen(gz.string().c_str(), "wb");
    REQUIRE(f != nullptr);
    REQUIRE(gzwrite(f, content.data(), static_cast<unsigned>(content.size())) ==
            static_cast<int>(content.size()));
    gzclose(f);
    REQUIRE(read_file(gz) == content);

    Pipeline pa(planted_config(plain, work / "plain_out"));
    pa.ingest();
    pa.write_manifest();
    Pipeline pb(planted_config(gz, work / "gz_out"));
    pb.ingest();
    pb.write_manifest();
    REQUIRE(read_file(work / "plain_out" / artifact::kEvents) ==
            read_file(work / "gz_out" / artifact::kEvents));
}

TEST_CASE("missing upstream artifacts name the required subcommand", "[pipeline]") {
    auto work = fresh_dir("missing");
    auto input = write_planted_stream(work);
    Pipeline p(planted_config(input, work / "out"));
    try {
        p.cluster();
        FAIL("expected config_error");
    } catch (const config_error& e) {
        REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("strich ingest"));
    }
}

TEST_CASE("a missing master seed is a configuration error", "[pipeline]") {
    auto work = fresh_dir("noseed");
    auto input = write_planted_stream(work);
    PipelineConfig cfg = planted_config(input, work / "out");
    cfg.seed.reset();
    Pipeline p(cfg);
    p.ingest();
    REQUIRE_THROWS_AS(p.partition(), config_error);
    // the failure is flagged in the manifest when it happens inside run_all
    Pipeline p2(cfg);
    REQUIRE_THROWS_AS(p2.run_all(), config_error);
    auto m = nlohmann::json::parse(read_file(work / "out" / artifact::kManifest));
    REQUIRE(m["status"] == "partial");
    REQUIRE(m["error"]["stage"] == "partition");
}

TEST_CASE("day bounds narrow the stream before analysis", "[pipeline]") {
    auto work = fresh_dir("daybounds");
    write_file(work / "contacts.txt",
               "100 A B\n120 B C\n10000 A C\n10020 A B\n");
    PipelineConfig cfg = planted_config(work / "contacts.txt", work / "out");
    cfg.dt = 20;
    cfg.t_min = 100;
    cfg.t_max = 200;
    Pipeline p(cfg);
    p.ingest();
    p.write_manifest();
    REQUIRE(p.stream().events().size() == 2);
    REQUIRE(p.stream().node_count() == 3); // node set keeps out-of-day nodes
    auto summary = read_file(work / "out" / artifact::kSummary);
    REQUIRE_THAT(summary, Catch::Matchers::ContainsSubstring("events=2"));
    REQUIRE_THAT(summary, Catch::Matchers::ContainsSubstring("t_origin=100"));
}

TEST_CASE("similarity threshold switches to the sparse export", "[pipeline]") {
    auto work = fresh_dir("sparse");
    auto input = write_planted_stream(work);
    auto cfg = planted_config(input, work / "out");
    cfg.similarity_threshold = 0.9;
    Pipeline p(cfg);
    p.run_all();
    REQUIRE(fs::exists(work / "out" / artifact::kSimilaritySparse));
    REQUIRE(!fs::exists(work / "out" / artifact::kSimilarity));
    auto rows = csv::parse(read_file(work / "out" / artifact::kSimilaritySparse));
    REQUIRE(rows[0] == std::vector<std::string>{"u", "v", "similarity"});
    for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(std::stod(rows[i][2]) >= 0.9);
}

TEST_CASE("baseline-degree produces its own artifact set", "[pipeline]") {
    auto work = fresh_dir("baseline");
    auto input = write_planted_stream(work);
    auto cfg = planted_config(input, work / "out");
    cfg.with_baseline = true;
    Pipeline p(cfg);
    p.run_all();
    for (const char* name : {artifact::kBaselineSilhouette, artifact::kBaselineAssignments,
                             artifact::kBaselineContingency, artifact::kBaselineHeatmap})
        REQUIRE(fs::exists(work / "out" / name));
}

TEST_CASE("synth subcommand writes a loadable dataset", "[pipeline]") {
    auto work = fresh_dir("synthcmd");
    SynthSpec spec;
    spec.n = 10;
    spec.windows = 3;
    spec.club_sizes = {4, 4, 4};
    spec.seed = 5;
    write_synth(spec, (work / "data").string());
    REQUIRE(fs::exists(work / "data" / "contacts.txt"));
    REQUIRE(fs::exists(work / "data" / "ground_truth.csv"));
    auto parsed = parse_contacts(read_file(work / "data" / "contacts.txt"), spec.dt);
    REQUIRE(parsed.graph.node_count() == 10);
    auto truth = csv::parse(read_file(work / "data" / "ground_truth.csv"));
    REQUIRE(truth.size() == 1 + 3 * 10);
}
