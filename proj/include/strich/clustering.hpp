#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "strich/profiles.hpp"
#include "strich/rng.hpp"
#include "strich/util.hpp"

namespace strich {

/// Point in the channel-normalized embedding: three blocks of length L, block
/// X = R_X · sqrt(alpha_X)/|R_X| (zero block when the channel is empty), so
/// inner products realize the weighted cosine similarity for non-degenerate
/// channels.
struct Embedding {
    NodeId node = 0;
    std::vector<double> vec;
};

inline std::vector<Embedding> embed(const std::vector<IndicatorTriple>& triples,
                                    const ChannelWeights& w) {
    w.validate();
    std::vector<Embedding> out(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& tr = triples[i];
        const std::size_t L = tr.length();
        out[i].node = static_cast<NodeId>(i);
        out[i].vec.assign(3 * L, 0.0);
        for (int c = 0; c < 3; ++c) {
            long cnt = tr.channel_count(c);
            if (cnt == 0) continue;
            double scale = std::sqrt(w.alpha(c)) / std::sqrt(static_cast<double>(cnt));
            for (std::size_t t = 0; t < L; ++t)
                if (tr.at(c, t)) out[i].vec[static_cast<std::size_t>(c) * L + t] = scale;
        }
    }
    return out;
}

struct ClusterResult {
    int k = 0;
    std::vector<int> assignment; // node -> cluster in [0,k)
    double inertia = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline SymMatrix build_gram(const std::vector<Embedding>& points) {
    const std::size_t n = points.size();
    SymMatrix g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const auto& a = points[i].vec;
            const auto& b = points[j].vec;
            double dot = 0.0;
            for (std::size_t d = 0; d < a.size(); ++d) dot += a[d] * b[d];
            g.set(i, j, dot);
        }
    return g;
}

/// Lloyd's algorithm driven entirely by the Gram matrix: all point-centroid
/// distances reduce to Gram sums because centroids are means of assigned
/// points. Exactly the Euclidean k-means geometry, independent of the
/// embedding dimension.
inline ClusterResult kmeans_gram(const SymMatrix& gram, int k, std::uint64_t seed) {
    const std::size_t n = gram.size();
    if (k < 2 || static_cast<std::size_t>(k) > n)
        throw config_error("k=" + std::to_string(k) + " outside [2, " + std::to_string(n) + "]");
    Rng rng(seed);
    const std::size_t kk = static_cast<std::size_t>(k);

    auto point_dist2 = [&](std::size_t i, std::size_t j) {
        return std::max(0.0, gram.at(i, i) - 2.0 * gram.at(i, j) + gram.at(j, j));
    };

    // k-means++ seeding
    std::vector<std::size_t> centers;
    std::vector<char> is_center(n, 0);
    {
        std::uniform_int_distribution<std::size_t> first(0, n - 1);
        std::size_t c0 = first(rng);
        centers.push_back(c0);
        is_center[c0] = 1;
        std::vector<double> mind2(n);
        for (std::size_t i = 0; i < n; ++i) mind2[i] = point_dist2(i, c0);
        while (centers.size() < kk) {
            double total = 0.0;
            for (double d : mind2) total += d;
            std::size_t chosen = n;
            if (total > 0.0) {
                std::uniform_real_distribution<double> u(0.0, total);
                double x = u(rng);
                double cum = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    cum += mind2[i];
                    if (cum > x) { chosen = i; break; }
                }
                if (chosen == n) { // x landed on the tail of accumulated rounding
                    for (std::size_t i = n; i-- > 0;)
                        if (mind2[i] > 0.0) { chosen = i; break; }
                }
            }
            if (chosen == n) { // all remaining points duplicate a center
                for (std::size_t i = 0; i < n; ++i)
                    if (!is_center[i]) { chosen = i; break; }
            }
            centers.push_back(chosen);
            is_center[chosen] = 1;
            for (std::size_t i = 0; i < n; ++i)
                mind2[i] = std::min(mind2[i], point_dist2(i, chosen));
        }
    }

    std::vector<int> assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_j = 0;
        for (std::size_t j = 0; j < kk; ++j) {
            double d = point_dist2(i, centers[j]);
            if (d < best) { best = d; best_j = static_cast<int>(j); }
        }
        assign[i] = best_j;
    }

    std::vector<double> member_sum(n * kk); // Σ_{l in C_j} gram(i,l)
    std::vector<double> cluster_self(kk);   // Σ_{l,m in C_j} gram(l,m)
    std::vector<std::size_t> size(kk);
    auto refresh = [&](const std::vector<int>& a) {
        std::fill(member_sum.begin(), member_sum.end(), 0.0);
        std::fill(cluster_self.begin(), cluster_self.end(), 0.0);
        std::fill(size.begin(), size.end(), 0);
        for (std::size_t l = 0; l < n; ++l) {
            ++size[static_cast<std::size_t>(a[l])];
            auto row = gram.row(l);
            for (std::size_t i = 0; i < n; ++i)
                member_sum[i * kk + static_cast<std::size_t>(a[l])] += row[i];
        }
        for (std::size_t l = 0; l < n; ++l)
            cluster_self[static_cast<std::size_t>(a[l])] +=
                member_sum[l * kk + static_cast<std::size_t>(a[l])];
    };
    auto centroid_dist2 = [&](std::size_t i, std::size_t j) {
        double nj = static_cast<double>(size[j]);
        return gram.at(i, i) - 2.0 * member_sum[i * kk + j] / nj +
               cluster_self[j] / (nj * nj);
    };

    const int max_iter = 300;
    for (int iter = 0; iter < max_iter; ++iter) {
        refresh(assign);
        std::vector<int> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_j = 0;
            for (std::size_t j = 0; j < kk; ++j) {
                double d = centroid_dist2(i, j);
                if (d < best) { best = d; best_j = static_cast<int>(j); }
            }
            next[i] = best_j;
        }
        // reseed empty clusters from the point farthest from its centroid
        for (;;) {
            refresh(next);
            std::size_t empty = kk;
            for (std::size_t j = 0; j < kk; ++j)
                if (size[j] == 0) { empty = j; break; }
            if (empty == kk) break;
            double worst = -1.0;
            std::size_t worst_i = n;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t own = static_cast<std::size_t>(next[i]);
                if (size[own] < 2) continue;
                double d = centroid_dist2(i, own);
                if (d > worst) { worst = d; worst_i = i; }
            }
            if (worst_i == n) break; // nothing movable
            next[worst_i] = static_cast<int>(empty);
        }
        if (next == assign) break;
        assign = std::move(next);
    }

    refresh(assign);
    ClusterResult res;
    res.k = k;
    res.assignment = assign;
    res.seed = seed;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        inertia += centroid_dist2(i, static_cast<std::size_t>(assign[i]));
    res.inertia = std::max(0.0, inertia);
    return res;
}

} // namespace detail

/// Seeded k-means (k-means++ initialization, Lloyd iterations to an
/// assignment fixpoint or 300 rounds, farthest-point reseeding of empty
/// clusters). Deterministic given (embeddings, k, seed).
inline ClusterResult kmeans(const std::vector<Embedding>& points, int k, std::uint64_t seed) {
    return detail::kmeans_gram(detail::build_gram(points), k, seed);
}

/// d = 1 − s̄, clamped into [0,1] with an exactly zero diagonal.
inline SymMatrix distance_from_similarity(const SymMatrix& sim) {
    SymMatrix d(sim.size());
    for (std::size_t i = 0; i < sim.size(); ++i) {
        d.set(i, i, 0.0);
        for (std::size_t j = i + 1; j < sim.size(); ++j)
            d.set(i, j, std::max(0.0, 1.0 - sim.at(i, j)));
    }
    return d;
}

/// Mean silhouette score of a partition against an explicit distance matrix.
/// a(u): mean distance to u's own cluster (excluding u); b(u): smallest mean
/// distance to another cluster; singletons score 0.
inline double silhouette(const ClusterResult& res, const SymMatrix& dist) {
    if (res.k < 2) throw config_error("silhouette needs k >= 2");
    const std::size_t n = dist.size();
    if (res.assignment.size() != n)
        throw consistency_error("assignment does not cover the distance matrix");
    const std::size_t kk = static_cast<std::size_t>(res.k);
    std::vector<std::size_t> size(kk, 0);
    for (int a : res.assignment) ++size[static_cast<std::size_t>(a)];

    std::vector<double> scores(n, 0.0);
    std::vector<double> sums(kk);
    for (std::size_t u = 0; u < n; ++u) {
        std::fill(sums.begin(), sums.end(), 0.0);
        auto row = dist.row(u);
        for (std::size_t v = 0; v < n; ++v)
            sums[static_cast<std::size_t>(res.assignment[v])] += row[v];
        std::size_t own = static_cast<std::size_t>(res.assignment[u]);
        if (size[own] < 2) { scores[u] = 0.0; continue; }
        double a = sums[own] / static_cast<double>(size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < kk; ++j) {
            if (j == own || size[j] == 0) continue;
            b = std::min(b, sums[j] / static_cast<double>(size[j]));
        }
        double denom = std::max(a, b);
        scores[u] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return mean_of(scores);
}

/// Silhouette means over a k range, averaged over seeded runs.
struct SilhouetteCurve {
    std::vector<int> ks;
    std::vector<double> mean;
    std::vector<double> stddev; // population sd over runs
    std::vector<std::vector<double>> per_run;
    int argmax_k = 0;
    std::vector<int> local_maxima; // non-strict: >= both existing neighbours
};

/// Runs k-means `runs` times per k with seeds derived from
/// (master_seed, k, run), scores each run with the silhouette over `dist`,
/// and reports the averaged curve, its global argmax and all local maxima.
/// The (k, run) cells are independent; worker count cannot change any value.
inline SilhouetteCurve sweep_k(const std::vector<Embedding>& points, const SymMatrix& dist,
                               int k_lo, int k_hi, int runs, std::uint64_t master_seed,
                               unsigned workers = 1) {
    const std::size_t n = points.size();
    if (runs < 1) throw config_error("sweep needs runs >= 1");
    if (k_lo < 2 || static_cast<std::size_t>(k_hi) > n || k_lo > k_hi)
        throw config_error("k range [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                           "] outside [2, " + std::to_string(n) + "]");
    SymMatrix gram = detail::build_gram(points);

    SilhouetteCurve curve;
    for (int k = k_lo; k <= k_hi; ++k) curve.ks.push_back(k);
    const std::size_t nk = curve.ks.size();
    curve.per_run.assign(nk, std::vector<double>(static_cast<std::size_t>(runs), 0.0));

    parallel_for(nk * static_cast<std::size_t>(runs), workers, [&](std::size_t cell) {
        std::size_t ki = cell / static_cast<std::size_t>(runs);
        std::size_t run = cell % static_cast<std::size_t>(runs);
        int k = curve.ks[ki];
        std::uint64_t seed = mix_seed({master_seed, kSeedKmeans, static_cast<std::uint64_t>(k),
                                       static_cast<std::uint64_t>(run)});
        auto res = detail::kmeans_gram(gram, k, seed);
        curve.per_run[ki][run] = silhouette(res, dist);
    });

    curve.mean.resize(nk);
    curve.stddev.resize(nk);
    for (std::size_t ki = 0; ki < nk; ++ki) {
        double m = mean_of(curve.per_run[ki]);
        curve.mean[ki] = m;
        double var = 0.0;
        for (double s : curve.per_run[ki]) var += (s - m) * (s - m);
        curve.stddev[ki] = std::sqrt(var / static_cast<double>(runs));
    }
    std::size_t best = 0;
    for (std::size_t ki = 1; ki < nk; ++ki)
        if (curve.mean[ki] > curve.mean[best]) best = ki;
    curve.argmax_k = curve.ks[best];
    for (std::size_t ki = 0; ki < nk; ++ki) {
        bool left_ok = ki == 0 || curve.mean[ki] >= curve.mean[ki - 1];
        bool right_ok = ki + 1 == nk || curve.mean[ki] >= curve.mean[ki + 1];
        if (left_ok && right_ok) curve.local_maxima.push_back(curve.ks[ki]);
    }
    return curve;
}

} // namespace strich
