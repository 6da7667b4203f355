#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "strich/stream_graph.hpp"
#include "strich/util.hpp"

namespace strich {

// Per-instant node states.
inline constexpr char kDense = 'D';
inline constexpr char kSparse = 'S';
inline constexpr char kPassive = 'P';

/// A node's temporal profile: one letter of {D,S,P} per grid step.
struct DSPProfile {
    NodeId node = 0;
    std::string word;
};

/// The three binary channel vectors of a profile, bit-packed. At every
/// instant exactly one channel is set.
class IndicatorTriple {
public:
    IndicatorTriple() = default;

    explicit IndicatorTriple(const std::string& word) {
        len_ = word.size();
        std::size_t nw = (len_ + 63) / 64;
        bits_[0].assign(nw, 0);
        bits_[1].assign(nw, 0);
        bits_[2].assign(nw, 0);
        for (std::size_t t = 0; t < len_; ++t) {
            int c;
            switch (word[t]) {
                case kDense: c = 0; break;
                case kSparse: c = 1; break;
                case kPassive: c = 2; break;
                default:
                    throw domain_error(std::string("invalid profile letter '") + word[t] + "'");
            }
            bits_[c][t / 64] |= std::uint64_t{1} << (t % 64);
            ++count_[c];
        }
    }

    std::size_t length() const { return len_; }
    long count_d() const { return count_[0]; }
    long count_s() const { return count_[1]; }
    long count_p() const { return count_[2]; }

    /// channel: 0 = D, 1 = S, 2 = P
    int at(int channel, std::size_t t) const {
        return static_cast<int>((bits_[channel][t / 64] >> (t % 64)) & 1u);
    }

    /// Dot product of one channel pair, exact in integers.
    static long channel_dot(const IndicatorTriple& a, const IndicatorTriple& b, int channel) {
        long dot = 0;
        const auto& x = a.bits_[channel];
        const auto& y = b.bits_[channel];
        for (std::size_t w = 0; w < x.size(); ++w) dot += std::popcount(x[w] & y[w]);
        return dot;
    }

    long channel_count(int channel) const { return count_[channel]; }

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> bits_[3];
    long count_[3] = {0, 0, 0};
};

inline IndicatorTriple indicators(const DSPProfile& profile) {
    return IndicatorTriple(profile.word);
}

/// Channel weights of the combined similarity; must sum to 1.
struct ChannelWeights {
    double alpha_d = 1.0 / 3.0;
    double alpha_s = 1.0 / 3.0;
    double alpha_p = 1.0 / 3.0;

    double alpha(int channel) const {
        return channel == 0 ? alpha_d : channel == 1 ? alpha_s : alpha_p;
    }
    void validate() const {
        if (alpha_d < 0 || alpha_s < 0 || alpha_p < 0)
            throw config_error("channel weights must be non-negative");
        if (std::abs(alpha_d + alpha_s + alpha_p - 1.0) > 1e-12)
            throw config_error("channel weights must sum to 1");
    }
};

namespace detail {

/// Cosine of one binary channel from its integer dot and popcounts.
/// Degenerate channels: both all-zero -> 1 (identical behaviour), one-sided
/// zero -> 0. sqrt(na*nb) keeps the self-cosine exactly 1.
inline double channel_cosine(long dot, long norm_a, long norm_b) {
    if (norm_a == 0 && norm_b == 0) return 1.0;
    if (norm_a == 0 || norm_b == 0) return 0.0;
    return static_cast<double>(dot) /
           std::sqrt(static_cast<double>(norm_a) * static_cast<double>(norm_b));
}

} // namespace detail

/// Weighted three-channel cosine similarity between two profiles (in [0,1],
/// symmetric, 1 on identical profiles).
inline double similarity(const IndicatorTriple& a, const IndicatorTriple& b,
                         const ChannelWeights& w) {
    if (a.length() != b.length())
        throw domain_error("profile length mismatch: " + std::to_string(a.length()) + " vs " +
                           std::to_string(b.length()));
    w.validate();
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        s += w.alpha(c) * detail::channel_cosine(IndicatorTriple::channel_dot(a, b, c),
                                                 a.channel_count(c), b.channel_count(c));
    return s;
}

/// Fractions of the period spent active / dense / sparse, plus the raw mean
/// instantaneous degree.
struct MembershipRates {
    double tau_a = 0.0; // stored as tau_d + tau_s so the identity is bitwise
    double tau_d = 0.0;
    double tau_s = 0.0;
    long theta_d = 0;
    long theta_s = 0;
    long theta_p = 0;
    double d_bar = 0.0;
};

/// Letter multiplicities and rates for one node. Cross-checks the labeling:
/// letter P at t must coincide with degree 0 at t.
inline MembershipRates membership_rates(const DSPProfile& profile, std::span<const int> degrees) {
    if (profile.word.size() != degrees.size())
        throw domain_error("profile/degree length mismatch");
    MembershipRates r;
    long degree_sum = 0;
    for (std::size_t t = 0; t < degrees.size(); ++t) {
        char c = profile.word[t];
        bool zero = degrees[t] == 0;
        if ((c == kPassive) != zero)
            throw consistency_error("node " + std::to_string(profile.node) + " at step " +
                                    std::to_string(t) + ": letter " + std::string(1, c) +
                                    " with degree " + std::to_string(degrees[t]));
        if (c == kDense) ++r.theta_d;
        else if (c == kSparse) ++r.theta_s;
        else ++r.theta_p;
        degree_sum += degrees[t];
    }
    const double L = static_cast<double>(degrees.size());
    if (!degrees.empty()) {
        r.tau_d = static_cast<double>(r.theta_d) / L;
        r.tau_s = static_cast<double>(r.theta_s) / L;
        r.tau_a = r.tau_d + r.tau_s;
        r.d_bar = static_cast<double>(degree_sum) / L;
    }
    return r;
}

/// Sample Pearson correlation; rejects constant sequences.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw domain_error("pearson: length mismatch");
    if (x.size() < 2) throw domain_error("pearson: need at least 2 samples");
    double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw domain_error("pearson undefined for a constant sequence");
    return sxy / std::sqrt(sxx * syy);
}

/// Cosine over real vectors with the same degenerate-vector convention as the
/// binary channels.
inline double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw domain_error("cosine: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 && nb == 0.0) return 1.0;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

/// Per-instant degree sequence of one node over the whole period.
inline std::vector<int> degree_sequence(const StreamGraph& sg, NodeId u) {
    sg.check_node(u);
    std::vector<int> d(sg.num_steps(), 0);
    for (const auto& e : sg.events())
        if (e.u == u || e.v == u) ++d[static_cast<std::size_t>(e.t / sg.dt())];
    return d;
}

/// Degree sequences for all nodes in one pass.
inline std::vector<std::vector<int>> degree_sequences(const StreamGraph& sg) {
    std::vector<std::vector<int>> d(sg.node_count(), std::vector<int>(sg.num_steps(), 0));
    for (const auto& e : sg.events()) {
        std::size_t step = static_cast<std::size_t>(e.t / sg.dt());
        ++d[static_cast<std::size_t>(e.u)][step];
        ++d[static_cast<std::size_t>(e.v)][step];
    }
    return d;
}

/// Appendix baseline: cosine similarity of the two per-instant degree vectors.
inline double degree_profile_similarity(const StreamGraph& sg, NodeId u, NodeId v) {
    auto du = degree_sequence(sg, u);
    auto dv = degree_sequence(sg, v);
    std::vector<double> x(du.begin(), du.end());
    std::vector<double> y(dv.begin(), dv.end());
    return cosine(x, y);
}

/// Dense pairwise profile similarity; pairs are independent and may be filled
/// concurrently.
inline SymMatrix similarity_matrix(const std::vector<IndicatorTriple>& triples,
                                   const ChannelWeights& w, unsigned workers = 1) {
    w.validate();
    const std::size_t n = triples.size();
    SymMatrix m(n);
    parallel_for(n, workers, [&](std::size_t i) {
        m.set(i, i, similarity(triples[i], triples[i], w));
        for (std::size_t j = i + 1; j < n; ++j)
            m.set(i, j, similarity(triples[i], triples[j], w));
    });
    return m;
}

/// Pairwise degree-vector cosine similarity (appendix baseline).
inline SymMatrix degree_similarity_matrix(const StreamGraph& sg, unsigned workers = 1) {
    const std::size_t n = sg.node_count();
    auto seqs = degree_sequences(sg);
    std::vector<std::vector<double>> vecs(n);
    for (std::size_t i = 0; i < n; ++i) vecs[i].assign(seqs[i].begin(), seqs[i].end());
    SymMatrix m(n);
    parallel_for(n, workers, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) m.set(i, j, cosine(vecs[i], vecs[j]));
    });
    return m;
}

} // namespace strich
