#include "predlim/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

namespace predlim {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::uint64_t pairs_of(std::uint64_t count) { return count * (count - 1) / 2; }

}  // namespace

std::string to_string(EntropyUnit unit) {
    switch (unit) {
        case EntropyUnit::nats: return "nats";
        case EntropyUnit::bits: return "bits";
        case EntropyUnit::normalized: return "normalized";
    }
    return "?";
}

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::sampen: return "sampen";
        case EstimatorKind::lz: return "lz";
        case EstimatorKind::perm_normalized: return "perm";
        case EstimatorKind::plugin: return "plugin";
    }
    return "?";
}

EntropyUnit parse_entropy_unit(const std::string& text) {
    if (text == "nats") return EntropyUnit::nats;
    if (text == "bits") return EntropyUnit::bits;
    if (text == "normalized") return EntropyUnit::normalized;
    throw std::invalid_argument("unknown entropy unit '" + text + "'");
}

EstimatorKind parse_estimator(const std::string& text) {
    if (text == "sampen") return EstimatorKind::sampen;
    if (text == "lz") return EstimatorKind::lz;
    if (text == "perm" || text == "perm_normalized") return EstimatorKind::perm_normalized;
    if (text == "plugin") return EstimatorKind::plugin;
    throw std::invalid_argument("unknown estimator '" + text + "'");
}

double EntropyEstimate::nats() const {
    switch (unit) {
        case EntropyUnit::nats: return value;
        case EntropyUnit::bits: return value * kLn2;
        case EntropyUnit::normalized: break;
    }
    throw UnitError("normalized permutation entropy has no nats/bits value");
}

double EntropyEstimate::bits() const {
    switch (unit) {
        case EntropyUnit::nats: return value / kLn2;
        case EntropyUnit::bits: return value;
        case EntropyUnit::normalized: break;
    }
    throw UnitError("normalized permutation entropy has no nats/bits value");
}

EntropyEstimate EntropyEstimate::converted(EntropyUnit target) const {
    if (target == unit) return *this;
    if (target == EntropyUnit::normalized) {
        throw UnitError("cannot convert an entropy in " + to_string(unit) + " to normalized");
    }
    EntropyEstimate out = *this;
    out.value = target == EntropyUnit::nats ? nats() : bits();
    out.unit = target;
    return out;
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("distribution: empty support");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("distribution: negative or non-finite probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("distribution: probabilities sum to " + std::to_string(sum));
    }
}

Distribution Distribution::from_weights(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("distribution: negative or non-finite weight");
        }
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("distribution: weights sum to zero");
    std::vector<double> probs(weights.begin(), weights.end());
    for (double& p : probs) p /= total;
    return Distribution(std::move(probs));
}

Distribution Distribution::uniform(std::size_t support) {
    if (support == 0) throw std::invalid_argument("distribution: empty support");
    return Distribution(std::vector<double>(support, 1.0 / static_cast<double>(support)));
}

double Distribution::max_probability() const {
    return *std::max_element(probs_.begin(), probs_.end());
}

EntropyEstimate plugin_entropy(const Distribution& d, EntropyUnit unit) {
    if (unit == EntropyUnit::normalized) throw UnitError("plugin entropy is in nats or bits");
    double h = 0.0;
    for (double p : d.probs()) {
        if (p > 0.0) h -= p * std::log(p);
    }
    EntropyEstimate est;
    est.value = std::max(h, 0.0);
    est.unit = EntropyUnit::nats;
    est.estimator = EstimatorKind::plugin;
    return est.converted(unit);
}

// Sample entropy -------------------------------------------------------------

namespace {

// Sum over equivalence classes of identical windows of C(count, 2).
std::uint64_t count_matching_pairs(std::span<const ItemIndex> x, std::size_t starts,
                                   std::size_t width) {
    std::vector<std::uint32_t> idx(starts);
    std::iota(idx.begin(), idx.end(), 0u);
    auto window_less = [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(x.begin() + a, x.begin() + a + width, x.begin() + b,
                                            x.begin() + b + width);
    };
    std::sort(idx.begin(), idx.end(), window_less);
    std::uint64_t total = 0;
    std::size_t run = 1;
    for (std::size_t k = 1; k <= idx.size(); ++k) {
        const bool same = k < idx.size() && std::equal(x.begin() + idx[k - 1],
                                                       x.begin() + idx[k - 1] + width,
                                                       x.begin() + idx[k]);
        if (same) {
            ++run;
        } else {
            total += pairs_of(run);
            run = 1;
        }
    }
    return total;
}

}  // namespace

SampleEntropyCounts sampen_counts(std::span<const ItemIndex> x, int m) {
    if (m < 1) throw std::invalid_argument("sampen: m must be >= 1");
    const auto mm = static_cast<std::size_t>(m);
    if (x.size() < mm + 2) {
        throw SequenceTooShort("sampen: need at least m + 2 = " + std::to_string(mm + 2) +
                               " symbols, got " + std::to_string(x.size()));
    }
    const std::size_t starts = x.size() - mm;
    SampleEntropyCounts counts;
    counts.matches_m = count_matching_pairs(x, starts, mm);
    counts.matches_m1 = count_matching_pairs(x, starts, mm + 1);
    counts.candidate_pairs = pairs_of(starts);
    return counts;
}

EntropyEstimate sampen(std::span<const ItemIndex> x, int m) {
    const auto counts = sampen_counts(x, m);
    EntropyEstimate est;
    est.unit = EntropyUnit::nats;
    est.estimator = EstimatorKind::sampen;
    est.params["m"] = m;
    if (counts.matches_m == 0 || counts.matches_m1 == 0) {
        est.value = std::log(static_cast<double>(counts.candidate_pairs));
        est.saturated = true;
    } else {
        est.value = -std::log(static_cast<double>(counts.matches_m1) /
                              static_cast<double>(counts.matches_m));
    }
    return est;
}

// Lempel-Ziv -----------------------------------------------------------------

namespace {

// Prefix-doubling suffix array over integer symbols.
std::vector<std::uint32_t> suffix_array(std::span<const ItemIndex> x) {
    const std::size_t n = x.size();
    std::vector<std::uint32_t> sa(n), rank(n), tmp(n);
    std::iota(sa.begin(), sa.end(), 0u);
    for (std::size_t i = 0; i < n; ++i) rank[i] = x[i];
    for (std::size_t k = 1;; k <<= 1) {
        auto key = [&](std::uint32_t i) {
            const std::int64_t second = i + k < n ? static_cast<std::int64_t>(rank[i + k]) : -1;
            return std::pair<std::int64_t, std::int64_t>(rank[i], second);
        };
        std::sort(sa.begin(), sa.end(), [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
        tmp[sa[0]] = 0;
        for (std::size_t i = 1; i < n; ++i) {
            tmp[sa[i]] = tmp[sa[i - 1]] + (key(sa[i - 1]) < key(sa[i]) ? 1 : 0);
        }
        rank.swap(tmp);
        if (rank[sa[n - 1]] == n - 1 || k >= n) break;
    }
    return sa;
}

// Kasai: lcp[r] = LCP(suffix sa[r-1], suffix sa[r]); lcp[0] = 0.
std::vector<std::uint32_t> lcp_array(std::span<const ItemIndex> x, const std::vector<std::uint32_t>& sa,
                                     std::vector<std::uint32_t>& rank) {
    const std::size_t n = x.size();
    rank.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) rank[sa[r]] = static_cast<std::uint32_t>(r);
    std::vector<std::uint32_t> lcp(n, 0);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::size_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && x[i + h] == x[j + h]) ++h;
        lcp[rank[i]] = static_cast<std::uint32_t>(h);
        if (h > 0) --h;
    }
    return lcp;
}

class RangeMin {
public:
    explicit RangeMin(const std::vector<std::uint32_t>& values) {
        const std::size_t n = values.size();
        table_.push_back(values);
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const auto& prev = table_.back();
            std::vector<std::uint32_t> next(n - len + 1);
            for (std::size_t i = 0; i + len <= n; ++i) {
                next[i] = std::min(prev[i], prev[i + len / 2]);
            }
            table_.push_back(std::move(next));
        }
    }

    // Minimum over the closed range [lo, hi].
    std::uint32_t query(std::size_t lo, std::size_t hi) const {
        const std::size_t len = hi - lo + 1;
        const std::size_t level = std::bit_width(len) - 1;
        return std::min(table_[level][lo], table_[level][hi + 1 - (std::size_t{1} << level)]);
    }

private:
    std::vector<std::vector<std::uint32_t>> table_;
};

}  // namespace

std::vector<std::size_t> lz_match_lengths(std::span<const ItemIndex> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> lambda(n, 1);
    if (n < 2) return lambda;
    const auto sa = suffix_array(x);
    std::vector<std::uint32_t> rank;
    const auto lcp = lcp_array(x, sa, rank);
    const RangeMin rmq(lcp);

    // The longest match against any earlier start is attained at the nearest
    // earlier start on either side in suffix order.
    std::set<std::uint32_t> seen;
    seen.insert(rank[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const std::uint32_t r = rank[i];
        std::size_t longest = 0;
        auto after = seen.upper_bound(r);
        if (after != seen.end()) longest = std::max<std::size_t>(longest, rmq.query(r + 1, *after));
        if (after != seen.begin()) {
            const std::uint32_t before = *std::prev(after);
            longest = std::max<std::size_t>(longest, rmq.query(before + 1, r));
        }
        // A full match to the end gives T - i + 2 in one-based terms, i.e. longest + 1.
        lambda[i] = longest + 1;
        seen.insert(r);
    }
    return lambda;
}

EntropyEstimate lz_entropy(std::span<const ItemIndex> x) {
    if (x.size() < 2) {
        throw SequenceTooShort("lz: need at least 2 symbols, got " + std::to_string(x.size()));
    }
    const auto lambda = lz_match_lengths(x);
    const double total = static_cast<double>(std::accumulate(lambda.begin(), lambda.end(), std::size_t{0}));
    const double n = static_cast<double>(x.size());
    EntropyEstimate est;
    est.value = n * std::log2(n) / total;
    est.unit = EntropyUnit::bits;
    est.estimator = EstimatorKind::lz;
    return est;
}

// Permutation entropy -------------------------------------------------------

std::uint32_t ordinal_pattern(std::span<const ItemIndex> window) {
    const std::size_t d = window.size();
    std::vector<std::uint32_t> order(d);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return window[a] < window[b]; });
    // Lehmer code of the permutation `order`.
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < d; ++i) {
        std::uint32_t smaller_after = 0;
        for (std::size_t j = i + 1; j < d; ++j) smaller_after += order[j] < order[i] ? 1 : 0;
        code = code * static_cast<std::uint32_t>(d - i) + smaller_after;
    }
    return code;
}

EntropyEstimate perm_entropy(std::span<const ItemIndex> x, int d, int tau) {
    if (d < 2 || d > 8) throw std::invalid_argument("perm: embedding dimension must be in [2, 8]");
    if (tau < 1) throw std::invalid_argument("perm: tau must be >= 1");
    const std::size_t span_len = static_cast<std::size_t>(d - 1) * static_cast<std::size_t>(tau);
    const std::size_t vectors = x.size() > span_len ? x.size() - span_len : 0;
    if (vectors < kMinPermVectors) {
        throw SequenceTooShort("perm: d=" + std::to_string(d) + " needs at least " +
                               std::to_string(kMinPermVectors) + " embedding vectors, got " +
                               std::to_string(vectors));
    }
    std::size_t factorial = 1;
    for (int k = 2; k <= d; ++k) factorial *= static_cast<std::size_t>(k);

    std::vector<std::uint64_t> freq(factorial, 0);
    std::vector<ItemIndex> window(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < vectors; ++i) {
        for (int k = 0; k < d; ++k) window[static_cast<std::size_t>(k)] = x[i + static_cast<std::size_t>(k * tau)];
        ++freq[ordinal_pattern(window)];
    }
    double h = 0.0;
    const double total = static_cast<double>(vectors);
    for (auto f : freq) {
        if (f == 0) continue;
        const double p = static_cast<double>(f) / total;
        h -= p * std::log(p);
    }
    EntropyEstimate est;
    est.value = std::clamp(h / std::log(static_cast<double>(factorial)), 0.0, 1.0);
    est.unit = EntropyUnit::normalized;
    est.estimator = EstimatorKind::perm_normalized;
    est.params["d"] = d;
    est.params["tau"] = tau;
    return est;
}

}  // namespace predlim
