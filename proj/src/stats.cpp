#include "wptsim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "wptsim/errors.hpp"

namespace wptsim {

std::optional<double> nearest_rank_percentile(const std::vector<TrialOutcome>& trials,
                                              double level) {
    if (trials.empty()) throw InvalidArgument("percentile of zero trials");
    if (!(level > 0.0 && level <= 1.0))
        throw InvalidArgument("percentile level must lie in (0, 1]");
    std::vector<double> values;
    values.reserve(trials.size());
    for (const auto& t : trials) {
        if (!t.censored) values.push_back(t.time_s);
    }
    const double uncensored_fraction =
        static_cast<double>(values.size()) / static_cast<double>(trials.size());
    if (values.empty() || uncensored_fraction < level) return std::nullopt;
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(values.size())));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

std::vector<CdfPoint> cdf_points(const std::vector<TrialOutcome>& trials, double censor_limit_s) {
    if (trials.empty()) throw InvalidArgument("cdf of zero trials");
    std::vector<double> values;
    values.reserve(trials.size());
    for (const auto& t : trials) {
        if (!t.censored) values.push_back(t.time_s);
    }
    std::sort(values.begin(), values.end());

    std::vector<CdfPoint> cdf;
    cdf.reserve(values.size() + 2);
    cdf.push_back({0.0, 0.0});
    const double n = static_cast<double>(trials.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        cdf.push_back({values[i], static_cast<double>(i + 1) / n});
    if (cdf.back().t_s < censor_limit_s) cdf.push_back({censor_limit_s, cdf.back().fraction});
    return cdf;
}

ResponseStats make_response_stats(std::vector<TrialOutcome> trials, double censor_limit_s) {
    std::sort(trials.begin(), trials.end(), [](const TrialOutcome& a, const TrialOutcome& b) {
        if (a.time_s != b.time_s) return a.time_s < b.time_s;
        return a.censored < b.censored;
    });
    ResponseStats stats;
    stats.n_trials = trials.size();
    stats.n_censored = static_cast<std::size_t>(
        std::count_if(trials.begin(), trials.end(), [](const TrialOutcome& t) { return t.censored; }));
    stats.trials = std::move(trials);
    stats.p50_s = nearest_rank_percentile(stats.trials, 0.50);
    stats.p95_s = nearest_rank_percentile(stats.trials, 0.95);
    stats.p98_s = nearest_rank_percentile(stats.trials, 0.98);
    stats.cdf = cdf_points(stats.trials, censor_limit_s);
    return stats;
}

}  // namespace wptsim
