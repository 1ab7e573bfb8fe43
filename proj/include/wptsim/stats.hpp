#ifndef WPTSIM_STATS_HPP
#define WPTSIM_STATS_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace wptsim {

/// One Monte-Carlo trial. A censored trial ran past the end of the available
/// data; `time_s` then holds the censoring limit (the remaining duration), not
/// a response time.
struct TrialOutcome {
    double time_s;
    bool censored;
};

struct CdfPoint {
    double t_s;
    double fraction;
};

/// Nearest-rank percentile of the uncensored values. Returns nullopt when the
/// requested level falls in the censored region (uncensored fraction < level),
/// mirroring the "-" convention for response times that exceed the
/// measurement.
std::optional<double> nearest_rank_percentile(const std::vector<TrialOutcome>& trials,
                                              double level);

/// Empirical CDF over the uncensored values: a step of 1/n_total at each
/// sorted value, plateauing at the final fraction out to `censor_limit_s`.
/// All-censored input yields a flat zero curve.
std::vector<CdfPoint> cdf_points(const std::vector<TrialOutcome>& trials, double censor_limit_s);

struct ResponseStats {
    std::size_t n_trials = 0;
    std::size_t n_censored = 0;
    std::vector<TrialOutcome> trials;  // sorted ascending by time, censored last among ties
    std::optional<double> p50_s;
    std::optional<double> p95_s;
    std::optional<double> p98_s;
    std::vector<CdfPoint> cdf;

    std::size_t uncensored_count() const { return n_trials - n_censored; }
};

/// Sorts the trials and fills percentiles and CDF.
ResponseStats make_response_stats(std::vector<TrialOutcome> trials, double censor_limit_s);

}  // namespace wptsim

#endif
