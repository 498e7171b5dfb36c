#pragma once

#include <span>
#include <vector>

namespace qrtm::numerics {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

MeanStderr mean_stderr(std::span<const double> xs);

/// Standard error of an empirical proportion p over n trials.
double binomial_stderr(double p, std::size_t n);

/// Value t such that the fraction of samples strictly above t is at most
/// `tail` (upper-tail order statistic). Samples need not be sorted.
double upper_quantile(std::span<const double> samples, double tail);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Area under the empirical ROC, P(authentic > spoof) + 0.5 P(tie)
/// (Mann-Whitney form).
double empirical_auc(std::span<const double> authentic, std::span<const double> spoof);

}  // namespace qrtm::numerics
