#pragma once

#include <cstdint>
#include <vector>

namespace betadt {

struct SampleSummary {
  double mean = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
  std::int64_t n = 0;
};

// Mean, unbiased variance and standard error of the mean, summed in index order.
SampleSummary summarize(const std::vector<double>& x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
// distribution and Stephens' small-sample correction.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

}  // namespace betadt
