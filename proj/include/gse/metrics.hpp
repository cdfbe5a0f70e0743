#ifndef GSE_METRICS_HPP_
#define GSE_METRICS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gse/sets.hpp"

namespace gse {

/// Conservatism summary of one (observer, benchmark, seed) run.
struct MetricReport {
    double avgStepTimeMs = 0.0;
    double vTilde = 0.0;
    double wTilde = 0.0;
    double vHat = 0.0;
    double wHat = 0.0;
    int completedSteps = 0;
    bool diverged = false;
};

/// Mean over steps of the n-th root of the interval-hull volume. A cutoff of 0
/// uses the whole sequence, otherwise only the first `cutoff` entries.
double interval_volume_measure(const std::vector<SetValue>& seq, Eigen::Index n,
                               std::size_t cutoff = 0);

/// Average support width rho(R,d) + rho(R,-d) over all steps and directions.
double mean_width_measure(const std::vector<SetValue>& seq,
                          const std::vector<Eigen::VectorXd>& directions,
                          std::size_t cutoff = 0);

/// Divides every finite entry by the finite minimum; infinities pass through.
std::vector<double> normalize(const std::vector<double>& values);

/// 10n unit directions from normalized Gaussian draws; deterministic per seed.
std::vector<Eigen::VectorXd> sample_directions(Eigen::Index n, std::uint64_t seed);

/// Rows "method,time_ms,v_hat,w_hat" with a header; infinities render as "inf".
std::string metric_table_csv(const std::vector<std::pair<std::string, MetricReport>>& rows);

}  // namespace gse

#endif  // GSE_METRICS_HPP_
