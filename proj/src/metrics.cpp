#include "gse/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "gse/rng.hpp"

namespace gse {

namespace {

std::size_t effective_len(std::size_t size, std::size_t cutoff) {
    return cutoff == 0 ? size : std::min(size, cutoff);
}

std::string format_cell(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

double interval_volume_measure(const std::vector<SetValue>& seq, Eigen::Index n,
                               std::size_t cutoff) {
    const std::size_t len = effective_len(seq.size(), cutoff);
    if (len == 0) throw std::invalid_argument("interval_volume_measure: empty sequence");
    double acc = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        if (is_empty_marker(seq[k]))
            throw std::invalid_argument("interval_volume_measure: empty set in sequence");
        if (set_dim(seq[k]) != n)
            throw dimension_error("interval_volume_measure: dimension mismatch");
        const IntervalVector hull = interval_hull(seq[k]);
        double vol = 1.0;
        for (Eigen::Index i = 0; i < n; ++i) vol *= hull.hi[i] - hull.lo[i];
        acc += std::pow(vol, 1.0 / double(n));
    }
    return acc / double(len);
}

double mean_width_measure(const std::vector<SetValue>& seq,
                          const std::vector<Eigen::VectorXd>& directions, std::size_t cutoff) {
    const std::size_t len = effective_len(seq.size(), cutoff);
    if (len == 0) throw std::invalid_argument("mean_width_measure: empty sequence");
    if (directions.empty()) throw std::invalid_argument("mean_width_measure: no directions");
    double acc = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        if (is_empty_marker(seq[k]))
            throw std::invalid_argument("mean_width_measure: empty set in sequence");
        for (const auto& d : directions) acc += support(seq[k], d) + support(seq[k], -d);
    }
    return acc / (double(len) * double(directions.size()));
}

std::vector<double> normalize(const std::vector<double>& values) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : values)
        if (std::isfinite(v)) best = std::min(best, v);
    if (!std::isfinite(best))
        throw std::invalid_argument("normalize: no finite entry");
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(std::isfinite(v) ? v / best : v);
    return out;
}

std::vector<Eigen::VectorXd> sample_directions(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_directions: dimension must be >= 1");
    Rng rng(seed);
    std::vector<Eigen::VectorXd> out;
    out.reserve(std::size_t(10 * n));
    while (out.size() < std::size_t(10 * n)) {
        Eigen::VectorXd d(n);
        for (Eigen::Index i = 0; i < n; ++i) d[i] = rng.normal();
        const double norm = d.norm();
        if (norm < 1e-12) continue;
        out.push_back(d / norm);
    }
    return out;
}

std::string metric_table_csv(const std::vector<std::pair<std::string, MetricReport>>& rows) {
    std::string out = "method,time_ms,v_hat,w_hat\n";
    for (const auto& [name, r] : rows) {
        out += name;
        out += ',';
        out += format_cell(r.avgStepTimeMs);
        out += ',';
        out += format_cell(r.vHat);
        out += ',';
        out += format_cell(r.wHat);
        out += '\n';
    }
    return out;
}

}  // namespace gse
