#ifndef GSE_HARNESS_HPP_
#define GSE_HARNESS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gse/metrics.hpp"
#include "gse/observers.hpp"

namespace gse {

class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Per-method budget overrides from a [Method] config section.
struct MethodOverride {
    std::optional<double> maxOrder;
    std::optional<int> maxConstraints;
    std::optional<int> partitions;
    std::optional<ReductionMethod> reduction;
};

struct RunConfig {
    std::string benchmark;
    std::vector<std::string> methods;  // names as printed by list-methods
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    int steps = 100;
    int cutoff = 0;  // 0 disables the partial-horizon table
    std::string outDir = "out";
    std::uint64_t directionSeed = 1;
    int jobs = 1;
    double stepTimeoutS = 60.0;
    std::map<std::string, MethodOverride> overrides;
};

/// Flat key-value text: `key = value` lines, '#' comments, and optional
/// `[Method-Name]` sections carrying per-method budget overrides.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Throws config_error naming the violated constraint.
void validate_config(const RunConfig& cfg);

/// One grid cell result, kept for table assembly.
struct CellResult {
    std::string method;
    std::uint64_t seed = 0;
    MetricReport report;
    int divergenceStep = -1;
    std::string divergenceReason;
};

struct RunOutcome {
    std::vector<std::string> files;  // paths written, manifest last
    std::vector<CellResult> cells;
    bool anyFinite = false;
};

/// Runs the (method x seed) grid of one benchmark: per-step hull CSVs, summary
/// tables (full horizon and optional cutoff), per-seed raw rows, and a hash
/// manifest. The same trajectory and width directions are shared by every
/// method within a seed. Reruns are byte-identical.
RunOutcome run_comparison(const RunConfig& cfg);

ObserverConfig resolve_observer_config(ObserverMethod m, const BenchmarkSpec& bench,
                                       const RunConfig& cfg);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace gse

#endif  // GSE_HARNESS_HPP_
