#ifndef GSE_OBSERVERS_HPP_
#define GSE_OBSERVERS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gse/benchmarks.hpp"
#include "gse/rangebound.hpp"
#include "gse/sets.hpp"
#include "gse/sysmodel.hpp"

namespace gse {

enum class ObserverMethod {
    ESOE,
    FRadA,
    FRadB,
    VolMinA,
    VolMinB,
    ZDC,
    CZDC,
    CZNA,
    CZNB,
    CZMV,
    FRadC,
    PDTDI,
    CZKH,
    ZBKH,
};

enum class MethodCategory { Intersection, Propagation, IntervalBased };

std::string method_name(ObserverMethod m);
std::optional<ObserverMethod> method_from_name(const std::string& name);
MethodCategory method_category(ObserverMethod m);
std::string category_name(MethodCategory c);
const std::vector<ObserverMethod>& all_methods();

struct ObserverConfig {
    ObserverMethod method = ObserverMethod::FRadA;
    double maxOrder = 30.0;
    int maxConstraints = 5;
    int partitions = 5;
    ReductionMethod reduction = ReductionMethod::PCA;
    std::optional<DCSplit> dcSplit;           // ZDC / CZDC
    std::optional<Augmentation> augmentation; // pDTDI redundancy lift
};

/// Builds the default config for a method on a benchmark (budgets, splits,
/// augmentations wired per the benchmark's setup).
ObserverConfig default_config(ObserverMethod m, const BenchmarkSpec& bench);

struct ObserverState {
    SetValue estimate = EmptySet{0};
    int step = 0;
    bool diverged = false;
    std::string reason;
};

// --- building blocks ----------------------------------------------------------

/// Strips of one measurement vector: row j gives { x | C_j x - y_j in -V_j }.
std::vector<Strip> measurement_strips(const Eigen::MatrixXd& C, const Eigen::VectorXd& y,
                                      const IntervalVector& V);

/// Mean-value extension of the dynamics over the estimate, plus disturbance.
SetValue predict_mve(const SetValue& X, const NonlinearDiscreteSystem& sys,
                     const Eigen::VectorXd& u);
/// First-order expansion with interval-Hessian remainder, plus disturbance.
/// Ellipsoid input yields an ellipsoid (outer sum enclosure).
SetValue predict_linremainder(const SetValue& X, const NonlinearDiscreteSystem& sys,
                              const Eigen::VectorXd& u);
/// Tangent/envelope bounds of a difference-of-convex split, plus disturbance.
SetValue predict_dc(const SetValue& X, const NonlinearDiscreteSystem& sys,
                    const Eigen::VectorXd& u, const DCSplit& split);

enum class GainRule { Frobenius, Volume, CzStrip };

/// Sequential per-strip tightening; result contains predicted ∩ strips.
SetValue correct_strip(const SetValue& predicted, const std::vector<Strip>& strips, GainRule rule);

/// Exact constrained-zonotope measurement intersection, then constraint
/// reduction to the given budgets.
SetValue correct_cz_exact(const ConstrainedZonotope& predicted, const Eigen::MatrixXd& C,
                          const Eigen::VectorXd& y, const IntervalVector& V, int maxConstraints,
                          double maxOrder);

/// Ellipsoid-strip fusion by trace-minimizing convex combination.
SetValue correct_ellipsoid(const Ellipsoid& predicted, const std::vector<Strip>& strips);

/// One-shot set-valued Luenberger update with an online Frobenius-minimizing
/// gain; zero `forced_gain` reproduces the prediction-only pipeline.
SetValue step_fradC(const Zonotope& X, const NonlinearDiscreteSystem& sys,
                    const Eigen::VectorXd& u, const Eigen::VectorXd& y,
                    const Eigen::MatrixXd* forced_gain = nullptr);

/// Per-coordinate slab partitioning with optional redundancy refinement, then
/// a box-strip clip with the measurement.
SetValue step_pdtdi(const IntervalVector& X, const NonlinearDiscreteSystem& sys,
                    const Eigen::VectorXd& u, const Eigen::VectorXd& y, int partitions,
                    const Eigen::MatrixXd* G_aug = nullptr);

/// Mixed-monotone bounds of the lifted map over the generator domain.
SetValue step_czkh(const ConstrainedZonotope& X, const NonlinearDiscreteSystem& sys,
                   const Eigen::VectorXd& u, const Eigen::VectorXd& y, int maxConstraints,
                   double maxOrder);
SetValue step_zbkh(const ZonotopeBundle& X, const NonlinearDiscreteSystem& sys,
                   const Eigen::VectorXd& u, const Eigen::VectorXd& y, double maxOrder,
                   ReductionMethod reduction);

// --- dispatcher ---------------------------------------------------------------

/// Initial estimate in the method's representation, corrected with the first
/// measurement.
ObserverState observer_init(const ObserverConfig& cfg, const NonlinearDiscreteSystem& sys,
                            const IntervalVector& R0, const Eigen::VectorXd& y0);

/// Predict + correct + reduce; absorbs every error into the divergence flag.
ObserverState observer_step(const ObserverConfig& cfg, const ObserverState& state,
                            const NonlinearDiscreteSystem& sys, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& y);

/// Estimate in the original state space (projects redundancy lifts).
SetValue reported_estimate(const ObserverConfig& cfg, const ObserverState& state);

}  // namespace gse

#endif  // GSE_OBSERVERS_HPP_
