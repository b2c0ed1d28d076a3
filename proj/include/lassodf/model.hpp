#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lassodf/numkit.hpp"

namespace lassodf {

// Design matrix plus response, with the affine standardization bookkeeping
// needed to map coefficients back to the raw scale.
struct Dataset {
    Matrix X;
    Vector y;
    Vector column_means;   // empty until standardize()
    Vector column_scales;  // multiplicative factor applied per column
    bool standardized = false;
    bool orthonormal = false;  // X^T X == I_p by construction

    int n() const { return static_cast<int>(X.rows()); }
    int p() const { return static_cast<int>(X.cols()); }
};

// Partition of {0..p-1} into G nonempty groups; membership need not be
// contiguous.
struct GroupStructure {
    std::vector<int> assignment;           // variable -> group id in [0, G)
    int num_groups = 0;
    std::vector<std::vector<int>> members; // group id -> sorted variable indices

    static GroupStructure from_assignment(std::vector<int> assignment);
    // Singleton groups, one per variable.
    static GroupStructure singletons(int p);
    // Consecutive blocks of size block; p must be a multiple of block.
    static GroupStructure contiguous_blocks(int p, int block);

    int size_of(int g) const { return static_cast<int>(members[g].size()); }
};

struct WeightScheme {
    enum class Kind { Fixed, InversePower, ExponentialDecay, GroupInverseNorm };

    Kind kind = Kind::Fixed;
    Vector fixed;        // Fixed only; strictly positive
    double alpha = 1.0;  // InversePower / ExponentialDecay

    static WeightScheme fixed_weights(Vector w);
    static WeightScheme unit();  // fixed weights all one, size deduced at use
    static WeightScheme inverse_power(double alpha);
    static WeightScheme exponential_decay(double alpha);
    static WeightScheme group_inverse_norm();

    bool data_driven() const { return kind != Kind::Fixed; }
};

struct PenaltySpec {
    enum class Kind { Lasso, AdaptiveLasso, GroupLasso, AdaptiveGroupLasso };

    Kind kind = Kind::Lasso;
    WeightScheme scheme;                    // adaptive variants
    std::optional<GroupStructure> groups;   // group variants
    Vector group_weights;                   // GroupLasso: length G, positive

    static PenaltySpec lasso();
    static PenaltySpec adaptive_lasso(WeightScheme scheme);
    static PenaltySpec group_lasso(GroupStructure groups, Vector weights);
    static PenaltySpec group_lasso(GroupStructure groups);  // unit weights
    static PenaltySpec adaptive_group_lasso(GroupStructure groups, WeightScheme scheme);

    bool grouped() const {
        return kind == Kind::GroupLasso || kind == Kind::AdaptiveGroupLasso;
    }
};

// Indices of nonzero coefficients (and groups), with the rank map pi used to
// address entries of active-set-restricted matrices.
struct ActiveSets {
    std::vector<int> variables;  // sorted
    std::vector<int> groups;     // sorted; empty for ungrouped fits
    std::vector<int> rank;       // length p; rank[j] = position of j in variables, -1 if inactive

    int count_variables() const { return static_cast<int>(variables.size()); }
    int count_groups() const { return static_cast<int>(groups.size()); }
    bool operator==(const ActiveSets& other) const {
        return variables == other.variables && groups == other.groups;
    }
};

// Relative threshold used to call a near-zero iterate exactly zero.
inline constexpr double kActiveThresholdRel = 1e-10;

ActiveSets derive_active_sets(const Vector& beta,
                              const GroupStructure* groups = nullptr);

struct FitResult {
    Vector beta;
    double gamma = 0.0;
    ActiveSets active;
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = true;
    // Realized per-variable (or per-group) penalty weights and the OLS
    // estimate they were derived from; needed downstream by the df formulas.
    Vector weights;
    Vector beta_ls;
};

struct DofEstimate {
    enum class Method {
        LassoCount,
        AdaptiveLasso,
        GroupLassoTrace,
        AdaptiveGroupLassoTrace,
    };

    double value = 0.0;
    int base_active = 0;   // |A| or |A_p|
    int group_active = 0;  // |A_G|, 0 for ungrouped
    double correction = 0.0;
    Method method = Method::LassoCount;
    bool near_transition = false;
};

struct CriterionValue {
    double gamma = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double rss = 0.0;
    double df_used = 0.0;
    bool analytic_df = true;
};

struct PathResult {
    std::vector<double> gammas;  // strictly decreasing
    std::vector<FitResult> fits;
    std::vector<DofEstimate> dofs;
    std::vector<double> transitions;  // midpoints of grid intervals where the active set changes
    std::vector<CriterionValue> criteria;
};

// Center columns to mean zero and rescale to l2 norm sqrt(n); with
// orthonormalize, replace X by its QR orthonormal factor so X^T X = I.
Dataset standardize(const Dataset& raw, bool orthonormalize = false);

// Map coefficients of a standardized fit back to raw-data scale; returns
// (intercept, slopes).
std::pair<double, Vector> destandardize(const Dataset& standardized_data,
                                        double y_mean, const Vector& beta);

}  // namespace lassodf
