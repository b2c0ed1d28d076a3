#pragma once

#include <vector>

#include "lassodf/model.hpp"

namespace lassodf {

struct SolverConfig {
    int max_iterations = 10000;
    double tol = 1e-8;        // KKT residual
    int grid_size = 100;
    double grid_decades = 4;  // log10 span of the gamma grid below gamma_max
};

double soft_threshold(double z, double t);

// Plain least squares; thin wrapper kept so callers share one error contract.
Vector fit_ols(const Dataset& data);

// Penalty weights realized against the data (OLS-based for adaptive schemes),
// so a whole path reuses one weight computation.
struct PreparedPenalty {
    PenaltySpec spec;
    Vector weights;  // per variable (lasso kinds) or per group (group kinds)
    Vector beta_ls;  // empty unless a data-driven scheme was realized
};

PreparedPenalty prepare_penalty(const Dataset& data, const PenaltySpec& penalty);

// Per-variable weights for an adaptive scheme evaluated at |beta_ls|.
Vector realize_variable_weights(const WeightScheme& scheme, const Vector& beta_ls);
// Per-group weights evaluated at ||beta_ls_g||_2.
Vector realize_group_weights(const WeightScheme& scheme, const Vector& beta_ls,
                             const GroupStructure& groups);

FitResult fit_weighted_lasso(const Dataset& data, const Vector& w, double gamma,
                             const SolverConfig& config = {},
                             const Vector* warm_start = nullptr);

FitResult fit_adaptive_lasso(const Dataset& data, const WeightScheme& scheme,
                             double gamma, const SolverConfig& config = {});

FitResult fit_group_lasso(const Dataset& data, const GroupStructure& groups,
                          const Vector& w, double gamma,
                          const SolverConfig& config = {},
                          const Vector* warm_start = nullptr);

FitResult fit_adaptive_group_lasso(const Dataset& data, const GroupStructure& groups,
                                   const WeightScheme& scheme, double gamma,
                                   const SolverConfig& config = {});

// Dispatch on the penalty kind with weights already realized.
FitResult fit_prepared(const Dataset& data, const PreparedPenalty& prep, double gamma,
                       const SolverConfig& config = {},
                       const Vector* warm_start = nullptr);

FitResult fit(const Dataset& data, const PenaltySpec& penalty, double gamma,
              const SolverConfig& config = {});

// Smallest gamma for which the penalized solution is identically zero.
double null_threshold(const Dataset& data, const PreparedPenalty& prep);

std::vector<double> gamma_grid(double gamma_max, const SolverConfig& config);

// Warm-started fits over a descending gamma grid, with per-point df estimates
// and active-set transition midpoints.
PathResult compute_path(const Dataset& data, const PenaltySpec& penalty,
                        const SolverConfig& config = {});

std::vector<double> detect_transitions(const PathResult& path);

// KKT residual of a candidate solution (also used as an external certificate).
double kkt_residual_lasso(const Dataset& data, const Vector& w, double gamma,
                          const Vector& beta);
double kkt_residual_group(const Dataset& data, const GroupStructure& groups,
                          const Vector& w, double gamma, const Vector& beta);

}  // namespace lassodf
