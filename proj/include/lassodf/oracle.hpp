#pragma once

#include <cstdint>
#include <functional>

#include "lassodf/model.hpp"
#include "lassodf/rng.hpp"

namespace lassodf {
namespace oracle {

using Fitter = std::function<Vector(const Vector&)>;

struct McConfig {
    int replicates = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    Vector true_beta;
    Matrix X;
};

struct OracleEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int replicates = 0;  // successful ones
    int failures = 0;
};

// Monte Carlo covariance estimate of the effective degrees of freedom:
// draws y_b = X beta + eps_b and averages eps_b . yhat_b / sigma^2.
// Failed replicates are skipped; more than 1% of them aborts the run.
OracleEstimate df_covariance_mc(const McConfig& config, const Fitter& fitter);

// Central-difference divergence sum_i d yhat_i / d y_i. h <= 0 selects the
// default step 1e-5 (1 + ||y||_inf). A second pass at h/2 guards the step
// size; disagreement beyond 1e-3 relative triggers Richardson extrapolation.
double df_divergence_fd(const Fitter& fitter, const Vector& y, double h = 0.0);

}  // namespace oracle
}  // namespace lassodf
