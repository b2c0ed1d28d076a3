#pragma once

#include <vector>

#include "lassodf/solvers.hpp"

namespace lassodf {
namespace selection {

enum class Criterion { AIC, BIC };
enum class DfSource { Analytic, ActiveSetSize };

// OLS residual variance ||y - X beta_ls||^2 / (n - p).
double estimate_sigma2(const Dataset& data);

CriterionValue criteria(const FitResult& fit, double df, double sigma2,
                        const Dataset& data, DfSource source = DfSource::Analytic);

std::vector<CriterionValue> path_criteria(const Dataset& data, const PathResult& path,
                                          double sigma2, DfSource source);

// Grid gamma minimizing the criterion; ties break toward larger gamma.
double select_gamma(const std::vector<CriterionValue>& values, Criterion criterion);
double select_gamma(const Dataset& data, const PathResult& path, double sigma2,
                    Criterion criterion, DfSource source);

struct CvResult {
    std::vector<double> gammas;
    std::vector<double> errors;  // mean squared leave-one-out prediction error
    double gamma_star = 0.0;
};

// Leave-one-out cross-validation over a fixed gamma grid. Adaptive weights
// are re-derived from each fold's own rows.
CvResult loo_cv(const Dataset& data, const PenaltySpec& penalty,
                const std::vector<double>& grid, const SolverConfig& config = {});

}  // namespace selection
}  // namespace lassodf
