#include "lassodf/selection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lassodf {
namespace selection {

double estimate_sigma2(const Dataset& data) {
    const int n = data.n();
    const int p = data.p();
    if (n <= p) throw InsufficientDof("need n > p to estimate the noise variance");
    const Vector beta_ls = numkit::qr_least_squares(data.X, data.y);
    return (data.y - data.X * beta_ls).squaredNorm() / (n - p);
}

CriterionValue criteria(const FitResult& fit, double df, double sigma2,
                        const Dataset& data, DfSource source) {
    if (sigma2 <= 0.0) throw std::invalid_argument("sigma2 must be positive");
    const int n = data.n();
    CriterionValue out;
    out.gamma = fit.gamma;
    out.rss = (data.y - data.X * fit.beta).squaredNorm();
    out.df_used = df;
    out.analytic_df = source == DfSource::Analytic;
    const double gof = out.rss / (n * sigma2);
    out.aic = gof + 2.0 * df / n;
    out.bic = gof + std::log(static_cast<double>(n)) * df / n;
    return out;
}

std::vector<CriterionValue> path_criteria(const Dataset& data, const PathResult& path,
                                          double sigma2, DfSource source) {
    std::vector<CriterionValue> out;
    out.reserve(path.fits.size());
    for (size_t i = 0; i < path.fits.size(); ++i) {
        const double df = source == DfSource::Analytic
                              ? path.dofs[i].value
                              : path.fits[i].active.count_variables();
        out.push_back(criteria(path.fits[i], df, sigma2, data, source));
    }
    return out;
}

double select_gamma(const std::vector<CriterionValue>& values, Criterion criterion) {
    if (values.empty()) throw std::invalid_argument("empty criterion table");
    double best = std::numeric_limits<double>::infinity();
    double gamma_star = 0.0;
    for (const CriterionValue& v : values) {
        const double c = criterion == Criterion::AIC ? v.aic : v.bic;
        if (c < best || (c == best && v.gamma > gamma_star)) {
            best = c;
            gamma_star = v.gamma;
        }
    }
    return gamma_star;
}

double select_gamma(const Dataset& data, const PathResult& path, double sigma2,
                    Criterion criterion, DfSource source) {
    return select_gamma(path_criteria(data, path, sigma2, source), criterion);
}

CvResult loo_cv(const Dataset& data, const PenaltySpec& penalty,
                const std::vector<double>& grid, const SolverConfig& config) {
    const int n = data.n();
    const int p = data.p();
    if (n < 3) throw std::invalid_argument("too few rows for leave-one-out");

    CvResult out;
    out.gammas = grid;
    out.errors.assign(grid.size(), 0.0);

    Dataset fold;
    fold.X.resize(n - 1, p);
    fold.y.resize(n - 1);
    fold.standardized = data.standardized;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int row = 0; row < n; ++row) {
            if (row == i) continue;
            fold.X.row(r) = data.X.row(row);
            fold.y[r] = data.y[row];
            ++r;
        }
        const PreparedPenalty prep = prepare_penalty(fold, penalty);
        const Vector* warm = nullptr;
        Vector prev;
        for (size_t g = 0; g < grid.size(); ++g) {
            const FitResult fit = fit_prepared(fold, prep, grid[g], config, warm);
            prev = fit.beta;
            warm = &prev;
            const double pred = data.X.row(i).dot(fit.beta);
            const double err = data.y[i] - pred;
            out.errors[g] += err * err / n;
        }
    }

    double best = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < grid.size(); ++g) {
        if (out.errors[g] < best ||
            (out.errors[g] == best && grid[g] > out.gamma_star)) {
            best = out.errors[g];
            out.gamma_star = grid[g];
        }
    }
    return out;
}

}  // namespace selection
}  // namespace lassodf
