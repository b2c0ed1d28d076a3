#include "lassodf/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace lassodf {
namespace oracle {

OracleEstimate df_covariance_mc(const McConfig& config, const Fitter& fitter) {
    if (config.replicates < 2) throw std::invalid_argument("need at least 2 replicates");
    if (config.sigma <= 0.0) throw std::invalid_argument("sigma must be positive");

    const Vector mu = config.X * config.true_beta;
    const int n = static_cast<int>(mu.size());
    const int max_failures =
        std::max(1, static_cast<int>(config.replicates / 100));

    double sum = 0.0;
    double sum_sq = 0.0;
    OracleEstimate out;
    for (int b = 0; b < config.replicates; ++b) {
        const Vector eps = gaussian_sampler(config.seed, n, config.sigma, b);
        double d;
        try {
            const Vector yhat = fitter(mu + eps);
            d = eps.dot(yhat) / (config.sigma * config.sigma);
        } catch (const std::exception&) {
            ++out.failures;
            if (out.failures > max_failures) {
                throw NoConvergence("too many failed replicates in covariance oracle");
            }
            continue;
        }
        sum += d;
        sum_sq += d * d;
        ++out.replicates;
    }
    out.value = sum / out.replicates;
    const double var =
        (sum_sq - sum * sum / out.replicates) / (out.replicates - 1);
    out.std_error = std::sqrt(std::max(var, 0.0) / out.replicates);
    return out;
}

namespace {

double central_sum(const Fitter& fitter, const Vector& y, const Vector& base,
                   double h) {
    double sum = 0.0;
    Vector point = y;
    for (int i = 0; i < y.size(); ++i) {
        point[i] = y[i] + h;
        const double fp = fitter(point)[i];
        point[i] = y[i] - h;
        const double fm = fitter(point)[i];
        point[i] = y[i];
        const double forward = (fp - base[i]) / h;
        const double backward = (base[i] - fm) / h;
        if (std::abs(forward - backward) > 0.5) {
            throw DiscontinuityDetected("one-sided divergence estimates differ at coordinate " +
                                        std::to_string(i));
        }
        sum += (fp - fm) / (2.0 * h);
    }
    return sum;
}

}  // namespace

double df_divergence_fd(const Fitter& fitter, const Vector& y, double h) {
    if (h <= 0.0) h = 1e-5 * (1.0 + y.cwiseAbs().maxCoeff());
    const Vector base = fitter(y);
    const double full = central_sum(fitter, y, base, h);
    const double half = central_sum(fitter, y, base, 0.5 * h);
    if (std::abs(full - half) <= 1e-3 * std::max(1.0, std::abs(half))) {
        return half;
    }
    return (4.0 * half - full) / 3.0;
}

}  // namespace oracle
}  // namespace lassodf
