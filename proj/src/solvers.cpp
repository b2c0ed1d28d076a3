#include "lassodf/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lassodf/dof.hpp"

namespace lassodf {

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

Vector fit_ols(const Dataset& data) {
    return numkit::qr_least_squares(data.X, data.y);
}

Vector realize_variable_weights(const WeightScheme& scheme, const Vector& beta_ls) {
    const int p = static_cast<int>(beta_ls.size());
    Vector w(p);
    switch (scheme.kind) {
        case WeightScheme::Kind::Fixed:
            return scheme.fixed.size() ? scheme.fixed : Vector::Ones(p);
        case WeightScheme::Kind::InversePower:
            for (int j = 0; j < p; ++j) {
                const double z = std::abs(beta_ls[j]);
                if (z <= 1e-12) throw DegenerateWeight(j);
                w[j] = std::pow(z, -scheme.alpha);
            }
            return w;
        case WeightScheme::Kind::ExponentialDecay:
            for (int j = 0; j < p; ++j) {
                w[j] = std::exp(-scheme.alpha * std::abs(beta_ls[j]));
            }
            return w;
        case WeightScheme::Kind::GroupInverseNorm:
            throw std::invalid_argument("GroupInverseNorm needs a group structure");
    }
    throw std::logic_error("unreachable");
}

Vector realize_group_weights(const WeightScheme& scheme, const Vector& beta_ls,
                             const GroupStructure& groups) {
    const int G = groups.num_groups;
    if (scheme.kind == WeightScheme::Kind::Fixed) {
        return scheme.fixed.size() ? scheme.fixed : Vector::Ones(G);
    }
    Vector w(G);
    for (int g = 0; g < G; ++g) {
        double norm_sq = 0.0;
        for (int j : groups.members[g]) norm_sq += beta_ls[j] * beta_ls[j];
        const double z = std::sqrt(norm_sq);
        if (z <= 1e-12) throw DegenerateWeight(g);
        switch (scheme.kind) {
            case WeightScheme::Kind::GroupInverseNorm:
                w[g] = 1.0 / z;
                break;
            case WeightScheme::Kind::InversePower:
                w[g] = std::pow(z, -scheme.alpha);
                break;
            case WeightScheme::Kind::ExponentialDecay:
                w[g] = std::exp(-scheme.alpha * z);
                break;
            default:
                throw std::logic_error("unreachable");
        }
    }
    return w;
}

PreparedPenalty prepare_penalty(const Dataset& data, const PenaltySpec& penalty) {
    PreparedPenalty prep;
    prep.spec = penalty;
    switch (penalty.kind) {
        case PenaltySpec::Kind::Lasso:
            prep.weights = Vector::Ones(data.p());
            break;
        case PenaltySpec::Kind::AdaptiveLasso:
            if (penalty.scheme.data_driven()) {
                prep.beta_ls = fit_ols(data);
                prep.weights = realize_variable_weights(penalty.scheme, prep.beta_ls);
            } else {
                prep.weights = penalty.scheme.fixed.size() ? penalty.scheme.fixed
                                                           : Vector::Ones(data.p());
            }
            break;
        case PenaltySpec::Kind::GroupLasso:
            prep.weights = penalty.group_weights;
            break;
        case PenaltySpec::Kind::AdaptiveGroupLasso:
            if (penalty.scheme.data_driven()) {
                prep.beta_ls = fit_ols(data);
                prep.weights =
                    realize_group_weights(penalty.scheme, prep.beta_ls, *penalty.groups);
            } else {
                prep.weights = penalty.scheme.fixed.size()
                                   ? penalty.scheme.fixed
                                   : Vector::Ones(penalty.groups->num_groups);
            }
            break;
    }
    return prep;
}

double kkt_residual_lasso(const Dataset& data, const Vector& w, double gamma,
                          const Vector& beta) {
    const Vector r = data.y - data.X * beta;
    const Vector c = data.X.transpose() * r;
    const double active_tol =
        kActiveThresholdRel * std::max(1.0, beta.cwiseAbs().maxCoeff());
    double res = 0.0;
    for (int j = 0; j < beta.size(); ++j) {
        if (std::abs(beta[j]) > active_tol) {
            const double sgn = beta[j] > 0 ? 1.0 : -1.0;
            res = std::max(res, std::abs(-c[j] + gamma * w[j] * sgn));
        } else {
            res = std::max(res, std::abs(c[j]) - gamma * w[j]);
        }
    }
    return std::max(res, 0.0);
}

double kkt_residual_group(const Dataset& data, const GroupStructure& groups,
                          const Vector& w, double gamma, const Vector& beta) {
    const Vector r = data.y - data.X * beta;
    const double active_tol =
        kActiveThresholdRel * std::max(1.0, beta.cwiseAbs().maxCoeff());
    double res = 0.0;
    for (int g = 0; g < groups.num_groups; ++g) {
        const auto& members = groups.members[g];
        const int ng = static_cast<int>(members.size());
        Vector bg(ng), cg(ng);
        for (int i = 0; i < ng; ++i) {
            bg[i] = beta[members[i]];
            cg[i] = data.X.col(members[i]).dot(r);
        }
        const double bn = bg.norm();
        if (bn > active_tol) {
            res = std::max(res, (-cg + gamma * w[g] * bg / bn).norm());
        } else {
            res = std::max(res, cg.norm() - gamma * w[g]);
        }
    }
    return std::max(res, 0.0);
}

FitResult fit_weighted_lasso(const Dataset& data, const Vector& w, double gamma,
                             const SolverConfig& config, const Vector* warm_start) {
    const int p = data.p();
    if (w.size() != p) throw std::invalid_argument("weight length mismatch");
    if ((w.array() <= 0.0).any() || !w.allFinite()) {
        throw std::invalid_argument("weights must be finite and positive");
    }
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");

    Vector beta = warm_start ? *warm_start : Vector::Zero(p);
    Vector colsq(p);
    for (int j = 0; j < p; ++j) colsq[j] = data.X.col(j).squaredNorm();
    Vector r = data.y - data.X * beta;

    FitResult out;
    out.gamma = gamma;
    out.converged = false;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        for (int j = 0; j < p; ++j) {
            const double bj = beta[j];
            const double zj = data.X.col(j).dot(r) + colsq[j] * bj;
            const double nb = soft_threshold(zj, gamma * w[j]) / colsq[j];
            if (nb != bj) {
                r += data.X.col(j) * (bj - nb);
                beta[j] = nb;
            }
        }
        out.kkt_residual = kkt_residual_lasso(data, w, gamma, beta);
        if (out.kkt_residual <= config.tol) {
            out.converged = true;
            ++iter;
            break;
        }
    }
    out.beta = std::move(beta);
    out.iterations = iter;
    out.active = derive_active_sets(out.beta);
    out.weights = w;
    return out;
}

FitResult fit_adaptive_lasso(const Dataset& data, const WeightScheme& scheme,
                             double gamma, const SolverConfig& config) {
    PreparedPenalty prep = prepare_penalty(data, PenaltySpec::adaptive_lasso(scheme));
    FitResult out = fit_weighted_lasso(data, prep.weights, gamma, config);
    out.beta_ls = std::move(prep.beta_ls);
    return out;
}

namespace {

struct GroupFactors {
    Matrix S;        // X_g^T X_g
    Matrix Q;        // eigenvectors of S
    Vector lambda;   // eigenvalues, ascending
};

// Exact minimizer of 0.5 b^T S b - z^T b + kappa ||b||_2, for ||z|| > kappa.
// The stationarity condition (S + (kappa/t) I) b = z with t = ||b|| reduces to
// a monotone scalar root find in t.
Vector solve_group_block(const GroupFactors& f, const Vector& z, double kappa) {
    const double lam_min = f.lambda[0];
    const double lam_max = f.lambda[f.lambda.size() - 1];
    const Vector zt = f.Q.transpose() * z;

    if (lam_min > 1e-10 * std::max(1.0, lam_max)) {
        auto phi = [&](double t) {
            double s = 0.0;
            for (int i = 0; i < zt.size(); ++i) {
                const double d = f.lambda[i] * t + kappa;
                s += zt[i] * zt[i] / (d * d);
            }
            return s;
        };
        double lo = 0.0;
        double hi = z.norm() / lam_min;  // phi(hi) <= 1
        double t = std::max((z.norm() - kappa) / lam_max, 1e-3 * hi);
        for (int it = 0; it < 200; ++it) {
            const double val = phi(t) - 1.0;
            if (std::abs(val) < 1e-15) break;
            if (val > 0.0) lo = t; else hi = t;
            double dphi = 0.0;
            for (int i = 0; i < zt.size(); ++i) {
                const double d = f.lambda[i] * t + kappa;
                dphi += -2.0 * f.lambda[i] * zt[i] * zt[i] / (d * d * d);
            }
            double step = dphi != 0.0 ? t - val / dphi : 0.0;
            t = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
            if (hi - lo < 1e-16 * hi) break;
        }
        Vector bt(zt.size());
        for (int i = 0; i < zt.size(); ++i) {
            bt[i] = t * zt[i] / (f.lambda[i] * t + kappa);
        }
        return f.Q * bt;
    }

    // Ill-conditioned block: inner proximal gradient.
    Vector b = Vector::Zero(z.size());
    const double step = 1.0 / std::max(lam_max, 1e-12);
    for (int it = 0; it < 5000; ++it) {
        Vector v = b - step * (f.S * b - z);
        const double vn = v.norm();
        Vector nb = vn > step * kappa ? Vector((1.0 - step * kappa / vn) * v)
                                      : Vector(Vector::Zero(v.size()));
        if ((nb - b).cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
            b = std::move(nb);
            break;
        }
        b = std::move(nb);
    }
    return b;
}

}  // namespace

FitResult fit_group_lasso(const Dataset& data, const GroupStructure& groups,
                          const Vector& w, double gamma, const SolverConfig& config,
                          const Vector* warm_start) {
    const int p = data.p();
    if (static_cast<int>(groups.assignment.size()) != p) {
        throw std::invalid_argument("group assignment length mismatch");
    }
    if (w.size() != groups.num_groups || (w.array() <= 0.0).any()) {
        throw std::invalid_argument("group weights must be positive, length G");
    }
    if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");

    std::vector<GroupFactors> factors(groups.num_groups);
    std::vector<Matrix> Xg(groups.num_groups);
    for (int g = 0; g < groups.num_groups; ++g) {
        const auto& members = groups.members[g];
        Matrix xg(data.n(), members.size());
        for (size_t i = 0; i < members.size(); ++i) xg.col(i) = data.X.col(members[i]);
        factors[g].S = xg.transpose() * xg;
        Eigen::SelfAdjointEigenSolver<Matrix> es(factors[g].S);
        factors[g].Q = es.eigenvectors();
        factors[g].lambda = es.eigenvalues();
        Xg[g] = std::move(xg);
    }

    Vector beta = warm_start ? *warm_start : Vector::Zero(p);
    Vector r = data.y - data.X * beta;

    FitResult out;
    out.gamma = gamma;
    out.converged = false;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        for (int g = 0; g < groups.num_groups; ++g) {
            const auto& members = groups.members[g];
            const int ng = static_cast<int>(members.size());
            Vector bg(ng);
            for (int i = 0; i < ng; ++i) bg[i] = beta[members[i]];
            const Vector z = Xg[g].transpose() * r + factors[g].S * bg;
            const double kappa = gamma * w[g];
            Vector nb =
                z.norm() <= kappa ? Vector(Vector::Zero(ng)) : solve_group_block(factors[g], z, kappa);
            if ((nb - bg).cwiseAbs().maxCoeff() > 0.0) {
                r += Xg[g] * (bg - nb);
                for (int i = 0; i < ng; ++i) beta[members[i]] = nb[i];
            }
        }
        out.kkt_residual = kkt_residual_group(data, groups, w, gamma, beta);
        if (out.kkt_residual <= config.tol) {
            out.converged = true;
            ++iter;
            break;
        }
    }
    out.beta = std::move(beta);
    out.iterations = iter;
    out.active = derive_active_sets(out.beta, &groups);
    out.weights = w;
    return out;
}

FitResult fit_adaptive_group_lasso(const Dataset& data, const GroupStructure& groups,
                                   const WeightScheme& scheme, double gamma,
                                   const SolverConfig& config) {
    PreparedPenalty prep =
        prepare_penalty(data, PenaltySpec::adaptive_group_lasso(groups, scheme));
    FitResult out = fit_group_lasso(data, groups, prep.weights, gamma, config);
    out.beta_ls = std::move(prep.beta_ls);
    return out;
}

FitResult fit_prepared(const Dataset& data, const PreparedPenalty& prep, double gamma,
                       const SolverConfig& config, const Vector* warm_start) {
    FitResult out;
    if (prep.spec.grouped()) {
        out = fit_group_lasso(data, *prep.spec.groups, prep.weights, gamma, config,
                              warm_start);
    } else {
        out = fit_weighted_lasso(data, prep.weights, gamma, config, warm_start);
    }
    out.beta_ls = prep.beta_ls;
    return out;
}

FitResult fit(const Dataset& data, const PenaltySpec& penalty, double gamma,
              const SolverConfig& config) {
    return fit_prepared(data, prepare_penalty(data, penalty), gamma, config);
}

double null_threshold(const Dataset& data, const PreparedPenalty& prep) {
    const Vector c = data.X.transpose() * data.y;
    double gmax = 0.0;
    if (prep.spec.grouped()) {
        const GroupStructure& groups = *prep.spec.groups;
        for (int g = 0; g < groups.num_groups; ++g) {
            double nsq = 0.0;
            for (int j : groups.members[g]) nsq += c[j] * c[j];
            gmax = std::max(gmax, std::sqrt(nsq) / prep.weights[g]);
        }
    } else {
        for (int j = 0; j < c.size(); ++j) {
            gmax = std::max(gmax, std::abs(c[j]) / prep.weights[j]);
        }
    }
    return gmax;
}

std::vector<double> gamma_grid(double gamma_max, const SolverConfig& config) {
    std::vector<double> grid(config.grid_size);
    for (int i = 0; i < config.grid_size; ++i) {
        const double frac = config.grid_size > 1
                                ? static_cast<double>(i) / (config.grid_size - 1)
                                : 0.0;
        grid[i] = gamma_max * std::pow(10.0, -config.grid_decades * frac);
    }
    return grid;
}

std::vector<double> detect_transitions(const PathResult& path) {
    std::vector<double> out;
    for (size_t i = 1; i < path.fits.size(); ++i) {
        if (!(path.fits[i].active == path.fits[i - 1].active)) {
            out.push_back(0.5 * (path.gammas[i] + path.gammas[i - 1]));
        }
    }
    return out;
}

PathResult compute_path(const Dataset& data, const PenaltySpec& penalty,
                        const SolverConfig& config) {
    const PreparedPenalty prep = prepare_penalty(data, penalty);
    const double gmax = null_threshold(data, prep);

    PathResult path;
    path.gammas = gamma_grid(gmax, config);
    path.fits.reserve(path.gammas.size());
    const Vector* warm = nullptr;
    for (double g : path.gammas) {
        path.fits.push_back(fit_prepared(data, prep, g, config, warm));
        warm = &path.fits.back().beta;
    }
    path.transitions = detect_transitions(path);

    path.dofs.reserve(path.fits.size());
    for (size_t i = 0; i < path.fits.size(); ++i) {
        DofEstimate est = dof::estimate(data, prep, path.fits[i]);
        for (double t : path.transitions) {
            if (std::abs(path.gammas[i] - t) <= 1e-9) est.near_transition = true;
        }
        path.dofs.push_back(est);
    }
    return path;
}

}  // namespace lassodf
