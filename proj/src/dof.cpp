#include "lassodf/dof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lassodf {
namespace dof {

namespace {

Matrix active_columns(const Dataset& data, const std::vector<int>& variables) {
    Matrix Xa(data.n(), variables.size());
    for (size_t i = 0; i < variables.size(); ++i) Xa.col(i) = data.X.col(variables[i]);
    return Xa;
}

Vector subvector(const Vector& full, const std::vector<int>& idx) {
    Vector out(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) out[i] = full[idx[i]];
    return out;
}

double realized_group_weight(const WeightScheme& scheme, const Vector& beta_ls,
                             const GroupStructure& groups, int g) {
    if (scheme.kind == WeightScheme::Kind::Fixed) {
        return scheme.fixed.size() ? scheme.fixed[g] : 1.0;
    }
    double nsq = 0.0;
    for (int j : groups.members[g]) nsq += beta_ls[j] * beta_ls[j];
    return weight_and_derivative(scheme, std::sqrt(nsq)).first;
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::pair<double, double> weight_and_derivative(const WeightScheme& scheme, double z) {
    if (scheme.kind == WeightScheme::Kind::Fixed) return {1.0, 0.0};
    if (z <= 1e-12) throw DegenerateWeight(-1);
    switch (scheme.kind) {
        case WeightScheme::Kind::InversePower:
            return {std::pow(z, -scheme.alpha),
                    -scheme.alpha * std::pow(z, -scheme.alpha - 1.0)};
        case WeightScheme::Kind::ExponentialDecay: {
            const double w = std::exp(-scheme.alpha * z);
            return {w, -scheme.alpha * w};
        }
        case WeightScheme::Kind::GroupInverseNorm:
            return {1.0 / z, -1.0 / (z * z)};
        default:
            throw std::logic_error("unreachable");
    }
}

DofEstimate df_lasso(const ActiveSets& active) {
    DofEstimate est;
    est.method = DofEstimate::Method::LassoCount;
    est.base_active = active.count_variables();
    est.value = est.base_active;
    return est;
}

DofEstimate df_adaptive_lasso(const FitResult& fit, const Vector& beta_ls,
                              const WeightScheme& scheme, double gamma, Design design,
                              const Matrix& gram_active_inverse) {
    DofEstimate est;
    est.method = DofEstimate::Method::AdaptiveLasso;
    est.base_active = fit.active.count_variables();
    if (est.base_active == 0) return est;

    double correction = 0.0;
    if (scheme.kind != WeightScheme::Kind::Fixed) {
        for (int j : fit.active.variables) {
            const double dw = weight_and_derivative(scheme, std::abs(beta_ls[j])).second;
            if (design == Design::Orthonormal) {
                correction -= gamma * dw;
            } else {
                const int r = fit.active.rank[j];
                correction -= gamma * sgn(fit.beta[j]) * sgn(beta_ls[j]) * dw *
                              gram_active_inverse(r, r);
            }
        }
    }
    est.correction = correction;
    est.value = est.base_active + correction;
    return est;
}

DofEstimate df_adaptive_lasso(const Dataset& data, const FitResult& fit,
                              const Vector& beta_ls, const WeightScheme& scheme,
                              double gamma) {
    Matrix ginv;
    if (design_of(data) == Design::General && scheme.data_driven() &&
        fit.active.count_variables() > 0) {
        const Matrix Xa = active_columns(data, fit.active.variables);
        const Matrix G = Xa.transpose() * Xa;
        ginv = numkit::cholesky_solve(G, Matrix(Matrix::Identity(G.rows(), G.cols())));
    }
    return df_adaptive_lasso(fit, beta_ls, scheme, gamma, design_of(data), ginv);
}

std::vector<IntervalSlope> slopes_along_path(const PathResult& path) {
    std::vector<IntervalSlope> out;
    const size_t m = path.fits.size();
    size_t i = 0;
    while (i < m) {
        size_t j = i;
        while (j + 1 < m && path.fits[j + 1].active == path.fits[i].active) ++j;
        IntervalSlope s;
        s.gamma_hi = path.gammas[i];
        s.gamma_lo = path.gammas[j];
        s.active_count = path.fits[i].active.count_variables();
        if (j > i) {
            s.slope = (path.dofs[i].value - path.dofs[j].value) /
                      (path.gammas[i] - path.gammas[j]);
        } else if (path.gammas[i] > 0.0) {
            s.slope = (path.dofs[i].value - s.active_count) / path.gammas[i];
        }
        out.push_back(s);
        i = j + 1;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

Matrix pi_block(const FitResult& fit, const GroupStructure& groups, const Vector& w,
                int g) {
    if (!std::binary_search(fit.active.groups.begin(), fit.active.groups.end(), g)) {
        throw InactiveGroupRequested("group " + std::to_string(g) + " is inactive");
    }
    const Vector bg = subvector(fit.beta, groups.members[g]);
    const double r = bg.norm();
    const int ng = static_cast<int>(bg.size());
    return w[g] * (Matrix::Identity(ng, ng) / r - bg * bg.transpose() / (r * r * r));
}

PiMatrix build_pi(const FitResult& fit, const GroupStructure& groups, const Vector& w) {
    PiMatrix out;
    out.variables = fit.active.variables;
    const int k = fit.active.count_variables();
    out.dense = Matrix::Zero(k, k);
    for (int g : fit.active.groups) {
        const Matrix block = pi_block(fit, groups, w, g);
        const auto& members = groups.members[g];
        for (size_t a = 0; a < members.size(); ++a) {
            for (size_t b = 0; b < members.size(); ++b) {
                out.dense(fit.active.rank[members[a]], fit.active.rank[members[b]]) =
                    block(a, b);
            }
        }
    }
    return out;
}

PhiMatrix build_phi(const FitResult& fit, const Vector& beta_ls,
                    const GroupStructure& groups, const WeightScheme& scheme) {
    PhiMatrix out;
    out.variables = fit.active.variables;
    const int k = fit.active.count_variables();
    out.dense = Matrix::Zero(k, k);
    if (scheme.kind == WeightScheme::Kind::Fixed) return out;
    for (int g : fit.active.groups) {
        const auto& members = groups.members[g];
        const Vector bg = subvector(fit.beta, members);
        const Vector bls = subvector(beta_ls, members);
        const double z = bls.norm();
        const double dw = weight_and_derivative(scheme, z).second;
        const Matrix block = (bg / bg.norm()) * dw * (bls.transpose() / z);
        for (size_t a = 0; a < members.size(); ++a) {
            for (size_t b = 0; b < members.size(); ++b) {
                out.dense(fit.active.rank[members[a]], fit.active.rank[members[b]]) =
                    block(a, b);
            }
        }
    }
    return out;
}

namespace {

// trace[(I_n + g X N Pi N' X')^{-1} X N (I_k - g Phi N') X'] evaluated either
// through the reduced k x k system or literally on the n x n operators.
// N = I for orthonormal designs and G^{-1} otherwise; Phi may be empty.
double df_trace(const Dataset& data, const FitResult& fit, const Matrix& Pi,
                const Matrix* Phi, double gamma, Design design, bool direct) {
    const int k = fit.active.count_variables();
    const Matrix Xa = active_columns(data, fit.active.variables);
    const Matrix G = Xa.transpose() * Xa;
    const Matrix Ik = Matrix::Identity(k, k);

    if (!direct) {
        if (design == Design::Orthonormal) {
            Matrix rhs = Phi ? Matrix((Ik - gamma * *Phi) * G) : G;
            return numkit::trace_of_solve(Ik + gamma * Pi * G, rhs);
        }
        Matrix rhs = Phi ? Matrix(G - gamma * *Phi) : G;
        return numkit::trace_of_solve(G + gamma * Pi, rhs);
    }

    const int n = data.n();
    Matrix M;  // n x k
    if (design == Design::Orthonormal) {
        M = Xa;
    } else {
        M = numkit::cholesky_solve(G, Matrix(Xa.transpose())).transpose();
    }
    const Matrix A = M * Xa.transpose();
    const Matrix B = M * Pi * M.transpose();
    Matrix num = A;
    if (Phi) num -= gamma * (M * *Phi * M.transpose());
    return numkit::trace_of_solve(Matrix::Identity(n, n) + gamma * B, num);
}

}  // namespace

DofEstimate df_group_lasso(const FitResult& fit, const GroupStructure& groups,
                           const Vector& w, double gamma, Design design,
                           const Dataset& data, bool direct) {
    DofEstimate est;
    est.method = DofEstimate::Method::GroupLassoTrace;
    est.base_active = fit.active.count_variables();
    est.group_active = fit.active.count_groups();
    if (est.base_active == 0) return est;

    const PiMatrix Pi = build_pi(fit, groups, w);
    est.value = df_trace(data, fit, Pi.dense, nullptr, gamma, design, direct);
    est.correction = est.value - est.base_active;
    return est;
}

std::pair<double, double> df_group_lasso_closed_ortho(const ActiveSets& active,
                                                      const GroupStructure& groups,
                                                      const Vector& w, double gamma,
                                                      const Vector& group_norms) {
    double formA = active.count_groups();
    double formB = active.count_variables();
    for (int g : active.groups) {
        const double ratio = gamma * w[g] / group_norms[g];
        const int extra = groups.size_of(g) - 1;
        formA += extra / (1.0 + ratio);
        formB -= extra * ratio / (1.0 + ratio);
    }
    return {formA, formB};
}

DofEstimate df_adaptive_group_lasso(const FitResult& fit, const Vector& beta_ls,
                                    const GroupStructure& groups,
                                    const WeightScheme& scheme, double gamma,
                                    Design design, const Dataset& data, bool direct) {
    DofEstimate est;
    est.method = DofEstimate::Method::AdaptiveGroupLassoTrace;
    est.base_active = fit.active.count_variables();
    est.group_active = fit.active.count_groups();
    if (est.base_active == 0) return est;

    Vector w(groups.num_groups);
    w.setOnes();
    for (int g : fit.active.groups) {
        w[g] = realized_group_weight(scheme, beta_ls, groups, g);
    }

    const PiMatrix Pi = build_pi(fit, groups, w);
    const PhiMatrix Phi = build_phi(fit, beta_ls, groups, scheme);
    est.value = df_trace(data, fit, Pi.dense, &Phi.dense, gamma, design, direct);

    if (scheme.kind == WeightScheme::Kind::GroupInverseNorm) {
        // Inverse-norm weights admit a sign-flipped formulation with a
        // positive rank-one block; build it independently as a guard against
        // sign errors.
        const int k = est.base_active;
        Matrix phi_pos = Matrix::Zero(k, k);
        for (int g : fit.active.groups) {
            const auto& members = groups.members[g];
            const Vector bg = subvector(fit.beta, members);
            const Vector bls = subvector(beta_ls, members);
            const double z = bls.norm();
            const Matrix block = (bg / bg.norm()) * (bls.transpose() / (z * z * z));
            for (size_t a = 0; a < members.size(); ++a) {
                for (size_t b = 0; b < members.size(); ++b) {
                    phi_pos(fit.active.rank[members[a]], fit.active.rank[members[b]]) =
                        block(a, b);
                }
            }
        }
        Matrix neg = -phi_pos;
        const double alt = df_trace(data, fit, Pi.dense, &neg, gamma, design, direct);
        if (std::abs(alt - est.value) > 1e-8 * std::max(1.0, std::abs(est.value))) {
            throw std::logic_error("inverse-norm formulations disagree");
        }
    }
    est.correction = est.value - est.base_active;
    return est;
}

double df_adaptive_group_closed_ortho(const FitResult& fit, const Vector& beta_ls,
                                      const GroupStructure& groups, const Vector& w,
                                      double gamma) {
    double value = fit.active.count_groups();
    for (int g : fit.active.groups) {
        const double r = subvector(fit.beta, groups.members[g]).norm();
        const double zls = subvector(beta_ls, groups.members[g]).norm();
        // The Phi outer product lies along beta_g, where B has eigenvalue 0,
        // so the gamma/||beta_ls||^2 term is not shrunk by (1 + gamma w/r).
        value += (groups.size_of(g) - 1) / (1.0 + gamma * w[g] / r) +
                 gamma / (zls * zls);
    }
    return value;
}

bool check_bounds(const DofEstimate& est) {
    return est.group_active - 1e-9 <= est.value && est.value <= est.base_active + 1e-9;
}

BoundCheck check_bounds_adaptive(const DofEstimate& adaptive, const DofEstimate& plain,
                                 const FitResult& fit, const Vector& beta_ls,
                                 const GroupStructure& groups) {
    for (int g : fit.active.groups) {
        const Vector bg = subvector(fit.beta, groups.members[g]);
        const Vector bls = subvector(beta_ls, groups.members[g]);
        if (bg.dot(bls) < 0.0) return BoundCheck::PremiseViolated;
    }
    return adaptive.value >= plain.value - 1e-9 ? BoundCheck::Pass : BoundCheck::Fail;
}

namespace {

struct GroupGradient {
    Matrix G;           // active Gram
    Vector dbeta;       // over sorted active variables
    Vector v;           // (G + gamma Pi)^{-1} W beta, same layout
    Matrix pi;
};

GroupGradient gradient_core(const FitResult& fit, const GroupStructure& groups,
                            const Vector& w, double gamma, const Dataset& data) {
    GroupGradient out;
    const Matrix Xa = active_columns(data, fit.active.variables);
    out.G = Xa.transpose() * Xa;
    out.pi = build_pi(fit, groups, w).dense;

    const int k = fit.active.count_variables();
    Vector beta_tilde(k);
    for (int g : fit.active.groups) {
        const double r = subvector(fit.beta, groups.members[g]).norm();
        for (int j : groups.members[g]) {
            beta_tilde[fit.active.rank[j]] = w[g] * fit.beta[j] / r;
        }
    }
    out.v = numkit::cholesky_solve(Matrix(out.G + gamma * out.pi), beta_tilde);
    out.dbeta = -out.v;
    return out;
}

}  // namespace

Vector diag_dbeta_dgamma(const FitResult& fit, const GroupStructure& groups,
                         const Vector& w, double gamma, const Dataset& data) {
    if (fit.active.count_variables() == 0) return Vector();
    return gradient_core(fit, groups, w, gamma, data).dbeta;
}

Matrix diag_dpi_dgamma(const FitResult& fit, const GroupStructure& groups,
                       const Vector& w, double gamma, const Dataset& data) {
    const int k = fit.active.count_variables();
    Matrix out = Matrix::Zero(k, k);
    if (k == 0) return out;
    const GroupGradient core = gradient_core(fit, groups, w, gamma, data);
    for (int g : fit.active.groups) {
        const auto& members = groups.members[g];
        const int ng = static_cast<int>(members.size());
        Vector u(ng), v(ng);
        for (int i = 0; i < ng; ++i) {
            u[i] = fit.beta[members[i]];
            v[i] = core.v[fit.active.rank[members[i]]];
        }
        const double r = u.norm();
        const double dr = -u.dot(v) / r;
        const Matrix block =
            -(w[g] / (r * r)) * dr *
                (Matrix::Identity(ng, ng) - 3.0 * u * u.transpose() / (r * r)) +
            (w[g] / (r * r * r)) * (v * u.transpose() + u * v.transpose());
        for (int a = 0; a < ng; ++a) {
            for (int b = 0; b < ng; ++b) {
                out(fit.active.rank[members[a]], fit.active.rank[members[b]]) =
                    block(a, b);
            }
        }
    }
    return out;
}

Spectrum spectrum_rank_two(double a, double b, double c, const Vector& u,
                           const Vector& v) {
    const int n = static_cast<int>(u.size());
    const double un = u.norm();
    const double vn = v.norm();
    const double uv = u.dot(v);
    const bool parallel = std::abs(uv) >= (1.0 - 1e-12) * un * vn;
    if (n < 2 || b == 0.0 || c == 0.0 || parallel || un == 0.0 || vn == 0.0) {
        const Matrix M = a * Matrix::Identity(n, n) + b * u * u.transpose() +
                         c * (u * v.transpose() + v * u.transpose());
        const numkit::EigResult eig = numkit::sym_eig(M);
        Spectrum s;
        s.lambda1 = eig.values[0];
        s.lambda3 = eig.values[n - 1];
        s.lambda2 = n > 2 ? eig.values[1] : a;
        s.delta = (s.lambda1 - s.lambda3) * (s.lambda1 - s.lambda3);
        return s;
    }

    const double sum = 2.0 * a + b * un * un + 2.0 * c * uv;
    double delta = 4.0 * c * c * un * un * vn * vn + b * b * un * un * un * un +
                   4.0 * b * c * un * un * uv;
    const double scale = std::max({std::abs(b) * un * un, std::abs(c) * un * vn, 1.0});
    if (delta < -1e-12 * scale * scale) {
        throw NegativeDiscriminant("rank-two discriminant is negative");
    }
    delta = std::max(delta, 0.0);
    Spectrum s;
    s.delta = delta;
    s.lambda1 = 0.5 * (sum + std::sqrt(delta));
    s.lambda3 = 0.5 * (sum - std::sqrt(delta));
    s.lambda2 = a;
    return s;
}

Definiteness classify_definiteness(const std::vector<GroupSpectrum>& spectra) {
    for (const GroupSpectrum& g : spectra) {
        if (g.spectrum.lambda1 * g.spectrum.lambda3 < -1e-10) {
            return Definiteness::Indefinite;
        }
    }
    return Definiteness::PSD;
}

DiagnosticsReport diagnostics(const Dataset& data, const FitResult& fit,
                              const GroupStructure& groups, const Vector& w,
                              double gamma, Design design) {
    DiagnosticsReport report;
    report.variables = fit.active.variables;
    const int k = fit.active.count_variables();
    if (k == 0) {
        report.dpi_dgamma = Matrix::Zero(0, 0);
        return report;
    }
    const GroupGradient core = gradient_core(fit, groups, w, gamma, data);
    report.dbeta_dgamma = core.dbeta;
    report.dpi_dgamma = diag_dpi_dgamma(fit, groups, w, gamma, data);

    for (int g : fit.active.groups) {
        const auto& members = groups.members[g];
        const int ng = static_cast<int>(members.size());
        Vector u(ng), v(ng);
        for (int i = 0; i < ng; ++i) {
            u[i] = fit.beta[members[i]];
            v[i] = core.v[fit.active.rank[members[i]]];
        }
        const double r = u.norm();
        const double uv = u.dot(v);
        // Pi_g + gamma dPi_g/dgamma collapses to a I + b uu^T + c(uv^T + vu^T).
        const double a = gamma * w[g] * uv / (r * r * r) + w[g] / r;
        const double b =
            -(3.0 * gamma * w[g] * uv / std::pow(r, 5) + w[g] / (r * r * r));
        const double c = gamma * w[g] / (r * r * r);
        GroupSpectrum gs;
        gs.group = g;
        gs.spectrum = spectrum_rank_two(a, b, c, u, v);
        gs.rho = uv / (r * v.norm());
        report.spectrum.push_back(gs);
    }
    report.definiteness = classify_definiteness(report.spectrum);

    const auto [trace, slope] =
        monotonicity_sufficient(report, data, fit, groups, w, gamma, design);
    report.sufficient_trace = trace;
    report.df_slope = slope;
    return report;
}

std::pair<double, double> monotonicity_sufficient(const DiagnosticsReport& report,
                                                  const Dataset& data,
                                                  const FitResult& fit,
                                                  const GroupStructure& groups,
                                                  const Vector& w, double gamma,
                                                  Design design) {
    const int k = fit.active.count_variables();
    if (k == 0) return {0.0, 0.0};
    const Matrix pi = build_pi(fit, groups, w).dense;
    const Matrix Amat = pi + gamma * report.dpi_dgamma;

    const int n = data.n();
    const Matrix Xa = active_columns(data, fit.active.variables);
    Matrix M;
    if (design == Design::Orthonormal) {
        M = Xa;
    } else {
        const Matrix G = Xa.transpose() * Xa;
        M = numkit::cholesky_solve(G, Matrix(Xa.transpose())).transpose();
    }
    const Matrix A = M * Xa.transpose();
    const Matrix B = M * pi * M.transpose();
    const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) + gamma * B);
    const Matrix Bmat = M.transpose() * lu.solve(A * lu.solve(M));
    const double trace = (Amat * Bmat).trace();
    return {trace, -trace};
}

DofEstimate estimate(const Dataset& data, const PreparedPenalty& prep,
                     const FitResult& fit) {
    const Design design = design_of(data);
    switch (prep.spec.kind) {
        case PenaltySpec::Kind::Lasso:
            return df_lasso(fit.active);
        case PenaltySpec::Kind::AdaptiveLasso:
            return df_adaptive_lasso(data, fit, prep.beta_ls, prep.spec.scheme,
                                     fit.gamma);
        case PenaltySpec::Kind::GroupLasso:
            return df_group_lasso(fit, *prep.spec.groups, prep.weights, fit.gamma,
                                  design, data);
        case PenaltySpec::Kind::AdaptiveGroupLasso:
            return df_adaptive_group_lasso(fit, prep.beta_ls, *prep.spec.groups,
                                           prep.spec.scheme, fit.gamma, design, data);
    }
    throw std::logic_error("unreachable");
}

}  // namespace dof
}  // namespace lassodf
