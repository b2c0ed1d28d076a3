#pragma once

#include <utility>
#include <vector>

#include "lassodf/solvers.hpp"

namespace lassodf {
namespace dof {

enum class Design { Orthonormal, General };

inline Design design_of(const Dataset& data) {
    return data.orthonormal ? Design::Orthonormal : Design::General;
}

// Penalty weight and its derivative evaluated at z = |beta_ls_j| (or the group
// norm). Fixed schemes have zero derivative; the scalar weight itself is
// carried separately by the caller, so 1 is returned for them.
std::pair<double, double> weight_and_derivative(const WeightScheme& scheme, double z);

DofEstimate df_lasso(const ActiveSets& active);

DofEstimate df_adaptive_lasso(const FitResult& fit, const Vector& beta_ls,
                              const WeightScheme& scheme, double gamma, Design design,
                              const Matrix& gram_active_inverse);
// Convenience overload deriving the active Gram inverse from the data.
DofEstimate df_adaptive_lasso(const Dataset& data, const FitResult& fit,
                              const Vector& beta_ls, const WeightScheme& scheme,
                              double gamma);

// Per-interval slope of df(gamma) = |A| + b * gamma between transitions,
// reported in increasing-gamma order.
struct IntervalSlope {
    double gamma_lo = 0.0;
    double gamma_hi = 0.0;
    int active_count = 0;
    double slope = 0.0;
};
std::vector<IntervalSlope> slopes_along_path(const PathResult& path);

// Block-diagonal matrices over the active variables, stored dense in the
// sorted active-variable order (indexing via ActiveSets::rank).
struct PiMatrix {
    Matrix dense;
    std::vector<int> variables;
};
struct PhiMatrix {
    Matrix dense;
    std::vector<int> variables;
};

// Single block of Pi for group g; throws InactiveGroupRequested when g is not
// in the active set.
Matrix pi_block(const FitResult& fit, const GroupStructure& groups, const Vector& w,
                int g);

PiMatrix build_pi(const FitResult& fit, const GroupStructure& groups, const Vector& w);

PhiMatrix build_phi(const FitResult& fit, const Vector& beta_ls,
                    const GroupStructure& groups, const WeightScheme& scheme);

// direct=true evaluates the full n x n operator form instead of the reduced
// active-set system; kept for cross-checks.
DofEstimate df_group_lasso(const FitResult& fit, const GroupStructure& groups,
                           const Vector& w, double gamma, Design design,
                           const Dataset& data, bool direct = false);

// Closed forms for orthonormal designs; the two expressions are algebraically
// identical and both are returned.
std::pair<double, double> df_group_lasso_closed_ortho(const ActiveSets& active,
                                                      const GroupStructure& groups,
                                                      const Vector& w, double gamma,
                                                      const Vector& group_norms);

DofEstimate df_adaptive_group_lasso(const FitResult& fit, const Vector& beta_ls,
                                    const GroupStructure& groups,
                                    const WeightScheme& scheme, double gamma,
                                    Design design, const Dataset& data,
                                    bool direct = false);

// Orthonormal-design closed form for the adaptive group estimator under
// inverse-norm weights.
double df_adaptive_group_closed_ortho(const FitResult& fit, const Vector& beta_ls,
                                      const GroupStructure& groups, const Vector& w,
                                      double gamma);

// Sandwich |A_G| <= value <= |A_p| for group-lasso estimates.
bool check_bounds(const DofEstimate& est);

// Adaptive estimates are only bounded below by the plain group-lasso value
// when every active group satisfies beta_g . beta_ls_g >= 0.
enum class BoundCheck { Pass, Fail, PremiseViolated };
BoundCheck check_bounds_adaptive(const DofEstimate& adaptive, const DofEstimate& plain,
                                 const FitResult& fit, const Vector& beta_ls,
                                 const GroupStructure& groups);

Vector diag_dbeta_dgamma(const FitResult& fit, const GroupStructure& groups,
                         const Vector& w, double gamma, const Dataset& data);

Matrix diag_dpi_dgamma(const FitResult& fit, const GroupStructure& groups,
                       const Vector& w, double gamma, const Dataset& data);

struct Spectrum {
    double lambda1 = 0.0;
    double lambda2 = 0.0;  // multiplicity n - 2
    double lambda3 = 0.0;
    double delta = 0.0;
};

// Eigenvalues of a I + b u u^T + c (u v^T + v u^T). Degenerate inputs (n < 2,
// b or c zero, u parallel to v) are routed to the dense eigensolver.
Spectrum spectrum_rank_two(double a, double b, double c, const Vector& u,
                           const Vector& v);

enum class Definiteness { PSD, Indefinite };

struct GroupSpectrum {
    int group = 0;
    Spectrum spectrum;
    double rho = 0.0;  // cosine between u_g and v_g
};

Definiteness classify_definiteness(const std::vector<GroupSpectrum>& spectra);

struct DiagnosticsReport {
    std::vector<int> variables;  // sorted active variables the blocks index
    Vector dbeta_dgamma;
    Matrix dpi_dgamma;
    std::vector<GroupSpectrum> spectrum;
    Definiteness definiteness = Definiteness::PSD;
    double sufficient_trace = 0.0;
    double df_slope = 0.0;
};

DiagnosticsReport diagnostics(const Dataset& data, const FitResult& fit,
                              const GroupStructure& groups, const Vector& w,
                              double gamma, Design design);

// (trace, analytic d df / d gamma); trace > 0 certifies a non-increasing df.
std::pair<double, double> monotonicity_sufficient(const DiagnosticsReport& report,
                                                  const Dataset& data,
                                                  const FitResult& fit,
                                                  const GroupStructure& groups,
                                                  const Vector& w, double gamma,
                                                  Design design);

// Dispatch on the prepared penalty; used by compute_path.
DofEstimate estimate(const Dataset& data, const PreparedPenalty& prep,
                     const FitResult& fit);

}  // namespace dof
}  // namespace lassodf
