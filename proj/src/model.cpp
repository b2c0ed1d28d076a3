#include "lassodf/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lassodf {

GroupStructure GroupStructure::from_assignment(std::vector<int> assignment) {
    GroupStructure gs;
    gs.assignment = std::move(assignment);
    int max_id = -1;
    for (int g : gs.assignment) {
        if (g < 0) throw std::invalid_argument("negative group id");
        max_id = std::max(max_id, g);
    }
    gs.num_groups = max_id + 1;
    gs.members.resize(gs.num_groups);
    for (int j = 0; j < static_cast<int>(gs.assignment.size()); ++j) {
        gs.members[gs.assignment[j]].push_back(j);
    }
    for (const auto& m : gs.members) {
        if (m.empty()) throw std::invalid_argument("empty group in assignment");
    }
    return gs;
}

GroupStructure GroupStructure::singletons(int p) {
    std::vector<int> a(p);
    for (int j = 0; j < p; ++j) a[j] = j;
    return from_assignment(std::move(a));
}

GroupStructure GroupStructure::contiguous_blocks(int p, int block) {
    if (block <= 0 || p % block != 0) {
        throw std::invalid_argument("p must be a multiple of the block size");
    }
    std::vector<int> a(p);
    for (int j = 0; j < p; ++j) a[j] = j / block;
    return from_assignment(std::move(a));
}

WeightScheme WeightScheme::fixed_weights(Vector w) {
    if ((w.array() <= 0.0).any()) {
        throw std::invalid_argument("fixed weights must be strictly positive");
    }
    WeightScheme s;
    s.kind = Kind::Fixed;
    s.fixed = std::move(w);
    return s;
}

WeightScheme WeightScheme::unit() {
    WeightScheme s;
    s.kind = Kind::Fixed;
    return s;  // empty fixed vector means "all ones"
}

WeightScheme WeightScheme::inverse_power(double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    WeightScheme s;
    s.kind = Kind::InversePower;
    s.alpha = alpha;
    return s;
}

WeightScheme WeightScheme::exponential_decay(double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    WeightScheme s;
    s.kind = Kind::ExponentialDecay;
    s.alpha = alpha;
    return s;
}

WeightScheme WeightScheme::group_inverse_norm() {
    WeightScheme s;
    s.kind = Kind::GroupInverseNorm;
    return s;
}

PenaltySpec PenaltySpec::lasso() {
    PenaltySpec p;
    p.kind = Kind::Lasso;
    p.scheme = WeightScheme::unit();
    return p;
}

PenaltySpec PenaltySpec::adaptive_lasso(WeightScheme scheme) {
    if (scheme.kind == WeightScheme::Kind::GroupInverseNorm) {
        throw std::invalid_argument("GroupInverseNorm is a group scheme");
    }
    PenaltySpec p;
    p.kind = Kind::AdaptiveLasso;
    p.scheme = std::move(scheme);
    return p;
}

PenaltySpec PenaltySpec::group_lasso(GroupStructure groups, Vector weights) {
    if (weights.size() != groups.num_groups) {
        throw std::invalid_argument("group weight length must equal the group count");
    }
    if ((weights.array() <= 0.0).any()) {
        throw std::invalid_argument("group weights must be strictly positive");
    }
    PenaltySpec p;
    p.kind = Kind::GroupLasso;
    p.groups = std::move(groups);
    p.group_weights = std::move(weights);
    return p;
}

PenaltySpec PenaltySpec::group_lasso(GroupStructure groups) {
    Vector w = Vector::Ones(groups.num_groups);
    return group_lasso(std::move(groups), std::move(w));
}

PenaltySpec PenaltySpec::adaptive_group_lasso(GroupStructure groups, WeightScheme scheme) {
    if (scheme.kind != WeightScheme::Kind::GroupInverseNorm &&
        scheme.kind != WeightScheme::Kind::Fixed &&
        scheme.kind != WeightScheme::Kind::InversePower &&
        scheme.kind != WeightScheme::Kind::ExponentialDecay) {
        throw std::invalid_argument("unsupported group weight scheme");
    }
    PenaltySpec p;
    p.kind = Kind::AdaptiveGroupLasso;
    p.groups = std::move(groups);
    p.scheme = std::move(scheme);
    return p;
}

ActiveSets derive_active_sets(const Vector& beta, const GroupStructure* groups) {
    const double threshold =
        kActiveThresholdRel * std::max(1.0, beta.size() ? beta.cwiseAbs().maxCoeff() : 0.0);
    ActiveSets out;
    out.rank.assign(beta.size(), -1);
    if (groups == nullptr) {
        for (int j = 0; j < beta.size(); ++j) {
            if (std::abs(beta[j]) > threshold) {
                out.rank[j] = static_cast<int>(out.variables.size());
                out.variables.push_back(j);
            }
        }
        return out;
    }
    for (int g = 0; g < groups->num_groups; ++g) {
        double norm_sq = 0.0;
        for (int j : groups->members[g]) norm_sq += beta[j] * beta[j];
        if (std::sqrt(norm_sq) > threshold) {
            out.groups.push_back(g);
            for (int j : groups->members[g]) {
                out.rank[j] = static_cast<int>(out.variables.size());
                out.variables.push_back(j);
            }
        }
    }
    // Keep variables sorted even when group blocks are interleaved.
    std::vector<int> order(out.variables.begin(), out.variables.end());
    std::sort(order.begin(), order.end());
    if (order != out.variables) {
        out.variables = order;
        for (int i = 0; i < static_cast<int>(order.size()); ++i) out.rank[order[i]] = i;
    }
    return out;
}

Dataset standardize(const Dataset& raw, bool orthonormalize) {
    const int n = raw.n();
    const int p = raw.p();
    if (n < 2) throw std::invalid_argument("need at least two observations");

    Dataset out = raw;
    out.column_means.resize(p);
    out.column_scales.resize(p);
    for (int j = 0; j < p; ++j) {
        const double mean = raw.X.col(j).mean();
        out.X.col(j).array() -= mean;
        const double norm = out.X.col(j).norm();
        if (norm <= 1e-12 * std::sqrt(static_cast<double>(n))) {
            throw ConstantColumn(j);
        }
        const double scale = std::sqrt(static_cast<double>(n)) / norm;
        out.X.col(j) *= scale;
        out.column_means[j] = mean;
        out.column_scales[j] = scale;
    }
    if (orthonormalize) {
        Eigen::HouseholderQR<Matrix> qr(out.X);
        Matrix q = qr.householderQ() * Matrix::Identity(n, p);
        // Fix the sign convention so columns correlate positively with the
        // originals.
        for (int j = 0; j < p; ++j) {
            if (q.col(j).dot(out.X.col(j)) < 0.0) q.col(j) = -q.col(j);
        }
        out.X = q;
        out.orthonormal = true;
    }
    out.standardized = true;
    return out;
}

std::pair<double, Vector> destandardize(const Dataset& data, double y_mean,
                                        const Vector& beta) {
    if (!data.standardized || data.orthonormal) {
        throw std::invalid_argument("destandardize requires an affine-standardized dataset");
    }
    Vector slopes(beta.size());
    double intercept = y_mean;
    for (int j = 0; j < beta.size(); ++j) {
        slopes[j] = beta[j] * data.column_scales[j];
        intercept -= slopes[j] * data.column_means[j];
    }
    return {intercept, slopes};
}

}  // namespace lassodf
