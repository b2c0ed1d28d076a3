#include "lassodf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lassodf/dof.hpp"
#include "lassodf/io.hpp"
#include "lassodf/rng.hpp"

namespace lassodf {
namespace experiments {

SyntheticSpec SyntheticSpec::defaults() {
    SyntheticSpec spec;
    spec.beta = Vector::Zero(spec.p);
    const double head[] = {5, -5, 5, 3, -3, 3, 1, -1, 1};
    for (int j = 0; j < 9; ++j) spec.beta[j] = head[j];
    return spec;
}

SyntheticInstance make_instance(const SyntheticSpec& spec) {
    if (spec.beta.size() != spec.p) throw std::invalid_argument("beta length != p");
    if (spec.snr <= 0.0) throw std::invalid_argument("snr must be positive");
    SyntheticInstance inst;
    Rng rng(spec.seed, 0);
    inst.X.resize(spec.n, spec.p);
    for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < spec.p; ++j) inst.X(i, j) = rng.next_gaussian();
    }
    inst.mu = inst.X * spec.beta;
    const double mean = inst.mu.mean();
    const double var =
        (inst.mu.array() - mean).square().sum() / (spec.n - 1);
    // snr is an amplitude ratio: sd(X beta) = snr * sigma
    inst.sigma2 = var / (spec.snr * spec.snr);
    inst.sigma = std::sqrt(inst.sigma2);
    return inst;
}

Dataset gen_synthetic(const SyntheticSpec& spec, int replicate_index) {
    const SyntheticInstance inst = make_instance(spec);
    Dataset data;
    data.X = inst.X;
    data.y = inst.mu + gaussian_sampler(spec.seed, spec.n, inst.sigma,
                                        1 + static_cast<std::uint64_t>(replicate_index));
    return data;
}

PenaltySpec penalty_for(PenaltySpec::Kind kind, int p, int group_size) {
    switch (kind) {
        case PenaltySpec::Kind::Lasso:
            return PenaltySpec::lasso();
        case PenaltySpec::Kind::AdaptiveLasso:
            return PenaltySpec::adaptive_lasso(WeightScheme::inverse_power(1.0));
        case PenaltySpec::Kind::GroupLasso:
            return PenaltySpec::group_lasso(GroupStructure::contiguous_blocks(p, group_size));
        case PenaltySpec::Kind::AdaptiveGroupLasso:
            return PenaltySpec::adaptive_group_lasso(
                GroupStructure::contiguous_blocks(p, group_size),
                WeightScheme::group_inverse_norm());
    }
    throw std::logic_error("unreachable");
}

std::vector<double> unbiasedness_grid(const SyntheticSpec& spec,
                                      PenaltySpec::Kind kind, int count) {
    const Dataset ref = gen_synthetic(spec, 0);
    const PreparedPenalty prep =
        prepare_penalty(ref, penalty_for(kind, spec.p, spec.group_size));
    const double gmax = null_threshold(ref, prep);
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        out[i] = gmax * 0.5 * std::pow(0.5, i);
    }
    return out;  // descending
}

UnbiasednessResult run_unbiasedness(const SyntheticSpec& spec,
                                    const std::vector<double>& gammas,
                                    PenaltySpec::Kind kind,
                                    const SolverConfig& config) {
    if (spec.B < 2) throw std::invalid_argument("need at least 2 replicates");
    const SyntheticInstance inst = make_instance(spec);
    const PenaltySpec penalty = penalty_for(kind, spec.p, spec.group_size);
    const size_t m = gammas.size();

    std::vector<double> sum_an(m, 0.0), sq_an(m, 0.0);
    std::vector<double> sum_mc(m, 0.0), sq_mc(m, 0.0);
    std::vector<double> sum_d(m, 0.0), sq_d(m, 0.0);

    UnbiasednessResult out;
    const int max_failures = std::max(1, spec.B / 100);
    Dataset data;
    data.X = inst.X;
    for (int b = 0; b < spec.B; ++b) {
        const Vector eps = gaussian_sampler(spec.seed, spec.n, inst.sigma,
                                            1 + static_cast<std::uint64_t>(b));
        data.y = inst.mu + eps;
        try {
            const PreparedPenalty prep = prepare_penalty(data, penalty);
            const Vector* warm = nullptr;
            Vector prev;
            for (size_t g = 0; g < m; ++g) {
                const FitResult fit = fit_prepared(data, prep, gammas[g], config, warm);
                prev = fit.beta;
                warm = &prev;
                const double an = dof::estimate(data, prep, fit).value;
                const double mc = eps.dot(data.X * fit.beta) / inst.sigma2;
                const double d = an - mc;
                sum_an[g] += an;
                sq_an[g] += an * an;
                sum_mc[g] += mc;
                sq_mc[g] += mc * mc;
                sum_d[g] += d;
                sq_d[g] += d * d;
            }
        } catch (const std::exception&) {
            ++out.failures;
            if (out.failures > max_failures) {
                throw NoConvergence("too many failed replicates");
            }
            continue;
        }
        ++out.replicates;
    }

    const double B = out.replicates;
    out.rows.resize(m);
    for (size_t g = 0; g < m; ++g) {
        UnbiasednessRow& row = out.rows[g];
        row.gamma = gammas[g];
        row.mean_analytic = sum_an[g] / B;
        row.mc_value = sum_mc[g] / B;
        row.mean_diff = sum_d[g] / B;
        auto se = [&](double sum, double sq) {
            const double var = (sq - sum * sum / B) / (B - 1);
            return std::sqrt(std::max(var, 0.0) / B);
        };
        row.analytic_se = se(sum_an[g], sq_an[g]);
        row.mc_se = se(sum_mc[g], sq_mc[g]);
        row.diff_se = se(sum_d[g], sq_d[g]);
    }
    return out;
}

Table1Result run_table1(const SyntheticSpec& spec, int B, const SolverConfig& config) {
    if (B < 1) throw std::invalid_argument("need at least 1 replicate");
    Table1Result out;
    const int max_failures = std::max(1, B / 100);
    const PenaltySpec::Kind kinds[] = {PenaltySpec::Kind::AdaptiveLasso,
                                       PenaltySpec::Kind::GroupLasso,
                                       PenaltySpec::Kind::AdaptiveGroupLasso};
    SelectionHistogram* hists[] = {&out.adaptive_lasso, &out.group_lasso,
                                   &out.adaptive_group_lasso};
    for (int b = 0; b < B; ++b) {
        const Dataset data = gen_synthetic(spec, b);
        try {
            const double sigma2 = selection::estimate_sigma2(data);
            int selected[3];
            for (int k = 0; k < 3; ++k) {
                const PathResult path = compute_path(
                    data, penalty_for(kinds[k], spec.p, spec.group_size), config);
                const double gstar =
                    selection::select_gamma(data, path, sigma2,
                                            selection::Criterion::BIC,
                                            selection::DfSource::Analytic);
                int count = 0;
                for (size_t i = 0; i < path.gammas.size(); ++i) {
                    if (path.gammas[i] == gstar) {
                        count = path.fits[i].active.count_variables();
                        break;
                    }
                }
                selected[k] = count;
            }
            for (int k = 0; k < 3; ++k) {
                ++hists[k]->counts[SelectionHistogram::bucket(selected[k])];
            }
        } catch (const std::exception&) {
            ++out.failures;
            if (out.failures > max_failures) {
                throw NoConvergence("too many failed replicates");
            }
            continue;
        }
        ++out.replicates;
    }
    return out;
}

std::pair<Dataset, GroupStructure> discretize_encode(const Dataset& data, int levels) {
    if (levels < 2) throw std::invalid_argument("levels must be at least 2");
    const int n = data.n();
    const int p = data.p();
    const int d = levels - 1;

    Dataset out;
    out.y = data.y;
    out.X = Matrix::Zero(n, p * d);
    for (int j = 0; j < p; ++j) {
        std::vector<double> sorted(n);
        for (int i = 0; i < n; ++i) sorted[i] = data.X(i, j);
        std::sort(sorted.begin(), sorted.end());
        if (std::set<double>(sorted.begin(), sorted.end()).size() <
            static_cast<size_t>(levels)) {
            throw DegenerateQuantiles("column " + std::to_string(j) +
                                      " has too few distinct values");
        }
        std::vector<double> cuts(d);
        for (int k = 1; k < levels; ++k) {
            const int q = n * k / levels;
            cuts[k - 1] = 0.5 * (sorted[q - 1] + sorted[q]);
        }
        for (int i = 0; i < n; ++i) {
            int bin = 0;
            for (double c : cuts) {
                if (data.X(i, j) > c) ++bin;
            }
            if (bin > 0) out.X(i, j * d + bin - 1) = 1.0;
        }
    }
    return {out, GroupStructure::contiguous_blocks(p * d, d)};
}

DatasetReport run_dataset_pipeline(const std::string& csv_path,
                                   const std::string& response_column,
                                   PenaltySpec::Kind kind, bool grouped,
                                   const SolverConfig& config) {
    const io::CsvTable table = io::read_csv(csv_path);
    const int resp = table.column(response_column);

    Dataset raw;
    raw.y = table.values.col(resp);
    raw.X.resize(table.values.rows(), table.values.cols() - 1);
    DatasetReport report;
    int c = 0;
    for (int j = 0; j < table.values.cols(); ++j) {
        if (j == resp) continue;
        raw.X.col(c) = table.values.col(j);
        report.variable_names.push_back(table.header[j]);
        ++c;
    }

    GroupStructure groups;
    if (grouped) {
        if (kind != PenaltySpec::Kind::GroupLasso &&
            kind != PenaltySpec::Kind::AdaptiveGroupLasso) {
            throw std::invalid_argument("grouped pipeline needs a group penalty");
        }
        auto [encoded, gs] = discretize_encode(raw, 4);
        const int d = 3;
        std::vector<std::string> dummy_names;
        for (const std::string& name : report.variable_names) {
            for (int k = 1; k <= d; ++k) {
                dummy_names.push_back(name + "_q" + std::to_string(k + 1));
            }
        }
        report.variable_names = std::move(dummy_names);
        raw = std::move(encoded);
        groups = std::move(gs);
    }

    Dataset data = standardize(raw);
    report.y_mean = data.y.mean();
    data.y.array() -= report.y_mean;
    if (data.n() <= data.p()) {
        throw InsufficientDof("need n > p after encoding");
    }

    PenaltySpec penalty = [&] {
        switch (kind) {
            case PenaltySpec::Kind::Lasso:
                return PenaltySpec::lasso();
            case PenaltySpec::Kind::AdaptiveLasso:
                return PenaltySpec::adaptive_lasso(WeightScheme::inverse_power(1.0));
            case PenaltySpec::Kind::GroupLasso:
                return PenaltySpec::group_lasso(groups);
            case PenaltySpec::Kind::AdaptiveGroupLasso:
                return PenaltySpec::adaptive_group_lasso(
                    groups, WeightScheme::group_inverse_norm());
        }
        throw std::logic_error("unreachable");
    }();

    report.sigma2 = selection::estimate_sigma2(data);
    const PathResult path = compute_path(data, penalty, config);

    report.gammas = path.gammas;
    report.coefficients.resize(path.gammas.size(), data.p());
    for (size_t i = 0; i < path.gammas.size(); ++i) {
        report.df_analytic.push_back(path.dofs[i].value);
        report.df_active_set.push_back(path.fits[i].active.count_variables());
        report.df_active_groups.push_back(path.fits[i].active.count_groups());
        report.coefficients.row(i) = path.fits[i].beta.transpose();
    }

    report.gamma_bic_analytic =
        selection::select_gamma(data, path, report.sigma2,
                                selection::Criterion::BIC,
                                selection::DfSource::Analytic);
    report.gamma_bic_naive =
        selection::select_gamma(data, path, report.sigma2,
                                selection::Criterion::BIC,
                                selection::DfSource::ActiveSetSize);
    const selection::CvResult cv = selection::loo_cv(data, penalty, path.gammas, config);
    report.gamma_cv = cv.gamma_star;
    report.cv_errors = cv.errors;
    return report;
}

}  // namespace experiments
}  // namespace lassodf
