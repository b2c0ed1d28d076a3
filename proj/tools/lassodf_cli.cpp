#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lassodf/dof.hpp"
#include "lassodf/experiments.hpp"
#include "lassodf/io.hpp"
#include "lassodf/oracle.hpp"
#include "lassodf/selection.hpp"

using nlohmann::json;
using namespace lassodf;

namespace {

constexpr const char* kVersion = "1.0.0";

int default_jobs() {
    if (const char* env = std::getenv("LASSODF_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

json manifest(const std::string& command, const json& config,
              const std::vector<std::string>& outputs, std::uint64_t seed) {
    return json{{"command", command},
                {"config", config},
                {"seed", seed},
                {"version", kVersion},
                {"outputs", outputs},
                // deliberately no wall-clock data: reruns must be bit-identical
                {"timing", nullptr}};
}

PenaltySpec::Kind parse_penalty(const std::string& name) {
    if (name == "lasso") return PenaltySpec::Kind::Lasso;
    if (name == "adaptive") return PenaltySpec::Kind::AdaptiveLasso;
    if (name == "group") return PenaltySpec::Kind::GroupLasso;
    if (name == "adaptive-group") return PenaltySpec::Kind::AdaptiveGroupLasso;
    throw CLI::ValidationError("--penalty", "unknown penalty '" + name + "'");
}

WeightScheme parse_weights(const std::string& spec) {
    if (spec == "fixed") return WeightScheme::unit();
    if (spec == "group-inv-norm") return WeightScheme::group_inverse_norm();
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const double alpha = colon == std::string::npos ? 1.0 : std::stod(spec.substr(colon + 1));
    if (head == "inv-power") return WeightScheme::inverse_power(alpha);
    if (head == "exp") return WeightScheme::exponential_decay(alpha);
    throw CLI::ValidationError("--weights", "unknown weight scheme '" + spec + "'");
}

struct LoadedData {
    Dataset data;            // standardized, y centered
    double y_mean = 0.0;
    std::vector<std::string> names;
    std::optional<GroupStructure> groups;
};

LoadedData load_data(const std::string& path, const std::string& response,
                     const std::string& group_file) {
    const io::CsvTable table = io::read_csv(path);
    const int resp = table.column(response);

    Dataset raw;
    raw.y = table.values.col(resp);
    raw.X.resize(table.values.rows(), table.values.cols() - 1);
    LoadedData out;
    int c = 0;
    for (int j = 0; j < table.values.cols(); ++j) {
        if (j == resp) continue;
        raw.X.col(c) = table.values.col(j);
        out.names.push_back(table.header[j]);
        ++c;
    }
    out.data = standardize(raw);
    out.y_mean = out.data.y.mean();
    out.data.y.array() -= out.y_mean;
    if (!group_file.empty()) {
        out.groups = io::read_group_file(group_file, out.data.p());
    }
    return out;
}

PenaltySpec build_penalty(PenaltySpec::Kind kind, const WeightScheme& scheme,
                          const std::optional<GroupStructure>& groups) {
    switch (kind) {
        case PenaltySpec::Kind::Lasso:
            return PenaltySpec::lasso();
        case PenaltySpec::Kind::AdaptiveLasso:
            return PenaltySpec::adaptive_lasso(
                scheme.kind == WeightScheme::Kind::Fixed
                    ? WeightScheme::inverse_power(1.0)
                    : scheme);
        case PenaltySpec::Kind::GroupLasso:
            if (!groups) throw std::invalid_argument("group penalty needs --groups");
            return PenaltySpec::group_lasso(*groups);
        case PenaltySpec::Kind::AdaptiveGroupLasso:
            if (!groups) throw std::invalid_argument("group penalty needs --groups");
            return PenaltySpec::adaptive_group_lasso(
                *groups, scheme.kind == WeightScheme::Kind::Fixed
                             ? WeightScheme::group_inverse_norm()
                             : scheme);
    }
    throw std::logic_error("unreachable");
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw CsvParse("cannot write " + path);
    out << j.dump(2) << "\n";
}

struct FitArgs {
    std::string data, response, penalty = "lasso", groups, weights = "fixed";
    std::string out = "fit.json";
    double gamma = 1.0;
};

int run_fit(const FitArgs& a) {
    const LoadedData loaded = load_data(a.data, a.response, a.groups);
    const PenaltySpec penalty =
        build_penalty(parse_penalty(a.penalty), parse_weights(a.weights), loaded.groups);
    const PreparedPenalty prep = prepare_penalty(loaded.data, penalty);
    const FitResult fit = fit_prepared(loaded.data, prep, a.gamma);
    const DofEstimate df = dof::estimate(loaded.data, prep, fit);
    const double sigma2 = selection::estimate_sigma2(loaded.data);
    const CriterionValue crit = selection::criteria(fit, df.value, sigma2, loaded.data);

    json j;
    j["gamma"] = fit.gamma;
    j["beta"] = std::vector<double>(fit.beta.begin(), fit.beta.end());
    j["variable_names"] = loaded.names;
    j["active_variables"] = fit.active.variables;
    j["active_groups"] = fit.active.groups;
    j["kkt_residual"] = fit.kkt_residual;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["df"] = {{"value", df.value},
               {"active_variables", df.base_active},
               {"active_groups", df.group_active},
               {"correction", df.correction},
               {"near_transition", df.near_transition}};
    j["sigma2"] = sigma2;
    j["aic"] = crit.aic;
    j["bic"] = crit.bic;
    j["manifest"] = manifest("fit",
                             json{{"data", a.data},
                                  {"response", a.response},
                                  {"penalty", a.penalty},
                                  {"weights", a.weights},
                                  {"gamma", a.gamma},
                                  {"groups", a.groups}},
                             {a.out}, 0);
    write_json(a.out, j);
    return 0;
}

struct PathArgs {
    FitArgs base;
    int grid_size = 100;
    double grid_decades = 4.0;
    std::string criterion = "bic";
    bool cv = false;
    std::string out_dir = ".";
};

int run_path(const PathArgs& a) {
    const LoadedData loaded = load_data(a.base.data, a.base.response, a.base.groups);
    const PenaltySpec penalty = build_penalty(parse_penalty(a.base.penalty),
                                              parse_weights(a.base.weights),
                                              loaded.groups);
    SolverConfig config;
    config.grid_size = a.grid_size;
    config.grid_decades = a.grid_decades;
    const PathResult path = compute_path(loaded.data, penalty, config);
    const double sigma2 = selection::estimate_sigma2(loaded.data);
    const selection::Criterion crit = a.criterion == "aic"
                                          ? selection::Criterion::AIC
                                          : selection::Criterion::BIC;

    const size_t m = path.gammas.size();
    Matrix curve(m, 5);
    Matrix coef(m, loaded.data.p() + 2);
    for (size_t i = 0; i < m; ++i) {
        curve(i, 0) = path.gammas[i];
        curve(i, 1) = std::log(path.gammas[i]);
        curve(i, 2) = path.dofs[i].value;
        curve(i, 3) = path.fits[i].active.count_variables();
        curve(i, 4) = path.fits[i].active.count_groups();
        coef(i, 0) = path.gammas[i];
        coef(i, 1) = std::log(path.gammas[i]);
        coef.row(i).tail(loaded.data.p()) = path.fits[i].beta.transpose();
    }
    const std::string curve_path = a.out_dir + "/df_curve.csv";
    const std::string path_path = a.out_dir + "/path.csv";
    const std::string sel_path = a.out_dir + "/selection.json";
    io::write_csv(curve_path,
                  {"gamma", "log_gamma", "df_analytic", "df_active_set",
                   "df_active_groups"},
                  curve);
    std::vector<std::string> coef_header = {"gamma", "log_gamma"};
    coef_header.insert(coef_header.end(), loaded.names.begin(), loaded.names.end());
    io::write_csv(path_path, coef_header, coef);

    json sel;
    sel["criterion"] = a.criterion;
    sel["sigma2"] = sigma2;
    sel["gamma_analytic"] = selection::select_gamma(loaded.data, path, sigma2, crit,
                                                    selection::DfSource::Analytic);
    sel["gamma_naive"] = selection::select_gamma(loaded.data, path, sigma2, crit,
                                                 selection::DfSource::ActiveSetSize);
    if (a.cv) {
        const selection::CvResult cv =
            selection::loo_cv(loaded.data, penalty, path.gammas, config);
        sel["gamma_cv"] = cv.gamma_star;
        sel["cv_errors"] = cv.errors;
    }
    sel["manifest"] = manifest("path",
                               json{{"data", a.base.data},
                                    {"response", a.base.response},
                                    {"penalty", a.base.penalty},
                                    {"weights", a.base.weights},
                                    {"groups", a.base.groups},
                                    {"grid_size", a.grid_size},
                                    {"grid_decades", a.grid_decades},
                                    {"criterion", a.criterion},
                                    {"cv", a.cv}},
                               {curve_path, path_path, sel_path}, 0);
    write_json(sel_path, sel);
    return 0;
}

struct ExperimentArgs {
    std::string mode;  // unbiasedness | table1 | dataset
    int B = 200;
    int n = 50;
    int p = 12;
    std::uint64_t seed = 1;
    std::string method = "adaptive";
    std::string data, response, penalty = "group";
    bool grouped = false;
    std::string out_dir = ".";
};

int run_experiment(const ExperimentArgs& a) {
    std::vector<std::string> outputs;
    json config{{"mode", a.mode}, {"B", a.B},    {"n", a.n},
                {"p", a.p},       {"seed", a.seed}};

    if (a.mode == "unbiasedness") {
        experiments::SyntheticSpec spec = experiments::SyntheticSpec::defaults();
        spec.n = a.n;
        spec.p = a.p;
        spec.beta = Vector::Zero(a.p);
        const double head[] = {5, -5, 5, 3, -3, 3, 1, -1, 1};
        for (int j = 0; j < std::min(a.p, 9); ++j) spec.beta[j] = head[j];
        spec.seed = a.seed;
        spec.B = a.B;
        spec.group_size = a.p % 3 == 0 ? 3 : 1;
        const PenaltySpec::Kind kind = parse_penalty(
            a.method == "adaptive" || a.method == "group" || a.method == "adaptive-group"
                ? a.method
                : "adaptive");
        const auto gammas = experiments::unbiasedness_grid(spec, kind, 5);
        const auto result = experiments::run_unbiasedness(spec, gammas, kind);
        Matrix rows(result.rows.size(), 7);
        for (size_t i = 0; i < result.rows.size(); ++i) {
            const auto& r = result.rows[i];
            rows.row(i) << r.gamma, r.mean_analytic, r.analytic_se, r.mc_value,
                r.mc_se, r.mean_diff, r.diff_se;
        }
        const std::string out = a.out_dir + "/unbiasedness.csv";
        io::write_csv(out,
                      {"gamma", "mean_analytic", "analytic_se", "mc_value", "mc_se",
                       "mean_diff", "diff_se"},
                      rows);
        outputs.push_back(out);
        config["method"] = a.method;
        config["replicates_used"] = result.replicates;
        config["failures"] = result.failures;
    } else if (a.mode == "table1") {
        experiments::SyntheticSpec spec = experiments::SyntheticSpec::defaults();
        spec.seed = a.seed;
        const auto result = experiments::run_table1(spec, a.B);
        const auto labels = experiments::SelectionHistogram::labels();
        std::ofstream out(a.out_dir + "/table1.csv");
        if (!out) throw CsvParse("cannot write table1.csv");
        out << "method,bucket,count\n";
        const std::pair<const char*, const experiments::SelectionHistogram*> hists[] = {
            {"adaptive_lasso", &result.adaptive_lasso},
            {"group_lasso", &result.group_lasso},
            {"adaptive_group_lasso", &result.adaptive_group_lasso}};
        for (const auto& [name, hist] : hists) {
            for (size_t k = 0; k < labels.size(); ++k) {
                out << name << "," << labels[k] << "," << hist->counts[k] << "\n";
            }
        }
        outputs.push_back(a.out_dir + "/table1.csv");
        config["replicates_used"] = result.replicates;
        config["failures"] = result.failures;
    } else if (a.mode == "dataset") {
        const auto report = experiments::run_dataset_pipeline(
            a.data, a.response, parse_penalty(a.penalty), a.grouped);
        const size_t m = report.gammas.size();
        Matrix curve(m, 5);
        Matrix coef(m, report.coefficients.cols() + 2);
        for (size_t i = 0; i < m; ++i) {
            curve(i, 0) = report.gammas[i];
            curve(i, 1) = std::log(report.gammas[i]);
            curve(i, 2) = report.df_analytic[i];
            curve(i, 3) = report.df_active_set[i];
            curve(i, 4) = report.df_active_groups[i];
            coef(i, 0) = report.gammas[i];
            coef(i, 1) = std::log(report.gammas[i]);
            coef.row(i).tail(report.coefficients.cols()) = report.coefficients.row(i);
        }
        io::write_csv(a.out_dir + "/df_curve.csv",
                      {"gamma", "log_gamma", "df_analytic", "df_active_set",
                       "df_active_groups"},
                      curve);
        std::vector<std::string> header = {"gamma", "log_gamma"};
        header.insert(header.end(), report.variable_names.begin(),
                      report.variable_names.end());
        io::write_csv(a.out_dir + "/path.csv", header, coef);
        json sel{{"sigma2", report.sigma2},
                 {"gamma_bic_analytic", report.gamma_bic_analytic},
                 {"gamma_bic_naive", report.gamma_bic_naive},
                 {"gamma_cv", report.gamma_cv}};
        write_json(a.out_dir + "/selection.json", sel);
        outputs = {a.out_dir + "/df_curve.csv", a.out_dir + "/path.csv",
                   a.out_dir + "/selection.json"};
        config["data"] = a.data;
        config["penalty"] = a.penalty;
        config["grouped"] = a.grouped;
    } else {
        throw std::invalid_argument("unknown experiment '" + a.mode + "'");
    }

    write_json(a.out_dir + "/manifest.json", manifest("experiment", config, outputs, a.seed));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solution paths and analytic degrees of freedom for penalized regression"};
    app.require_subcommand(1);
    int jobs = default_jobs();
    app.add_option("--jobs", jobs, "parallelism degree (outputs are identical for any value)");

    FitArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand("fit", "single fit at a fixed gamma");
    fit_cmd->add_option("--data", fit_args.data, "input CSV")->required();
    fit_cmd->add_option("--response", fit_args.response, "response column name")->required();
    fit_cmd->add_option("--penalty", fit_args.penalty,
                        "lasso|adaptive|group|adaptive-group");
    fit_cmd->add_option("--gamma", fit_args.gamma, "penalty level")->required();
    fit_cmd->add_option("--groups", fit_args.groups, "group file (variable_index,group_index)");
    fit_cmd->add_option("--weights", fit_args.weights,
                        "fixed|inv-power:a|exp:a|group-inv-norm");
    fit_cmd->add_option("--out", fit_args.out, "output JSON path");

    PathArgs path_args;
    CLI::App* path_cmd = app.add_subcommand("path", "full gamma path with df curves");
    path_cmd->add_option("--data", path_args.base.data)->required();
    path_cmd->add_option("--response", path_args.base.response)->required();
    path_cmd->add_option("--penalty", path_args.base.penalty);
    path_cmd->add_option("--groups", path_args.base.groups);
    path_cmd->add_option("--weights", path_args.base.weights);
    path_cmd->add_option("--grid-size", path_args.grid_size);
    path_cmd->add_option("--grid-decades", path_args.grid_decades);
    path_cmd->add_option("--criterion", path_args.criterion, "aic|bic");
    path_cmd->add_flag("--cv", path_args.cv, "also run leave-one-out cross-validation");
    path_cmd->add_option("--out-dir", path_args.out_dir);

    ExperimentArgs exp_args;
    CLI::App* exp_cmd = app.add_subcommand("experiment", "synthetic studies and dataset pipeline");
    exp_cmd->add_option("mode", exp_args.mode, "unbiasedness|table1|dataset")->required();
    exp_cmd->add_option("--B", exp_args.B);
    exp_cmd->add_option("--n", exp_args.n);
    exp_cmd->add_option("--p", exp_args.p);
    exp_cmd->add_option("--seed", exp_args.seed);
    exp_cmd->add_option("--method", exp_args.method, "adaptive|group|adaptive-group");
    exp_cmd->add_option("--data", exp_args.data);
    exp_cmd->add_option("--response", exp_args.response);
    exp_cmd->add_option("--penalty", exp_args.penalty);
    exp_cmd->add_flag("--grouped", exp_args.grouped);
    exp_cmd->add_option("--out-dir", exp_args.out_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*fit_cmd) return run_fit(fit_args);
        if (*path_cmd) return run_path(path_args);
        return run_experiment(exp_args);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CsvParse& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
