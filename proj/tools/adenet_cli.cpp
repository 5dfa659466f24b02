// Command-line front end: fit penalized regressions on CSV data and
// regenerate the built-in benchmark tables.
//
// Exit codes: 0 success, 2 input error, 3 numeric degeneracy,
// 4 non-convergence in any replication.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adenet/adenet.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNonconverged = 4;

adenet::Method parse_method(const std::string& name) {
    if (name == "lasso") return adenet::Method::lasso;
    if (name == "enet") return adenet::Method::enet;
    if (name == "alasso") return adenet::Method::alasso;
    if (name == "aenet") return adenet::Method::aenet;
    if (name == "scad") return adenet::Method::scad;
    throw adenet::ValidationError("unknown method: " + name);
}

struct FitOptions {
    std::string input;
    std::string method = "lasso";
    std::string zero_mode = "offset";
    double gamma = 0.0;  // 0 = derive from log(p)/log(n)
    bool standardize = false;
    std::string out;
};

int run_fit(const FitOptions& opt) {
    std::ifstream in(opt.input);
    if (!in) {
        std::cerr << "error: cannot open " << opt.input << "\n";
        return kExitInput;
    }
    const adenet::CsvData csv = adenet::parse_numeric_csv(in);
    adenet::Dataset data = adenet::dataset_from_csv(csv);

    const bool zero_response = data.y.isZero(0.0);
    if (zero_response)
        std::cerr << "warning: response column is identically zero\n";

    data = adenet::center(std::move(data));
    Eigen::VectorXd col_norms = Eigen::VectorXd::Ones(data.p());
    adenet::SolverConfig solver;
    if (opt.standardize) {
        adenet::StandardizedDataset std_data = adenet::standardize(std::move(data));
        data = std::move(std_data.data);
        col_norms = std::move(std_data.column_norms);
        solver.standardized = true;
    }

    const adenet::Method method = parse_method(opt.method);
    adenet::AdaptiveConfig adaptive;
    adaptive.zero_mode = opt.zero_mode == "exclude" ? adenet::ZeroMode::hard_exclude
                                                    : adenet::ZeroMode::ridge_offset;
    if (opt.gamma > 0.0) {
        adaptive.gamma = opt.gamma;
    } else {
        const double nu = adenet::nu_hat(data.n(), data.p());
        if (nu >= 1.0) {
            std::cerr << "error: p >= n, pass --gamma explicitly (log(p)/log(n) = "
                      << nu << " is out of range)\n";
            return kExitInput;
        }
        adaptive.gamma = adenet::choose_gamma(nu);
    }

    const adenet::Grid grid = adenet::default_grid(data);
    const adenet::TuneResult tuned = adenet::tune(data, method, grid, adaptive, solver);

    if (tuned.nonconverged > 0) {
        std::cerr << "error: " << tuned.nonconverged
                  << " grid fits failed to converge\n";
        return kExitNonconverged;
    }

    // report coefficients on the original column scale
    Eigen::VectorXd beta = tuned.fit.beta;
    if (opt.standardize)
        for (Eigen::Index j = 0; j < beta.size(); ++j)
            if (col_norms[j] > 0.0) beta[j] /= col_norms[j];

    std::cout << "method: " << adenet::method_name(method) << "\n";
    std::cout << "n: " << data.n() << "  p: " << data.p() << "\n";
    std::cout << "lambda1: " << tuned.lambda1 << "\n";
    std::cout << "lambda2: " << tuned.lambda2 << "\n";
    if (method == adenet::Method::alasso || method == adenet::Method::aenet) {
        std::cout << "lambda1_star: " << tuned.lambda1_star << "\n";
        std::cout << "gamma: " << adaptive.gamma << "\n";
    }
    std::cout << "bic: " << tuned.bic << "\n";
    std::cout << "kkt_residual: " << tuned.fit.kkt_residual << " (scaled "
              << tuned.fit.kkt_residual / tuned.fit.kkt_scale << ")\n";
    std::cout << "active_set:";
    for (int j : tuned.fit.active_set) std::cout << ' ' << csv.column_names[j + 1];
    std::cout << "\ncoefficients:\n";
    for (int j : tuned.fit.active_set)
        std::cout << "  " << csv.column_names[j + 1] << ": " << beta[j] << "\n";
    if (tuned.fit.active_set.empty()) std::cout << "  (none)\n";

    if (!opt.out.empty()) {
        nlohmann::json report;
        report["method"] = adenet::method_name(method);
        report["n"] = data.n();
        report["p"] = data.p();
        report["lambda1"] = tuned.lambda1;
        report["lambda2"] = tuned.lambda2;
        if (method == adenet::Method::alasso || method == adenet::Method::aenet) {
            report["lambda1_star"] = tuned.lambda1_star;
            report["gamma"] = adaptive.gamma;
        }
        report["bic"] = tuned.bic;
        report["kkt_residual"] = tuned.fit.kkt_residual;
        report["kkt_scaled"] = tuned.fit.kkt_residual / tuned.fit.kkt_scale;
        report["converged"] = tuned.fit.converged;
        report["iterations"] = tuned.fit.iterations;
        report["standardized"] = opt.standardize;
        report["active_set"] = tuned.fit.active_set;
        std::vector<std::string> names;
        for (std::size_t c = 1; c < csv.column_names.size(); ++c)
            names.push_back(csv.column_names[c]);
        report["predictors"] = names;
        report["coefficients"] = std::vector<double>(beta.data(), beta.data() + beta.size());
        std::ofstream os(opt.out);
        if (!os) {
            std::cerr << "error: cannot write " << opt.out << "\n";
            return kExitInput;
        }
        os << report.dump(2) << "\n";
    }
    return 0;
}

struct ReproduceOptions {
    int table = 1;
    int reps = 100;
    std::uint64_t seed = 42;
    std::string scale = "desk";
    std::string out;
};

int run_reproduce(const ReproduceOptions& opt) {
    using namespace adenet;
    const std::vector<StudyMethod> standard = {
        StudyMethod::truth, StudyMethod::lasso, StudyMethod::alasso,
        StudyMethod::enet,  StudyMethod::aenet, StudyMethod::scad};
    const std::vector<StudyMethod> screened = {
        StudyMethod::truth, StudyMethod::sis_aenet, StudyMethod::sis_scad};

    std::vector<Scenario> scenarios;
    std::vector<const std::vector<StudyMethod>*> method_sets;
    const bool full = opt.scale == "full";
    if (opt.table == 1 || opt.table == 2) {
        std::vector<int> ns = full ? std::vector<int>{100, 200, opt.table == 1 ? 400 : 800}
                                   : std::vector<int>{100, 200};
        for (double rho : {0.5, 0.75}) {
            for (int n : ns) {
                scenarios.push_back(opt.table == 1
                                        ? example1_scenario(n, rho, opt.seed, opt.reps)
                                        : example2_scenario(n, rho, opt.seed, opt.reps));
                method_sets.push_back(&standard);
            }
        }
    } else if (opt.table == 3) {
        scenarios.push_back(sis_scenario(200, 1000, opt.seed, opt.reps));
        method_sets.push_back(&screened);
    } else {
        std::cerr << "error: --table must be 1, 2 or 3\n";
        return kExitInput;
    }

    std::ostringstream body;
    write_metrics_csv_header(body);
    int nonconverged = 0;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const MetricsTable table = run_study(scenarios[i], *method_sets[i]);
        write_metrics_csv_rows(body, table);
        for (const MetricsRow& row : table.rows) nonconverged += row.nonconverged;
    }

    if (opt.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream os(opt.out, std::ios::binary);
        if (!os) {
            std::cerr << "error: cannot write " << opt.out << "\n";
            return kExitInput;
        }
        os << body.str();
    }
    if (nonconverged > 0) {
        std::cerr << "error: " << nonconverged << " fits failed to converge\n";
        return kExitNonconverged;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adenet: sparse regression with adaptively weighted elastic-net shrinkage"};
    app.require_subcommand(1);

    FitOptions fit_opt;
    CLI::App* fit = app.add_subcommand("fit", "BIC-tuned fit on a CSV file "
                                              "(first column response)");
    fit->add_option("--input", fit_opt.input, "input CSV path")->required();
    fit->add_option("--method", fit_opt.method, "lasso|enet|alasso|aenet|scad")
        ->check(CLI::IsMember({"lasso", "enet", "alasso", "aenet", "scad"}));
    fit->add_flag("--standardize", fit_opt.standardize,
                  "rescale columns to unit L2 norm (prefactor becomes 1+lambda2)");
    fit->add_option("--gamma", fit_opt.gamma, "adaptive weight exponent");
    fit->add_option("--zero-mode", fit_opt.zero_mode, "offset|exclude")
        ->check(CLI::IsMember({"offset", "exclude"}));
    fit->add_option("--out", fit_opt.out, "write a JSON fit report here");

    ReproduceOptions rep_opt;
    CLI::App* rep = app.add_subcommand("reproduce", "regenerate a benchmark table as CSV");
    rep->add_option("--table", rep_opt.table, "1|2|3")->required();
    rep->add_option("--reps", rep_opt.reps, "replications per scenario");
    rep->add_option("--seed", rep_opt.seed, "base seed");
    rep->add_option("--scale", rep_opt.scale, "desk|full")
        ->check(CLI::IsMember({"desk", "full"}));
    rep->add_option("--out", rep_opt.out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
        if (fit->parsed()) return run_fit(fit_opt);
        return run_reproduce(rep_opt);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitInput;
    } catch (const adenet::CsvParseError& e) {
        std::cerr << "error: line " << e.line << ", column " << e.column << ": "
                  << e.what() << "\n";
        return kExitInput;
    } catch (const adenet::DegenerateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const adenet::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    }
}
