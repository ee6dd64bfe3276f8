#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldp/distribution.hpp"
#include "ldp/entropy.hpp"
#include "ldp/format.hpp"
#include "ldp/grid.hpp"
#include "ldp/pressure.hpp"
#include "ldp/rate.hpp"
#include "ldp/tail.hpp"
#include "ldp/verify.hpp"

namespace {

struct Common {
    std::string dist;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--dist", c.dist,
                    "Distribution spec: bernoulli:P, gaussian:MU,SIGMA, "
                    "exponential:THETA, poisson:THETA, "
                    "discrete:V1:W1,V2:W2,..., empirical:@PATH")
        ->required();
    cmd->add_option("--seed", c.seed, "RNG seed (default 0)");
    cmd->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", c.out, "Output path (default stdout)");
}

// Stream the table to --out or stdout in the chosen format.
void emit(const ldp::OutputTable& table, const Common& c) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!c.out.empty()) {
        file.open(c.out, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot open output file: " + c.out);
        os = &file;
    }
    if (c.format == "json")
        table.write_json(*os);
    else
        table.write_csv(*os);
}

ldp::TailMethod parse_method(const std::string& name) {
    if (name == "exact")
        return ldp::TailMethod::exact;
    if (name == "naive")
        return ldp::TailMethod::naive;
    if (name == "tilted")
        return ldp::TailMethod::tilted;
    throw std::invalid_argument("unknown method: " + name);
}

int run_rate(const Common& c, const std::string& x_spec) {
    ldp::Distribution d = ldp::Distribution::parse(c.dist);
    ldp::OutputTable table({"x", "limit_value", "rate", "lambda_star",
                            "case_tag"});
    for (const ldp::RateResult& r : ldp::rate_curve(d, ldp::parse_grid(x_spec)))
        table.add_row({r.x, r.limit_value, r.rate, r.lambda_star,
                       std::string(ldp::to_string(r.case_tag))});
    emit(table, c);
    return 0;
}

int run_tail(const Common& c, int n, double x, const std::string& method,
             long long trials) {
    ldp::Distribution d = ldp::Distribution::parse(c.dist);
    ldp::TailMethod m = parse_method(method);
    ldp::TailEstimate est =
        m == ldp::TailMethod::exact
            ? ldp::tail_exact(d, n, x)
            : (m == ldp::TailMethod::naive
                   ? ldp::tail_naive(d, n, x, trials, c.seed)
                   : ldp::tail_tilted(d, n, x, trials, c.seed));
    ldp::OutputTable table({"n", "x", "prob", "log_prob", "stderr", "method",
                            "lambda_used", "trials", "seed"});
    table.add_row({static_cast<std::int64_t>(est.n), est.x, est.prob,
                   est.log_prob, est.std_error,
                   std::string(ldp::to_string(est.method)), est.lambda_used,
                   static_cast<std::int64_t>(est.trials), est.seed});
    emit(table, c);
    return 0;
}

int run_converge(const Common& c, double x, const std::string& n_spec,
                 const std::string& method, long long trials) {
    ldp::Distribution d = ldp::Distribution::parse(c.dist);
    std::vector<int> ns = ldp::parse_int_list(n_spec);
    ldp::EntropyCurve curve = ldp::entropy_curve(
        d, {x}, ns, parse_method(method), trials, c.seed);

    ldp::OutputTable table(
        {"n", "s_n", "sup_so_far", "predicted_limit", "abs_gap"});
    ldp::ExtendedReal sup = ldp::ExtendedReal::neg_inf();
    ldp::ExtendedReal predicted = curve.predicted[0];
    for (std::size_t i = 0; i < ns.size(); ++i) {
        ldp::ExtendedReal sn = curve.values[i][0];
        if (sn > sup)
            sup = sn;
        ldp::ExtendedReal gap = ldp::ExtendedReal::pos_inf();
        if (sn.is_finite() && predicted.is_finite())
            gap = std::abs(sn.value() - predicted.value());
        else if (sn == predicted)
            gap = 0.0;
        table.add_row({static_cast<std::int64_t>(ns[i]), sn, sup, predicted,
                       gap});
    }
    emit(table, c);
    return 0;
}

int run_dual(const Common& c, const std::string& lambda_spec,
             const std::string& source, double grid_step,
             const std::string& n_spec, double u_lo, double u_hi,
             bool has_range) {
    ldp::Distribution d = ldp::Distribution::parse(c.dist);
    if (!(grid_step > 0.0))
        throw std::invalid_argument("--grid-step must be positive");
    std::vector<int> ns = ldp::parse_int_list(n_spec);

    ldp::OutputTable table({"lambda", "pressure", "dual_sup", "gap",
                            "source"});
    for (double lambda : ldp::parse_grid(lambda_spec)) {
        if (lambda < 0.0)
            throw std::invalid_argument("--lambda must be non-negative");
        auto [lo, hi] = has_range
                            ? std::pair<double, double>{u_lo, u_hi}
                            : ldp::dual_gap_default_range(d, lambda);
        ldp::ExtendedReal p = ldp::pressure(d, lambda);
        ldp::ExtendedReal sup = ldp::ExtendedReal::neg_inf();
        ldp::ExtendedReal gap = ldp::ExtendedReal::pos_inf();
        if (source == "predicted") {
            sup = ldp::dual_sup_predicted(d, lambda, lo, hi, grid_step);
            gap = p - sup;
        } else {
            std::vector<double> us;
            for (double u = lo; u < hi; u += grid_step)
                us.push_back(u);
            us.push_back(hi);
            ldp::EntropyCurve curve = ldp::entropy_curve(
                d, us, ns, ldp::TailMethod::exact, 0, c.seed);
            gap = ldp::dual_gap(d, lambda, curve,
                                ldp::EntropySource::empirical_sup);
            for (std::size_t j = 0; j < us.size(); ++j) {
                ldp::ExtendedReal term =
                    ldp::ExtendedReal(lambda * us[j]) + curve.sup_values[j];
                if (term > sup)
                    sup = term;
            }
        }
        table.add_row({lambda, p, sup, gap, source});
    }
    emit(table, c);
    return 0;
}

int run_verify(const Common& c) {
    ldp::Distribution d = ldp::Distribution::parse(c.dist);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!c.out.empty()) {
        file.open(c.out, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot open output file: " + c.out);
        os = &file;
    }
    bool failed = false;
    for (const ldp::CheckResult& r : ldp::run_verification(d, c.seed)) {
        *os << ldp::to_string(r.status) << ' ' << r.name
            << " worst_margin=" << ldp::format_real(r.worst_margin) << " ("
            << r.detail << ")\n";
        if (r.status == ldp::CheckStatus::fail)
            failed = true;
    }
    return failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Large-deviation rate functions by convex duality, with "
                 "exact, naive and tilted tail estimators"};
    app.require_subcommand(1);

    Common rate_c;
    std::string rate_x;
    CLI::App* rate_cmd =
        app.add_subcommand("rate", "Rate function and limit per threshold");
    add_common(rate_cmd, rate_c);
    rate_cmd->add_option("--x", rate_x, "Threshold grid (A:B:STEP or list)")
        ->required();

    Common tail_c;
    int tail_n = 1;
    double tail_x = 0.0;
    std::string tail_method = "exact";
    long long tail_trials = 100000;
    CLI::App* tail_cmd =
        app.add_subcommand("tail", "Estimate P(mean of n draws >= x)");
    add_common(tail_cmd, tail_c);
    tail_cmd->add_option("--n", tail_n, "Number of summands")->required();
    tail_cmd->add_option("--x", tail_x, "Threshold")->required();
    tail_cmd->add_option("--method", tail_method, "exact|naive|tilted");
    tail_cmd->add_option("--trials", tail_trials, "Monte Carlo trials");

    Common conv_c;
    double conv_x = 0.0;
    std::string conv_n = "1,2,4,8,16,32,64";
    std::string conv_method = "exact";
    long long conv_trials = 100000;
    CLI::App* conv_cmd = app.add_subcommand(
        "converge", "Empirical (1/n) log-tails against the predicted limit");
    add_common(conv_cmd, conv_c);
    conv_cmd->add_option("--x", conv_x, "Threshold")->required();
    conv_cmd->add_option("--n-list", conv_n, "n grid (list or A:B:STEP)");
    conv_cmd->add_option("--method", conv_method, "exact|naive|tilted");
    conv_cmd->add_option("--trials", conv_trials, "Monte Carlo trials");

    Common dual_c;
    std::string dual_lambda;
    std::string dual_source = "sup";
    double dual_step = 1e-3;
    std::string dual_n = "1:32:1";
    double dual_ulo = 0.0, dual_uhi = 0.0;
    CLI::App* dual_cmd = app.add_subcommand(
        "dual", "Chernoff gap p(lambda) - sup_u(lambda u + s(u)) per lambda");
    add_common(dual_cmd, dual_c);
    dual_cmd->add_option("--lambda", dual_lambda, "Lambda grid")->required();
    dual_cmd->add_option("--source", dual_source, "s from: sup|predicted")
        ->check(CLI::IsMember({"sup", "predicted"}));
    dual_cmd->add_option("--grid-step", dual_step, "u-grid step");
    dual_cmd->add_option("--n-list", dual_n, "n grid for the empirical sup");
    CLI::Option* ulo =
        dual_cmd->add_option("--u-lo", dual_ulo, "u-range lower end");
    CLI::Option* uhi =
        dual_cmd->add_option("--u-hi", dual_uhi, "u-range upper end");
    ulo->needs(uhi);
    uhi->needs(ulo);

    Common verify_c;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "Run every property check; exit 1 on any FAIL");
    add_common(verify_cmd, verify_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        if (rate_cmd->parsed())
            return run_rate(rate_c, rate_x);
        if (tail_cmd->parsed())
            return run_tail(tail_c, tail_n, tail_x, tail_method, tail_trials);
        if (conv_cmd->parsed())
            return run_converge(conv_c, conv_x, conv_n, conv_method,
                                conv_trials);
        if (dual_cmd->parsed())
            return run_dual(dual_c, dual_lambda, dual_source, dual_step,
                            dual_n, dual_ulo, dual_uhi,
                            ulo->count() > 0);
        if (verify_cmd->parsed())
            return run_verify(verify_c);
    } catch (const ldp::ParseError& e) {
        // ParseError messages already carry the offending token and position.
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
