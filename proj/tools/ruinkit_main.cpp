// Command line front end: every subcommand loads one config file, renders one
// rectangular table (csv or json) to stdout, and writes it next to the caller.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ruinkit/config.hpp"
#include "ruinkit/edpf.hpp"
#include "ruinkit/edvci.hpp"
#include "ruinkit/mc_sim.hpp"
#include "ruinkit/output.hpp"
#include "ruinkit/scale.hpp"
#include "ruinkit/tilt.hpp"
#include "ruinkit/validation.hpp"

namespace {

using namespace ruinkit;

std::string describe_model(const LevyModel& m) {
    std::string s = "c=" + format_number(m.c) + " sigma=" + format_number(m.sigma);
    const LevyMeasureSpec& nu = m.measure;
    switch (nu.kind()) {
        case ClaimKind::Exponential:
            s += " claim=exponential lambda=" + format_number(nu.lambda_total()) +
                 " mu=" + format_number(nu.exp_mu());
            break;
        case ClaimKind::Gamma:
            s += " claim=gamma lambda=" + format_number(nu.lambda_total()) +
                 " shape=" + format_number(nu.gamma_shape()) +
                 " rate=" + format_number(nu.gamma_rate());
            break;
        case ClaimKind::Uniform:
            s += " claim=uniform lambda=" + format_number(nu.lambda_total()) +
                 " lo=" + format_number(nu.uniform_lo()) + " hi=" + format_number(nu.uniform_hi());
            break;
        case ClaimKind::Tabulated:
            s += " claim=tabulated";
            break;
    }
    return s;
}

std::vector<std::pair<std::string, std::string>> base_meta(const ExperimentConfig& cfg) {
    return {{"model", describe_model(cfg.model)},
            {"grid", "x_max=" + format_number(cfg.grid.x_max) + " cells=" +
                         std::to_string(static_cast<long long>(cfg.grid.cells))}};
}

Table build_phi(const ExperimentConfig& cfg) {
    Table t;
    t.command = "phi";
    t.meta = base_meta(cfg);
    t.columns = {"q", "phi"};
    for (double q : cfg.q_values) t.rows.push_back({q, phi_inverse(cfg.model, q)});
    return t;
}

Table build_ruin(const ExperimentConfig& cfg) {
    Table t;
    t.command = "ruin";
    t.meta = base_meta(cfg);
    t.columns = {"x", "ruin_probability"};
    const SurvivalResult surv = pk_survival(tilt_model(cfg.model, 0.0), cfg.grid);
    for (double x : cfg.x_values) t.rows.push_back({x, 1.0 - surv.cdf.value_at(x)});
    return t;
}

Table build_scale(const ExperimentConfig& cfg) {
    Table t;
    t.command = "scale";
    t.meta = base_meta(cfg);
    t.columns = {"q", "x", "w_q", "w_phi", "f1_density"};
    for (double q : cfg.q_values) {
        const ScaleResult w = scale_function(cfg.model, q, cfg.grid);
        const ScaleResult w_phi = scale_function_tilted(tilt_model(cfg.model, q), cfg.grid);
        const GridFunction first = f1(cfg.model, q, cfg.grid);
        for (double x : cfg.x_values)
            t.rows.push_back(
                {q, x, w.fn.value_at(x), w_phi.fn.value_at(x), first.value_at(x)});
    }
    return t;
}

Table build_edpf(const ExperimentConfig& cfg) {
    Table t;
    t.command = "edpf";
    t.meta = base_meta(cfg);
    t.meta.emplace_back("penalty", cfg.penalty);
    if (!cfg.subsequent.empty()) t.meta.emplace_back("subsequent", cfg.subsequent);
    t.columns = {"q", "x", "classic", "extended", "series_terms", "tail_bound"};
    const PenaltySpec penalty = build_penalty(cfg.penalty, cfg.subsequent, cfg.grid.x_max);
    for (double q : cfg.q_values)
        for (double x : cfg.x_values) {
            const ExtendedEdpfResult r = extended_edpf(cfg.model, q, x, penalty, cfg.grid);
            t.rows.push_back({q, x, r.classic_part, r.value,
                              static_cast<double>(r.series_terms), r.series_tail_bound});
        }
    return t;
}

Table build_edvci(const ExperimentConfig& cfg) {
    Table t;
    t.command = "edvci";
    t.meta = base_meta(cfg);
    const bool classical = cfg.model.sigma == 0.0;
    t.columns = {"q", "x", "varphi", "kappa", "xi", "delta", "value"};
    if (classical) t.columns.push_back("classical_value");
    for (double q : cfg.q_values)
        for (double x : cfg.x_values) {
            const EdvciReport r = edvci_value(cfg.model, q, x, cfg.grid);
            std::vector<double> row{q, x, r.varphi, r.kappa, r.xi, r.delta, r.value};
            if (classical) row.push_back(r.classical_value.value());
            t.rows.push_back(std::move(row));
        }
    return t;
}

Table build_simulate(const ExperimentConfig& cfg) {
    Table t;
    t.command = "simulate";
    t.meta = base_meta(cfg);
    t.meta.emplace_back("target", cfg.target);
    t.meta.emplace_back("scheme", cfg.scheme);
    t.meta.emplace_back("seed", std::to_string(static_cast<unsigned long long>(cfg.seed)));
    if (cfg.t_max > 0.0) t.meta.emplace_back("t_max", format_number(cfg.t_max));
    if (cfg.target == "edpf") {
        t.meta.emplace_back("penalty", cfg.penalty);
        if (!cfg.subsequent.empty()) t.meta.emplace_back("subsequent", cfg.subsequent);
    }
    t.columns = {"q", "x", "estimate", "std_error", "paths"};
    for (double q : cfg.q_values)
        for (double x : cfg.x_values) {
            const SimConfig sim = cfg.sim(q, x);
            Estimate est;
            if (cfg.target == "n_probability") {
                est = estimate_n_probability(cfg.model, cfg.n_records, sim);
            } else if (cfg.target == "edpf") {
                const PenaltySpec penalty =
                    build_penalty(cfg.penalty, cfg.subsequent, cfg.grid.x_max);
                est = estimate_edpf(cfg.model, penalty, sim);
            } else {
                est = estimate(cfg.model, parse_target(cfg.target), sim);
            }
            t.rows.push_back({q, x, est.value, est.std_error, static_cast<double>(est.paths)});
        }
    return t;
}

int run_validate(const ExperimentConfig& cfg) {
    const ValidationReport report = run_acceptance(cfg.seed);
    const std::string out = cfg.out_path.empty() ? "validate.txt" : cfg.out_path;
    write_text_file(out, report.rendered);
    std::fputs(report.rendered.c_str(), stdout);
    return report.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scale functions, discounted penalties, and capital injection values for a "
                 "drift-diffusion surplus hit by positive jumps"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "experiment configuration file")->required();
    std::optional<std::string> out_opt, format_opt, penalty_opt;
    std::optional<double> q_opt, x_opt;
    std::optional<std::uint64_t> seed_opt;
    std::optional<std::int64_t> paths_opt;
    app.add_option("--out", out_opt, "output file path");
    app.add_option("--format", format_opt, "csv or json");
    app.add_option("--seed", seed_opt, "simulation seed");
    app.add_option("--paths", paths_opt, "simulation path count");
    app.add_option("--q", q_opt, "single discount rate, replaces the configured list");
    app.add_option("--x", x_opt, "single starting surplus, replaces the configured list");
    app.add_option("--penalty", penalty_opt, "first-charge penalty name");

    for (const char* name : {"phi", "ruin", "scale", "edpf", "edvci", "simulate", "validate"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        ExperimentConfig cfg = load_config_file(config_path);
        if (out_opt) cfg.out_path = *out_opt;
        if (format_opt) cfg.format = *format_opt;
        if (seed_opt) cfg.seed = *seed_opt;
        if (paths_opt) cfg.paths = *paths_opt;
        if (q_opt) cfg.q_values = {*q_opt};
        if (x_opt) cfg.x_values = {*x_opt};
        if (penalty_opt) cfg.penalty = *penalty_opt;
        if (cfg.format != "csv" && cfg.format != "json")
            throw std::invalid_argument("format must be csv or json");
        if (cfg.paths < 1) throw std::invalid_argument("paths must be >= 1");

        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "validate") return run_validate(cfg);

        Table table;
        if (command == "phi") table = build_phi(cfg);
        else if (command == "ruin") table = build_ruin(cfg);
        else if (command == "scale") table = build_scale(cfg);
        else if (command == "edpf") table = build_edpf(cfg);
        else if (command == "edvci") table = build_edvci(cfg);
        else table = build_simulate(cfg);

        const std::string rendered =
            cfg.format == "json" ? render_json(table) : render_csv(table);
        const std::string out =
            cfg.out_path.empty() ? command + "." + cfg.format : cfg.out_path;
        write_text_file(out, rendered);
        std::fputs(rendered.c_str(), stdout);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
