// conatsim command-line scenario runner: coherent CV protocols, conat-channel
// verification, parameter sweeps and the composition-degradation study.
//
// Exit codes: 0 success, 2 invalid config or unknown subcommand, 3 physics
// invariant violation, 4 conformance failure under --strict.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "conatsim/rng.hpp"
#include "conatsim/serialize.hpp"

namespace {

using namespace conatsim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitConformance = 4;

class ConformanceFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_reals(const std::string& csv) {
    std::vector<double> values;
    std::stringstream stream(csv);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw std::invalid_argument("could not parse '" + token + "' as a number");
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("expected a comma-separated list of numbers");
    }
    return values;
}

GaussianState input_from_means(const std::vector<double>& means) {
    if (means.size() % 2 != 0 || means.empty()) {
        throw std::invalid_argument("--in expects pairs 'x1,p1[,x2,p2]'");
    }
    GaussianState state = new_coherent(means[0], means[1]);
    for (std::size_t k = 2; k + 1 < means.size(); k += 2) {
        state = tensor(state, new_coherent(means[k], means[k + 1]));
    }
    return state;
}

struct OutputOpts {
    std::string format = "json";
    std::string out_path;
    std::string config_path;
    bool strict = false;
};

void add_output_opts(CLI::App* cmd, OutputOpts& opts) {
    cmd->add_option("--format", opts.format, "Output format (json or csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", opts.out_path, "Write the report to this file as well");
    cmd->add_option("--config", opts.config_path,
                    "JSON config file; explicit flags take precedence");
    cmd->add_flag("--strict", opts.strict, "Exit 4 when a conformance check fails");
}

/// Flags override config-file values: a config entry is applied only when the
/// matching flag was not given on the command line.
void apply_config(CLI::App* cmd, const OutputOpts& opts) {
    if (opts.config_path.empty()) {
        return;
    }
    std::ifstream in(opts.config_path);
    if (!in) {
        throw std::invalid_argument("cannot open config file " + opts.config_path);
    }
    nlohmann::json config;
    try {
        in >> config;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("bad config file: " + std::string(e.what()));
    }
    for (const auto& [key, value] : config.items()) {
        CLI::Option* option = cmd->get_option_no_throw("--" + key);
        if (option == nullptr) {
            throw std::invalid_argument("config key '" + key + "' is not an option of '" +
                                        cmd->get_name() + "'");
        }
        if (option->count() > 0) {
            continue;
        }
        const std::string text =
            value.is_string() ? value.get<std::string>() : value.dump();
        option->add_result(text);
    }
    for (CLI::Option* option : cmd->get_options()) {
        if (option->count() > 0 && !option->get_callback_run()) {
            option->run_callback();
        }
    }
}

void emit(const OutputOpts& opts, const std::string& payload) {
    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path, std::ios::binary);
        if (!out) {
            throw std::invalid_argument("cannot write to " + opts.out_path);
        }
        out << payload;
    }
    std::cout << payload;
    if (payload.empty() || payload.back() != '\n') {
        std::cout << '\n';
    }
}

void require_conforming(const OutputOpts& opts, const std::vector<ConatReport>& reports) {
    if (!opts.strict) {
        return;
    }
    for (const auto& report : reports) {
        if (!report.conforming) {
            throw ConformanceFailure(to_string(report.kind) +
                                     " channel conditions not met (achieved epsilon " +
                                     format_double(report.achieved_epsilon) + ")");
        }
    }
}

void print_outcome_summary(const std::string& name, const ProtocolOutcome& outcome) {
    std::cout << name << ":";
    if (outcome.fidelity) {
        std::cout << " fidelity=" << format_double(*outcome.fidelity);
    }
    for (const auto& [key, value] : outcome.noise_ledger) {
        std::cout << ' ' << key << '=' << format_double(value);
    }
    for (const auto& report : outcome.conat_reports) {
        std::cout << ' ' << to_string(report.kind)
                  << "(eps=" << format_double(report.achieved_epsilon)
                  << (report.conforming ? ",conforming)" : ",non-conforming)");
    }
    std::cout << '\n';
}

// ---- subcommands ----------------------------------------------------------

int run_teleport(const OutputOpts& opts, double r, double rc_mq, double rc_pq,
                 const std::vector<double>& in_means) {
    const ProtocolOutcome outcome =
        coherent_teleport(input_from_means(in_means), ResourceSpec::tmsv(r),
                          ConatChannelSpec::mq(rc_mq), ConatChannelSpec::pq(rc_pq));
    print_outcome_summary("coherent teleportation", outcome);
    emit(opts, to_json(outcome).dump(2));
    require_conforming(opts, outcome.conat_reports);
    return kExitOk;
}

int run_alt_teleport(const OutputOpts& opts, double rc_pq, double rc_mq,
                     const std::vector<double>& in_means) {
    const ProtocolOutcome outcome =
        alternate_coherent_teleport(input_from_means(in_means), ConatChannelSpec::pq(rc_pq),
                                    ConatChannelSpec::mq(rc_mq));
    print_outcome_summary("alternate coherent teleportation", outcome);
    emit(opts, to_json(outcome).dump(2));
    require_conforming(opts, outcome.conat_reports);
    return kExitOk;
}

int run_superdense(const OutputOpts& opts, double r, const std::vector<double>& in_means) {
    const ProtocolOutcome outcome =
        coherent_superdense(input_from_means(in_means), ResourceSpec::tmsv(r));
    print_outcome_summary("coherent superdense coding", outcome);
    emit(opts, to_json(outcome).dump(2));
    require_conforming(opts, outcome.conat_reports);
    return kExitOk;
}

int run_compose(const OutputOpts& opts, int variant, double r1, double r2, double eps_pq,
                double eps_mq, const std::vector<double>& in_means) {
    ProtocolOutcome outcome = [&] {
        if (variant == 1) {
            return compose_teleport_via_superdense(input_from_means(in_means),
                                                   ResourceSpec::tmsv(r1),
                                                   ResourceSpec::tmsv(r2));
        }
        return compose_superdense_via_teleport(input_from_means(in_means),
                                               ResourceSpec::tmsv(r1), eps_pq, eps_mq);
    }();
    print_outcome_summary(variant == 1 ? "teleportation via superdense coding"
                                       : "superdense coding via teleportation",
                          outcome);
    emit(opts, to_json(outcome).dump(2));
    require_conforming(opts, outcome.conat_reports);
    return kExitOk;
}

int run_degrade(const OutputOpts& opts, const std::string& eps_csv, int depth) {
    const std::vector<double> eps = parse_reals(eps_csv);
    if (eps.size() != 3) {
        throw std::invalid_argument("--eps expects 'eps1,eps2,eps3'");
    }
    const DegradationTrace trace = iterate_composition(eps[0], eps[1], eps[2], depth);
    const DegradationSummary summary = degradation_report(trace);
    std::cout << "degradation study: max_depth=" << summary.max_depth;
    if (summary.first_entanglement_violation) {
        std::cout << " first_entanglement_violation="
                  << *summary.first_entanglement_violation;
    }
    if (summary.first_fidelity_violation) {
        std::cout << " first_fidelity_violation=" << *summary.first_fidelity_violation;
    }
    std::cout << " slope=" << format_double(summary.slope) << '\n';
    emit(opts, opts.format == "csv" ? degradation_csv(trace) : to_json(trace).dump(2));
    if (opts.strict && trace.max_depth < depth) {
        throw ConformanceFailure("composition chain degrades before the requested depth");
    }
    return kExitOk;
}

int run_verify_conat(const OutputOpts& opts, const std::string& kind_name, double rc,
                     double ancilla_var, const std::vector<double>& in_means) {
    const ConatKind kind = kind_name == "mq" ? ConatKind::MQ : ConatKind::PQ;
    const GaussianState input = input_from_means(in_means);
    if (input.n_modes() != 1) {
        throw std::invalid_argument("verify-conat expects a single-mode input");
    }
    const ConatApplication applied = [&] {
        if (ancilla_var > 0.0) {
            const GaussianState ancilla = squeezed_to_variance(ancilla_var);
            return kind == ConatKind::PQ ? apply_pq_conat_with_ancilla(input, 0, ancilla)
                                         : apply_mq_conat_with_ancilla(input, 0, ancilla);
        }
        return kind == ConatKind::PQ ? apply_pq_conat(input, 0, ConatChannelSpec::pq(rc))
                                     : apply_mq_conat(input, 0, ConatChannelSpec::mq(rc));
    }();
    const ConatReport report =
        verify_conat(applied.end_to_end_map, applied.input_with_ancilla, kind,
                     applied.sender.index, applied.receiver.index);
    std::cout << "conat verification: kind=" << to_string(report.kind)
              << " achieved_epsilon=" << format_double(report.achieved_epsilon)
              << " conforming=" << (report.conforming ? "yes" : "no") << '\n';
    emit(opts, to_json(report).dump(2));
    require_conforming(opts, {report});
    return kExitOk;
}

int run_baseline(const OutputOpts& opts, double r, std::size_t trials, std::uint64_t seed,
                 const std::vector<double>& in_means) {
    const GaussianState input = input_from_means(in_means);
    const double average = average_bk_fidelity(input, ResourceSpec::tmsv(r), trials, seed);
    const ProtocolOutcome single = standard_bk_teleport(input, ResourceSpec::tmsv(r), seed);
    const double closed_form = 2.0 / (2.0 + 2.0 * std::exp(-2.0 * r));
    std::cout << "measurement baseline: average_fidelity=" << format_double(average)
              << " closed_form=" << format_double(closed_form) << " trials=" << trials
              << '\n';
    nlohmann::json payload{{"average_fidelity", average},
                           {"closed_form", closed_form},
                           {"trials", trials},
                           {"seed", seed},
                           {"single_run", to_json(single)}};
    emit(opts, payload.dump(2));
    return kExitOk;
}

int run_sweep(const OutputOpts& opts, const std::string& r_csv, const std::string& rc_csv,
              const std::vector<double>& in_means) {
    const std::vector<double> r_values = parse_reals(r_csv);
    const std::vector<double> rc_values = parse_reals(rc_csv);
    const GaussianState input = input_from_means(in_means);

    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream csv;
    csv << "# conatsim sweep v1\n";
    csv << "index,r,rc,eps1,eps2,eps3,sigma_x2,sigma_p2,fidelity,fidelity_bound\n";
    std::size_t index = 0;
    for (double r : r_values) {
        for (double rc : rc_values) {
            const ProtocolOutcome outcome =
                coherent_teleport(input, ResourceSpec::tmsv(r), ConatChannelSpec::mq(rc),
                                  ConatChannelSpec::pq(rc));
            const auto& ledger = outcome.noise_ledger;
            const double bound = fidelity_lower_bound(
                FidelityBound::CoherentTeleport,
                {ledger.at("eps1"), ledger.at("eps2"), ledger.at("eps3")});
            csv << index << ',' << format_double(r) << ',' << format_double(rc) << ','
                << format_double(ledger.at("eps1")) << ','
                << format_double(ledger.at("eps2")) << ','
                << format_double(ledger.at("eps3")) << ','
                << format_double(ledger.at("sigma_x2")) << ','
                << format_double(ledger.at("sigma_p2")) << ','
                << format_double(*outcome.fidelity) << ',' << format_double(bound) << '\n';
            rows.push_back({{"index", index},
                            {"r", r},
                            {"rc", rc},
                            {"eps1", ledger.at("eps1")},
                            {"eps2", ledger.at("eps2")},
                            {"eps3", ledger.at("eps3")},
                            {"sigma_x2", ledger.at("sigma_x2")},
                            {"sigma_p2", ledger.at("sigma_p2")},
                            {"fidelity", *outcome.fidelity},
                            {"fidelity_bound", bound}});
            ++index;
        }
    }
    std::cout << "sweep: " << index << " grid points over " << r_values.size() << " x "
              << rc_values.size() << " (r, rc) values\n";
    emit(opts, opts.format == "csv" ? csv.str() : rows.dump(2));
    return kExitOk;
}

int run_verify(const OutputOpts& opts, double r, double rc, std::size_t samples,
               std::uint64_t seed, double sigmas) {
    const GaussianState one = new_coherent(3.0, -2.0);
    const GaussianState two = tensor(new_coherent(3.0, -2.0), new_coherent(-1.0, 1.0));
    const double eps = std::exp(-2.0 * rc) / 2.0;

    std::vector<std::pair<std::string, ProtocolOutcome>> runs;
    runs.emplace_back("teleport",
                      coherent_teleport(one, ResourceSpec::tmsv(r), ConatChannelSpec::mq(rc),
                                        ConatChannelSpec::pq(rc)));
    runs.emplace_back("alt-teleport",
                      alternate_coherent_teleport(one, ConatChannelSpec::pq(rc),
                                                  ConatChannelSpec::mq(rc)));
    runs.emplace_back("superdense", coherent_superdense(two, ResourceSpec::tmsv(r)));
    runs.emplace_back("compose-1",
                      compose_teleport_via_superdense(one, ResourceSpec::tmsv(r),
                                                      ResourceSpec::tmsv(r)));
    runs.emplace_back("compose-2",
                      compose_superdense_via_teleport(two, ResourceSpec::tmsv(r), eps, eps));

    nlohmann::json payload;
    payload["rng"] = rng::kAlgorithmName;
    payload["samples"] = samples;
    payload["seed"] = seed;
    payload["tolerance_sigmas"] = sigmas;
    nlohmann::json verdicts = nlohmann::json::array();
    bool all_pass = true;
    std::uint64_t run_seed = seed;
    for (const auto& [name, outcome] : runs) {
        const SampleBatch initial = sample_state(outcome.initial_state, samples, run_seed++);
        const SampleBatch pushed = push(initial, outcome.end_to_end_map);
        const MomentVerdict verdict = compare_moments(pushed, outcome.final_state, sigmas);
        std::cout << "verify " << name << ": " << (verdict.pass ? "pass" : "FAIL")
                  << " (max |z| = " << format_double(verdict.max_abs_z) << ")\n";
        nlohmann::json entry = to_json(verdict);
        entry["protocol"] = name;
        verdicts.push_back(entry);
        all_pass = all_pass && verdict.pass;
    }
    payload["verdicts"] = verdicts;
    payload["pass"] = all_pass;
    emit(opts, payload.dump(2));
    if (!all_pass) {
        throw PhysicsError("Monte-Carlo moments disagree with the covariance engine");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian continuous-variable simulator for coherent communication "
                 "protocols built on conat channels"};
    app.require_subcommand(1);

    OutputOpts teleport_opts;
    double teleport_r = 1.0, teleport_rc = 1.0;
    double teleport_rc_mq = -1.0, teleport_rc_pq = -1.0;
    std::string teleport_in = "3,-2";
    CLI::App* teleport = app.add_subcommand("teleport", "Coherent teleportation");
    teleport->add_option("--r", teleport_r, "Resource squeezing");
    teleport->add_option("--rc", teleport_rc, "Conat ancilla squeezing for both channels");
    teleport->add_option("--rc-mq", teleport_rc_mq, "Override for the MQ channel");
    teleport->add_option("--rc-pq", teleport_rc_pq, "Override for the PQ channel");
    teleport->add_option("--in", teleport_in, "Input coherent amplitudes 'x,p'");
    add_output_opts(teleport, teleport_opts);

    OutputOpts alt_opts;
    double alt_rc = 1.0, alt_rc_pq = -1.0, alt_rc_mq = -1.0;
    std::string alt_in = "3,-2";
    CLI::App* alt = app.add_subcommand("alt-teleport", "Alternate coherent teleportation");
    alt->add_option("--rc", alt_rc, "Conat ancilla squeezing for both channels");
    alt->add_option("--rc-pq", alt_rc_pq, "Override for the PQ channel");
    alt->add_option("--rc-mq", alt_rc_mq, "Override for the MQ channel");
    alt->add_option("--in", alt_in, "Input coherent amplitudes 'x,p'");
    add_output_opts(alt, alt_opts);

    OutputOpts superdense_opts;
    double superdense_r = 1.0;
    std::string superdense_in = "3,-2,-1,1";
    CLI::App* superdense = app.add_subcommand("superdense", "Coherent superdense coding");
    superdense->add_option("--r", superdense_r, "Resource squeezing");
    superdense->add_option("--in", superdense_in, "Two-mode input 'x1,p1,x2,p2'");
    add_output_opts(superdense, superdense_opts);

    OutputOpts compose_opts;
    int compose_variant = 1;
    double compose_r1 = 1.0, compose_r2 = 1.0, compose_eps_pq = 0.1, compose_eps_mq = 0.1;
    std::string compose_in;
    CLI::App* compose = app.add_subcommand("compose", "Protocol compositions");
    compose->add_option("--variant", compose_variant,
                        "1: teleport via superdense; 2: superdense via teleport")
        ->check(CLI::IsMember({1, 2}));
    compose->add_option("--r1", compose_r1, "First resource squeezing");
    compose->add_option("--r2", compose_r2, "Second resource squeezing (variant 1)");
    compose->add_option("--eps-pq", compose_eps_pq, "PQ channel epsilon (variant 2)");
    compose->add_option("--eps-mq", compose_eps_mq, "MQ channel epsilon (variant 2)");
    compose->add_option("--in", compose_in, "Input amplitudes (defaults per variant)");
    add_output_opts(compose, compose_opts);

    OutputOpts degrade_opts;
    std::string degrade_eps = "0.1,0.1,0.1";
    int degrade_depth = 10;
    CLI::App* degrade = app.add_subcommand("degrade", "Composition degradation study");
    degrade->add_option("--eps", degrade_eps, "Component epsilons 'eps1,eps2,eps3'");
    degrade->add_option("--depth", degrade_depth, "Number of composition levels");
    add_output_opts(degrade, degrade_opts);

    OutputOpts vc_opts;
    std::string vc_kind = "pq";
    double vc_rc = 1.0, vc_ancilla_var = 0.0;
    std::string vc_in = "1,0";
    CLI::App* vc = app.add_subcommand("verify-conat", "Conat channel condition checker");
    vc->add_option("--kind", vc_kind, "Channel kind")->check(CLI::IsMember({"pq", "mq"}));
    vc->add_option("--rc", vc_rc, "Ancilla squeezing of the canonical realization");
    vc->add_option("--ancilla-var", vc_ancilla_var,
                   "Use a minimum-uncertainty ancilla with this position variance");
    vc->add_option("--in", vc_in, "Input coherent amplitudes 'x,p'");
    add_output_opts(vc, vc_opts);

    OutputOpts baseline_opts;
    double baseline_r = 1.0;
    std::size_t baseline_trials = 100000;
    std::uint64_t baseline_seed = 1;
    std::string baseline_in = "3,-2";
    CLI::App* baseline =
        app.add_subcommand("baseline", "Measurement-based teleportation baseline");
    baseline->add_option("--r", baseline_r, "Resource squeezing");
    baseline->add_option("--trials", baseline_trials, "Monte-Carlo trials");
    baseline->add_option("--seed", baseline_seed, "Base seed");
    baseline->add_option("--in", baseline_in, "Input coherent amplitudes 'x,p'");
    add_output_opts(baseline, baseline_opts);

    OutputOpts sweep_opts;
    std::string sweep_r = "0,0.5,1,1.5,2";
    std::string sweep_rc = "1";
    std::string sweep_in = "3,-2";
    CLI::App* sweep = app.add_subcommand("sweep", "Teleportation fidelity over a grid");
    sweep->add_option("--r-values", sweep_r, "Comma-separated resource squeezings");
    sweep->add_option("--rc-values", sweep_rc, "Comma-separated channel squeezings");
    sweep->add_option("--in", sweep_in, "Input coherent amplitudes 'x,p'");
    add_output_opts(sweep, sweep_opts);

    OutputOpts verify_opts;
    double verify_r = 1.0, verify_rc = 1.0, verify_sigmas = 5.0;
    std::size_t verify_samples = 100000;
    std::uint64_t verify_seed = 20070301;
    CLI::App* verify = app.add_subcommand("verify", "Monte-Carlo oracle over every protocol");
    verify->add_option("--r", verify_r, "Resource squeezing");
    verify->add_option("--rc", verify_rc, "Conat ancilla squeezing");
    verify->add_option("--samples", verify_samples, "Samples per protocol");
    verify->add_option("--seed", verify_seed, "Base seed");
    verify->add_option("--sigmas", verify_sigmas, "z-score tolerance");
    add_output_opts(verify, verify_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (teleport->parsed()) {
            apply_config(teleport, teleport_opts);
            const double rc_mq = teleport_rc_mq >= 0.0 ? teleport_rc_mq : teleport_rc;
            const double rc_pq = teleport_rc_pq >= 0.0 ? teleport_rc_pq : teleport_rc;
            return run_teleport(teleport_opts, teleport_r, rc_mq, rc_pq,
                                parse_reals(teleport_in));
        }
        if (alt->parsed()) {
            apply_config(alt, alt_opts);
            const double rc_pq = alt_rc_pq >= 0.0 ? alt_rc_pq : alt_rc;
            const double rc_mq = alt_rc_mq >= 0.0 ? alt_rc_mq : alt_rc;
            return run_alt_teleport(alt_opts, rc_pq, rc_mq, parse_reals(alt_in));
        }
        if (superdense->parsed()) {
            apply_config(superdense, superdense_opts);
            return run_superdense(superdense_opts, superdense_r, parse_reals(superdense_in));
        }
        if (compose->parsed()) {
            apply_config(compose, compose_opts);
            if (compose_in.empty()) {
                compose_in = compose_variant == 1 ? "3,-2" : "3,-2,-1,1";
            }
            return run_compose(compose_opts, compose_variant, compose_r1, compose_r2,
                               compose_eps_pq, compose_eps_mq, parse_reals(compose_in));
        }
        if (degrade->parsed()) {
            apply_config(degrade, degrade_opts);
            return run_degrade(degrade_opts, degrade_eps, degrade_depth);
        }
        if (vc->parsed()) {
            apply_config(vc, vc_opts);
            return run_verify_conat(vc_opts, vc_kind, vc_rc, vc_ancilla_var,
                                    parse_reals(vc_in));
        }
        if (baseline->parsed()) {
            apply_config(baseline, baseline_opts);
            return run_baseline(baseline_opts, baseline_r, baseline_trials, baseline_seed,
                                parse_reals(baseline_in));
        }
        if (sweep->parsed()) {
            apply_config(sweep, sweep_opts);
            return run_sweep(sweep_opts, sweep_r, sweep_rc, parse_reals(sweep_in));
        }
        if (verify->parsed()) {
            apply_config(verify, verify_opts);
            return run_verify(verify_opts, verify_r, verify_rc, verify_samples, verify_seed,
                              verify_sigmas);
        }
    } catch (const ConformanceFailure& e) {
        std::cerr << "conformance failure: " << e.what() << '\n';
        return kExitConformance;
    } catch (const PhysicsError& e) {
        std::cerr << "physics invariant violation: " << e.what() << '\n';
        return kExitPhysics;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
