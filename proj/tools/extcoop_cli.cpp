// Command-line front end: validation, structural classification, Jacobian evaluation,
// simulation, cross-validation and monotone-order tests on network description files.

#include "extcoop/extcoop.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace extcoop;

enum ExitCode { kOk = 0, kValidationFailure = 1, kParseError = 2, kNumericalError = 3 };

struct RunConfig {
    std::string command;
    std::string network_path;
    std::string flows_path;
    double t0 = 0.0;
    double t1 = 10.0;
    double dt = 1e-3;
    double volume = 1.0;
    double density = 0.0;
    std::uint64_t seed = 42;
    std::string output_dir;
    std::string format = "text";
    // jacobian
    std::optional<double> at;
    // monotone
    std::size_t chains = 20;
    std::size_t chain_length = 3;
    std::vector<std::string> perturb;
    double tol = kOrderTolerance;
};

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
    return os.str();
}

json input_json(const std::string& path) {
    if (path.empty()) return nullptr;
    return {{"file", std::filesystem::path(path).filename().string()}, {"sha256", sha256_hex(io::read_file(path))}};
}

json envelope(const RunConfig& cfg) {
    return {{"tool", {{"name", "extcoop"}, {"version", kVersion}}},
            {"command", cfg.command},
            {"inputs", {{"network", input_json(cfg.network_path)}, {"flows", input_json(cfg.flows_path)}}}};
}

VolumeModel volume_model(const RunConfig& cfg) {
    return cfg.density > 0.0 ? VolumeModel::constant_density(cfg.density) : VolumeModel(cfg.volume);
}

IntegratorSettings settings(const RunConfig& cfg) {
    IntegratorSettings s;
    s.t0 = cfg.t0;
    s.t1 = cfg.t1;
    s.dt = cfg.dt;
    return s;
}

FlowProfile flows_for(const RunConfig& cfg, const ReactionNetwork& net) {
    if (cfg.flows_path.empty()) return FlowProfile::batch(net.num_inlets());
    return io::load_flows_file(cfg.flows_path, net.num_inlets());
}

void emit(const RunConfig& cfg, const json& doc, const std::string& text) {
    const std::string dumped = doc.dump(2) + "\n";
    if (cfg.format == "json")
        std::cout << dumped;
    else
        std::cout << text;
    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream(std::filesystem::path(cfg.output_dir) / "report.json", std::ios::binary) << dumped;
    }
}

std::string verdict_words(Verdict v) {
    switch (v) {
        case Verdict::Cooperative: return "cooperative";
        case Verdict::Competitive: return "competitive";
        case Verdict::ConditionallyCooperative: return "conditionally cooperative";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

std::string system_words(SystemVerdict v) {
    switch (v) {
        case SystemVerdict::Cooperative: return "cooperative";
        case SystemVerdict::Competitive: return "competitive";
        case SystemVerdict::Conditional: return "conditionally cooperative";
        case SystemVerdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

int cmd_validate(const RunConfig& cfg) {
    json doc = envelope(cfg);
    try {
        const auto net = io::load_network_file(cfg.network_path);
        const auto ind = check_independence(net);
        if (!cfg.flows_path.empty()) flows_for(cfg, net);
        doc["valid"] = true;
        doc["violations"] = json::array();
        doc["network"] = report::network_json(net);
        doc["independence"] = report::independence_json(ind);
        std::ostringstream os;
        os << "network is valid: " << net.num_species() << " species, " << net.num_reactions() << " reactions, "
           << net.num_inlets() << " inlets\n"
           << "rank N = " << ind.rank_stoich << ", rank W_in = " << ind.rank_inlet
           << ", rank [N^T W_in n0] = " << ind.rank_augmented << "\n"
           << "reactions independent: " << (ind.reactions_independent ? "yes" : "no")
           << ", inlets independent: " << (ind.inlets_independent ? "yes" : "no")
           << ", forward transformation admissible: " << (ind.transform_admissible ? "yes" : "no") << "\n";
        if (ind.remark_case) os << "note: only the back transformation holds; the extent model remains usable\n";
        emit(cfg, doc, os.str());
        return kOk;
    } catch (const ValidationError& e) {
        doc["valid"] = false;
        json v = json::array();
        std::ostringstream os;
        os << "network is invalid:\n";
        for (const auto& item : e.violations()) {
            v.push_back({{"code", item.code}, {"message", item.message}});
            os << "  [" << item.code << "] " << item.message << "\n";
        }
        doc["violations"] = v;
        emit(cfg, doc, os.str());
        return kValidationFailure;
    }
}

int cmd_classify(const RunConfig& cfg) {
    const auto net = io::load_network_file(cfg.network_path);
    const auto flows = flows_for(cfg, net);
    SampleBox box;
    box.seed = cfg.seed;
    const auto rep = classify_system(net, flows, box);

    json doc = envelope(cfg);
    doc["network"] = report::network_json(net);
    doc["classification"] = report::classification_json(net, rep);
    doc["seed"] = cfg.seed;

    std::ostringstream os;
    os << "system is " << system_words(rep.system_verdict) << " in the extent domain (" << rep.explanation << ")\n";
    for (const auto& pc : rep.pairs) {
        os << "  " << net.reaction_name(pc.i) << " / " << net.reaction_name(pc.j) << ": " << verdict_words(pc.verdict)
           << " [" << basis_label(pc.basis) << ": " << rule_description(pc.basis) << "]\n";
        for (const auto& c : pc.conditions) os << "      requires " << c.text() << "\n";
    }
    for (std::size_t i = 0; i < net.num_reactions(); ++i) {
        os << "  " << net.reaction_name(i) << ": inlet effects [";
        for (std::size_t l = 0; l < rep.inlet_effects[i].size(); ++l) os << (l ? ", " : "") << to_string(rep.inlet_effects[i][l]);
        os << "], initial-condition effect " << to_string(rep.ic_effects[i]) << ", rate-gradient signs "
           << (rep.a2_status[i].holds ? "verified (" + rep.a2_status[i].method + ")" : "NOT verified") << "\n";
    }
    emit(cfg, doc, os.str());
    return kOk;
}

int cmd_jacobian(const RunConfig& cfg) {
    const auto net = io::load_network_file(cfg.network_path);
    const auto flows = flows_for(cfg, net);
    ExtentState xs = ExtentState::origin(net);
    double t = cfg.t0;
    if (cfg.at && *cfg.at > cfg.t0) {
        IntegratorSettings s = settings(cfg);
        s.t1 = *cfg.at;
        const auto traj = integrate_extents(net, xs, flows, VolumeModel(cfg.volume), s);
        xs = traj.states.back();
        t = traj.times.back();
    }
    const auto rep = assemble_jacobian(net, xs, flows, cfg.volume, t);

    json doc = envelope(cfg);
    doc["network"] = report::network_json(net);
    doc["jacobian"] = report::jacobian_json(net, rep);

    std::ostringstream os;
    const auto names = extent_component_names(net);
    os << "extent-domain Jacobian at t = " << t << " (" << (rep.metzler ? "Metzler" : "not Metzler") << ")\n";
    os << std::setprecision(6);
    os << std::setw(10) << "";
    for (const auto& n : names) os << std::setw(13) << n;
    os << "\n";
    for (Eigen::Index r = 0; r < rep.J.rows(); ++r) {
        os << std::setw(10) << names[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < rep.J.cols(); ++c) os << std::setw(13) << rep.J(r, c);
        os << "\n";
    }
    for (const auto& v : rep.violations)
        os << "  negative off-diagonal d f_" << names[static_cast<std::size_t>(v.row)] << " / d "
           << names[static_cast<std::size_t>(v.col)] << " = " << v.value << "\n";
    emit(cfg, doc, os.str());
    return kOk;
}

int cmd_simulate(const RunConfig& cfg) {
    const auto net = io::load_network_file(cfg.network_path);
    const auto flows = flows_for(cfg, net);
    const auto vm = volume_model(cfg);
    const auto s = settings(cfg);
    const auto ext = integrate_extents(net, ExtentState::origin(net), flows, vm, s);
    const auto mol = integrate_moles(net, MoleState{net.n0(), net.m0()}, flows, vm, s);

    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream ef(std::filesystem::path(cfg.output_dir) / "extents.csv", std::ios::binary);
        write_extent_csv(ef, net, ext);
        std::ofstream mf(std::filesystem::path(cfg.output_dir) / "moles.csv", std::ios::binary);
        write_mole_csv(mf, net, mol);
    }

    json doc = envelope(cfg);
    doc["network"] = report::network_json(net);
    doc["settings"] = report::settings_json(s);
    const auto final_moles = back_transform(net, ext.states.back());
    doc["simulation"] = {{"steps_recorded", ext.times.size()},
                         {"truncated", ext.truncated || mol.truncated},
                         {"truncation_reason", ext.truncated ? ext.truncation_reason : mol.truncation_reason},
                         {"final_time", ext.times.back()},
                         {"final_extents", report::state_json(net, ext.states.back())},
                         {"final_moles", report::vector_json(final_moles.n)},
                         {"final_mass", final_moles.m}};

    std::ostringstream os;
    os << "integrated " << ext.times.size() - 1 << " RK4 steps to t = " << ext.times.back()
       << (ext.truncated ? " (truncated: " + ext.truncation_reason + ")" : "") << "\n";
    const Vector fv = ext.states.back().to_vector();
    const auto names = extent_component_names(net);
    for (std::size_t k = 0; k < names.size(); ++k) os << "  " << names[k] << " = " << fv(static_cast<Eigen::Index>(k)) << "\n";
    for (std::size_t k = 0; k < net.num_species(); ++k)
        os << "  n_" << net.species_name(k) << " = " << final_moles.n(static_cast<Eigen::Index>(k)) << "\n";
    if (!cfg.output_dir.empty()) os << "wrote extents.csv and moles.csv to " << cfg.output_dir << "\n";
    emit(cfg, doc, os.str());
    return kOk;
}

int cmd_cross_validate(const RunConfig& cfg) {
    const auto net = io::load_network_file(cfg.network_path);
    const auto flows = flows_for(cfg, net);
    const auto rep = cross_validate(net, flows, volume_model(cfg), settings(cfg));

    json doc = envelope(cfg);
    doc["network"] = report::network_json(net);
    doc["settings"] = report::settings_json(settings(cfg));
    doc["cross_validation"] = report::cross_validation_json(rep);

    std::ostringstream os;
    os << "max reconstruction deviation " << rep.max_deviation << " at t = " << rep.time_of_max << " over "
       << rep.samples << " output times (mass deviation " << rep.max_mass_deviation << ")\n";
    emit(cfg, doc, os.str());
    return kOk;
}

int cmd_monotone(const RunConfig& cfg) {
    const auto net = io::load_network_file(cfg.network_path);
    const auto flows = flows_for(cfg, net);
    const auto vm = volume_model(cfg);

    std::vector<bool> mask;
    if (!cfg.perturb.empty()) {
        const auto names = extent_component_names(net);
        mask.assign(names.size(), false);
        for (const auto& p : cfg.perturb) {
            auto it = std::find(names.begin(), names.end(), p);
            if (it == names.end()) throw SchemaError("--perturb: unknown extent component '" + p + "'");
            mask[static_cast<std::size_t>(it - names.begin())] = true;
        }
    }

    std::mt19937_64 rng(cfg.seed);
    json chains = json::array();
    std::size_t preserved = 0;
    std::optional<std::size_t> first_failure;
    std::vector<OrderTestResult> results;
    for (std::size_t c = 0; c < cfg.chains; ++c) {
        auto chain = make_ordered_chain(net, ExtentState::origin(net), cfg.chain_length, rng, 0.05, mask);
        results.push_back(monotone_order_test(net, flows, vm, chain, settings(cfg), cfg.tol));
        chains.push_back(report::order_json(net, results.back()));
        if (results.back().preserved)
            ++preserved;
        else if (!first_failure)
            first_failure = c;
    }

    json doc = envelope(cfg);
    doc["network"] = report::network_json(net);
    doc["settings"] = report::settings_json(settings(cfg));
    doc["seed"] = cfg.seed;
    doc["monotone"] = {{"chains", chains}, {"preserved", preserved}, {"total", cfg.chains}, {"all_preserved", preserved == cfg.chains}};

    std::ostringstream os;
    os << preserved << " of " << cfg.chains << " ordered chains preserved their order to " << cfg.tol << "\n";
    if (first_failure) {
        const auto& v = *results[*first_failure].first_violation;
        os << "  chain " << *first_failure << ": order lost in " << v.component_name << " between members " << v.pair
           << " and " << v.pair + 1 << " at t = " << v.t << " (gap " << v.gap << ")\n";
    }
    emit(cfg, doc, os.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperativity analysis of open homogeneous reaction systems in the extent domain"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool needs_time) {
        sub->add_option("--network", cfg.network_path, "network description JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--flows", cfg.flows_path, "flow profile JSON (default: batch)")->check(CLI::ExistingFile);
        sub->add_option("--volume", cfg.volume, "constant reactor volume")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "seed for sampling");
        sub->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--out", cfg.output_dir, "directory for report.json and CSV exports");
        if (needs_time) {
            sub->add_option("--t0", cfg.t0, "start time");
            sub->add_option("--t1", cfg.t1, "end time");
            sub->add_option("--dt", cfg.dt, "RK4 step")->check(CLI::PositiveNumber);
        }
    };

    auto* validate = app.add_subcommand("validate", "validate a network file and report rank conditions");
    add_common(validate, false);
    auto* classify = app.add_subcommand("classify", "structural cooperativity classification");
    add_common(classify, false);
    auto* jacobian = app.add_subcommand("jacobian", "extent-domain Jacobian and Metzler test");
    add_common(jacobian, true);
    jacobian->add_option("--at", cfg.at, "evaluate at the simulated state at this time (default: t0, the origin)");
    auto* simulate = app.add_subcommand("simulate", "integrate the extent and mole models");
    add_common(simulate, true);
    simulate->add_option("--density", cfg.density, "constant density; volume follows m / rho")->check(CLI::PositiveNumber);
    auto* cross = app.add_subcommand("cross-validate", "compare extent reconstruction against the mole model");
    add_common(cross, true);
    cross->add_option("--density", cfg.density, "constant density; volume follows m / rho")->check(CLI::PositiveNumber);
    auto* monotone = app.add_subcommand("monotone", "test order preservation on random ordered chains");
    add_common(monotone, true);
    monotone->add_option("--chains", cfg.chains, "number of chains");
    monotone->add_option("--chain-length", cfg.chain_length, "states per chain")->check(CLI::PositiveNumber);
    monotone->add_option("--perturb", cfg.perturb, "extent components to perturb (default: all x_r and x_in)");
    monotone->add_option("--tol", cfg.tol, "order tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kParseError;
    }

    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (!(cfg.t1 > cfg.t0)) {
        std::cerr << "error: --t1 must exceed --t0\n";
        return kParseError;
    }

    try {
        if (cfg.command == "validate") return cmd_validate(cfg);
        if (cfg.command == "classify") return cmd_classify(cfg);
        if (cfg.command == "jacobian") return cmd_jacobian(cfg);
        if (cfg.command == "simulate") return cmd_simulate(cfg);
        if (cfg.command == "cross-validate") return cmd_cross_validate(cfg);
        if (cfg.command == "monotone") return cmd_monotone(cfg);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kParseError;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kValidationFailure;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    }
    return kParseError;
}
