#pragma once

#include "extcoop/extcoop.hpp"

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

namespace support {

using namespace extcoop;

inline std::string fixture(const std::string& name) { return std::string(EXTCOOP_FIXTURES_DIR) + "/" + name; }

inline ReactionNetwork load(const std::string& name) { return io::load_network_file(fixture(name)); }

inline FlowProfile load_flows(const std::string& name, const ReactionNetwork& net) {
    return io::load_flows_file(fixture(name), net.num_inlets());
}

/// Random extent state whose reconstructed moles all exceed floor.
template <typename Rng>
ExtentState random_admissible_state(const ReactionNetwork& net, Rng& rng, double floor = 1e-2) {
    const ExtentLayout l(net);
    std::uniform_real_distribution<double> xr(-0.1, 0.1), xin(0.0, 1.0), lam(0.3, 1.5), iv(-0.2, 0.2);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        ExtentState xs = ExtentState::origin(net);
        for (Eigen::Index k = 0; k < l.r; ++k) xs.x_r(k) = xr(rng);
        for (Eigen::Index k = 0; k < l.p; ++k) xs.x_in(k) = xin(rng);
        xs.lambda = lam(rng);
        for (Eigen::Index k = 0; k < l.q; ++k) xs.x_iv(k) = iv(rng);
        const auto ms = back_transform(net, xs);
        if (ms.m > 0.0 && (ms.n.array() > floor).all()) return xs;
    }
    throw Error("could not sample an admissible state");
}

/// Central differences of the extent vector field at xs.
inline Matrix fd_jacobian(const ReactionNetwork& net, const ExtentState& xs, const FlowProfile& flows, double volume,
                          double t) {
    const ExtentLayout l(net);
    const Vector x = xs.to_vector();
    Matrix j(x.size(), x.size());
    for (Eigen::Index c = 0; c < x.size(); ++c) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(c)));
        Vector xp = x, xm = x;
        xp(c) += h;
        xm(c) -= h;
        const Vector fp = extent_rhs(net, ExtentState::from_vector(l, xp), flows, VolumeModel(volume), t).to_vector();
        const Vector fm = extent_rhs(net, ExtentState::from_vector(l, xm), flows, VolumeModel(volume), t).to_vector();
        j.col(c) = (fp - fm) / (2.0 * h);
    }
    return j;
}

struct CommandResult {
    int exit_code = -1;
    std::string out;
};

/// Runs the command-line tool with the given argument string, capturing stdout.
inline CommandResult run_cli(const std::string& args) {
    CommandResult res;
    const std::string cmd = std::string(EXTCOOP_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

}  // namespace support
