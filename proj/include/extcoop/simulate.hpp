#pragma once

#include "extcoop/errors.hpp"
#include "extcoop/linalg.hpp"
#include "extcoop/network.hpp"
#include "extcoop/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace extcoop {

struct IntegratorSettings {
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-3;
    std::size_t stride = 1;  ///< record every stride-th step (the final time is always recorded)
    std::string method = "rk4";
};

template <typename State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    IntegratorSettings meta;
    bool truncated = false;  ///< stopped early because the mass reached zero
    std::string truncation_reason;
};

using ExtentTrajectory = Trajectory<ExtentState>;
using MoleTrajectory = Trajectory<MoleState>;

/// Classic fourth-order Runge-Kutta step for y' = f(t, y).
template <typename Rhs>
Vector rk4_step(const Rhs& f, double t, const Vector& y, double h) {
    const Vector k1 = f(t, y);
    const Vector k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const Vector k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const Vector k4 = f(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/**
 * Fixed-step RK4 on the grid t0 + k*dt (the last step is shortened to land on t1).
 * observe(t, y) is called at t0, every stride-th step and at the end; MassDepleted
 * raised by the vector field or the observer ends the run early and its message is returned.
 */
template <typename Rhs, typename Observer>
std::optional<std::string> integrate_fixed_step(const Rhs& f, Vector y, const IntegratorSettings& s, Observer&& observe) {
    if (!(s.dt > 0.0)) throw Error("dt must be positive");
    if (!(s.t1 > s.t0)) throw Error("t_span end must exceed start");
    const double span = s.t1 - s.t0;
    const auto steps = static_cast<std::size_t>(std::ceil(span / s.dt - 1e-9));
    const std::size_t stride = std::max<std::size_t>(1, s.stride);
    try {
        observe(s.t0, y);
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = s.t0 + static_cast<double>(k) * s.dt;
            const double t_next = k + 1 == steps ? s.t1 : s.t0 + static_cast<double>(k + 1) * s.dt;
            y = rk4_step(f, t, y, t_next - t);
            if ((k + 1) % stride == 0 || k + 1 == steps) observe(t_next, y);
        }
    } catch (const MassDepleted& e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

inline ExtentTrajectory integrate_extents(const ReactionNetwork& net, const ExtentState& xs0, const FlowProfile& flows,
                                          const VolumeModel& volume, const IntegratorSettings& settings) {
    if (!(extent_mass(net, xs0) > 0.0)) throw MassDepleted("initial extent state has non-positive mass");
    const ExtentLayout layout(net);
    auto f = [&](double t, const Vector& y) {
        return extent_rhs(net, ExtentState::from_vector(layout, y), flows, volume, t).to_vector();
    };
    ExtentTrajectory traj;
    traj.meta = settings;
    auto reason = integrate_fixed_step(f, xs0.to_vector(), settings, [&](double t, const Vector& y) {
        auto xs = ExtentState::from_vector(layout, y);
        if (!(extent_mass(net, xs) > 0.0)) throw MassDepleted("mass left the positive range at t = " + std::to_string(t));
        traj.times.push_back(t);
        traj.states.push_back(std::move(xs));
    });
    if (reason) {
        traj.truncated = true;
        traj.truncation_reason = *reason;
    }
    return traj;
}

inline MoleTrajectory integrate_moles(const ReactionNetwork& net, const MoleState& init, const FlowProfile& flows,
                                      const VolumeModel& volume, const IntegratorSettings& settings) {
    if (!(init.m > 0.0)) throw MassDepleted("initial mass must be positive");
    const auto s = static_cast<Eigen::Index>(net.num_species());
    auto split = [s](const Vector& y) { return MoleState{y.head(s), y(s)}; };
    auto f = [&](double t, const Vector& y) {
        const MoleState d = mole_rhs(net, split(y), flows, volume, t);
        Vector out(s + 1);
        out << d.n, d.m;
        return out;
    };
    Vector y0(s + 1);
    y0 << init.n, init.m;
    MoleTrajectory traj;
    traj.meta = settings;
    auto reason = integrate_fixed_step(f, y0, settings, [&](double t, const Vector& y) {
        if (!(y(s) > 0.0)) throw MassDepleted("mass left the positive range at t = " + std::to_string(t));
        traj.times.push_back(t);
        traj.states.push_back(split(y));
    });
    if (reason) {
        traj.truncated = true;
        traj.truncation_reason = *reason;
    }
    return traj;
}

/// Starts from n0 with m = 1^T M_w n0.
inline MoleTrajectory integrate_moles(const ReactionNetwork& net, const Vector& n0, const FlowProfile& flows,
                                      const VolumeModel& volume, const IntegratorSettings& settings) {
    return integrate_moles(net, MoleState{n0, net.molecular_weights().dot(n0)}, flows, volume, settings);
}

struct CrossValidationReport {
    double max_deviation = 0.0;  ///< max_t |n_mole - n(x)|_inf / (1 + |n_mole|_inf)
    double time_of_max = 0.0;
    double max_mass_deviation = 0.0;  ///< relative gap between continuity mass and 1^T x_in + m0 lambda
    std::size_t samples = 0;
    double dt = 0.0;
};

/// Integrates both model forms from the canonical initialization and compares them.
inline CrossValidationReport cross_validate(const ReactionNetwork& net, const FlowProfile& flows,
                                            const VolumeModel& volume, const IntegratorSettings& settings) {
    const auto ext = integrate_extents(net, ExtentState::origin(net), flows, volume, settings);
    const auto mol = integrate_moles(net, MoleState{net.n0(), net.m0()}, flows, volume, settings);
    CrossValidationReport rep;
    rep.dt = settings.dt;
    const std::size_t count = std::min(ext.times.size(), mol.times.size());
    for (std::size_t k = 0; k < count; ++k) {
        const MoleState rec = back_transform(net, ext.states[k]);
        const auto& n = mol.states[k].n;
        const double dev = (n - rec.n).lpNorm<Eigen::Infinity>() / (1.0 + n.lpNorm<Eigen::Infinity>());
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.time_of_max = ext.times[k];
        }
        const double mdev = std::abs(mol.states[k].m - rec.m) / std::max(std::abs(mol.states[k].m), 1e-300);
        rep.max_mass_deviation = std::max(rep.max_mass_deviation, mdev);
    }
    rep.samples = count;
    return rep;
}

inline constexpr double kOrderTolerance = 1e-9;

struct OrderViolation {
    double t = 0.0;
    Eigen::Index component = 0;
    std::string component_name;
    std::size_t pair = 0;  ///< violation between chain[pair] and chain[pair + 1]
    double gap = 0.0;      ///< chain[pair + 1] - chain[pair] in that component
};

struct OrderTestResult {
    std::vector<ExtentState> chain;
    bool preserved = true;
    std::optional<OrderViolation> first_violation;
    double tolerance = kOrderTolerance;
    std::size_t compared_times = 0;
};

/// True iff a <= b componentwise.
inline bool componentwise_le(const ExtentState& a, const ExtentState& b) {
    const Vector va = a.to_vector(), vb = b.to_vector();
    return va.size() == vb.size() && ((vb - va).array() >= 0.0).all();
}

/**
 * Integrates every chain member with identical settings and inputs and verifies that
 * the componentwise order between adjacent members survives at every output time.
 */
inline OrderTestResult monotone_order_test(const ReactionNetwork& net, const FlowProfile& flows,
                                           const VolumeModel& volume, const std::vector<ExtentState>& chain,
                                           const IntegratorSettings& settings, double tol = kOrderTolerance) {
    for (std::size_t k = 0; k + 1 < chain.size(); ++k)
        if (!componentwise_le(chain[k], chain[k + 1]))
            throw UnorderedChain("chain members " + std::to_string(k) + " and " + std::to_string(k + 1) +
                                 " are not componentwise ordered");

    std::vector<std::future<ExtentTrajectory>> jobs;
    for (const auto& xs : chain)
        jobs.push_back(std::async(std::launch::async, [&, xs] { return integrate_extents(net, xs, flows, volume, settings); }));
    std::vector<ExtentTrajectory> trajs;
    for (auto& j : jobs) trajs.push_back(j.get());

    OrderTestResult res;
    res.chain = chain;
    res.tolerance = tol;
    std::size_t count = std::numeric_limits<std::size_t>::max();
    for (const auto& t : trajs) count = std::min(count, t.times.size());
    if (trajs.empty()) count = 0;
    res.compared_times = count;

    const auto names = extent_component_names(net);
    for (std::size_t k = 0; k < count && res.preserved; ++k) {
        for (std::size_t a = 0; a + 1 < trajs.size() && res.preserved; ++a) {
            const Vector gap = trajs[a + 1].states[k].to_vector() - trajs[a].states[k].to_vector();
            for (Eigen::Index c = 0; c < gap.size(); ++c) {
                if (gap(c) < -tol) {
                    res.preserved = false;
                    res.first_violation = OrderViolation{trajs[a].times[k], c, names[static_cast<std::size_t>(c)], a, gap(c)};
                    break;
                }
            }
        }
    }
    return res;
}

/// Mask selecting the x_r and x_in components, the default perturbation directions.
inline std::vector<bool> reaction_and_inlet_mask(const ReactionNetwork& net) {
    const ExtentLayout l(net);
    std::vector<bool> mask(static_cast<std::size_t>(l.size()), false);
    for (Eigen::Index k = 0; k < l.lambda_index(); ++k) mask[static_cast<std::size_t>(k)] = true;
    return mask;
}

/**
 * Ordered chain of k states: each member adds uniform increments in
 * [0, max_fraction * max(1, |base_c|)] to the previous one on the masked components.
 */
template <typename Rng>
std::vector<ExtentState> make_ordered_chain(const ReactionNetwork& net, const ExtentState& base, std::size_t k, Rng& rng,
                                            double max_fraction = 0.05, std::vector<bool> mask = {}) {
    const ExtentLayout layout(net);
    if (mask.empty()) mask = reaction_and_inlet_mask(net);
    if (mask.size() != static_cast<std::size_t>(layout.size())) throw IndexError("perturbation mask has wrong size");
    const Vector b = base.to_vector();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ExtentState> chain;
    Vector cur = b;
    for (std::size_t n = 0; n < k; ++n) {
        if (n > 0) {
            for (Eigen::Index c = 0; c < cur.size(); ++c)
                if (mask[static_cast<std::size_t>(c)]) cur(c) += unit(rng) * max_fraction * std::max(1.0, std::abs(b(c)));
        }
        chain.push_back(ExtentState::from_vector(layout, cur));
    }
    return chain;
}

namespace detail {

inline void write_csv_row(std::ostream& os, double t, const Vector& v) {
    os << t;
    for (Eigen::Index k = 0; k < v.size(); ++k) os << ',' << v(k);
    os << '\n';
}

}  // namespace detail

/// CSV with header "t,x_r1,...,x_in1,...,lambda,x_iv1,...".
inline void write_extent_csv(std::ostream& os, const ReactionNetwork& net, const ExtentTrajectory& traj) {
    os.precision(17);
    os << 't';
    for (const auto& name : extent_component_names(net)) os << ',' << name;
    os << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) detail::write_csv_row(os, traj.times[k], traj.states[k].to_vector());
}

/// CSV with header "t,n_<species>...,m".
inline void write_mole_csv(std::ostream& os, const ReactionNetwork& net, const MoleTrajectory& traj) {
    os.precision(17);
    os << 't';
    for (const auto& sp : net.species()) os << ",n_" << sp.name;
    os << ",m\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        Vector row(traj.states[k].n.size() + 1);
        row << traj.states[k].n, traj.states[k].m;
        detail::write_csv_row(os, traj.times[k], row);
    }
}

}  // namespace extcoop
