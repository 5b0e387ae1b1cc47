#pragma once

#include "extcoop/errors.hpp"
#include "extcoop/linalg.hpp"
#include "extcoop/network.hpp"
#include "extcoop/rates.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace extcoop {

/// Offsets of the blocks (x_r, x_in, lambda, x_iv) in the flattened extent vector.
struct ExtentLayout {
    Eigen::Index r = 0;
    Eigen::Index p = 0;
    Eigen::Index q = 0;

    explicit ExtentLayout(const ReactionNetwork& net)
        : r(static_cast<Eigen::Index>(net.num_reactions())),
          p(static_cast<Eigen::Index>(net.num_inlets())),
          q(static_cast<Eigen::Index>(net.num_invariants())) {}

    Eigen::Index in_offset() const noexcept { return r; }
    Eigen::Index lambda_index() const noexcept { return r + p; }
    Eigen::Index iv_offset() const noexcept { return r + p + 1; }
    Eigen::Index size() const noexcept { return r + p + 1 + q; }
};

/// Column names in export order: x_r1..x_rR, x_in1..x_inp, lambda, x_iv1..x_ivq.
inline std::vector<std::string> extent_component_names(const ReactionNetwork& net) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < net.num_reactions(); ++i) names.push_back("x_r" + std::to_string(i + 1));
    for (std::size_t j = 0; j < net.num_inlets(); ++j) names.push_back("x_in" + std::to_string(j + 1));
    names.emplace_back("lambda");
    for (std::size_t k = 0; k < net.num_invariants(); ++k) names.push_back("x_iv" + std::to_string(k + 1));
    return names;
}

struct ExtentState {
    Vector x_r;
    Vector x_in;
    double lambda = 1.0;
    Vector x_iv;

    /// Canonical initialization: zero extents, lambda = 1.
    static ExtentState origin(const ReactionNetwork& net) {
        const ExtentLayout l(net);
        return {Vector::Zero(l.r), Vector::Zero(l.p), 1.0, Vector::Zero(l.q)};
    }

    Vector to_vector() const {
        Vector v(x_r.size() + x_in.size() + 1 + x_iv.size());
        v << x_r, x_in, lambda, x_iv;
        return v;
    }

    static ExtentState from_vector(const ExtentLayout& l, const Vector& v) {
        if (v.size() != l.size()) throw IndexError("extent vector has wrong dimension");
        return {v.head(l.r), v.segment(l.in_offset(), l.p), v(l.lambda_index()), v.tail(l.q)};
    }
};

struct MoleState {
    Vector n;
    double m = 0.0;
};

/**
 * Inlet and outlet mass flowrates given as piecewise-constant tables. Each breakpoint
 * holds its value until the next one; queries before the first breakpoint use the
 * first value and empty tables mean zero flow.
 */
class FlowProfile {
public:
    using InletTable = std::vector<std::pair<double, Vector>>;
    using OutletTable = std::vector<std::pair<double, double>>;

    FlowProfile() = default;

    FlowProfile(std::size_t num_inlets, InletTable u_in, OutletTable u_out)
        : p_(num_inlets), u_in_(std::move(u_in)), u_out_(std::move(u_out)) {
        for (std::size_t k = 0; k < u_in_.size(); ++k) {
            if (static_cast<std::size_t>(u_in_[k].second.size()) != p_)
                throw Error("u_in breakpoint " + std::to_string(k) + " has wrong number of inlets");
            if ((u_in_[k].second.array() < 0.0).any() || !u_in_[k].second.allFinite())
                throw Error("u_in breakpoint " + std::to_string(k) + " is negative");
            if (k > 0 && !(u_in_[k].first > u_in_[k - 1].first))
                throw Error("u_in breakpoint times must be strictly increasing");
        }
        for (std::size_t k = 0; k < u_out_.size(); ++k) {
            if (!(u_out_[k].second >= 0.0)) throw Error("u_out breakpoint " + std::to_string(k) + " is negative");
            if (k > 0 && !(u_out_[k].first > u_out_[k - 1].first))
                throw Error("u_out breakpoint times must be strictly increasing");
        }
    }

    static FlowProfile batch(std::size_t num_inlets) { return FlowProfile(num_inlets, {}, {}); }

    static FlowProfile constant(const Vector& u_in, double u_out) {
        return FlowProfile(static_cast<std::size_t>(u_in.size()), {{0.0, u_in}}, {{0.0, u_out}});
    }

    std::size_t num_inlets() const noexcept { return p_; }

    Vector u_in(double t) const {
        if (u_in_.empty()) return Vector::Zero(static_cast<Eigen::Index>(p_));
        return lookup(u_in_, t);
    }

    double u_out(double t) const {
        if (u_out_.empty()) return 0.0;
        return lookup(u_out_, t);
    }

    /// Batch or semi-batch operation: no outlet flow at any time.
    bool outlet_always_zero() const {
        return std::all_of(u_out_.begin(), u_out_.end(), [](const auto& b) { return b.second == 0.0; });
    }

    bool inlets_always_zero() const {
        return std::all_of(u_in_.begin(), u_in_.end(), [](const auto& b) { return (b.second.array() == 0.0).all(); });
    }

    const InletTable& inlet_table() const noexcept { return u_in_; }
    const OutletTable& outlet_table() const noexcept { return u_out_; }

private:
    template <typename Table>
    static typename Table::value_type::second_type lookup(const Table& table, double t) {
        auto it = std::upper_bound(table.begin(), table.end(), t,
                                   [](double value, const auto& bp) { return value < bp.first; });
        if (it == table.begin()) return table.front().second;
        return std::prev(it)->second;
    }

    std::size_t p_ = 0;
    InletTable u_in_;
    OutletTable u_out_;
};

/// Constant volume, or constant density with V = m / rho.
struct VolumeModel {
    enum class Kind { ConstantVolume, ConstantDensity };

    Kind kind = Kind::ConstantVolume;
    double value = 1.0;

    VolumeModel() = default;
    VolumeModel(double volume) : value(volume) {  // NOLINT(google-explicit-constructor)
        if (!(volume > 0.0)) throw Error("volume must be positive");
    }

    static VolumeModel constant_density(double rho) {
        if (!(rho > 0.0)) throw Error("density must be positive");
        VolumeModel vm;
        vm.kind = Kind::ConstantDensity;
        vm.value = rho;
        return vm;
    }

    double volume(double mass) const { return kind == Kind::ConstantVolume ? value : mass / value; }
};

inline constexpr double kNegativeConcentrationTolerance = 1e-9;

inline double extent_mass(const ReactionNetwork& net, const ExtentState& xs) {
    return xs.x_in.sum() + net.m0() * xs.lambda;
}

/// n = N^T x_r + W_in x_in + n0 lambda,  m = 1^T x_in + m0 lambda.
inline MoleState back_transform(const ReactionNetwork& net, const ExtentState& xs) {
    MoleState out;
    out.n = net.stoich().transpose() * xs.x_r + net.inlet_composition_matrix() * xs.x_in + net.n0() * xs.lambda;
    out.m = extent_mass(net, xs);
    return out;
}

/**
 * Least-squares solve of [N^T | W_in | n0] z = n; the component of n outside the range
 * is stored in x_iv using an orthonormal basis of the left null space. Requires the
 * rank of the stacked matrix to equal R + p + 1.
 */
inline ExtentState forward_transform(const ReactionNetwork& net, const Vector& n, double m) {
    const auto rep = check_independence(net);
    if (!rep.transform_admissible)
        throw TransformInadmissible("rank [N^T W_in n0] = " + std::to_string(rep.rank_augmented) + " < R+p+1 = " +
                                    std::to_string(net.num_reactions() + net.num_inlets() + 1));
    if (!(m > 0.0)) throw MassDepleted("forward transform requires positive mass");
    if (static_cast<std::size_t>(n.size()) != net.num_species()) throw IndexError("mole vector has wrong dimension");

    const Matrix a = extent_to_moles_matrix(net);
    const Vector z = a.completeOrthogonalDecomposition().solve(n);
    const ExtentLayout l(net);
    ExtentState xs;
    xs.x_r = z.head(l.r);
    xs.x_in = z.segment(l.in_offset(), l.p);
    xs.lambda = z(l.lambda_index());
    xs.x_iv = left_null_space(a).transpose() * n;
    return xs;
}

inline Vector clamp_concentrations(Vector c) {
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        if (c(k) < -kNegativeConcentrationTolerance)
            throw NonphysicalState("concentration of species " + std::to_string(k) + " is " + std::to_string(c(k)));
        if (c(k) < 0.0) c(k) = 0.0;
    }
    return c;
}

inline Vector concentrations(const ReactionNetwork& net, const ExtentState& xs, double volume) {
    if (!(volume > 0.0)) throw Error("volume must be positive");
    return clamp_concentrations(back_transform(net, xs).n / volume);
}

/// Extent-domain vector field (x_r, x_in, lambda, x_iv)'.
inline ExtentState extent_rhs(const ReactionNetwork& net, const ExtentState& xs, const FlowProfile& flows,
                              const VolumeModel& volume, double t) {
    const double m = extent_mass(net, xs);
    if (!(m > 0.0)) throw MassDepleted("reactor mass " + std::to_string(m) + " at t = " + std::to_string(t));
    const Vector u_in = flows.u_in(t);
    if (static_cast<std::size_t>(u_in.size()) != net.num_inlets()) throw IndexError("flow profile inlet count mismatch");
    const double omega = flows.u_out(t) / m;
    const double v = volume.volume(m);
    const Vector r_v = v * reaction_rates(net, concentrations(net, xs, v));

    ExtentState d;
    d.x_r = r_v - omega * xs.x_r;
    d.x_in = u_in - omega * xs.x_in;
    d.lambda = -omega * xs.lambda;
    d.x_iv = -omega * xs.x_iv;
    return d;
}

/// Mole-domain vector field: n' = N^T r_v + W_in u_in - omega n, m' = 1^T u_in - u_out.
inline MoleState mole_rhs(const ReactionNetwork& net, const MoleState& state, const FlowProfile& flows,
                          const VolumeModel& volume, double t) {
    if (!(state.m > 0.0)) throw MassDepleted("reactor mass " + std::to_string(state.m) + " at t = " + std::to_string(t));
    const Vector u_in = flows.u_in(t);
    if (static_cast<std::size_t>(u_in.size()) != net.num_inlets()) throw IndexError("flow profile inlet count mismatch");
    const double u_out = flows.u_out(t);
    const double omega = u_out / state.m;
    const double v = volume.volume(state.m);
    const Vector c = clamp_concentrations(state.n) / v;
    const Vector r_v = v * reaction_rates(net, c);

    MoleState d;
    d.n = net.stoich().transpose() * r_v + net.inlet_composition_matrix() * u_in - omega * state.n;
    d.m = u_in.sum() - u_out;
    return d;
}

}  // namespace extcoop
