#pragma once

#include "extcoop/errors.hpp"
#include "extcoop/linalg.hpp"
#include "extcoop/network.hpp"
#include "extcoop/rates.hpp"
#include "extcoop/transform.hpp"

#include <cstddef>
#include <vector>

namespace extcoop {

inline constexpr double kMetzlerTolerance = 1e-12;

struct MetzlerViolation {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    double value = 0.0;
};

struct MetzlerResult {
    bool metzler = true;
    std::vector<MetzlerViolation> violations;
};

/// True iff every off-diagonal entry is >= -tol.
inline MetzlerResult metzler_check(const Matrix& j, double tol = kMetzlerTolerance) {
    if (j.rows() != j.cols()) throw Error("Metzler test requires a square matrix");
    MetzlerResult res;
    for (Eigen::Index r = 0; r < j.rows(); ++r)
        for (Eigen::Index c = 0; c < j.cols(); ++c)
            if (r != c && j(r, c) < -tol) res.violations.push_back({r, c, j(r, c)});
    res.metzler = res.violations.empty();
    return res;
}

/// The nonzero blocks of the extent-domain Jacobian, named by (rows, columns).
struct JacobianBlocks {
    Matrix r_r;            ///< d f_r / d x_r        R x R
    Matrix r_in;           ///< d f_r / d x_in       R x p
    Vector r_lambda;       ///< d f_r / d lambda     R
    Matrix in_in;          ///< d f_in / d x_in      p x p
    Vector in_lambda;      ///< d f_in / d lambda    p
    Vector lambda_in;      ///< d f_lambda / d x_in  p (a row)
    double lambda_lambda = 0.0;
    Matrix iv_in;          ///< d f_iv / d x_in      q x p, zero whenever x_iv = 0
    Vector iv_lambda;      ///< d f_iv / d lambda    q, zero whenever x_iv = 0
    Matrix iv_iv;          ///< d f_iv / d x_iv      q x q, diagonal -omega I
};

struct EvalPoint {
    ExtentState state;
    Vector u_in;
    double u_out = 0.0;
    double volume = 1.0;
    double t = 0.0;
};

struct JacobianReport {
    Matrix J;  ///< ordered (x_r, x_in, lambda, x_iv)
    JacobianBlocks blocks;
    bool metzler = true;
    std::vector<MetzlerViolation> violations;
    EvalPoint eval_point;
};

namespace detail {

/// (x_in, lambda) sub-Jacobian; depends only on the flows and masses.
inline Matrix flow_subjacobian(const ReactionNetwork& net, const ExtentState& xs, double u_out) {
    const double m = extent_mass(net, xs);
    if (!(m > 0.0)) throw MassDepleted("flow sub-Jacobian needs positive mass, got " + std::to_string(m));
    const auto p = xs.x_in.size();
    const double m2 = m * m;
    Matrix f(p + 1, p + 1);
    f.topLeftCorner(p, p) = u_out * (xs.x_in * Vector::Ones(p).transpose() / m2 - Matrix::Identity(p, p) / m);
    f.topRightCorner(p, 1) = u_out * net.m0() * xs.x_in / m2;
    f.bottomLeftCorner(1, p).setConstant(u_out * xs.lambda / m2);
    f(p, p) = -u_out * (1.0 / m - net.m0() * xs.lambda / m2);
    return f;
}

}  // namespace detail

/**
 * Closed-form Jacobian of extent_rhs under constant volume. The reaction rows use
 * dc/dx_r = N^T / V, dc/dx_in = W_in / V and dc/dlambda = n0 / V, so the factor V of
 * r_v cancels. Volume variation with mass is not differentiated.
 */
inline JacobianReport assemble_jacobian(const ReactionNetwork& net, const ExtentState& xs, const FlowProfile& flows,
                                        double volume, double t, double tol = kMetzlerTolerance) {
    const ExtentLayout l(net);
    const double m = extent_mass(net, xs);
    if (!(m > 0.0)) throw MassDepleted("Jacobian needs positive mass, got " + std::to_string(m));
    const double u_out = flows.u_out(t);
    const double omega = u_out / m;
    const double m2 = m * m;

    const Vector c = concentrations(net, xs, volume);
    const Matrix g = rate_jacobian(net, c);

    JacobianBlocks b;
    b.r_r = g * net.stoich().transpose() - omega * Matrix::Identity(l.r, l.r);
    b.r_in = g * net.inlet_composition_matrix() + (u_out / m2) * xs.x_r * Vector::Ones(l.p).transpose();
    b.r_lambda = g * net.n0() + (u_out * net.m0() / m2) * xs.x_r;

    const Matrix flow = detail::flow_subjacobian(net, xs, u_out);
    b.in_in = flow.topLeftCorner(l.p, l.p);
    b.in_lambda = flow.topRightCorner(l.p, 1);
    b.lambda_in = flow.bottomLeftCorner(1, l.p).transpose();
    b.lambda_lambda = flow(l.p, l.p);

    b.iv_in = (u_out / m2) * xs.x_iv * Vector::Ones(l.p).transpose();
    b.iv_lambda = (u_out * net.m0() / m2) * xs.x_iv;
    b.iv_iv = -omega * Matrix::Identity(l.q, l.q);

    JacobianReport rep;
    rep.J = Matrix::Zero(l.size(), l.size());
    rep.J.block(0, 0, l.r, l.r) = b.r_r;
    rep.J.block(0, l.in_offset(), l.r, l.p) = b.r_in;
    rep.J.block(0, l.lambda_index(), l.r, 1) = b.r_lambda;
    rep.J.block(l.in_offset(), l.in_offset(), l.p + 1, l.p + 1) = flow;
    rep.J.block(l.iv_offset(), l.in_offset(), l.q, l.p) = b.iv_in;
    rep.J.block(l.iv_offset(), l.lambda_index(), l.q, 1) = b.iv_lambda;
    rep.J.block(l.iv_offset(), l.iv_offset(), l.q, l.q) = b.iv_iv;
    rep.blocks = std::move(b);

    auto mz = metzler_check(rep.J, tol);
    rep.metzler = mz.metzler;
    rep.violations = std::move(mz.violations);
    rep.eval_point = {xs, flows.u_in(t), u_out, volume, t};
    return rep;
}

struct FlowWitness {
    std::size_t sample = 0;
    Eigen::Index row = 0;  ///< within the (x_in, lambda) sub-Jacobian
    Eigen::Index col = 0;
    double value = 0.0;
};

struct FlowSubsystemReport {
    bool passed = true;
    std::size_t states_checked = 0;
    std::size_t entries_checked = 0;
    std::vector<FlowWitness> witnesses;
};

/// Checks that the extents of flow form a cooperative subsystem at each sample state.
inline FlowSubsystemReport flow_subsystem_check(const ReactionNetwork& net, const FlowProfile& flows,
                                                const std::vector<ExtentState>& samples, double t = 0.0,
                                                double tol = kMetzlerTolerance) {
    FlowSubsystemReport rep;
    const double u_out = flows.u_out(t);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Matrix f = detail::flow_subjacobian(net, samples[s], u_out);
        for (Eigen::Index r = 0; r < f.rows(); ++r)
            for (Eigen::Index c = 0; c < f.cols(); ++c) {
                if (r == c) continue;
                ++rep.entries_checked;
                if (f(r, c) < -tol) rep.witnesses.push_back({s, r, c, f(r, c)});
            }
        ++rep.states_checked;
    }
    rep.passed = rep.witnesses.empty();
    return rep;
}

}  // namespace extcoop
