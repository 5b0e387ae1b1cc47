#pragma once

#include "extcoop/network.hpp"
#include "extcoop/rate_law.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace extcoop {

/// Positive concentration hyper-rectangle [lower, upper]^S sampled uniformly.
struct SampleBox {
    double lower = 1e-3;
    double upper = 10.0;
    std::size_t samples = 1000;
    std::uint64_t seed = 42;
};

struct A2Violation {
    std::size_t species = 0;
    bool reactant = true;
    double gradient = 0.0;
    Vector point;
};

struct A2Report {
    std::size_t reaction = 0;
    /// Exponent conditions alone guarantee the gradient signs.
    bool symbolic_holds = false;
    bool holds = false;
    std::string method;  ///< "symbolic" or "sampled"
    std::size_t samples_checked = 0;
    std::vector<A2Violation> violations;  ///< first few sampled violations
    std::vector<std::string> notes;
};

/**
 * Sign conditions on the rate gradient of reaction i: dr/dc_e >= 0 on reactants and
 * dr/dc_k < 0 on products carried by a nonzero backward term.
 *
 * The symbolic tier accepts a reactant when its saturation exponent is zero or does
 * not exceed its forward exponent (then the quotient rule leaves only nonnegative
 * terms). Product gradients never change sign since saturation terms only involve
 * reactants. When the symbolic tier fails, signs are scanned over the sample box.
 */
inline A2Report check_assumption_a2(const ReactionNetwork& net, std::size_t i, const SampleBox& box = {}) {
    const auto& law = net.rate_law(i);
    const auto reactants = net.reactant_set(i);
    const auto products = net.product_set(i);

    A2Report rep;
    rep.reaction = i;
    rep.symbolic_holds = true;
    for (auto e : reactants) {
        const double m = law.fwd_exponents.count(e) ? law.fwd_exponents.at(e) : 0.0;
        const double d = law.denom.count(e) ? law.denom.at(e).d : 0.0;
        if (d > 0.0 && m < d) {
            rep.symbolic_holds = false;
            rep.notes.push_back("reactant " + net.species_name(e) + ": saturation exponent " + std::to_string(d) +
                                " exceeds forward exponent " + std::to_string(m));
        }
    }
    if (rep.symbolic_holds) {
        rep.holds = true;
        rep.method = "symbolic";
        return rep;
    }

    rep.method = "sampled";
    std::mt19937_64 rng(box.seed + i);
    std::uniform_real_distribution<double> dist(box.lower, box.upper);
    const auto s = static_cast<Eigen::Index>(net.num_species());
    constexpr std::size_t kMaxRecorded = 8;
    std::size_t count = 0;
    for (std::size_t n = 0; n < box.samples; ++n) {
        Vector c(s);
        for (Eigen::Index k = 0; k < s; ++k) c(k) = dist(rng);
        const Vector g = rate_gradient(law, c);
        ++rep.samples_checked;
        for (auto e : reactants) {
            const double ge = g(static_cast<Eigen::Index>(e));
            if (ge < -1e-12) {
                if (rep.violations.size() < kMaxRecorded) rep.violations.push_back({e, true, ge, c});
                ++count;
            }
        }
        for (auto k : products) {
            const bool strict = law.k_b > 0.0 && law.bwd_exponents.count(k) && law.bwd_exponents.at(k) > 0.0;
            const double gk = g(static_cast<Eigen::Index>(k));
            if ((strict && !(gk < 0.0)) || (!strict && gk > 0.0)) {
                if (rep.violations.size() < kMaxRecorded) rep.violations.push_back({k, false, gk, c});
                ++count;
            }
        }
    }
    rep.holds = count == 0;
    if (count > 0) rep.notes.push_back(std::to_string(count) + " sign violations over sampled points");
    return rep;
}

}  // namespace extcoop

namespace extcoop {

/// r(c) for every reaction.
inline Vector reaction_rates(const ReactionNetwork& net, const Vector& c) {
    Vector r(static_cast<Eigen::Index>(net.num_reactions()));
    for (std::size_t i = 0; i < net.num_reactions(); ++i) r(static_cast<Eigen::Index>(i)) = eval_rate(net.rate_law(i), c);
    return r;
}

/// dr/dc as an R x S matrix, one rate_gradient per row.
inline Matrix rate_jacobian(const ReactionNetwork& net, const Vector& c) {
    Matrix g(static_cast<Eigen::Index>(net.num_reactions()), c.size());
    for (std::size_t i = 0; i < net.num_reactions(); ++i)
        g.row(static_cast<Eigen::Index>(i)) = rate_gradient(net.rate_law(i), c).transpose();
    return g;
}

}  // namespace extcoop
