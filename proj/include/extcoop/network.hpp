#pragma once

#include "extcoop/errors.hpp"
#include "extcoop/linalg.hpp"
#include "extcoop/rate_law.hpp"

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace extcoop {

struct Species {
    std::string name;
    double molecular_weight = 1.0;
};

/// Unvalidated description of a reaction system; the input to build_network.
struct NetworkSpec {
    std::vector<Species> species;
    Matrix stoich;                  ///< R x S, negative for reactants
    Matrix inlet_weight_fractions;  ///< S x p, one column per inlet stream
    Vector n0;                      ///< initial moles, length S
    std::vector<RateLaw> rate_laws;
    std::vector<std::string> reaction_names;  ///< optional; defaults to R1..RR
    int outlets = 1;
};

inline constexpr double kWeightFractionTolerance = 1e-9;

using IndexSet = std::set<std::size_t>;

/**
 * Validated, immutable open homogeneous reaction system with S species,
 * R reactions, p inlet streams and a single outlet. Only build_network
 * constructs one.
 */
class ReactionNetwork {
public:
    std::size_t num_species() const noexcept { return spec_.species.size(); }
    std::size_t num_reactions() const noexcept { return static_cast<std::size_t>(spec_.stoich.rows()); }
    std::size_t num_inlets() const noexcept { return static_cast<std::size_t>(spec_.inlet_weight_fractions.cols()); }
    /// Dimension of the invariant block x_iv: max(0, S - R - p - 1).
    std::size_t num_invariants() const noexcept {
        const auto used = num_reactions() + num_inlets() + 1;
        return num_species() > used ? num_species() - used : 0;
    }

    const std::vector<Species>& species() const noexcept { return spec_.species; }
    const std::string& species_name(std::size_t k) const { return spec_.species.at(k).name; }
    const std::string& reaction_name(std::size_t i) const { return spec_.reaction_names.at(i); }
    const Matrix& stoich() const noexcept { return spec_.stoich; }
    const Matrix& inlet_weight_fractions() const noexcept { return spec_.inlet_weight_fractions; }
    const Vector& n0() const noexcept { return spec_.n0; }
    double m0() const noexcept { return m0_; }
    const Vector& molecular_weights() const noexcept { return mw_; }
    const std::vector<RateLaw>& rate_laws() const noexcept { return spec_.rate_laws; }
    const RateLaw& rate_law(std::size_t i) const {
        check_reaction(i);
        return spec_.rate_laws[i];
    }

    /// W_in = M_w^{-1} W_check: moles of species k per unit mass of stream j.
    const Matrix& inlet_composition_matrix() const noexcept { return w_in_; }

    IndexSet reactant_set(std::size_t i) const { return support(i, -1); }
    IndexSet product_set(std::size_t i) const { return support(i, +1); }

    std::size_t species_index(const std::string& name) const {
        for (std::size_t k = 0; k < spec_.species.size(); ++k)
            if (spec_.species[k].name == name) return k;
        throw IndexError("unknown species '" + name + "'");
    }

    const NetworkSpec& spec() const noexcept { return spec_; }

    void check_reaction(std::size_t i) const {
        if (i >= num_reactions())
            throw IndexError("reaction index " + std::to_string(i) + " out of range [0, " +
                             std::to_string(num_reactions()) + ")");
    }

private:
    friend ReactionNetwork build_network(NetworkSpec spec);

    explicit ReactionNetwork(NetworkSpec spec) : spec_(std::move(spec)) {
        const auto s = static_cast<Eigen::Index>(spec_.species.size());
        mw_.resize(s);
        for (Eigen::Index k = 0; k < s; ++k) mw_(k) = spec_.species[static_cast<std::size_t>(k)].molecular_weight;
        m0_ = mw_.dot(spec_.n0);
        w_in_ = mw_.cwiseInverse().asDiagonal() * spec_.inlet_weight_fractions;
    }

    IndexSet support(std::size_t i, int sign) const {
        check_reaction(i);
        IndexSet out;
        const auto row = static_cast<Eigen::Index>(i);
        for (Eigen::Index k = 0; k < spec_.stoich.cols(); ++k) {
            const double nu = spec_.stoich(row, k);
            if ((sign < 0 && nu < 0.0) || (sign > 0 && nu > 0.0)) out.insert(static_cast<std::size_t>(k));
        }
        return out;
    }

    NetworkSpec spec_;
    Vector mw_;
    Matrix w_in_;
    double m0_ = 0.0;
};

/// Validates every structural invariant and either returns the network or throws
/// ValidationError listing all violations found.
inline ReactionNetwork build_network(NetworkSpec spec) {
    std::vector<Violation> v;
    auto fail = [&](std::string code, std::string msg) { v.push_back({std::move(code), std::move(msg)}); };

    const std::size_t s = spec.species.size();
    const auto r = static_cast<std::size_t>(spec.stoich.rows());
    if (s == 0) fail("no_species", "network has no species");

    std::set<std::string> names;
    for (const auto& sp : spec.species) {
        if (sp.name.empty()) fail("empty_species_name", "species with empty name");
        if (!names.insert(sp.name).second) fail("duplicate_species", "duplicate species name '" + sp.name + "'");
        if (!(sp.molecular_weight > 0.0) || !std::isfinite(sp.molecular_weight))
            fail("molecular_weight", "species '" + sp.name + "' has non-positive molecular weight");
    }

    if (spec.outlets != 1)
        fail("outlet_count", "exactly one outlet stream is supported, got " + std::to_string(spec.outlets));

    const bool dims_ok = static_cast<std::size_t>(spec.stoich.cols()) == s &&
                         static_cast<std::size_t>(spec.inlet_weight_fractions.rows()) == s &&
                         static_cast<std::size_t>(spec.n0.size()) == s && spec.rate_laws.size() == r;
    if (!dims_ok) {
        fail("dimensions", "stoichiometry, inlet fractions, initial moles and rate laws disagree on S or R");
        throw ValidationError(std::move(v));
    }

    if (spec.reaction_names.empty())
        for (std::size_t i = 0; i < r; ++i) spec.reaction_names.push_back("R" + std::to_string(i + 1));
    if (spec.reaction_names.size() != r) fail("dimensions", "reaction name count differs from R");
    std::set<std::string> rnames(spec.reaction_names.begin(), spec.reaction_names.end());
    if (rnames.size() != spec.reaction_names.size()) fail("duplicate_reaction", "duplicate reaction name");

    for (Eigen::Index j = 0; j < spec.inlet_weight_fractions.cols(); ++j) {
        const auto col = spec.inlet_weight_fractions.col(j);
        if ((col.array() < 0.0).any() || !col.allFinite())
            fail("weight_fraction_negative", "inlet " + std::to_string(j + 1) + " has a negative weight fraction");
        const double sum = col.sum();
        if (std::abs(sum - 1.0) > kWeightFractionTolerance)
            fail("weight_fraction_sum",
                 "inlet " + std::to_string(j + 1) + " weight fractions sum to " + std::to_string(sum) + ", expected 1");
    }

    for (std::size_t k = 0; k < s; ++k) {
        const double n = spec.n0(static_cast<Eigen::Index>(k));
        if (!(n >= 0.0) || !std::isfinite(n))
            fail("negative_initial_moles", "initial moles of '" + spec.species[k].name + "' is negative");
    }

    for (std::size_t i = 0; i < r; ++i) {
        const auto row = spec.stoich.row(static_cast<Eigen::Index>(i));
        IndexSet reactants, products;
        for (std::size_t k = 0; k < s; ++k) {
            const double nu = row(static_cast<Eigen::Index>(k));
            if (nu < 0.0) reactants.insert(k);
            if (nu > 0.0) products.insert(k);
        }
        const auto& rname = spec.reaction_names.size() == r ? spec.reaction_names[i] : std::to_string(i + 1);
        if (reactants.empty()) fail("empty_reactant_set", "reaction " + rname + " has no reactants");
        if (products.empty()) fail("empty_product_set", "reaction " + rname + " has no products");

        const auto& law = spec.rate_laws[i];
        if (!(law.k_f >= 0.0) || !(law.k_b >= 0.0))
            fail("rate_constant", "reaction " + rname + " has a negative rate constant");
        for (const auto& [k, e] : law.fwd_exponents) {
            if (!reactants.count(k)) fail("rate_law_keys", "reaction " + rname + ": forward exponent on a non-reactant");
            if (!(e >= 0.0)) fail("rate_law_exponent", "reaction " + rname + ": negative forward exponent");
        }
        for (const auto& [k, e] : law.bwd_exponents) {
            if (!products.count(k)) fail("rate_law_keys", "reaction " + rname + ": backward exponent on a non-product");
            if (!(e >= 0.0)) fail("rate_law_exponent", "reaction " + rname + ": negative backward exponent");
        }
        for (const auto& [k, term] : law.denom) {
            if (!reactants.count(k)) fail("rate_law_keys", "reaction " + rname + ": saturation term on a non-reactant");
            if (!(term.a >= 0.0) || !(term.d >= 0.0))
                fail("rate_law_exponent", "reaction " + rname + ": negative saturation parameter");
        }
    }

    if (!v.empty()) throw ValidationError(std::move(v));
    return ReactionNetwork(std::move(spec));
}

struct IndependenceReport {
    Eigen::Index rank_stoich = 0;
    Eigen::Index rank_inlet = 0;
    Eigen::Index rank_augmented = 0;  ///< rank of [N^T | W_in | n0]
    bool reactions_independent = false;
    bool inlets_independent = false;
    bool transform_admissible = false;
    /// Forward transformation unavailable although reactions and inlets are independent;
    /// the back transformation and the extent model remain usable.
    bool remark_case = false;
};

/// [N^T | W_in | n0], the S x (R+p+1) matrix mapping extents to moles.
inline Matrix extent_to_moles_matrix(const ReactionNetwork& net) {
    const auto s = static_cast<Eigen::Index>(net.num_species());
    const auto r = static_cast<Eigen::Index>(net.num_reactions());
    const auto p = static_cast<Eigen::Index>(net.num_inlets());
    Matrix a(s, r + p + 1);
    a.leftCols(r) = net.stoich().transpose();
    a.middleCols(r, p) = net.inlet_composition_matrix();
    a.col(r + p) = net.n0();
    return a;
}

inline IndependenceReport check_independence(const ReactionNetwork& net) {
    IndependenceReport rep;
    const auto r = static_cast<Eigen::Index>(net.num_reactions());
    const auto p = static_cast<Eigen::Index>(net.num_inlets());
    rep.rank_stoich = numerical_rank(net.stoich());
    rep.rank_inlet = numerical_rank(net.inlet_composition_matrix());
    rep.rank_augmented = numerical_rank(extent_to_moles_matrix(net));
    rep.reactions_independent = rep.rank_stoich == r;
    rep.inlets_independent = rep.rank_inlet == p;
    rep.transform_admissible = rep.rank_augmented == r + p + 1;
    rep.remark_case = !rep.transform_admissible && rep.reactions_independent && rep.inlets_independent;
    return rep;
}

/**
 * Rewrites reaction i in the opposite direction: negates its stoichiometric row and
 * swaps forward/backward constants and exponent maps. Saturation terms are defined
 * over reactants only, so laws carrying them cannot be reversed.
 */
inline ReactionNetwork reverse_reaction(const ReactionNetwork& net, std::size_t i) {
    net.check_reaction(i);
    NetworkSpec spec = net.spec();
    auto& law = spec.rate_laws[i];
    if (!law.denom.empty())
        throw Error("cannot reverse reaction " + net.reaction_name(i) + ": it has saturation terms");
    spec.stoich.row(static_cast<Eigen::Index>(i)) *= -1.0;
    std::swap(law.k_f, law.k_b);
    std::swap(law.fwd_exponents, law.bwd_exponents);
    return build_network(std::move(spec));
}

}  // namespace extcoop
