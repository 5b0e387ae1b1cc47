#pragma once

#include "extcoop/errors.hpp"
#include "extcoop/network.hpp"
#include "extcoop/rates.hpp"
#include "extcoop/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace extcoop {

enum class Verdict { Cooperative, Competitive, ConditionallyCooperative, Indeterminate };

enum class SystemVerdict { Cooperative, Competitive, Conditional, Indeterminate };

/// Sign of a coupling term d f_r,i / d (x_in,l or lambda).
enum class Sign { Positive, Negative, Mixed, Zero };

/// Structural rule that decided a pair verdict.
enum class Rule {
    SharedReactantsDisjointProducts,
    DisjointReactants,
    SeriesReactions,
    ReactantsMeetProducts,
    GradientSignsUnverified,
    NoStructuralRule,
};

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Cooperative: return "Cooperative";
        case Verdict::Competitive: return "Competitive";
        case Verdict::ConditionallyCooperative: return "ConditionallyCooperative";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

inline std::string to_string(SystemVerdict v) {
    switch (v) {
        case SystemVerdict::Cooperative: return "Cooperative";
        case SystemVerdict::Competitive: return "Competitive";
        case SystemVerdict::Conditional: return "Conditional";
        case SystemVerdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

inline std::string to_string(Sign s) {
    switch (s) {
        case Sign::Positive: return "+";
        case Sign::Negative: return "-";
        case Sign::Mixed: return "+/-";
        case Sign::Zero: return "0";
    }
    return "?";
}

/// Label used in reports, e.g. "Proposition 2".
inline std::string basis_label(Rule r) {
    switch (r) {
        case Rule::SharedReactantsDisjointProducts: return "Proposition 2";
        case Rule::DisjointReactants: return "Proposition 3";
        case Rule::SeriesReactions: return "Corollary 1";
        case Rule::ReactantsMeetProducts: return "Proposition 4";
        case Rule::GradientSignsUnverified: return "gradient signs unverified";
        case Rule::NoStructuralRule: return "no structural rule";
    }
    return "?";
}

inline std::string rule_description(Rule r) {
    switch (r) {
        case Rule::SharedReactantsDisjointProducts: return "same reactant set, disjoint product sets";
        case Rule::DisjointReactants: return "disjoint reactant sets";
        case Rule::SeriesReactions: return "series reactions: products of one are the reactants of the next";
        case Rule::ReactantsMeetProducts:
            return "reactants of one reaction drawn from both reactants and products of the other";
        case Rule::GradientSignsUnverified: return "rate-gradient sign conditions not verified";
        case Rule::NoStructuralRule: return "topology not covered by the structural rules";
    }
    return "?";
}

/// One monomial  coefficient * symbol * prod c_X^p  of an inequality side.
struct InequalityTerm {
    std::string symbol;
    double coefficient = 1.0;
    std::vector<std::pair<std::string, double>> powers;

    std::string text() const {
        std::ostringstream os;
        if (coefficient != 1.0) os << coefficient << "*";
        os << symbol;
        for (const auto& [name, p] : powers) {
            os << "*c_" << name;
            if (p != 1.0) os << "^" << p;
        }
        return os.str();
    }
};

/// d r_rate / d x_r,extent >= 0 written with positive terms left, negated negative terms right.
struct ConditionDescriptor {
    std::size_t rate_of = 0;
    std::size_t extent_of = 0;
    std::vector<InequalityTerm> lhs;
    std::vector<InequalityTerm> rhs;

    std::string text() const {
        auto side = [](const std::vector<InequalityTerm>& terms) {
            if (terms.empty()) return std::string("0");
            std::string out;
            for (std::size_t k = 0; k < terms.size(); ++k) out += (k ? " + " : "") + terms[k].text();
            return out;
        };
        return side(lhs) + " >= " + side(rhs);
    }
};

struct PairClassification {
    std::size_t i = 0;
    std::size_t j = 0;
    Verdict verdict = Verdict::Indeterminate;
    Rule basis = Rule::NoStructuralRule;
    std::vector<ConditionDescriptor> conditions;  ///< two entries when conditionally cooperative
    std::string note;
};

namespace detail {

inline bool disjoint(const IndexSet& a, const IndexSet& b) {
    return std::none_of(a.begin(), a.end(), [&](std::size_t k) { return b.count(k) > 0; });
}

inline bool subset(const IndexSet& a, const IndexSet& b) {
    return std::all_of(a.begin(), a.end(), [&](std::size_t k) { return b.count(k) > 0; });
}

inline std::string rate_symbol(bool forward, std::size_t reaction) {
    return std::string(forward ? "k_f" : "k_b") + std::to_string(reaction + 1);
}

/// Symbolic form of sum_k (d r_a / d c_k) nu_{b,k}, split by sign.
inline ConditionDescriptor describe_coupling(const ReactionNetwork& net, std::size_t a, std::size_t b) {
    ConditionDescriptor cd;
    cd.rate_of = a;
    cd.extent_of = b;
    const auto& law = net.rate_law(a);
    const bool rational = !law.denom.empty();
    const auto row = net.stoich().row(static_cast<Eigen::Index>(b));

    auto monomial_term = [&](bool forward, std::size_t k, double nu_abs) {
        const auto& exps = forward ? law.fwd_exponents : law.bwd_exponents;
        InequalityTerm t;
        t.symbol = rate_symbol(forward, a);
        t.coefficient = exps.at(k) * nu_abs;
        for (const auto& [s, e] : exps) {
            const double p = s == k ? e - 1.0 : e;
            if (p != 0.0) t.powers.emplace_back(net.species_name(s), p);
        }
        return t;
    };

    auto place = [&](bool positive, InequalityTerm t) { (positive ? cd.lhs : cd.rhs).push_back(std::move(t)); };

    for (Eigen::Index kk = 0; kk < row.size(); ++kk) {
        const double nu = row(kk);
        const auto k = static_cast<std::size_t>(kk);
        if (nu == 0.0 || !law.depends_on(k)) continue;
        if (rational) {
            // Saturating laws keep the partial derivative symbolic.
            const bool reactant = net.stoich()(static_cast<Eigen::Index>(a), kk) < 0.0;
            InequalityTerm t;
            t.symbol = reactant ? "dr" + std::to_string(a + 1) + "/dc_" + net.species_name(k)
                                : "(-dr" + std::to_string(a + 1) + "/dc_" + net.species_name(k) + ")";
            t.coefficient = std::abs(nu);
            place(reactant == (nu > 0.0), std::move(t));
            continue;
        }
        if (law.k_f > 0.0 && law.fwd_exponents.count(k) && law.fwd_exponents.at(k) > 0.0)
            place(nu > 0.0, monomial_term(true, k, std::abs(nu)));
        if (law.k_b > 0.0 && law.bwd_exponents.count(k) && law.bwd_exponents.at(k) > 0.0)
            place(nu < 0.0, monomial_term(false, k, std::abs(nu)));
    }
    return cd;
}

inline PairClassification classify_pair_impl(const ReactionNetwork& net, std::size_t i, std::size_t j, bool a2_i,
                                             bool a2_j) {
    net.check_reaction(i);
    net.check_reaction(j);
    if (i == j) throw IndexError("classify_pair needs two distinct reactions");

    PairClassification pc;
    pc.i = i;
    pc.j = j;
    if (!a2_i || !a2_j) {
        pc.verdict = Verdict::Indeterminate;
        pc.basis = Rule::GradientSignsUnverified;
        return pc;
    }

    const auto ri = net.reactant_set(i), pi = net.product_set(i);
    const auto rj = net.reactant_set(j), pj = net.product_set(j);

    if (ri == rj && disjoint(pi, pj)) {
        pc.verdict = Verdict::Competitive;
        pc.basis = Rule::SharedReactantsDisjointProducts;
        return pc;
    }

    if (disjoint(ri, rj)) {
        // A product shared by both reactions and felt by either rate gives a negative coupling.
        for (auto k : pi) {
            if (pj.count(k) && (net.rate_law(i).depends_on(k) || net.rate_law(j).depends_on(k))) {
                pc.verdict = Verdict::Indeterminate;
                pc.basis = Rule::NoStructuralRule;
                pc.note = "disjoint reactant sets but shared rate-sensitive product " + net.species_name(k);
                return pc;
            }
        }
        const bool j_follows_i = rj == pi && disjoint(pj, ri);
        const bool i_follows_j = ri == pj && disjoint(pi, rj);
        pc.verdict = Verdict::Cooperative;
        pc.basis = (j_follows_i || i_follows_j) ? Rule::SeriesReactions : Rule::DisjointReactants;
        return pc;
    }

    auto meets = [&](const IndexSet& r_other, const IndexSet& r_base, const IndexSet& p_base) {
        IndexSet both = r_base;
        both.insert(p_base.begin(), p_base.end());
        return subset(r_other, both) && !disjoint(r_other, r_base) && !disjoint(r_other, p_base);
    };
    if (meets(rj, ri, pi) || meets(ri, rj, pj)) {
        pc.verdict = Verdict::ConditionallyCooperative;
        pc.basis = Rule::ReactantsMeetProducts;
        pc.conditions.push_back(describe_coupling(net, i, j));
        pc.conditions.push_back(describe_coupling(net, j, i));
        return pc;
    }

    pc.verdict = Verdict::Indeterminate;
    pc.basis = Rule::NoStructuralRule;
    pc.note = "pointwise Jacobian sampling required";
    return pc;
}

inline Sign effect_sign(const ReactionNetwork& net, std::size_t i, const Vector& amounts) {
    const auto& law = net.rate_law(i);
    const auto reactants = net.reactant_set(i);
    const auto products = net.product_set(i);
    bool hits_reactant = false;
    bool hits_product = false;
    for (Eigen::Index k = 0; k < amounts.size(); ++k) {
        if (!(amounts(k) > 0.0)) continue;
        const auto s = static_cast<std::size_t>(k);
        if (!law.depends_on(s)) continue;
        hits_reactant |= reactants.count(s) > 0;
        hits_product |= products.count(s) > 0;
    }
    if (hits_reactant && hits_product) return Sign::Mixed;
    if (hits_reactant) return Sign::Positive;
    if (hits_product) return Sign::Negative;
    return Sign::Zero;
}

}  // namespace detail

/// Structural verdict for reactions i and j (0-based). Gradient signs of both rate laws are checked first.
inline PairClassification classify_pair(const ReactionNetwork& net, std::size_t i, std::size_t j,
                                        const SampleBox& box = {}) {
    net.check_reaction(i);
    net.check_reaction(j);
    return detail::classify_pair_impl(net, i, j, check_assumption_a2(net, i, box).holds,
                                      check_assumption_a2(net, j, box).holds);
}

struct ConditionalCheck {
    bool satisfied = false;
    double margin_ij = 0.0;  ///< d r_i / d x_r,j
    double margin_ji = 0.0;  ///< d r_j / d x_r,i
};

/**
 * Evaluates both coupling inequalities at concentrations c. Each margin is the signed
 * sum over the species of the rate's own reaction of (d r_a / d c_k) * nu_{b,k}: the
 * product-side terms enter positively and the reactant-side terms negatively when
 * reaction b consumes species of both sides.
 */
inline ConditionalCheck check_conditional(const ReactionNetwork& net, std::size_t i, std::size_t j, const Vector& c) {
    net.check_reaction(i);
    net.check_reaction(j);
    auto margin = [&](std::size_t a, std::size_t b) {
        const Vector g = rate_gradient(net.rate_law(a), c);
        IndexSet own = net.reactant_set(a);
        const auto prod = net.product_set(a);
        own.insert(prod.begin(), prod.end());
        double sum = 0.0;
        for (auto k : own) sum += g(static_cast<Eigen::Index>(k)) * net.stoich()(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k));
        return sum;
    };
    ConditionalCheck out;
    out.margin_ij = margin(i, j);
    out.margin_ji = margin(j, i);
    out.satisfied = out.margin_ij >= 0.0 && out.margin_ji >= 0.0;
    return out;
}

inline ConditionalCheck check_conditional(const ReactionNetwork& net, std::size_t i, std::size_t j,
                                          const ExtentState& xs, double volume) {
    return check_conditional(net, i, j, concentrations(net, xs, volume));
}

/// Sign of d f_r,i / d x_in,l from the species that inlet l feeds.
inline Sign inlet_effect(const ReactionNetwork& net, std::size_t i, std::size_t l, const SampleBox& box = {}) {
    net.check_reaction(i);
    if (l >= net.num_inlets())
        throw IndexError("inlet index " + std::to_string(l) + " out of range [0, " + std::to_string(net.num_inlets()) + ")");
    if (!check_assumption_a2(net, i, box).holds) return Sign::Mixed;
    return detail::effect_sign(net, i, net.inlet_weight_fractions().col(static_cast<Eigen::Index>(l)));
}

/// Sign of d f_r,i / d lambda from the initial charge; zero without outlet flow.
inline Sign initial_condition_effect(const ReactionNetwork& net, std::size_t i, const FlowProfile& flows,
                                     const SampleBox& box = {}) {
    net.check_reaction(i);
    if (flows.outlet_always_zero()) return Sign::Zero;
    if (!check_assumption_a2(net, i, box).holds) return Sign::Mixed;
    return detail::effect_sign(net, i, net.n0());
}

struct ClassificationReport {
    std::vector<PairClassification> pairs;  ///< all i < j
    std::vector<std::vector<Sign>> inlet_effects;  ///< R x p
    std::vector<Sign> ic_effects;                  ///< R
    std::vector<A2Report> a2_status;               ///< per reaction
    SystemVerdict system_verdict = SystemVerdict::Indeterminate;
    std::string explanation;

    const PairClassification& pair(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        for (const auto& p : pairs)
            if (p.i == i && p.j == j) return p;
        throw IndexError("no such reaction pair");
    }
};

inline ClassificationReport classify_system(const ReactionNetwork& net, const FlowProfile& flows,
                                            const SampleBox& box = {}) {
    ClassificationReport rep;
    const std::size_t r = net.num_reactions();
    const std::size_t p = net.num_inlets();
    for (std::size_t i = 0; i < r; ++i) rep.a2_status.push_back(check_assumption_a2(net, i, box));

    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            rep.pairs.push_back(detail::classify_pair_impl(net, i, j, rep.a2_status[i].holds, rep.a2_status[j].holds));

    const bool outlet_zero = flows.outlet_always_zero();
    for (std::size_t i = 0; i < r; ++i) {
        const bool a2 = rep.a2_status[i].holds;
        std::vector<Sign> row;
        for (std::size_t l = 0; l < p; ++l)
            row.push_back(a2 ? detail::effect_sign(net, i, net.inlet_weight_fractions().col(static_cast<Eigen::Index>(l)))
                             : Sign::Mixed);
        rep.inlet_effects.push_back(std::move(row));
        rep.ic_effects.push_back(outlet_zero ? Sign::Zero : (a2 ? detail::effect_sign(net, i, net.n0()) : Sign::Mixed));
    }

    auto count_pairs = [&](Verdict v) {
        return std::count_if(rep.pairs.begin(), rep.pairs.end(), [&](const auto& pc) { return pc.verdict == v; });
    };
    std::size_t negative = 0, mixed = 0;
    for (const auto& row : rep.inlet_effects)
        for (auto s : row) {
            negative += s == Sign::Negative;
            mixed += s == Sign::Mixed;
        }
    for (auto s : rep.ic_effects) {
        negative += s == Sign::Negative;
        mixed += s == Sign::Mixed;
    }

    const auto competitive = count_pairs(Verdict::Competitive);
    const auto conditional = count_pairs(Verdict::ConditionallyCooperative);
    const auto cooperative = count_pairs(Verdict::Cooperative);
    std::ostringstream why;
    if (competitive > 0 || negative > 0) {
        rep.system_verdict = SystemVerdict::Competitive;
        why << competitive << " competitive reaction pair(s), " << negative << " negative operation-mode coupling(s)";
    } else if (static_cast<std::size_t>(cooperative) == rep.pairs.size() && mixed == 0) {
        rep.system_verdict = SystemVerdict::Cooperative;
        why << "all " << rep.pairs.size() << " reaction pair(s) cooperative; inlet and initial-condition couplings "
            << "nonnegative";
    } else if (conditional > 0) {
        rep.system_verdict = SystemVerdict::Conditional;
        why << conditional << " conditionally cooperative reaction pair(s); cooperative where their inequalities hold";
    } else {
        rep.system_verdict = SystemVerdict::Indeterminate;
        why << count_pairs(Verdict::Indeterminate) << " undecided reaction pair(s), " << mixed
            << " sign-indefinite coupling(s)";
    }
    rep.explanation = why.str();
    return rep;
}

}  // namespace extcoop
