#pragma once

#include "extcoop/classify.hpp"
#include "extcoop/jacobian.hpp"
#include "extcoop/network.hpp"
#include "extcoop/rates.hpp"
#include "extcoop/simulate.hpp"
#include "extcoop/transform.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace extcoop::report {

using nlohmann::json;

inline json vector_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
    return out;
}

inline json matrix_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
    return out;
}

inline json names_json(const ReactionNetwork& net, const IndexSet& set) {
    json out = json::array();
    for (auto k : set) out.push_back(net.species_name(k));
    return out;
}

inline json state_json(const ReactionNetwork& net, const ExtentState& xs) {
    json out = json::object();
    const auto names = extent_component_names(net);
    const Vector v = xs.to_vector();
    for (std::size_t k = 0; k < names.size(); ++k) out[names[k]] = v(static_cast<Eigen::Index>(k));
    return out;
}

inline json network_json(const ReactionNetwork& net) {
    json reactions = json::array();
    for (std::size_t i = 0; i < net.num_reactions(); ++i)
        reactions.push_back({{"name", net.reaction_name(i)},
                             {"reactants", names_json(net, net.reactant_set(i))},
                             {"products", names_json(net, net.product_set(i))}});
    json species = json::array();
    for (const auto& sp : net.species()) species.push_back(sp.name);
    return {{"species", species},
            {"reactions", reactions},
            {"num_inlets", net.num_inlets()},
            {"num_invariants", net.num_invariants()},
            {"m0", net.m0()}};
}

inline json independence_json(const IndependenceReport& r) {
    return {{"rank_stoich", r.rank_stoich},
            {"rank_inlet", r.rank_inlet},
            {"rank_augmented", r.rank_augmented},
            {"reactions_independent", r.reactions_independent},
            {"inlets_independent", r.inlets_independent},
            {"transform_admissible", r.transform_admissible},
            {"remark_case", r.remark_case}};
}

inline json a2_json(const ReactionNetwork& net, const A2Report& r) {
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"species", net.species_name(v.species)},
                              {"role", v.reactant ? "reactant" : "product"},
                              {"gradient", v.gradient},
                              {"point", vector_json(v.point)}});
    return {{"reaction", net.reaction_name(r.reaction)},
            {"holds", r.holds},
            {"symbolic_holds", r.symbolic_holds},
            {"method", r.method},
            {"samples_checked", r.samples_checked},
            {"violations", violations},
            {"notes", r.notes}};
}

inline json pair_json(const ReactionNetwork& net, const PairClassification& pc) {
    json conds = json::array();
    for (const auto& c : pc.conditions)
        conds.push_back({{"coupling", "d r" + std::to_string(c.rate_of + 1) + " / d x_r" + std::to_string(c.extent_of + 1)},
                         {"inequality", c.text()}});
    json out = {{"reactions", {net.reaction_name(pc.i), net.reaction_name(pc.j)}},
                {"verdict", to_string(pc.verdict)},
                {"basis", basis_label(pc.basis)},
                {"rule", rule_description(pc.basis)},
                {"conditions", conds}};
    if (!pc.note.empty()) out["note"] = pc.note;
    return out;
}

inline json classification_json(const ReactionNetwork& net, const ClassificationReport& r) {
    json pairs = json::array();
    for (const auto& pc : r.pairs) pairs.push_back(pair_json(net, pc));
    json inlet = json::array();
    for (const auto& row : r.inlet_effects) {
        json jr = json::array();
        for (auto s : row) jr.push_back(to_string(s));
        inlet.push_back(jr);
    }
    json ic = json::array();
    for (auto s : r.ic_effects) ic.push_back(to_string(s));
    json a2 = json::array();
    for (const auto& rep : r.a2_status) a2.push_back(a2_json(net, rep));
    return {{"pairs", pairs},
            {"inlet_effects", inlet},
            {"ic_effects", ic},
            {"a2_status", a2},
            {"system_verdict", to_string(r.system_verdict)},
            {"explanation", r.explanation}};
}

inline json jacobian_json(const ReactionNetwork& net, const JacobianReport& r) {
    const auto names = extent_component_names(net);
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"row", names[static_cast<std::size_t>(v.row)]},
                              {"col", names[static_cast<std::size_t>(v.col)]},
                              {"value", v.value}});
    json blocks = {{"df_r/dx_r", matrix_json(r.blocks.r_r)},
                   {"df_r/dx_in", matrix_json(r.blocks.r_in)},
                   {"df_r/dlambda", vector_json(r.blocks.r_lambda)},
                   {"df_in/dx_in", matrix_json(r.blocks.in_in)},
                   {"df_in/dlambda", vector_json(r.blocks.in_lambda)},
                   {"df_lambda/dx_in", vector_json(r.blocks.lambda_in)},
                   {"df_lambda/dlambda", r.blocks.lambda_lambda}};
    return {{"components", names},
            {"J", matrix_json(r.J)},
            {"blocks", blocks},
            {"metzler", r.metzler},
            {"violations", violations},
            {"eval_point",
             {{"state", state_json(net, r.eval_point.state)},
              {"u_in", vector_json(r.eval_point.u_in)},
              {"u_out", r.eval_point.u_out},
              {"volume", r.eval_point.volume},
              {"t", r.eval_point.t}}}};
}

inline json cross_validation_json(const CrossValidationReport& r) {
    return {{"max_deviation", r.max_deviation},
            {"time_of_max", r.time_of_max},
            {"max_mass_deviation", r.max_mass_deviation},
            {"samples", r.samples},
            {"dt", r.dt}};
}

inline json order_json(const ReactionNetwork& net, const OrderTestResult& r) {
    json chain = json::array();
    for (const auto& xs : r.chain) chain.push_back(state_json(net, xs));
    json out = {{"chain", chain}, {"preserved", r.preserved}, {"tolerance", r.tolerance}, {"compared_times", r.compared_times}};
    if (r.first_violation) {
        const auto& v = *r.first_violation;
        out["first_violation"] = {{"t", v.t}, {"component", v.component_name}, {"pair", {v.pair, v.pair + 1}}, {"gap", v.gap}};
    } else {
        out["first_violation"] = nullptr;
    }
    return out;
}

inline json settings_json(const IntegratorSettings& s) {
    return {{"t0", s.t0}, {"t1", s.t1}, {"dt", s.dt}, {"method", s.method}};
}

}  // namespace extcoop::report
