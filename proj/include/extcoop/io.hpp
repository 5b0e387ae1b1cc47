#pragma once

#include "extcoop/errors.hpp"
#include "extcoop/network.hpp"
#include "extcoop/transform.hpp"

#include "json.hpp"

#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace extcoop::io {

using nlohmann::json;

namespace detail {

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok |= it.key() == a;
        if (!ok) throw SchemaError(path + ": unknown key '" + it.key() + "'");
    }
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + ": missing required key '" + key + "'");
    return *it;
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path + ": expected a number");
    return v.get<double>();
}

inline std::string string(const json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaError(path + ": expected a string");
    return v.get<std::string>();
}

inline std::size_t species_ref(const std::map<std::string, std::size_t>& index, const std::string& name,
                               const std::string& path) {
    auto it = index.find(name);
    if (it == index.end()) throw SchemaError(path + ": unknown species '" + name + "'");
    return it->second;
}

inline std::map<std::size_t, double> exponent_map(const json& obj, const std::map<std::string, std::size_t>& index,
                                                  const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path + ": expected an object mapping species to exponents");
    std::map<std::size_t, double> out;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        out[species_ref(index, it.key(), path)] = number(it.value(), path + "." + it.key());
    return out;
}

inline RateLaw rate_law(const json& obj, const std::map<std::string, std::size_t>& index, const std::string& path) {
    check_keys(obj, {"k_f", "k_b", "fwd_exponents", "bwd_exponents", "denom"}, path);
    RateLaw law;
    if (obj.contains("k_f")) law.k_f = number(obj["k_f"], path + ".k_f");
    if (obj.contains("k_b")) law.k_b = number(obj["k_b"], path + ".k_b");
    if (obj.contains("fwd_exponents")) law.fwd_exponents = exponent_map(obj["fwd_exponents"], index, path + ".fwd_exponents");
    if (obj.contains("bwd_exponents")) law.bwd_exponents = exponent_map(obj["bwd_exponents"], index, path + ".bwd_exponents");
    if (obj.contains("denom")) {
        const auto& d = obj["denom"];
        const std::string dp = path + ".denom";
        if (!d.is_object()) throw SchemaError(dp + ": expected an object");
        for (auto it = d.begin(); it != d.end(); ++it) {
            const std::string ep = dp + "." + it.key();
            check_keys(it.value(), {"a", "d"}, ep);
            SaturationTerm term;
            term.a = number(require(it.value(), "a", ep), ep + ".a");
            term.d = number(require(it.value(), "d", ep), ep + ".d");
            law.denom[species_ref(index, it.key(), dp)] = term;
        }
    }
    return law;
}

}  // namespace detail

/// Parses a network description document; schema problems raise SchemaError and
/// invariant violations raise ValidationError.
inline NetworkSpec parse_network_spec(const json& doc) {
    using namespace detail;
    check_keys(doc, {"species", "reactions", "inlets", "initial_moles", "outlets", "description"}, "network");

    NetworkSpec spec;
    const auto& species = require(doc, "species", "network");
    if (!species.is_array()) throw SchemaError("species: expected an array");
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < species.size(); ++k) {
        const std::string path = "species[" + std::to_string(k) + "]";
        check_keys(species[k], {"name", "molecular_weight"}, path);
        Species sp;
        sp.name = string(require(species[k], "name", path), path + ".name");
        sp.molecular_weight = number(require(species[k], "molecular_weight", path), path + ".molecular_weight");
        index.emplace(sp.name, k);
        spec.species.push_back(std::move(sp));
    }
    const auto s = static_cast<Eigen::Index>(spec.species.size());

    const auto& reactions = require(doc, "reactions", "network");
    if (!reactions.is_array()) throw SchemaError("reactions: expected an array");
    spec.stoich = Matrix::Zero(static_cast<Eigen::Index>(reactions.size()), s);
    bool named = false;
    for (std::size_t i = 0; i < reactions.size(); ++i) {
        const std::string path = "reactions[" + std::to_string(i) + "]";
        check_keys(reactions[i], {"name", "stoichiometry", "rate_law"}, path);
        const auto& st = require(reactions[i], "stoichiometry", path);
        if (!st.is_object()) throw SchemaError(path + ".stoichiometry: expected an object");
        for (auto it = st.begin(); it != st.end(); ++it)
            spec.stoich(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(species_ref(index, it.key(), path + ".stoichiometry"))) =
                number(it.value(), path + ".stoichiometry." + it.key());
        spec.rate_laws.push_back(rate_law(require(reactions[i], "rate_law", path), index, path + ".rate_law"));
        if (reactions[i].contains("name")) {
            named = true;
            spec.reaction_names.push_back(string(reactions[i]["name"], path + ".name"));
        } else {
            spec.reaction_names.push_back("R" + std::to_string(i + 1));
        }
    }
    if (!named) spec.reaction_names.clear();

    const json empty = json::array();
    const auto& inlets = doc.contains("inlets") ? doc["inlets"] : empty;
    if (!inlets.is_array()) throw SchemaError("inlets: expected an array");
    spec.inlet_weight_fractions = Matrix::Zero(s, static_cast<Eigen::Index>(inlets.size()));
    for (std::size_t j = 0; j < inlets.size(); ++j) {
        const std::string path = "inlets[" + std::to_string(j) + "]";
        check_keys(inlets[j], {"weight_fractions"}, path);
        const auto& wf = require(inlets[j], "weight_fractions", path);
        if (!wf.is_object()) throw SchemaError(path + ".weight_fractions: expected an object");
        for (auto it = wf.begin(); it != wf.end(); ++it)
            spec.inlet_weight_fractions(static_cast<Eigen::Index>(species_ref(index, it.key(), path + ".weight_fractions")),
                                        static_cast<Eigen::Index>(j)) = number(it.value(), path + ".weight_fractions." + it.key());
    }

    spec.n0 = Vector::Zero(s);
    const auto& n0 = require(doc, "initial_moles", "network");
    if (!n0.is_object()) throw SchemaError("initial_moles: expected an object");
    for (auto it = n0.begin(); it != n0.end(); ++it)
        spec.n0(static_cast<Eigen::Index>(species_ref(index, it.key(), "initial_moles"))) = number(it.value(), "initial_moles." + it.key());

    if (doc.contains("outlets")) {
        if (!doc["outlets"].is_number_integer()) throw SchemaError("outlets: expected an integer");
        spec.outlets = doc["outlets"].get<int>();
    }
    if (doc.contains("description")) string(doc["description"], "description");
    return spec;
}

inline json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(source + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ReactionNetwork load_network(const json& doc) { return build_network(parse_network_spec(doc)); }

inline ReactionNetwork load_network_file(const std::string& path) {
    return load_network(parse_json_text(read_file(path), path));
}

/// Flow profile document: {"u_in": [[t, [u...]], ...], "u_out": [[t, u], ...]}.
inline FlowProfile parse_flows(const json& doc, std::size_t num_inlets) {
    using namespace detail;
    check_keys(doc, {"u_in", "u_out", "description"}, "flows");
    FlowProfile::InletTable u_in;
    FlowProfile::OutletTable u_out;
    if (doc.contains("u_in")) {
        const auto& tab = doc["u_in"];
        if (!tab.is_array()) throw SchemaError("flows.u_in: expected an array of [t, vector]");
        for (std::size_t k = 0; k < tab.size(); ++k) {
            const std::string path = "flows.u_in[" + std::to_string(k) + "]";
            if (!tab[k].is_array() || tab[k].size() != 2 || !tab[k][1].is_array())
                throw SchemaError(path + ": expected [t, vector]");
            Vector v(static_cast<Eigen::Index>(tab[k][1].size()));
            for (std::size_t c = 0; c < tab[k][1].size(); ++c) v(static_cast<Eigen::Index>(c)) = number(tab[k][1][c], path);
            if (static_cast<std::size_t>(v.size()) != num_inlets)
                throw SchemaError(path + ": expected " + std::to_string(num_inlets) + " inlet flowrates");
            u_in.emplace_back(number(tab[k][0], path), std::move(v));
        }
    }
    if (doc.contains("u_out")) {
        const auto& tab = doc["u_out"];
        if (!tab.is_array()) throw SchemaError("flows.u_out: expected an array of [t, value]");
        for (std::size_t k = 0; k < tab.size(); ++k) {
            const std::string path = "flows.u_out[" + std::to_string(k) + "]";
            if (!tab[k].is_array() || tab[k].size() != 2) throw SchemaError(path + ": expected [t, value]");
            u_out.emplace_back(number(tab[k][0], path), number(tab[k][1], path));
        }
    }
    if (doc.contains("description")) string(doc["description"], "description");
    try {
        return FlowProfile(num_inlets, std::move(u_in), std::move(u_out));
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(std::vector<Violation>{Violation{"flow_profile", e.what()}});
    }
}

inline FlowProfile load_flows_file(const std::string& path, std::size_t num_inlets) {
    return parse_flows(parse_json_text(read_file(path), path), num_inlets);
}

}  // namespace extcoop::io
