#include "potlab/spec_io.hpp"

#include <stdexcept>

#include <json.hpp>

namespace potlab {

namespace {

using nlohmann::json;

Distribution from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument("distribution spec: missing \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "atomic") {
        if (!j.contains("atoms") || !j["atoms"].is_array())
            throw std::invalid_argument("atomic spec: missing \"atoms\" array");
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : j["atoms"]) {
            if (!a.is_array() || a.size() != 2)
                throw std::invalid_argument("atomic spec: atoms must be [value, mass] pairs");
            atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
        }
        return Distribution::atomic(std::move(atoms));
    }
    if (kind == "uniform")
        return Distribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (kind == "exponential")
        return Distribution::exponential(j.at("rate").get<double>());
    if (kind == "hard_instance")
        return Distribution::hard_instance(
            {j.at("n").get<int>(), j.at("beta").get<double>()});
    if (kind == "mixture")
        return Distribution::mixture(from_json(j.at("base")),
                                     j.at("epsilon").get<double>(),
                                     j.at("n").get<int>());
    throw std::invalid_argument("distribution spec: unknown kind \"" + kind + "\"");
}

json to_json(const Distribution& d) {
    json j;
    switch (d.kind()) {
        case DistKind::atomic: {
            j["kind"] = "atomic";
            json atoms = json::array();
            const auto& v = d.atom_values();
            const auto& m = d.atom_masses();
            for (size_t i = 0; i < v.size(); ++i)
                atoms.push_back(json::array({v[i], m[i]}));
            j["atoms"] = std::move(atoms);
            break;
        }
        case DistKind::uniform:
            j["kind"] = "uniform";
            j["lo"] = d.uniform_lo();
            j["hi"] = d.uniform_hi();
            break;
        case DistKind::exponential:
            j["kind"] = "exponential";
            j["rate"] = d.exponential_rate();
            break;
        case DistKind::mixture:
            j["kind"] = "mixture";
            j["base"] = to_json(d.mixture_base());
            j["epsilon"] = d.mixture_epsilon();
            j["n"] = d.mixture_n();
            break;
    }
    return j;
}

}  // namespace

Distribution parse_distribution_spec(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("distribution spec: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("distribution spec: ") + e.what());
    }
}

std::string distribution_spec_json(const Distribution& dist) {
    return to_json(dist).dump();
}

}  // namespace potlab
