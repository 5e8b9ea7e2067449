#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opuc/errors.hpp"
#include "opuc/measure.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

// Parsed input file: a measure spec, a coefficient spec, or both coefficient
// sides of a two-sided system.
struct InputSpec {
    std::optional<CircleMeasure> measure;
    std::optional<VerblunskySeq> alphas;
    std::vector<cplx> alphas_minus;  // j = -1, -2, ... for two-sided systems
};

namespace detail {

inline std::vector<cplx> parse_complex_list(const nlohmann::json& j, const std::string& key) {
    std::vector<cplx> out;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2)
            throw ParseError(key + ": entries must be [re, im] pairs");
        out.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return out;
}

}  // namespace detail

// Measure spec:
//   {"weight": {"preset": "lebesgue" | "bernstein_szego" | "fourier" | "samples",
//               ...params},
//    "atoms": [[theta, mass], ...], "grid": N}
// Angles in radians, masses as written; the loaded measure is normalized.
inline CircleMeasure measure_from_json(const nlohmann::json& j) {
    try {
        if (!j.contains("weight")) throw ParseError("measure spec: missing \"weight\"");
        const auto& jw = j.at("weight");
        const std::string preset = jw.at("preset").get<std::string>();

        std::vector<Atom> atoms;
        if (j.contains("atoms")) {
            for (const auto& entry : j.at("atoms")) {
                if (!entry.is_array() || entry.size() != 2)
                    throw ParseError("measure spec: atoms must be [theta, mass] pairs");
                atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
            }
        }
        const std::size_t grid = j.value("grid", default_grid_size);

        WeightSpec weight;
        if (preset == "lebesgue") {
            weight = LebesgueWeight{};
        } else if (preset == "bernstein_szego") {
            weight = BernsteinSzegoWeight{jw.at("alpha").get<double>()};
        } else if (preset == "fourier") {
            FourierWeight fw;
            fw.a0 = jw.value("a0", 1.0);
            if (jw.contains("cos")) fw.cos_coefs = jw.at("cos").get<std::vector<double>>();
            if (jw.contains("sin")) fw.sin_coefs = jw.at("sin").get<std::vector<double>>();
            weight = std::move(fw);
        } else if (preset == "samples") {
            SampledWeight sw{jw.at("values").get<std::vector<double>>()};
            const std::size_t n_samples = sw.values.size();
            if (n_samples != grid && j.contains("grid"))
                throw ParseError("measure spec: sample count must equal the grid size");
            return CircleMeasure(std::move(sw), std::move(atoms), n_samples).normalized();
        } else {
            throw ParseError("measure spec: unknown preset \"" + preset + "\"");
        }
        return CircleMeasure(std::move(weight), std::move(atoms), grid).normalized();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("measure spec: ") + e.what());
    }
}

// Coefficient spec: {"alphas": [[re, im], ...]}, optionally with
// "alphas_minus" for the negative side of a two-sided system.
inline InputSpec input_from_json(const nlohmann::json& j) {
    InputSpec spec;
    try {
        if (j.contains("alphas")) {
            spec.alphas = VerblunskySeq(detail::parse_complex_list(j.at("alphas"), "alphas"));
            if (j.contains("alphas_minus"))
                spec.alphas_minus = detail::parse_complex_list(j.at("alphas_minus"), "alphas_minus");
        } else if (j.contains("weight")) {
            spec.measure = measure_from_json(j);
        } else {
            throw ParseError("input spec: need either \"weight\" or \"alphas\"");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("input spec: ") + e.what());
    }
    return spec;
}

inline InputSpec load_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return input_from_json(j);
}

}  // namespace opuc
