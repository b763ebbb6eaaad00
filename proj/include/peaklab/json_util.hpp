#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "peaklab/errors.hpp"

namespace peaklab {

inline std::complex<double> json_to_cplx(const nlohmann::json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InputError(where + ": expected a number or [re, im] pair");
}

inline std::vector<std::complex<double>> json_to_cvec(const nlohmann::json& j,
                                                      const std::string& where) {
    if (!j.is_array() || j.empty()) throw InputError(where + ": expected a non-empty array");
    std::vector<std::complex<double>> v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(json_to_cplx(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

inline nlohmann::json cplx_to_json(const std::complex<double>& c) {
    return nlohmann::json::array({c.real(), c.imag()});
}

inline nlohmann::json cvec_to_json(const std::vector<std::complex<double>>& v) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : v) j.push_back(cplx_to_json(c));
    return j;
}

} // namespace peaklab
