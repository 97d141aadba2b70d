#ifndef RCELL_INSTANCE_IO_HPP
#define RCELL_INSTANCE_IO_HPP

#include "rcell/cell.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rcell {

class InstanceFormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline Duration json_duration(const nlohmann::json &v, const std::string &key) {
    if (v.is_number_integer()) return Duration(v.get<std::int64_t>());
    if (v.is_number_float()) {
        try {
            return Duration::from_double(v.get<double>());
        } catch (const std::invalid_argument &e) {
            throw InstanceFormatError("'" + key + "': " + e.what());
        }
    }
    throw InstanceFormatError("'" + key + "' must be a number");
}

} // namespace detail

/// {"m", "epsilon", "delta", "p"} or {"m", "epsilon", "delta", "p_i": [...]}.
inline CellInstance instance_from_json(const nlohmann::json &j) {
    if (!j.is_object()) throw InstanceFormatError("instance must be a JSON object");
    for (const auto &[key, value] : j.items())
        if (key != "m" && key != "epsilon" && key != "delta" && key != "p" && key != "p_i")
            throw InstanceFormatError("unknown key '" + key + "'");
    for (const char *key : {"m", "epsilon", "delta"})
        if (!j.contains(key)) throw InstanceFormatError(std::string("missing key '") + key + "'");
    if (j.contains("p") == j.contains("p_i")) throw InstanceFormatError("exactly one of 'p' and 'p_i' is required");
    if (!j["m"].is_number_integer()) throw InstanceFormatError("'m' must be an integer");

    const auto m = j["m"].get<std::int64_t>();
    if (m < 1 || m > 64) throw InstanceFormatError("'m' must be in 1..64");
    const Duration eps = detail::json_duration(j["epsilon"], "epsilon");
    const Duration delta = detail::json_duration(j["delta"], "delta");
    try {
        if (j.contains("p")) return {static_cast<int>(m), eps, delta, detail::json_duration(j["p"], "p")};
        const auto &arr = j["p_i"];
        if (!arr.is_array()) throw InstanceFormatError("'p_i' must be an array");
        std::vector<Duration> proc;
        for (const auto &v : arr) proc.push_back(detail::json_duration(v, "p_i"));
        return {static_cast<int>(m), eps, delta, std::move(proc)};
    } catch (const InvalidInstance &e) {
        throw InstanceFormatError(e.what());
    }
}

inline CellInstance parse_instance(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw InstanceFormatError(std::string("invalid JSON: ") + e.what());
    }
    return instance_from_json(j);
}

inline CellInstance load_instance(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InstanceFormatError("cannot open instance file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

inline nlohmann::json duration_json(const Duration &d) {
    if (d.is_integer()) return d.num();
    return d.to_double();
}

inline nlohmann::json instance_to_json(const CellInstance &inst) {
    nlohmann::json j;
    j["m"] = inst.machines();
    j["epsilon"] = duration_json(inst.epsilon());
    j["delta"] = duration_json(inst.delta());
    if (inst.uniform_proc()) {
        j["p"] = duration_json(inst.proc(1));
    } else {
        j["p_i"] = nlohmann::json::array();
        for (const auto &p : inst.proc()) j["p_i"].push_back(duration_json(p));
    }
    return j;
}

} // namespace rcell

#endif // RCELL_INSTANCE_IO_HPP
