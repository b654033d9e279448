#pragma once

// Minimal JSON Schema validator covering the subset the shipped schemas use:
// type, required, properties, items, enum, oneOf. Unknown keywords are
// ignored.

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace schemacheck {

using nlohmann::json;

inline bool type_matches(const std::string& t, const json& v) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

inline bool valid(const json& schema, const json& value, std::string& why,
                  const std::string& path = "$") {
    if (!schema.is_object()) return true;

    if (const auto it = schema.find("enum"); it != schema.end()) {
        bool hit = false;
        for (const auto& e : *it)
            if (e == value) {
                hit = true;
                break;
            }
        if (!hit) {
            why = path + ": value not in enum";
            return false;
        }
    }

    if (const auto it = schema.find("type"); it != schema.end()) {
        bool ok = false;
        if (it->is_string()) {
            ok = type_matches(it->get<std::string>(), value);
        } else if (it->is_array()) {
            for (const auto& t : *it)
                if (type_matches(t.get<std::string>(), value)) {
                    ok = true;
                    break;
                }
        }
        if (!ok) {
            why = path + ": type mismatch";
            return false;
        }
    }

    if (const auto it = schema.find("oneOf"); it != schema.end()) {
        int hits = 0;
        for (const auto& sub : *it) {
            std::string ignored;
            if (valid(sub, value, ignored, path)) ++hits;
        }
        if (hits != 1) {
            why = path + ": oneOf matched " + std::to_string(hits) + " branches";
            return false;
        }
    }

    if (value.is_object()) {
        if (const auto it = schema.find("required"); it != schema.end()) {
            for (const auto& key : *it) {
                const std::string k = key.get<std::string>();
                if (!value.contains(k)) {
                    why = path + ": missing required key \"" + k + "\"";
                    return false;
                }
            }
        }
        if (const auto it = schema.find("properties"); it != schema.end()) {
            for (auto p = it->begin(); p != it->end(); ++p) {
                if (!value.contains(p.key())) continue;
                if (!valid(p.value(), value.at(p.key()), why, path + "." + p.key())) return false;
            }
        }
    }

    if (value.is_array()) {
        if (const auto it = schema.find("items"); it != schema.end()) {
            std::size_t i = 0;
            for (const auto& elem : value) {
                if (!valid(*it, elem, why, path + "[" + std::to_string(i) + "]")) return false;
                ++i;
            }
        }
    }

    return true;
}

inline json load_json_file(const std::string& p) {
    std::ifstream f(p);
    if (!f) throw std::runtime_error("cannot open " + p);
    json j;
    f >> j;
    return j;
}

inline json load_schema(const std::string& name) {
    return load_json_file(std::string(OMEST_SCHEMA_DIR) + "/" + name);
}

}  // namespace schemacheck
