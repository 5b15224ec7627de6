#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "lmvs/error.hpp"

namespace lmvs::datamodel::detail {

inline std::string join_path(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

template <typename Json>
const Json& require(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(join_path(path, key) + ": missing field");
    }
    return obj[key];
}

template <typename Json>
std::string require_string(const Json& obj, const char* key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_string()) throw ParseError(join_path(path, key) + ": expected a string");
    return v.template get<std::string>();
}

template <typename Json>
std::int64_t require_int(const Json& obj, const char* key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_number_integer()) throw ParseError(join_path(path, key) + ": expected an integer");
    return v.template get<std::int64_t>();
}

template <typename Json>
double require_number(const Json& obj, const char* key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_number()) throw ParseError(join_path(path, key) + ": expected a number");
    return v.template get<double>();
}

}  // namespace lmvs::datamodel::detail
