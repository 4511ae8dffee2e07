#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mapreel/compiler.hpp"

namespace mapreel {

// Script as a JSON value; exportScript fixes its byte form.
nlohmann::json scriptToJson(const CameraScript& script);

// Canonical bytes: sorted keys, no whitespace, floats as %#.9g, integers
// as integers, -0 written as 0, trailing newline.
std::string canonicalJson(const nlohmann::json& value);

std::string exportScript(const CameraScript& script);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
// 16 lowercase hex digits of fnv1a64.
std::string digestHex(std::string_view bytes);

}  // namespace mapreel
