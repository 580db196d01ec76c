#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "metaland/core/error.hpp"

namespace metaland::detail {

template <typename E, std::size_t N>
using EnumNames = std::array<std::pair<E, std::string_view>, N>;

template <typename E, std::size_t N>
constexpr std::string_view enum_to_string(const EnumNames<E, N>& names, E value) {
  for (const auto& [e, name] : names)
    if (e == value) return name;
  return "?";
}

template <typename E, std::size_t N>
E enum_from_string(const EnumNames<E, N>& names, std::string_view text, std::string_view what) {
  for (const auto& [e, name] : names)
    if (name == text) return e;
  throw ParseError("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

}  // namespace metaland::detail
