#pragma once

#include "ake/error.hpp"

#include <optional>
#include <string>

namespace check {

/// Kind of the ake::Error thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<ake::ErrorKind> thrown_kind(F&& f) {
  try {
    f();
  } catch (const ake::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// Message of the ake::Error thrown by f, empty when none.
template <class F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const ake::Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace check
