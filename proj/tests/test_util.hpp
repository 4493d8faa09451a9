#pragma once

#include <gtest/gtest.h>

#include <functional>

#include "pptdist/error.hpp"

namespace testing_util {

inline pptdist::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const pptdist::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return pptdist::ErrorCode::ParseError;
}

}  // namespace testing_util
