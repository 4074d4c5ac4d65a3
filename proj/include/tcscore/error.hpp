// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tcscore {

// Bad input data: malformed files, schema violations, failed joins.
// The CLI maps this to exit status 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tcscore
