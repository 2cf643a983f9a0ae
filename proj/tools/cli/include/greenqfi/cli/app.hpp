// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace greenqfi::cli {

/// Exit codes: 0 success, 2 validation, 3 non-convergence, 4 I/O, 1 other.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace greenqfi::cli
