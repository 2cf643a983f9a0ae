// Copyright 2026 The greenqfi Authors
// SPDX-License-Identifier: Apache-2.0

#include "greenqfi/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return greenqfi::cli::run(argc, argv, std::cout, std::cerr); }
