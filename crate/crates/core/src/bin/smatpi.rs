// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(smatpi::cli::main(std::env::args_os()));
}
