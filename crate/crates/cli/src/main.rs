// SPDX-License-Identifier: MIT OR Apache-2.0

fn main() {
    std::process::exit(driftsplit_cli::run_from(std::env::args_os()));
}
