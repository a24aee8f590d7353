use std::process::exit;

fn main() {
    exit(gksl::cli::run(std::env::args_os()));
}
