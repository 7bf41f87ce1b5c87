fn main() {
    std::process::exit(filiform_ricci::cli::run_from(std::env::args_os()));
}
