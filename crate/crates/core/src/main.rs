fn main() {
    std::process::exit(ldp_meanest::cli::run(std::env::args_os()));
}
