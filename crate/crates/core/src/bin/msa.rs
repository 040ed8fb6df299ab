fn main() {
    std::process::exit(msa::cli::run(std::env::args_os()));
}
