fn main() {
    std::process::exit(cpmglue::cli::run(std::env::args_os()));
}
