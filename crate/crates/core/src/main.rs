fn main() {
    std::process::exit(dv2v::cli::run(std::env::args_os()));
}
