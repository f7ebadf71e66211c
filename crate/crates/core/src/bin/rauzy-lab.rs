fn main() {
    std::process::exit(rauzy_lab::experiments::cli::run(std::env::args_os()));
}
