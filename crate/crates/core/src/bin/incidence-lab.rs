fn main() {
    std::process::exit(incidence_lab::bench::cli::main_with_args(std::env::args_os()));
}
