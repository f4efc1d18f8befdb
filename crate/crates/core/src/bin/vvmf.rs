fn main() {
    std::process::exit(vvmf::cli::main_with_args(std::env::args().collect()));
}
