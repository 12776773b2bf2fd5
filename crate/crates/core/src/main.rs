fn main() {
    std::process::exit(mzv_hopf::cli::main_with_args(std::env::args_os()));
}
