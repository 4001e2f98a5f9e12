fn main() {
    std::process::exit(hilbert_dirichlet::cli::run(std::env::args_os()));
}
