fn main() {
    std::process::exit(stokes2d::cli::main());
}
