fn main() {
    std::process::exit(cluster_core::cli::main());
}
