fn main() {
    std::process::exit(icnsim_cli::cli_main());
}
