fn main() {
    std::process::exit(momentconekit_cli::cli::main_with(Some("lrcoef")));
}
