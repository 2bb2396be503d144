fn main() {
    std::process::exit(wct_cli::cli::main_entry(std::env::args_os()));
}
