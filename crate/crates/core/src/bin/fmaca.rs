fn main() {
    std::process::exit(fmaca::cli::main_entry());
}
