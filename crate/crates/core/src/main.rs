fn main() {
    std::process::exit(swkernel::cli::main_entry());
}
