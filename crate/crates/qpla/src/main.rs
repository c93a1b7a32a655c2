fn main() {
    std::process::exit(qpla::cli::main_entry());
}
