fn main() {
    std::process::exit(shiftlab_cli::commands::run());
}
