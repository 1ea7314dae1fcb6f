fn main() {
    std::process::exit(frozen_wave::cli::main_with(std::env::args_os()));
}
