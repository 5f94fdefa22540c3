fn main() {
    std::process::exit(bondlab::cli::dispatch(std::env::args_os()));
}
