fn main() -> std::process::ExitCode {
    hyprd::cli::main()
}
