fn main() -> std::process::ExitCode {
    simps::cli::main()
}
