fn main() -> std::process::ExitCode {
    crawlbench::cli::main()
}
