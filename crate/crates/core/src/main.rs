fn main() -> std::process::ExitCode {
    donorqc::cli::run()
}
