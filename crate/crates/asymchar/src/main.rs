fn main() -> std::process::ExitCode {
    asymchar::cli::main_entry(std::env::args_os())
}
