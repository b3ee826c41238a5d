use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PATS_LOG", "warn")).init();
    ExitCode::from(pats_cli::app::main_with_args(std::env::args_os()))
}
