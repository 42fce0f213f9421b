use std::process::ExitCode;

fn main() -> ExitCode {
    if k3e_verify::run_and_report().iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
