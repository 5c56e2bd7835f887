use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let spec = match qts::cli::parse_args(&argv) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("{}", e.message);
            return ExitCode::from(e.exit_code as u8);
        }
    };
    let (code, report) = qts::cli::run(&spec);
    print!("{report}");
    ExitCode::from(code as u8)
}
