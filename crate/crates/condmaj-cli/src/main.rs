use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let (code, output) = condmaj_cli::run(&argv);
    print!("{output}");
    ExitCode::from(code as u8)
}
