use std::io::Write;

fn main() {
    let outcome = blockforge_cli::run(std::env::args_os());
    if !outcome.output.is_empty() {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(outcome.output.as_bytes());
        let _ = stdout.flush();
    }
    if !outcome.summary.is_empty() {
        eprintln!("{}", outcome.summary.trim_end());
    }
    std::process::exit(outcome.code);
}
