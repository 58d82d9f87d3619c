use std::io::Write;

fn main() {
    let out = singlat_cli::run(std::env::args_os());
    if let Some(msg) = &out.stderr {
        eprintln!("{}", msg.trim_end());
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
