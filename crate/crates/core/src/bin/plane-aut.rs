use std::io::Write;

fn main() {
    let (code, text) = plane_aut::cli::run(std::env::args_os());
    if code == plane_aut::cli::EXIT_OK || code == plane_aut::cli::EXIT_MISMATCH && !text.starts_with("error:") {
        print!("{text}");
        let _ = std::io::stdout().flush();
    } else {
        eprint!("{text}");
    }
    std::process::exit(code);
}
