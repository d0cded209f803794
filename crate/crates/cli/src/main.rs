use std::io::Write;

fn main() {
    let out = semidiam::run(std::env::args().collect());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
