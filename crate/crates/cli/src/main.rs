use std::io::Write;

fn main() {
    let res = branchkit_cli::execute(std::env::args_os());
    let (out, err) = branchkit_cli::render(&res);
    print!("{out}");
    let _ = std::io::stdout().flush();
    eprint!("{err}");
    std::process::exit(res.exit_code);
}
