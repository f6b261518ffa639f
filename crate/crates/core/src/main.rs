use polyint::frontend::cli::{cli_run, Status};

fn main() {
    let r = cli_run(std::env::args_os());
    let to_stderr = matches!(r.status, Status::ParseError | Status::DomainError | Status::InternalError)
        && !r.payload.starts_with('{');
    if to_stderr {
        eprintln!("{}", r.payload.trim_end());
    } else {
        println!("{}", r.payload.trim_end());
    }
    std::process::exit(r.exit_code);
}
