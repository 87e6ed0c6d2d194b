use clap::Parser;
use wordmaps::cli::{execute, init_jobs, Cli};

fn main() {
    let cli = Cli::parse();
    init_jobs(cli.jobs);
    match execute(&cli) {
        Ok((report, code)) => {
            if cli.csv {
                print!("{}", report.to_csv());
            } else {
                println!("{}", report.to_json());
            }
            std::process::exit(code);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
