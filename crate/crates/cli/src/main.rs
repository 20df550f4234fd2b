use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use facet_lattice_cli::{run, serve, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Serve { source, port, host } => tokio::runtime::Runtime::new()
            .map_err(anyhow::Error::from)
            .and_then(|rt| rt.block_on(serve(source, host, *port))),
        Command::Convert { output: Some(path), .. } => {
            run(&cli.command).and_then(|bytes| std::fs::write(path, bytes).map_err(Into::into))
        }
        command => run(command).and_then(|bytes| std::io::stdout().write_all(&bytes).map_err(Into::into)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
