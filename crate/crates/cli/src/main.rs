use clap::Parser;
use tpgr_cli::Cli;

fn main() {
    let cli = Cli::parse();
    let code = tpgr_cli::execute(&cli.command, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
