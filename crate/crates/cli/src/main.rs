use clap::Parser;

fn main() {
    let cli = match qei_cli::commands::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(qei_cli::EXIT_OK);
            }
            eprint!("{e}");
            std::process::exit(qei_cli::EXIT_CONFIG);
        }
    };
    std::process::exit(qei_cli::run(cli));
}
