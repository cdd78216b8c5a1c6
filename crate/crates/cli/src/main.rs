fn main() {
    std::process::exit(segstab_cli::run(std::env::args_os()));
}
