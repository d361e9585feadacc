fn main() {
    std::process::exit(textdenoise::cli::run(std::env::args_os()));
}
