fn main() {
    std::process::exit(jpeval::run(std::env::args_os()));
}
