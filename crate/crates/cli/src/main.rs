fn main() {
    std::process::exit(curvsieve::run(std::env::args_os()));
}
