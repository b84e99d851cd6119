fn main() {
    let code = ossidamp::run(std::env::args().collect());
    std::process::exit(code);
}
