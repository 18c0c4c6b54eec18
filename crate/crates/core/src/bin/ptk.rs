use ptk::verifier::SUITE_STACK;

fn main() {
    // deep formulas recurse once per nesting level
    let code = std::thread::Builder::new()
        .stack_size(SUITE_STACK)
        .spawn(|| ptk::cli::run(std::env::args_os()))
        .expect("spawn main thread")
        .join()
        .unwrap_or(101);
    std::process::exit(code);
}
