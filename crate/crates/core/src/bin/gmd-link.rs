fn main() {
    if let Err(e) = gmd_link::harness::cli_main(std::env::args_os()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
