use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(threads) = std::env::var("WAK_THREADS").ok().and_then(|v| v.parse().ok()) {
        wakexp::exec::init_threads(threads);
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = wakexp::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
