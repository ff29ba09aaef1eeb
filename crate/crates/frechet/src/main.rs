#[global_allocator]
static ALLOCATOR: mimalloc::MiMalloc = mimalloc::MiMalloc;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("FRECHET_LOG")).init();
    std::process::exit(frechet::cli::run(std::env::args_os()));
}
