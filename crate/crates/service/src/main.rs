use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;

use subdisc_service::{router, Service, ServiceConfig, DEFAULT_MAX_EXAMPLES};

#[derive(Debug, Parser)]
#[command(
    name = "subdisc-service",
    version,
    about = "HTTP session API for subgroup discovery"
)]
struct Args {
    #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    bind: IpAddr,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Directory for the session log; sessions are kept in memory only when absent.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_EXAMPLES)]
    max_examples: usize,
}

#[tokio::main]
async fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    let config = ServiceConfig {
        max_examples: args.max_examples,
        data_dir: args.data_dir,
    };
    let service = match Service::open(config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot open session log: {e}");
            std::process::exit(3);
        }
    };
    let addr = SocketAddr::new(args.bind, args.port);
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: cannot bind {addr}: {e}");
            std::process::exit(3);
        }
    };
    log::info!("listening on http://{addr}");
    if let Err(e) = axum::serve(listener, router(Arc::new(service))).await {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
