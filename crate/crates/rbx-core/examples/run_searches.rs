//! Scratch: derive the frozen search constants.
use rbx_core::linalg::Scalar;
use rbx_core::search::{search_f3, search_m2, SearchConfig};

fn main() {
    let cfg = SearchConfig::default_grid(Scalar::one());
    let f3 = search_f3(&cfg).unwrap();
    println!("{}", f3.to_text());
    let threads: Option<usize> = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let mut cfg2 = SearchConfig::default_grid(Scalar::one());
    cfg2.threads = threads;
    let m2 = search_m2(&cfg2).unwrap();
    println!("{}", m2.to_text());
}
