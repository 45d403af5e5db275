fn main() {
    let cat = rbx_core::catalog::Catalog::build().unwrap();
    let report = rbx_core::campaign::orbit_report(&cat);
    for r in report.failures() { println!("FAIL {}: {}", r.id, r.detail); }
    println!("summary: {:?} green: {}", report.summary, report.is_green());
    let nf: Vec<&str> = report.records.iter().filter(|r| r.id.starts_with("orbit-argument/")).map(|r| r.id.as_str()).collect();
    println!("argument corroborations: {}", nf.len());
}
