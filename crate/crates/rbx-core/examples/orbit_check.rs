//! Scratch: inspect separations + stress-test invariance of the orbit vector.
use rbx_core::algebra;
use rbx_core::campaign::OrbitInvariants;
use rbx_core::catalog::Catalog;
use rbx_core::linalg::{Mat, Scalar};
use rbx_core::morphism::{inner, transpose_morphism};

fn main() {
    let cat = Catalog::build().unwrap();
    let get = |id: &str| cat.get(id).unwrap().representative();
    // What separates the pairs the source argues bespokely?
    let pairs = [
        ("M3.3-I", "M3.3-II"),
        ("M3.1a", "M3.1b"), ("M3.1a", "M3.1c"), ("M3.1b", "M3.1c"),
        ("M3.2a", "M3.2b"), ("M3.2a", "M3.2c"), ("M3.2b", "M3.2c"),
        ("M3.3a", "M3.3b"),
        ("M3.4a", "M3.4b"),
        ("M3.5a", "M3.5b"),
        ("M3.6a", "M3.6b"),
        ("M3.7a", "M3.7b"), ("M3.7a", "M3.7c"),
    ];
    for (a, b) in pairs {
        let ia = OrbitInvariants::compute(&get(a));
        let ib = OrbitInvariants::compute(&get(b));
        let ib_phi = OrbitInvariants::compute(&get(b).phi());
        println!("{a} vs {b}: direct={:?} phi={:?}", ia.first_difference(&ib), ia.first_difference(&ib_phi));
    }
    // Invariance stress: conjugate by assorted inner autos and transpose.
    let m3 = algebra::m3();
    let t_mats = [
        Mat::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
        Mat::from_i64(&[&[1, 2, -1], &[0, 1, 1], &[1, 0, 1]]),
        Mat::from_i64(&[&[2, 0, 0], &[1, 1, 0], &[0, -1, 1]]),
        Mat::from_i64(&[&[0, 1, 0], &[1, 0, 2], &[0, 0, -1]]),
        Mat::from_i64(&[&[1, -2, 2], &[2, 1, 0], &[0, 1, 1]]),
    ];
    let transpose = transpose_morphism(&m3).unwrap();
    let mut bad = 0;
    for id in ["M3.3-I", "M3.3-II", "M3.2a", "M3.1-I", "M3.6-IV", "M3.8-I", "M3.5b", "M3.7c"] {
        let op = get(id);
        let base = OrbitInvariants::compute(&op);
        for t in &t_mats {
            let psi = inner(&m3, t).unwrap();
            let conj = op.conjugate_by(&psi).unwrap();
            assert!(conj.rb_check().is_pass());
            if OrbitInvariants::compute(&conj) != base {
                println!("NOT INVARIANT under inner({t:?}) for {id}");
                bad += 1;
            }
            let anti = psi.compose(&transpose).unwrap();
            let conj2 = op.conjugate_by(&anti).unwrap();
            assert!(conj2.rb_check().is_pass());
            if OrbitInvariants::compute(&conj2) != base {
                println!("NOT INVARIANT under inner∘transpose for {id}");
                bad += 1;
            }
        }
    }
    println!("invariance stress: {bad} violations");
    let s = Scalar::one(); let _ = s;
}
