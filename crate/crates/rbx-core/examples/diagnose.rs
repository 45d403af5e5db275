//! Scratch diagnostic for the remaining replay claims.
use rbx_core::algebra;
use rbx_core::catalog::{self, Catalog};
use rbx_core::linalg::Scalar;
use rbx_core::morphism::{named, find_conjugator, ConjugatorSearch, ConjugatorOutcome, Morphism, NamedMorphism as NM};
use rbx_core::operator::OperatorMatrix;

fn s(n: i64) -> Scalar { Scalar::from_int(n) }
fn q(n: i64, d: i64) -> Scalar { Scalar::new(n, d) }

fn op3(images: Vec<(&str, Vec<(Scalar, &str)>)>) -> OperatorMatrix {
    OperatorMatrix::from_scalar_images(&algebra::m3(), &images, Scalar::one()).unwrap()
}

fn composite(atoms: &[NM]) -> Morphism {
    let ctx = algebra::m3();
    let mut result = Morphism::identity(&ctx);
    for a in atoms {
        result = result.compose(&named(&ctx, a.clone()).unwrap()).unwrap();
    }
    result
}

fn try_all(label: &str, lhs: &OperatorMatrix, rhs: &OperatorMatrix, atoms: &[NM]) -> bool {
    let fwd = composite(atoms);
    let mut rev_atoms = atoms.to_vec();
    rev_atoms.reverse();
    let rev = composite(&rev_atoms);
    for (name, m) in [("fwd", fwd.clone()), ("fwd-inv", fwd.inverse()), ("rev", rev.clone()), ("rev-inv", rev.inverse())] {
        if &lhs.conjugate_by(&m).unwrap() == rhs {
            println!("HIT {label}: lhs->{name}->rhs");
            return true;
        }
        if &rhs.conjugate_by(&m).unwrap() == lhs {
            println!("HIT {label}: rhs->{name}->lhs");
            return true;
        }
    }
    false
}

fn main() {
    let cat = Catalog::build().unwrap();
    let get = |id: &str| cat.get(id).unwrap().representative();

    let frame3 = |e12: Vec<(Scalar, &'static str)>, e21: Vec<(Scalar, &'static str)>| {
        op3(vec![
            ("e33", vec![(s(-1), "e33")]),
            ("e13", vec![(s(-1), "e13")]),
            ("e23", vec![(s(-1), "e23")]),
            ("e12", e12),
            ("e21", e21),
        ])
    };
    let proof3c = frame3(
        vec![(s(1), "e11"), (s(-1), "e12"), (s(1), "e33")],
        vec![(s(1), "e22"), (s(-1), "e21"), (s(1), "e33")],
    );
    // Confirm conjugacy exists at all.
    match find_conjugator(&proof3c, &get("M3.3-II"), &ConjugatorSearch::default()).unwrap() {
        ConjugatorOutcome::Found(m) => println!("3c ~ 3-II conjugator exists: {}", m.name()),
        ConjugatorOutcome::NotFoundWithinBound { candidates } => println!("3c !~ 3-II within grid ({candidates})"),
    }
    match find_conjugator(&proof3c, &get("M3.3-I"), &ConjugatorSearch::default()).unwrap() {
        ConjugatorOutcome::Found(m) => println!("3c ~ 3-I conjugator exists: {}", m.name()),
        ConjugatorOutcome::NotFoundWithinBound { candidates } => println!("3c !~ 3-I within grid ({candidates})"),
    }
    println!("== exact paper-map shapes against swapped endpoints ==");
    for b in [1i64, 2] {
        // the stated 3d-map shape against 3c -> 3-I
        let rho_m = NM::Rho(q(-1, b), s(b), q(-1, b));
        try_all(&format!("3c->3-I via phi13.T.rho(-1/b).phi13 b={b}"), &proof3c, &get("M3.3-I"),
            &[NM::Phi13, NM::Transpose, rho_m.clone(), NM::Phi13]);
    }
    println!("== widened 3c search (target 3-I) ==");
    'l3c: for b in [1i64, 2, -1] {
        for (s1, s2) in [(1i64,1i64),(1,-1),(-1,1),(-1,-1)] {
            let rho = NM::Rho(q(s1, b), s(b), q(s2, b));
            for (tag, atoms) in [
                ("A", vec![NM::Phi13, NM::Transpose, rho.clone()]),
                ("B", vec![NM::Phi13, NM::Transpose, rho.clone(), NM::Phi13]),
                ("C", vec![NM::Phi13, NM::Transpose, NM::Phi23, rho.clone(), NM::Phi23]),
                ("D", vec![NM::Phi23, rho.clone(), NM::Phi23, NM::Phi13, NM::Transpose]),
                ("E", vec![NM::Transpose, NM::Phi13, NM::Phi23, rho.clone(), NM::Phi23]),
                ("F", vec![NM::Phi12, rho.clone(), NM::Phi12]),
                ("G", vec![NM::Phi12, rho.clone(), NM::Phi12, NM::Phi13, NM::Transpose]),
                ("H", vec![NM::Phi13, NM::Transpose, NM::Phi12, rho.clone(), NM::Phi12]),
            ] {
                if try_all(&format!("3c b={b} s=({s1},{s2}) {tag}"), &proof3c, &get("M3.3-I"), &atoms) { continue 'l3c; }
            }
        }
        println!("  no hit for b={b}");
    }

    let proof3d = frame3(
        vec![(s(1), "e22"), (s(-1), "e12"), (s(1), "e33")],
        vec![(s(1), "e11"), (s(-1), "e21"), (s(1), "e33")],
    );
    println!("== widened 3d search (target 3-II) ==");
    'l3d: for b in [1i64, 2, -1] {
        for (s1, s2) in [(1i64,1i64),(1,-1),(-1,1),(-1,-1)] {
            let rho = NM::Rho(q(s1, b), s(b), q(s2, b));
            for (tag, atoms) in [
                ("A", vec![NM::Phi13, NM::Transpose, rho.clone()]),
                ("B", vec![NM::Phi13, NM::Transpose, rho.clone(), NM::Phi13]),
                ("C", vec![NM::Phi13, NM::Transpose, NM::Phi23, rho.clone(), NM::Phi23]),
                ("D", vec![NM::Phi23, rho.clone(), NM::Phi23, NM::Phi13, NM::Transpose]),
                ("E", vec![NM::Transpose, NM::Phi13, NM::Phi23, rho.clone(), NM::Phi23]),
                ("F", vec![NM::Phi12, rho.clone(), NM::Phi12]),
                ("G", vec![NM::Phi12, rho.clone(), NM::Phi12, NM::Phi13, NM::Transpose]),
                ("H", vec![NM::Phi13, NM::Transpose, NM::Phi12, rho.clone(), NM::Phi12]),
            ] {
                if try_all(&format!("3d b={b} s=({s1},{s2}) {tag}"), &proof3d, &get("M3.3-II"), &atoms) { continue 'l3d; }
            }
        }
        println!("  no hit for b={b}");
    }

    // Endpoint: print the structure of the conjugates.
    println!("== endpoint structure ==");
    let m3 = algebra::m3();
    let d3 = m3.span_of_labels(&["e11", "e22", "e33"]).unwrap();
    let upper = m3.span_of_labels(&["e12", "e13", "e23"]).unwrap();
    let e = |l: &str| m3.basis_vector(m3.label_index(l).unwrap());
    let combo = |terms: &[(i64, &str)]| {
        let mut v = vec![Scalar::zero(); 9];
        for (c, l) in terms {
            for (vk, ek) in v.iter_mut().zip(e(l)) {
                *vk += &(&s(*c) * &ek);
            }
        }
        v
    };
    let a_plus = rbx_core::linalg::Subspace::from_vectors(9, vec![
        combo(&[(1, "e21"), (-1, "e23")]),
        combo(&[(1, "e32"), (1, "e12")]),
        combo(&[(1, "e11"), (-1, "e33"), (1, "e31"), (-1, "e13")]),
    ]);
    let sub = rbx_core::algebra::SubalgebraContext::new(&m3, &d3, "D3").unwrap();
    let p0 = OperatorMatrix::from_scalar_images(&sub.ctx, &[
        ("e11", vec![(s(-1), "e11"), (s(-1), "e33")]),
        ("e22", vec![(s(-1), "e11"), (s(-1), "e22"), (s(-1), "e33")]),
    ], Scalar::one()).unwrap();
    let ext = catalog::example3_extend(&m3, &upper, &d3, &a_plus, &p0).unwrap();
    let chain = composite(&[NM::Phi12, NM::Rho(s(1), s(1), s(1)), NM::Phi12]);
    for (note, psi) in [("fwd", chain.clone()), ("inv", chain.inverse())] {
        let q_op = ext.conjugate_by(&psi).unwrap();
        println!("--- conj({note}), rb={} ---", q_op.rb_check().is_pass());
        print!("{}", q_op.to_text("q"));
    }
}
