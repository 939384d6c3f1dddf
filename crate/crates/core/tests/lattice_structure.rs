use rand::Rng;
use subsyscode::rng::stream;
use subsyscode::{
    build_code, conjugate_transversal_cnot, CodeLayout, LogicalClass, Pauli, PauliOperator,
};

fn layouts() -> Vec<CodeLayout> {
    let mut out = Vec::new();
    for n in 2..=7 {
        out.push(build_code(2, n).unwrap());
    }
    for n in [3, 5, 7] {
        out.push(build_code(3, n).unwrap());
    }
    out
}

#[test]
fn construction_rules() {
    assert_eq!(build_code(2, 3).unwrap().num_sites(), 9);
    assert_eq!(build_code(3, 3).unwrap().num_sites(), 27);
    assert!(build_code(3, 4).is_err());
    assert!(build_code(2, 1).is_err());
    assert!(build_code(4, 3).is_err());
    for c in layouts() {
        let n = c.n();
        assert_eq!(c.stabilizer_generators().len(), 2 * (n - 1));
        let per_dim = if c.dimension().as_usize() == 2 {
            2 * n * (n - 1)
        } else {
            4 * n * n * (n - 1)
        };
        assert_eq!(c.gauge_generators().len(), per_dim);
    }
}

#[test]
fn stabilizers_commute_with_everything() {
    for c in layouts() {
        let stabs = c.stabilizer_generators();
        let gauges = c.gauge_generators();
        let l = c.logical_operators();
        for s in &stabs {
            for t in stabs.iter().chain(&gauges).chain([&l.x, &l.y, &l.z]) {
                assert!(!s.anticommutes(t), "n={} {s} vs {t}", c.n());
            }
        }
    }
}

#[test]
fn logicals_anticommute_exactly() {
    for c in layouts() {
        let l = c.logical_operators();
        let xz = &l.x * &l.z;
        let zx = &l.z * &l.x;
        assert_eq!(
            xz,
            zx.clone().with_phase((zx.phase_exp() + 2) % 4),
            "n={}",
            c.n()
        );
        // Y = i X Z is Hermitian: Y * Y = I
        assert!((&l.y * &l.y).is_identity());
        assert_eq!(
            l.y,
            (&l.x * &l.z).with_phase(((&l.x * &l.z).phase_exp() + 1) % 4)
        );
        for g in c.gauge_generators() {
            assert!(!g.anticommutes(&l.x) && !g.anticommutes(&l.z));
        }
    }
}

#[test]
fn stabilizer_examples() {
    let c = build_code(2, 3).unwrap();
    assert_eq!(c.x_stabilizers()[0].to_string(), "XXXXXXIII");
    let c2 = build_code(2, 2).unwrap();
    assert_eq!(c2.x_stabilizers()[0].to_string(), "XXXX");
    let c3 = build_code(3, 3).unwrap();
    let sz1 = &c3.z_stabilizers()[0];
    assert_eq!(sz1.weight(), 18);
    let x_center = PauliOperator::single(27, c3.site_index(&[1, 1, 1]).unwrap(), Pauli::X);
    assert!(sz1.anticommutes(&x_center));
    let l = c3.logical_operators();
    let overlap = l.x.support().filter(|&s| l.z.z_bit(s)).count();
    assert_eq!(overlap, 3);
    assert!(l.x.anticommutes(&l.z));
}

fn random_gauge_element<R: Rng>(c: &CodeLayout, rng: &mut R) -> PauliOperator {
    let gens = c.gauge_generators();
    let mut g = PauliOperator::identity(c.num_sites());
    for gen in &gens {
        if rng.random_bool(0.5) {
            g = &g * gen;
        }
    }
    g
}

#[test]
fn error_strings_are_a_homomorphism() {
    let mut rng = stream(21, 0);
    for c in [
        build_code(2, 4).unwrap(),
        build_code(2, 5).unwrap(),
        build_code(3, 3).unwrap(),
    ] {
        for _ in 0..500 / 3 + 1 {
            let p = PauliOperator::random(c.num_sites(), &mut rng);
            let q = PauliOperator::random(c.num_sites(), &mut rng);
            let lhs = c.error_strings(&(&p * &q)).unwrap();
            let rhs = c
                .error_strings(&p)
                .unwrap()
                .xor(&c.error_strings(&q).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn error_string_examples() {
    let c = build_code(2, 3).unwrap();
    let z = PauliOperator::single(9, c.site_index(&[1, 1]).unwrap(), Pauli::Z);
    let s = c.error_strings(&z).unwrap();
    assert_eq!(
        (s.e.to_string(), s.f.to_string()),
        ("000".into(), "010".into())
    );
    let xbar = c.logical_operators().x;
    let s = c.error_strings(&xbar).unwrap();
    assert_eq!(
        (s.e.to_string(), s.f.to_string()),
        ("111".into(), "000".into())
    );
    for c in layouts() {
        for g in c.gauge_generators() {
            let s = c.error_strings(&g).unwrap();
            assert!(s.e.is_zero() && s.f.is_zero());
        }
    }
    assert!(c.error_strings(&PauliOperator::identity(4)).is_err());
}

#[test]
fn commutant_has_constant_strings() {
    let mut rng = stream(22, 0);
    for c in layouts() {
        let l = c.logical_operators();
        for _ in 0..20 {
            let mut p = random_gauge_element(&c, &mut rng);
            for lop in [&l.x, &l.z] {
                if rng.random_bool(0.5) {
                    p = &p * lop;
                }
            }
            assert!(c
                .stabilizer_generators()
                .iter()
                .all(|s| !s.anticommutes(&p)));
            let s = c.error_strings(&p).unwrap();
            assert!(s.e.is_zero() || s.e.is_all_ones());
            assert!(s.f.is_zero() || s.f.is_all_ones());
        }
    }
}

#[test]
fn classification_is_invariant_under_gauge() {
    let mut rng = stream(23, 0);
    for c in layouts() {
        let l = c.logical_operators();
        let id = PauliOperator::identity(c.num_sites());
        let reps = [
            (id, LogicalClass::Gauge),
            (l.x.clone(), LogicalClass::LogicalX),
            (l.z.clone(), LogicalClass::LogicalZ),
            (l.y.clone(), LogicalClass::LogicalY),
        ];
        for (rep, class) in &reps {
            assert_eq!(&c.classify(rep).unwrap(), class);
            for _ in 0..10 {
                let g = random_gauge_element(&c, &mut rng);
                assert_eq!(&c.classify(&(&g * rep)).unwrap(), class);
            }
        }
    }
}

#[test]
fn classify_examples() {
    let c = build_code(2, 3).unwrap();
    let xx = PauliOperator::on_sites(
        9,
        [
            c.site_index(&[0, 1]).unwrap(),
            c.site_index(&[1, 1]).unwrap(),
        ],
        Pauli::X,
    );
    assert_eq!(c.classify(&xx).unwrap(), LogicalClass::Gauge);
    let z = PauliOperator::single(9, c.site_index(&[1, 1]).unwrap(), Pauli::Z);
    match c.classify(&z).unwrap() {
        LogicalClass::Detectable(s) => {
            assert_eq!(s.sx.to_string(), "11");
            assert_eq!(s.sz.to_string(), "00");
        }
        other => panic!("expected detectable, got {other}"),
    }
}

#[test]
fn syndrome_routes_agree() {
    let mut rng = stream(24, 0);
    for c in layouts() {
        for _ in 0..30 {
            let p = PauliOperator::random(c.num_sites(), &mut rng);
            assert_eq!(
                c.measure_syndrome(&p).unwrap(),
                c.syndrome_by_commutation(&p).unwrap()
            );
        }
    }
}

#[test]
fn gauge_qubits() {
    for n in 2..=4 {
        let c = build_code(2, n).unwrap();
        let qubits = c.gauge_qubit_operators().unwrap();
        assert_eq!(qubits.len(), (n - 1) * (n - 1));
        let stabs = c.stabilizer_generators();
        let l = c.logical_operators();
        for (i, a) in qubits.iter().enumerate() {
            assert!(a.z.anticommutes(&a.x));
            for op in [&a.z, &a.x] {
                assert_eq!(c.classify(op).unwrap(), LogicalClass::Gauge);
                assert!(stabs.iter().all(|s| !s.anticommutes(op)));
                assert!(!op.anticommutes(&l.x) && !op.anticommutes(&l.z));
            }
            for b in &qubits[i + 1..] {
                for (p, q) in [(&a.z, &b.z), (&a.z, &b.x), (&a.x, &b.z), (&a.x, &b.x)] {
                    assert!(!p.anticommutes(q));
                }
            }
        }
    }
    assert!(build_code(3, 3).unwrap().gauge_qubit_operators().is_err());
}

#[test]
fn transversal_cnot() {
    for c in [
        build_code(2, 3).unwrap(),
        build_code(2, 4).unwrap(),
        build_code(3, 3).unwrap(),
    ] {
        let l = c.logical_operators();
        let id = PauliOperator::identity(c.num_sites());
        assert_eq!(
            conjugate_transversal_cnot(&l.x, &id).unwrap(),
            (l.x.clone(), l.x.clone())
        );
        assert_eq!(
            conjugate_transversal_cnot(&id, &l.z).unwrap(),
            (l.z.clone(), l.z.clone())
        );
        assert_eq!(
            conjugate_transversal_cnot(&l.z, &id).unwrap(),
            (l.z.clone(), id.clone())
        );
        assert_eq!(
            conjugate_transversal_cnot(&id, &l.x).unwrap(),
            (id.clone(), l.x.clone())
        );
        for s in c
            .stabilizer_generators()
            .iter()
            .chain(&c.gauge_generators())
        {
            for (ctl, tgt) in [(s, &id), (&id, s)] {
                let (a, b) = conjugate_transversal_cnot(ctl, tgt).unwrap();
                assert_eq!(c.classify(&a).unwrap(), LogicalClass::Gauge);
                assert_eq!(c.classify(&b).unwrap(), LogicalClass::Gauge);
            }
        }
    }
    let a = PauliOperator::identity(9);
    let b = PauliOperator::identity(27);
    assert!(conjugate_transversal_cnot(&a, &b).is_err());
}
