mod common;

use std::collections::HashSet;

use nalgebra::DMatrix;
use rand::Rng;
use subsyscode::hamiltonian::{mean_field_ground_energy, MAX_ED_SITES};
use subsyscode::rng::stream;
use subsyscode::{
    build_code, build_hamiltonian, diagonalize_small, mean_field_delta_e, BitString, Error,
    MeanFieldParams, Pauli, PauliOperator,
};

fn op(n_sites: usize, sites: &[usize], p: char) -> PauliOperator {
    let text: String = (0..n_sites)
        .map(|s| if sites.contains(&s) { p } else { 'I' })
        .collect();
    text.parse().unwrap()
}

/// `-lambda * (sum of row ZZ bonds + column XX bonds)` with site `r * n + c`.
fn dense_hamiltonian(n: usize, lambda: f64) -> DMatrix<f64> {
    let sites = n * n;
    let dim = 1 << sites;
    let mut h = DMatrix::zeros(dim, dim);
    for r in 0..n {
        for c in 0..n {
            if c + 1 < n {
                h -= common::real_matrix(&op(sites, &[r * n + c, r * n + c + 1], 'Z')) * lambda;
            }
            if r + 1 < n {
                h -= common::real_matrix(&op(sites, &[r * n + c, (r + 1) * n + c], 'X')) * lambda;
            }
        }
    }
    h
}

/// X on rows i, i+1 and Z on columns j, j+1.
fn dense_stabilizers(n: usize) -> (Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) {
    let sites = n * n;
    let xs = (0..n - 1)
        .map(|i| {
            let support: Vec<usize> = (0..n).flat_map(|c| [i * n + c, (i + 1) * n + c]).collect();
            common::real_matrix(&op(sites, &support, 'X'))
        })
        .collect();
    let zs = (0..n - 1)
        .map(|j| {
            let support: Vec<usize> = (0..n).flat_map(|r| [r * n + j, r * n + j + 1]).collect();
            common::real_matrix(&op(sites, &support, 'Z'))
        })
        .collect();
    (xs, zs)
}

fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn projector(n: usize, sx: &BitString, sz: &BitString) -> DMatrix<f64> {
    let (xs, zs) = dense_stabilizers(n);
    let dim = 1 << (n * n);
    let id = DMatrix::<f64>::identity(dim, dim);
    let mut p = id.clone();
    for (i, s) in xs.iter().enumerate() {
        let sign = if sx.get(i) { -1.0 } else { 1.0 };
        p = p * (&id + s * sign) * 0.5;
    }
    for (j, s) in zs.iter().enumerate() {
        let sign = if sz.get(j) { -1.0 } else { 1.0 };
        p = p * (&id + s * sign) * 0.5;
    }
    p
}

#[test]
fn spectrum_matches_dense_oracle() {
    for (n, lambda) in [(2, 1.0), (2, 0.7), (3, 1.0)] {
        let report =
            diagonalize_small(&build_hamiltonian(&build_code(2, n).unwrap(), lambda)).unwrap();
        let oracle = sorted_eigenvalues(&dense_hamiltonian(n, lambda));
        let expanded: Vec<f64> = report
            .eigenvalues
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.value, l.multiplicity))
            .collect();
        assert_eq!(expanded.len(), oracle.len());
        for (a, b) in expanded.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8, "n={n}: {a} vs {b}");
        }
        assert_eq!(report.dimension, 1 << (n * n));
        assert!(report.all_multiplicities_even(), "n={n}");
        assert!(report.ground_multiplicity >= 2 && report.ground_multiplicity.is_multiple_of(2));
        assert!((report.ground_energy - oracle[0]).abs() < 1e-8);
    }
}

#[test]
fn hamiltonian_commutes_with_stabilizers() {
    for n in [2, 3] {
        let h = dense_hamiltonian(n, 1.0);
        let (xs, zs) = dense_stabilizers(n);
        for s in xs.iter().chain(&zs) {
            let comm = &h * s - s * &h;
            assert!(comm.amax() < 1e-12);
        }
    }
    for (d, n) in [(2, 5), (2, 6), (3, 5)] {
        let c = build_code(d, n).unwrap();
        let spec = build_hamiltonian(&c, 1.0);
        for s in c.stabilizer_generators() {
            assert!(spec.terms.iter().all(|t| !t.operator.anticommutes(&s)));
        }
    }
}

#[test]
fn sector_minima_match_projected_oracle() {
    for n in [2, 3] {
        let report =
            diagonalize_small(&build_hamiltonian(&build_code(2, n).unwrap(), 1.0)).unwrap();
        let h = dense_hamiltonian(n, 1.0);
        let dim = 1 << (n * n);
        let id = DMatrix::<f64>::identity(dim, dim);
        assert_eq!(report.sectors.len(), 1 << (2 * (n - 1)));
        for sector in &report.sectors {
            let p = projector(n, &sector.sx, &sector.sz);
            assert_eq!(p.trace().round() as usize, sector.dimension);
            // push the complement far above the spectrum
            let shifted = &p * &h * &p + (&id - &p) * 1e3;
            let min = sorted_eigenvalues(&shifted)[0];
            assert!(
                (min - sector.min_energy).abs() < 1e-8,
                "n={n} {}|{}",
                sector.sx,
                sector.sz
            );
            assert_eq!(
                sector.levels.iter().map(|l| l.multiplicity).sum::<usize>(),
                sector.dimension
            );
        }
        println!(
            "n={n}: ground energy {:.10} multiplicity {} in sectors {:?}; all-+1 sector contains ground: {}",
            report.ground_energy,
            report.ground_multiplicity,
            report
                .ground_sectors
                .iter()
                .map(|s| format!("{}|{}", s.sx, s.sz))
                .collect::<Vec<_>>(),
            report.ground_in_trivial_sector
        );
    }
}

#[test]
fn size_guard() {
    let err = diagonalize_small(&build_hamiltonian(&build_code(2, 4).unwrap(), 1.0)).unwrap_err();
    assert!(matches!(
        err,
        Error::TooLarge {
            sites: 16,
            max_sites: MAX_ED_SITES
        }
    ));
    assert!(diagonalize_small(&build_hamiltonian(&build_code(3, 3).unwrap(), 1.0)).is_err());
}

#[test]
fn term_list_examples() {
    let spec = build_hamiltonian(&build_code(2, 2).unwrap(), 1.0);
    let ops: Vec<String> = spec.terms.iter().map(|t| t.operator.to_string()).collect();
    assert_eq!(ops, ["ZZII", "IIZZ", "XIXI", "IXIX"]);
    let tags: HashSet<&str> = spec.terms.iter().map(|t| t.kind.tag()).collect();
    assert_eq!(tags, HashSet::from(["xx-col", "zz-row"]));
    let spec3 = build_hamiltonian(&build_code(3, 3).unwrap(), 1.0);
    assert_eq!(spec3.terms.len(), 72);
    for kind in ["xx", "xy", "zy", "zz"] {
        assert_eq!(
            spec3.terms.iter().filter(|t| t.kind.tag() == kind).count(),
            18
        );
    }
    let c = build_code(3, 3).unwrap();
    for t in &spec3.terms {
        assert_eq!(t.operator.weight(), 2);
        assert_eq!(
            c.classify(&t.operator).unwrap(),
            subsyscode::LogicalClass::Gauge
        );
    }
}

// ---- mean-field energetics ----

const N: usize = 9;

fn site(x: usize, y: usize, z: usize) -> usize {
    (x * N + y) * N + z
}

/// Direct count over every site and its +y, +z, +x neighbours.
fn bond_oracle(err: &PauliOperator, lambda: f64, p: &MeanFieldParams) -> f64 {
    let mut total = 0.0;
    for x in 0..N {
        for y in 0..N {
            for z in 0..N {
                let u = site(x, y, z);
                let mut visit = |v: usize, c_x_bond: f64, c_z_bond: f64| {
                    if err.z_bit(u) != err.z_bit(v) {
                        total += c_x_bond;
                    }
                    if err.x_bit(u) != err.x_bit(v) {
                        total += c_z_bond;
                    }
                };
                if x + 1 < N {
                    // XX bond only along x
                    visit(site(x + 1, y, z), p.c_xx, 0.0);
                }
                if y + 1 < N {
                    visit(site(x, y + 1, z), p.c_xy, p.c_zy);
                }
                if z + 1 < N {
                    // ZZ bond only along z
                    visit(site(x, y, z + 1), 0.0, p.c_zz);
                }
            }
        }
    }
    2.0 * lambda * total
}

fn x_domain(cells: impl IntoIterator<Item = (usize, usize, usize)>) -> PauliOperator {
    PauliOperator::on_sites(
        N * N * N,
        cells.into_iter().map(|(x, y, z)| site(x, y, z)),
        Pauli::X,
    )
}

fn rect(x: usize, y0: usize, z0: usize, w: usize, h: usize) -> PauliOperator {
    x_domain((0..w).flat_map(|dy| (0..h).map(move |dz| (x, y0 + dy, z0 + dz))))
}

#[test]
fn mean_field_closed_forms() {
    let spec = build_hamiltonian(&build_code(3, N).unwrap(), 1.0);
    let uni = MeanFieldParams::uniform(1.0).unwrap();
    assert_eq!(
        mean_field_delta_e(&spec, &PauliOperator::identity(N * N * N), &uni).unwrap(),
        0.0
    );
    assert_eq!(
        mean_field_delta_e(&spec, &rect(4, 4, 4, 1, 1), &uni).unwrap(),
        8.0
    );
    // neighbours along y
    assert_eq!(
        mean_field_delta_e(&spec, &rect(4, 4, 4, 2, 1), &uni).unwrap(),
        12.0
    );
    assert_eq!(
        mean_field_delta_e(&spec, &rect(4, 3, 3, 3, 2), &uni).unwrap(),
        20.0
    );
    for k in 1..=4 {
        assert_eq!(
            mean_field_delta_e(&spec, &rect(4, 2, 2, k, k), &uni).unwrap(),
            8.0 * k as f64
        );
    }
    let p = MeanFieldParams::new(0.9, 1.1, 0.7, 1.3).unwrap();
    let lambda = 1.7;
    let spec = build_hamiltonian(&build_code(3, N).unwrap(), lambda);
    for (w, h) in [(1, 1), (2, 1), (1, 2), (3, 2), (4, 3)] {
        let expected = 2.0 * lambda * (2.0 * h as f64 * p.c_zy + 2.0 * w as f64 * p.c_zz);
        let got = mean_field_delta_e(&spec, &rect(3, 2, 2, w, h), &p).unwrap();
        assert!(
            (got - expected).abs() < 1e-12,
            "{w}x{h}: {got} vs {expected}"
        );
    }
    let eg = mean_field_ground_energy(&spec, &p).unwrap();
    let per_kind = (N * N * (N - 1)) as f64;
    assert!((eg + lambda * per_kind * (p.c_xx + p.c_xy + p.c_zy + p.c_zz)).abs() < 1e-9);
}

#[test]
fn mean_field_boundaries_and_errors() {
    let spec = build_hamiltonian(&build_code(3, N).unwrap(), 1.0);
    let uni = MeanFieldParams::uniform(1.0).unwrap();
    // corner site has one y bond and one z bond
    assert_eq!(
        mean_field_delta_e(&spec, &rect(0, 0, 0, 1, 1), &uni).unwrap(),
        4.0
    );
    // edge of a yz-plane
    assert_eq!(
        mean_field_delta_e(&spec, &rect(0, 0, 4, 1, 1), &uni).unwrap(),
        6.0
    );
    assert!(mean_field_delta_e(&spec, &PauliOperator::identity(8), &uni).is_err());
    let spec2 = build_hamiltonian(&build_code(2, 3).unwrap(), 1.0);
    assert!(mean_field_delta_e(&spec2, &PauliOperator::identity(9), &uni).is_err());
    assert!(MeanFieldParams::new(1.0, 0.0, 1.0, 1.0).is_err());
}

#[test]
fn mean_field_translation_invariance() {
    let spec = build_hamiltonian(&build_code(3, N).unwrap(), 1.0);
    let p = MeanFieldParams::new(0.5, 0.6, 0.8, 1.4).unwrap();
    let shape = [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2)];
    let place = |x: usize, y0: usize, z0: usize| {
        x_domain(shape.iter().map(|&(dy, dz)| (x, y0 + dy, z0 + dz)))
    };
    let base = mean_field_delta_e(&spec, &place(4, 2, 2), &p).unwrap();
    for (x, y0, z0) in [(1, 1, 1), (4, 4, 5), (7, 5, 3), (2, 3, 4)] {
        assert!((mean_field_delta_e(&spec, &place(x, y0, z0), &p).unwrap() - base).abs() < 1e-12);
    }
}

#[test]
fn mean_field_random_domains_match_bond_count() {
    let spec = build_hamiltonian(&build_code(3, N).unwrap(), 1.3);
    let p = MeanFieldParams::new(0.4, 0.9, 0.6, 1.2).unwrap();
    let mut rng = stream(51, 0);
    for _ in 0..50 {
        // grow a connected cluster inside one yz-plane
        let x = rng.random_range(0..N);
        let mut cells = vec![(rng.random_range(0..N), rng.random_range(0..N))];
        let target = rng.random_range(1..30);
        while cells.len() < target {
            let (y, z) = cells[rng.random_range(0..cells.len())];
            let (dy, dz) = [(0i32, 1i32), (0, -1), (1, 0), (-1, 0)][rng.random_range(0..4)];
            let (ny, nz) = (y as i32 + dy, z as i32 + dz);
            if (0..N as i32).contains(&ny)
                && (0..N as i32).contains(&nz)
                && !cells.contains(&(ny as usize, nz as usize))
            {
                cells.push((ny as usize, nz as usize));
            }
        }
        let err = x_domain(cells.iter().map(|&(y, z)| (x, y, z)));
        let got = mean_field_delta_e(&spec, &err, &p).unwrap();
        assert!((got - bond_oracle(&err, 1.3, &p)).abs() < 1e-9);
    }
    // arbitrary mixed errors exercise the XX bonds too
    for _ in 0..50 {
        let err = PauliOperator::random(N * N * N, &mut rng);
        let got = mean_field_delta_e(&spec, &err, &p).unwrap();
        assert!((got - bond_oracle(&err, 1.3, &p)).abs() < 1e-9);
    }
}
