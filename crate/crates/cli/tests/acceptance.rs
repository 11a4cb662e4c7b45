//! Acceptance suite. Each test exercises one criterion end to end at its
//! stated tolerance and prints one PASS line (visible with --nocapture;
//! any failure shows the assertion output).

use galg::bimap::{is_homotopism, Bimap, Homotopism};
use galg::field::Field;
use galg::gen;
use galg::graded::{graded_isomorphism_coset, GradedIsoOptions};
use galg::hermitian::{
    isometry_group, pseudo_isometry_coset, HermitianBimap, IsometryMethod, PseudoOptions,
    UNITARY_ENUM_BUDGET,
};
use galg::isotopism::{isotopism_coset, CosetOptions, GStrategy, LiftOptions};
use galg::labels;
use galg::linalg::{Matrix, Subspace};
use galg::oracle;
use galg::rings::{self, RingKind};
use rand::Rng;
use serde_json::Value;
use std::process::Command;
use std::time::{Duration, Instant};

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn report(criterion: &str, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
    println!("ACCEPTANCE {criterion} ({name}): PASS in {elapsed:.2?} (budget {budget:?})");
}

#[test]
fn c01_figure_reproduction() {
    let t0 = Instant::now();
    let d = gen::bimap_d();
    let e = gen::bimap_e();
    let f = gf(3);

    let labels_d = labels::vertex_labels(&d);
    let rank2_d: Vec<Vec<u64>> = labels_d
        .iter()
        .filter(|(_, &r)| r == 2)
        .map(|(p, _)| p.coords.clone())
        .collect();
    let rank4_d = labels_d.values().filter(|&&r| r == 4).count();
    assert_eq!(rank2_d.len(), 4, "D must have exactly 4 rank-2 points");
    assert_eq!(rank4_d, 9, "D must have exactly 9 rank-4 points");
    // all rank-2 points of D incident to one common line
    let mut stack = Matrix::zero(f.clone(), rank2_d.len(), 3);
    for (i, p) in rank2_d.iter().enumerate() {
        for (j, &v) in p.iter().enumerate() {
            stack.set(i, j, v);
        }
    }
    assert!(stack.rank() <= 2, "rank-2 points of D must be collinear");

    let labels_e = labels::vertex_labels(&e);
    let mut rank2_e: Vec<Vec<u64>> = labels_e
        .iter()
        .filter(|(_, &r)| r == 2)
        .map(|(p, _)| p.coords.clone())
        .collect();
    rank2_e.sort();
    let mut expected = vec![
        vec![0u64, 1, 0],
        vec![0, 0, 1],
        vec![1, 1, 2],
        vec![1, 2, 1],
    ];
    expected.sort();
    assert_eq!(rank2_e, expected, "rank-2 set of E");
    for line in labels::projective_lines(&f, 3) {
        let on = rank2_e.iter().filter(|p| line.contains(p)).count();
        assert!(on < 3, "rank-2 points of E must not share a line");
    }

    let ll_d = labels::line_labels(&d, &labels_d);
    let ll_e = labels::line_labels(&e, &labels_e);
    assert_eq!(labels::line_label_classes(&ll_d), 2, "D line classes");
    assert_eq!(labels::line_label_classes(&ll_e), 3, "E line classes");
    report("C1", "figure reproduction", t0, Duration::from_secs(1));
}

#[test]
fn c02_d_vs_e_not_pseudo_isometric() {
    let t0 = Instant::now();
    let d = HermitianBimap::detect(gen::bimap_d()).unwrap();
    let e = HermitianBimap::detect(gen::bimap_e()).unwrap();
    let coset = pseudo_isometry_coset(
        &d,
        &e,
        &PseudoOptions {
            strategy: GStrategy::Full,
            with_isometry_group: false,
            ..PseudoOptions::default()
        },
    )
    .unwrap();
    assert_eq!(coset.candidate_count, 11232, "must scan all of GL(3,3)");
    assert!(
        coset.representative.is_none(),
        "D and E must not be pseudo-isometric"
    );
    report("C2", "D vs E non-equivalence", t0, Duration::from_secs(300));
}

#[test]
fn c03_table_scaffolding() {
    let t0 = Instant::now();
    // (p, e) -> expected (#points, #lines)
    let rows: Vec<(u64, usize, usize, usize)> = vec![
        (3, 3, 13, 13),
        (3, 4, 40, 130),
        (5, 3, 31, 31),
        (5, 4, 156, 806),
        (3, 5, 121, 1210),
        (5, 5, 781, 20306),
    ];
    for (p, e, want_points, want_lines) in rows {
        let f = gf(p);
        let pts = labels::projective_points(&f, e).len();
        let lines = labels::projective_lines(&f, e).len();
        assert_eq!(pts, want_points, "points for p={p} e={e}");
        assert_eq!(lines, want_lines, "lines for p={p} e={e}");
        // closed formulas agree
        let q = p as u128;
        let formula_points = (q.pow(e as u32) - 1) / (q - 1);
        let formula_lines =
            ((q.pow(e as u32) - 1) * (q.pow(e as u32 - 1) - 1)) / ((q * q - 1) * (q - 1));
        assert_eq!(pts as u128, formula_points);
        assert_eq!(lines as u128, formula_lines);
    }
    // |GL(e,p)| against direct enumeration where small
    for (p, e) in [(2u64, 2usize), (3, 2), (3, 3), (2, 3)] {
        let f = gf(p);
        let q = p as u128;
        let mut formula = 1u128;
        let mut qi = 1u128;
        for _ in 0..e {
            formula *= q.pow(e as u32) - qi;
            qi *= q;
        }
        let enumerated = labels::enumerate_gl(&f, e, 1 << 30).unwrap().len() as u128;
        assert_eq!(formula, enumerated, "GL({e},{p}) order");
    }
    report("C3", "table scaffolding", t0, Duration::from_secs(60));
}

fn run_cli(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_galg"))
        .args(args)
        .output()
        .expect("spawn galg");
    (
        String::from_utf8_lossy(&out.stdout).to_string(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn c04_table1_modal_values() {
    let t0 = Instant::now();
    let master_seeds = [0u64, 1, 2];
    let mut matched = false;
    let mut last: Option<Value> = None;
    for seed in master_seeds {
        let (out, code) = run_cli(&[
            "experiment",
            "table1",
            "--p",
            "3",
            "--k",
            "5",
            "--e",
            "3",
            "--trials",
            "10",
            "--seed",
            &seed.to_string(),
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let omega = v["result"]["modal_omega"].as_str().unwrap().to_string();
        let psi = v["result"]["modal_psi"].as_str().unwrap().to_string();
        println!("  table1 (3,5,3) seed {seed}: modal (omega, psi) = ({omega}, {psi})");
        last = Some(v);
        if omega == "16" && psi == "2" {
            matched = true;
            break;
        }
    }
    if !matched {
        // soft criterion: the report must carry the full per-trial data
        let v = last.unwrap();
        let trials = v["result"]["trials"].as_array().unwrap();
        assert_eq!(trials.len(), 10, "divergence report needs all trials");
        println!("ACCEPTANCE C4 (table1 modal values): DIVERGENT, flagged with per-trial data");
        panic!("modal (omega, psi) never matched (16, 2) across three master seeds");
    }
    report("C4", "table1 modal values", t0, Duration::from_secs(1800));
}

#[test]
fn c05_table2_triviality() {
    let t0 = Instant::now();
    for d in [10usize, 20] {
        let (out, code) = run_cli(&[
            "experiment",
            "table2",
            "--d",
            &d.to_string(),
            "--p",
            "3",
            "--e",
            "3",
            "--trials",
            "10",
            "--seed",
            "0",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let momega = v["result"]["modal_omega_projective"].as_str().unwrap();
        let mpsi = v["result"]["modal_psi_projective"].as_str().unwrap();
        assert_eq!(momega, "1", "modal projective omega for d={d}");
        assert_eq!(mpsi, "1", "modal projective psi for d={d}");
        let trials = v["result"]["trials"].as_array().unwrap();
        let trivial = trials
            .iter()
            .filter(|t| {
                t["omega_projective"].as_str() == Some("1")
                    && t["psi_projective"].as_str() == Some("1")
            })
            .count();
        println!("  table2 ({d},3,3): {trivial}/10 trials trivial");
        assert!(trivial >= 8, "need >= 8/10 trivial trials for d={d}");
    }
    report("C5", "table2 triviality", t0, Duration::from_secs(1200));
}

#[test]
fn c06_oracle_equivalence_isotopism() {
    let t0 = Instant::now();
    let f2 = gf(2);
    let mut pairs_checked = 0u64;
    // exhaustive over all slice systems with dims <= (2,2,2) over GF(2)
    for a in 1..=2usize {
        for b in 1..=2usize {
            for c in 1..=2usize {
                let all = oracle::all_bimaps(&f2, (a, b, c));
                for (ui, u) in all.iter().enumerate() {
                    for (vi, v) in all.iter().enumerate() {
                        let brute = oracle::brute_isotopisms(u, v, oracle::ORACLE_BUDGET).unwrap();
                        let coset = isotopism_coset(
                            u,
                            v,
                            &CosetOptions {
                                strategy: GStrategy::Full,
                                lift: LiftOptions {
                                    random_tries: 16,
                                    seed: (ui * 1009 + vi) as u64,
                                },
                                ..CosetOptions::default()
                            },
                        )
                        .unwrap();
                        assert_eq!(
                            coset.is_empty(),
                            brute.is_empty(),
                            "emptiness at dims ({a},{b},{c}) pair ({ui},{vi})"
                        );
                        assert_eq!(
                            coset.order,
                            Some(brute.len() as u128),
                            "order at dims ({a},{b},{c}) pair ({ui},{vi})"
                        );
                        pairs_checked += 1;
                    }
                }
            }
        }
    }
    println!("  exhaustive GF(2) pairs checked: {pairs_checked}");
    // 50 seeded random bimaps over GF(3)
    let f3 = gf(3);
    let mut rng = gen::rng_from_seed(0xc6);
    let pool: Vec<Bimap> = (0..50u64)
        .map(|i| {
            let dims = (
                rng.gen_range(1..3usize),
                rng.gen_range(1..3usize),
                rng.gen_range(1..3usize),
            );
            gen::random_bimap(&f3, dims, 20_000 + i)
        })
        .collect();
    for (i, u) in pool.iter().enumerate() {
        let v = &pool[(i + 1) % pool.len()];
        for (x, y) in [(u, u), (u, v)] {
            if x.dims != y.dims {
                continue;
            }
            let brute = oracle::brute_isotopisms(x, y, oracle::ORACLE_BUDGET).unwrap();
            let coset = isotopism_coset(
                x,
                y,
                &CosetOptions {
                    strategy: GStrategy::Full,
                    lift: LiftOptions {
                        random_tries: 16,
                        seed: i as u64,
                    },
                    ..CosetOptions::default()
                },
            )
            .unwrap();
            assert_eq!(coset.is_empty(), brute.is_empty(), "GF(3) pair {i}");
            assert_eq!(coset.order, Some(brute.len() as u128), "GF(3) pair {i}");
        }
    }
    report(
        "C6",
        "oracle equivalence, isotopism",
        t0,
        Duration::from_secs(600),
    );
}

#[test]
fn c07_oracle_equivalence_graded() {
    let t0 = Instant::now();
    let mut pairs: Vec<(galg::graded::GradedAlgebra, galg::graded::GradedAlgebra)> = Vec::new();
    let (noext_a, noext_b) = gen::no_extension_pair(2);
    pairs.push((noext_a, noext_b));
    let (dense, _) = gen::dense_lie(&[1, 1, 1], 2, None).unwrap();
    let (dense_scrambled, _) = gen::scramble_graded(&dense, 42).unwrap();
    pairs.push((dense.clone(), dense_scrambled));
    pairs.push((dense.clone(), dense));
    let mut i = 0u64;
    while pairs.len() < 30 {
        let d1 = 2 + (i % 2) as usize;
        let d2 = 1 + (i % 3) as usize;
        let a = gen::random_graded_class2(2, d1, d2, 30_000 + i).unwrap();
        if i.is_multiple_of(3) {
            let (b, _) = gen::scramble_graded(&a, 31_000 + i).unwrap();
            pairs.push((a, b));
        } else if i % 3 == 1 {
            let b = gen::random_graded_class2(2, d1, d2, 32_000 + i).unwrap();
            pairs.push((a, b));
        } else {
            pairs.push((a.clone(), a));
        }
        i += 1;
    }
    for (idx, (a, b)) in pairs.iter().enumerate() {
        let brute = oracle::brute_graded_isomorphisms(a, b, 1 << 30).unwrap();
        let coset = graded_isomorphism_coset(a, b, &GradedIsoOptions::default()).unwrap();
        assert_eq!(
            coset.representative.is_some(),
            !brute.is_empty(),
            "emptiness at graded pair {idx}"
        );
        assert_eq!(
            coset.order,
            brute.len() as u128,
            "automorphism count at graded pair {idx}"
        );
    }
    println!("  graded pairs checked: {}", pairs.len());
    report(
        "C7",
        "oracle equivalence, graded",
        t0,
        Duration::from_secs(600),
    );
}

#[test]
fn c08_classical_group_orders() {
    let t0 = Instant::now();
    let f3 = gf(3);
    let sp2 = HermitianBimap::detect(gen::heisenberg(1, &f3).unwrap()).unwrap();
    let g2 = isometry_group(&sp2, IsometryMethod::AdjointUnitary, UNITARY_ENUM_BUDGET).unwrap();
    assert_eq!(g2.order, 24, "|Sp(2,3)|");

    let sp4 = HermitianBimap::detect(gen::heisenberg(2, &f3).unwrap()).unwrap();
    let g4 = isometry_group(&sp4, IsometryMethod::AdjointUnitary, UNITARY_ENUM_BUDGET).unwrap();
    assert_eq!(g4.order, 51840, "|Sp(4,3)| via the adjoint-unitary route");

    let h = HermitianBimap::detect(gen::heisenberg(1, &f3).unwrap()).unwrap();
    let coset = pseudo_isometry_coset(
        &h,
        &h,
        &PseudoOptions {
            strategy: GStrategy::Full,
            ..PseudoOptions::default()
        },
    )
    .unwrap();
    let brute = oracle::brute_pseudo_isometries(&h.base, &h.base, oracle::ORACLE_BUDGET).unwrap();
    assert_eq!(brute.len(), 48);
    assert_eq!(coset.order, Some(48), "pseudo-isometry group of Heisenberg");
    report("C8", "classical group orders", t0, Duration::from_secs(900));
}

#[test]
fn c09_ring_identities() {
    let t0 = Instant::now();
    let mut rng = gen::rng_from_seed(909);
    for trial in 0..100u64 {
        let p = [2u64, 3, 5][(trial % 3) as usize];
        let f = gf(p);
        let dims = (
            rng.gen_range(1..4usize),
            rng.gen_range(1..4usize),
            rng.gen_range(1..4usize),
        );
        let u = gen::random_bimap(&f, dims, 40_000 + trial);
        let (dl, dm, dr, dt, _dc) = rings::tri_ring_dims(&u).unwrap();
        assert_eq!(dt, dl + dm + dr, "T additivity at trial {trial}");
        let m = rings::adjoint_space(RingKind::M, &u, None).unwrap();
        for (fm, gm) in &m.basis {
            for s in &u.slices {
                assert_eq!(
                    fm.mul(s).unwrap(),
                    s.mul(&gm.transpose()).unwrap(),
                    "adjoint identity at trial {trial}"
                );
            }
        }
        let cen = rings::centroid(&u).unwrap();
        for (fm, gm, hm) in &cen.basis {
            for (k, s) in u.slices.iter().enumerate() {
                let left = fm.mul(s).unwrap();
                let mid = s.mul(&gm.transpose()).unwrap();
                let mut right = Matrix::zero(f.clone(), dims.0, dims.1);
                for (li, sl) in u.slices.iter().enumerate() {
                    right = right.add(&sl.scalar_mul(hm.get(li, k))).unwrap();
                }
                assert_eq!(left, mid, "centroid left identity at trial {trial}");
                assert_eq!(mid, right, "centroid right identity at trial {trial}");
            }
        }
    }
    // M(U1 cap U2) = M(U1) cap M(U2) on slice splits of D and E
    for u in [gen::bimap_d(), gen::bimap_e()] {
        let parts = u.split_slices();
        let u1 = Bimap::intersect(&parts[..2]).unwrap();
        let u2 = parts[2].clone();
        let joined = Bimap::intersect(&[u1.clone(), u2.clone()]).unwrap();
        let mj = rings::adjoint_space(RingKind::M, &joined, None).unwrap();
        let m1 = rings::adjoint_space(RingKind::M, &u1, None).unwrap();
        let m2 = rings::adjoint_space(RingKind::M, &u2, None).unwrap();
        let flat = |sp: &rings::OperatorPairSpace| -> Subspace {
            let w = 32;
            let mut m = Matrix::zero(u.field.clone(), sp.basis.len(), w);
            for (i, (x, y)) in sp.basis.iter().enumerate() {
                for (j, &v) in x.entries().iter().chain(y.entries()).enumerate() {
                    m.set(i, j, v);
                }
            }
            Subspace::from_spanning(&m)
        };
        assert_eq!(mj.dim(), flat(&m1).intersect(&flat(&m2)).dim());
    }
    // dense Lie degree-1 layer bound
    for dims in [
        vec![1usize, 1, 1],
        vec![1, 1, 1, 1],
        vec![2, 1, 2],
        vec![2, 2, 2],
    ] {
        let l = dims.len();
        let bound = dims[0] * dims[1]
            + dims[l - 2] * dims[l - 1]
            + dims.iter().map(|x| x * x).sum::<usize>();
        let (a, _) = gen::dense_lie(&dims, 3, None).unwrap();
        let one = vec![1u32];
        let (bimap, _) = a
            .restricted_bimap(std::slice::from_ref(&one), std::slice::from_ref(&one))
            .unwrap();
        let m = rings::adjoint_space(RingKind::M, &bimap, None).unwrap();
        assert!(m.dim() <= bound, "dense layer bound at {dims:?}");
    }
    report("C9", "ring identities", t0, Duration::from_secs(300));
}

#[test]
fn c10_idealizer_lemma() {
    let t0 = Instant::now();
    let mut rng = gen::rng_from_seed(1010);
    let mut bimaps = Vec::new();
    for i in 0..20u64 {
        let p = [2u64, 3][(i % 2) as usize];
        let f = gf(p);
        let dims = (
            rng.gen_range(1..4usize),
            rng.gen_range(1..4usize),
            rng.gen_range(2..4usize),
        );
        bimaps.push(gen::random_bimap(&f, dims, 50_000 + i));
    }
    let mut pairs = 0;
    'outer: loop {
        for u in &bimaps {
            let c = u.dims.2;
            let f = &u.field;
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let rows = rng.gen_range(0..=c);
                Subspace::from_spanning(&Matrix::from_fn(f.clone(), rows, c, |_, _| {
                    rng.gen_range(0..f.q())
                }))
            };
            let s = mk(&mut rng);
            let t = mk(&mut rng);
            let (ls, _) = labels::idealizers(u, &s).unwrap();
            let (lt, _) = labels::idealizers(u, &t).unwrap();
            let (lc, _) = labels::idealizers(u, &s.intersect(&t)).unwrap();
            let (lsum, _) = labels::idealizers(u, &s.sum(&t)).unwrap();
            assert_eq!(lc, ls.intersect(&lt), "lambda(S cap T)");
            assert!(lsum.contains_subspace(&ls.sum(&lt)), "lambda(S)+lambda(T)");
            if t.contains_subspace(&s) {
                assert!(lt.contains_subspace(&ls), "monotonicity");
            }
            pairs += 1;
            if pairs >= 200 {
                break 'outer;
            }
        }
    }
    report("C10", "idealizer lemma", t0, Duration::from_secs(120));
}

#[test]
fn c11_cli_determinism() {
    let t0 = Instant::now();
    let strip_ts = |s: &str| -> String {
        s.lines()
            .filter(|l| !l.contains("generated_at"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let tmp = std::env::temp_dir().join("galg-acceptance");
    std::fs::create_dir_all(&tmp).unwrap();
    let bimap_path = tmp.join("det-check.json");
    let bimap_str = bimap_path.to_str().unwrap();

    // generator output is byte-identical across runs
    for args in [
        vec![
            "gen", "random2", "--d", "4", "--p", "3", "--e", "2", "--seed", "7",
        ],
        vec!["gen", "dense", "--dims", "1,1,1", "--q", "3"],
        vec![
            "gen",
            "twisted-heisenberg",
            "--p",
            "3",
            "--k",
            "3",
            "--seed",
            "5",
        ],
    ] {
        let (o1, c1) = run_cli(&args);
        let (o2, c2) = run_cli(&args);
        assert_eq!(c1, 0);
        assert_eq!(c1, c2);
        assert_eq!(o1, o2, "generator output differs for {args:?}");
    }
    // commands with report envelopes: identical modulo the timestamp
    let (gen_out, _) = run_cli(&[
        "gen", "random2", "--d", "4", "--p", "3", "--e", "2", "--seed", "7",
    ]);
    std::fs::write(&bimap_path, &gen_out).unwrap();
    for args in [
        vec!["labels", bimap_str, "--lines", "--fingerprint"],
        vec!["rings", bimap_str],
        vec!["figure2"],
        vec![
            "experiment",
            "table2",
            "--d",
            "4",
            "--p",
            "3",
            "--e",
            "2",
            "--trials",
            "2",
            "--seed",
            "3",
        ],
        vec![
            "isotopism",
            bimap_str,
            bimap_str,
            "--strategy",
            "full",
            "--seed",
            "1",
        ],
    ] {
        let (o1, c1) = run_cli(&args);
        let (o2, c2) = run_cli(&args);
        assert_eq!(c1, c2, "exit codes differ for {args:?}");
        assert_eq!(
            strip_ts(&o1),
            strip_ts(&o2),
            "output differs (mod timestamp) for {args:?}"
        );
    }
    report("C11", "CLI determinism", t0, Duration::from_secs(300));
}

#[test]
fn cli_exit_codes() {
    // 0 = computed, 2 = empty coset, 1 = error
    let tmp = std::env::temp_dir().join("galg-acceptance");
    std::fs::create_dir_all(&tmp).unwrap();
    let h_path = tmp.join("heis.json");
    let z_path = tmp.join("zero.json");
    let f = gf(2);
    let h = gen::heisenberg(1, &f).unwrap();
    let z = Bimap::zero(f, (2, 2, 1));
    std::fs::write(
        &h_path,
        serde_json::to_string(&galg::io::bimap_to_json(&h)).unwrap(),
    )
    .unwrap();
    std::fs::write(
        &z_path,
        serde_json::to_string(&galg::io::bimap_to_json(&z)).unwrap(),
    )
    .unwrap();
    let hs = h_path.to_str().unwrap();
    let zs = z_path.to_str().unwrap();
    let (_, code) = run_cli(&["isotopism", hs, hs, "--strategy", "full"]);
    assert_eq!(code, 0);
    let (_, code) = run_cli(&["isotopism", hs, zs, "--strategy", "full"]);
    assert_eq!(code, 2);
    let (_, code) = run_cli(&["isotopism", hs, "/nonexistent.json"]);
    assert_eq!(code, 1);
    println!("ACCEPTANCE (exit codes): PASS");
}

#[test]
fn cli_file_roundtrip() {
    // every file the CLI writes, it can read back to an equal object
    let tmp = std::env::temp_dir().join("galg-acceptance");
    std::fs::create_dir_all(&tmp).unwrap();
    let p1 = tmp.join("rt-bimap.json");
    run_cli(&[
        "gen",
        "random2",
        "--d",
        "4",
        "--p",
        "5",
        "--e",
        "2",
        "--seed",
        "11",
        "--out",
        p1.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p1).unwrap()).unwrap();
    let u = galg::io::bimap_from_json(&v).unwrap();
    assert_eq!(u.dims, (4, 4, 2));
    let back = galg::io::bimap_to_json(&u);
    let u2 = galg::io::bimap_from_json(&back).unwrap();
    assert_eq!(u, u2);

    let p2 = tmp.join("rt-graded.json");
    run_cli(&[
        "gen",
        "dense",
        "--dims",
        "1,2,1",
        "--q",
        "3",
        "--out",
        p2.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p2).unwrap()).unwrap();
    let a = galg::io::graded_from_json(&v).unwrap();
    let back = galg::io::graded_to_json(&a);
    let a2 = galg::io::graded_from_json(&back).unwrap();
    assert_eq!(a, a2);
    println!("ACCEPTANCE (file round-trip): PASS");
}

#[test]
fn self_check_every_emitted_isotopism_verifies() {
    // spec invariant: everything the coset machinery emits passes
    // is_homotopism with invertible components
    let f = gf(3);
    for seed in 0..5u64 {
        let u = gen::random_bimap(&f, (2, 2, 2), 60_000 + seed);
        let coset = isotopism_coset(
            &u,
            &u,
            &CosetOptions {
                strategy: GStrategy::Full,
                lift: LiftOptions {
                    random_tries: 16,
                    seed,
                },
                ..CosetOptions::default()
            },
        )
        .unwrap();
        for hom in coset
            .aut0_generators
            .iter()
            .chain(coset.lifted.iter().map(|(_, h)| h))
        {
            assert!(is_homotopism(&u, &u, hom).unwrap());
            assert!(hom.is_invertible());
        }
        let _ = Homotopism::identity(&u);
    }
    println!("ACCEPTANCE (self-check): PASS");
}
