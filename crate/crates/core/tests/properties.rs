//! Cross-module property suites: ring identities on random bimaps, the
//! idealizer lemma, label transport under isotopisms, soundness of the
//! label-preserving group, and consistency of the hermitian machinery
//! against the brute-force oracles.

use galg::bimap::{is_homotopism, Bimap, Homotopism};
use galg::field::Field;
use galg::gen;
use galg::graded::{graded_isomorphism_coset, select_layer, GradedIsoOptions};
use galg::hermitian::{HermitianBimap, PseudoOptions};
use galg::isotopism::{isotopism_coset, CosetOptions, GStrategy, LiftOptions};
use galg::labels;
use galg::linalg::{Matrix, Subspace};
use galg::oracle;
use galg::rings::{self, pair_mul, RingKind};
use rand::Rng;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn random_dims(rng: &mut rand_chacha::ChaCha8Rng) -> (usize, usize, usize) {
    (
        rng.gen_range(1..4),
        rng.gen_range(1..4),
        rng.gen_range(1..4),
    )
}

#[test]
fn ring_identities_on_random_bimaps() {
    // every adjoint/centroid basis element satisfies its defining
    // identity; dim T is additive; M is multiplicatively closed
    let mut rng = gen::rng_from_seed(101);
    for trial in 0..100u64 {
        let p = [2u64, 3, 5][(trial % 3) as usize];
        let f = gf(p);
        let dims = random_dims(&mut rng);
        let u = gen::random_bimap(&f, dims, 9000 + trial);
        let (dl, dm, dr, dt, _dc) = rings::tri_ring_dims(&u).unwrap();
        assert_eq!(dt, dl + dm + dr);
        let m = rings::adjoint_space(RingKind::M, &u, None).unwrap();
        for (fm, gm) in &m.basis {
            for s in &u.slices {
                assert_eq!(fm.mul(s).unwrap(), s.mul(&gm.transpose()).unwrap());
            }
        }
        let l = rings::adjoint_space(RingKind::L, &u, None).unwrap();
        for (pm, qm) in &l.basis {
            for (k, s) in u.slices.iter().enumerate() {
                let lhs = pm.mul(s).unwrap();
                let mut rhs = Matrix::zero(f.clone(), dims.0, dims.1);
                for (li, sl) in u.slices.iter().enumerate() {
                    rhs = rhs.add(&sl.scalar_mul(qm.get(li, k))).unwrap();
                }
                assert_eq!(lhs, rhs);
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
                assert_eq!(left, mid);
                assert_eq!(mid, right);
            }
        }
        // closure of M under multiplication (sampled)
        if m.dim() >= 2 {
            let prod = pair_mul(RingKind::M, &m.basis[0], &m.basis[1]).unwrap();
            assert!(m.contains(&prod));
        }
    }
}

#[test]
fn intersect_adjoint_equality_on_slice_splits() {
    // M(U1 cap U2) = M(U1) cap M(U2) on random slice splits of D and E
    for (u, seed) in [(gen::bimap_d(), 1u64), (gen::bimap_e(), 2u64)] {
        let mut rng = gen::rng_from_seed(seed);
        for _ in 0..4 {
            let parts = u.split_slices();
            // random bipartition of the three slices
            let pick = rng.gen_range(1..3usize);
            let u1 = Bimap::intersect(&parts[..pick]).unwrap();
            let u2 = Bimap::intersect(&parts[pick..]).unwrap();
            let joined = Bimap::intersect(&[u1.clone(), u2.clone()]).unwrap();
            let mj = rings::adjoint_space(RingKind::M, &joined, None).unwrap();
            let m1 = rings::adjoint_space(RingKind::M, &u1, None).unwrap();
            let m2 = rings::adjoint_space(RingKind::M, &u2, None).unwrap();
            // dimension of the intersection of m1 and m2 as subspaces
            let flat = |sp: &rings::OperatorPairSpace| -> Subspace {
                let w = 16 + 16;
                let mut m = Matrix::zero(u.field.clone(), sp.basis.len(), w);
                for (i, (a, b)) in sp.basis.iter().enumerate() {
                    for (j, &v) in a.entries().iter().chain(b.entries()).enumerate() {
                        m.set(i, j, v);
                    }
                }
                Subspace::from_spanning(&m)
            };
            let inter = flat(&m1).intersect(&flat(&m2));
            assert_eq!(mj.dim(), inter.dim());
            for pair in &mj.basis {
                assert!(m1.contains(pair) && m2.contains(pair));
            }
        }
    }
}

#[test]
fn dense_lie_adjoint_dim_bound() {
    // dim M(L_1 x L_1 -> L_2) <= e1 e2 + e_{l-1} e_l + sum e_i^2 with the
    // e_i the flag gaps. The bound belongs to the degree-1 layer (the
    // tridiagonal structure-constant panel); deeper layers acquire
    // Hom-padding freedom from annihilating blocks and can exceed it.
    for dims in [
        vec![1usize, 1, 1],
        vec![1, 1, 1, 1],
        vec![2, 1, 2],
        vec![1, 2, 1, 1],
        vec![1, 1, 1, 1, 1, 1],
        vec![2, 2, 2],
    ] {
        let bound: usize = {
            let e = &dims;
            let l = e.len();
            e[0] * e[1] + e[l - 2] * e[l - 1] + e.iter().map(|x| x * x).sum::<usize>()
        };
        let (a, _) = gen::dense_lie(&dims, 3, None).unwrap();
        let one = vec![1u32];
        let (bimap, targets) = a
            .restricted_bimap(std::slice::from_ref(&one), std::slice::from_ref(&one))
            .unwrap();
        assert!(!targets.is_empty());
        let m = rings::adjoint_space(RingKind::M, &bimap, None).unwrap();
        assert!(
            m.dim() <= bound,
            "dims {dims:?}: dim M = {} > bound {bound}",
            m.dim()
        );
    }
}

#[test]
fn idealizer_lemma_200_pairs() {
    let mut rng = gen::rng_from_seed(555);
    let mut bimaps = Vec::new();
    for i in 0..20u64 {
        let p = [2u64, 3][(i % 2) as usize];
        let f = gf(p);
        let dims = (
            rng.gen_range(1..4usize),
            rng.gen_range(1..4usize),
            rng.gen_range(2..4usize),
        );
        bimaps.push(gen::random_bimap(&f, dims, 7000 + i));
    }
    let mut pairs = 0;
    'outer: for u in &bimaps {
        let c = u.dims.2;
        let f = &u.field;
        for _ in 0..10 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let rows = rng.gen_range(0..=c);
                Subspace::from_spanning(&Matrix::from_fn(f.clone(), rows, c, |_, _| {
                    rng.gen_range(0..f.q())
                }))
            };
            let s = mk(&mut rng);
            let t = mk(&mut rng);
            let (ls, rs) = labels::idealizers(u, &s).unwrap();
            let (lt, rt) = labels::idealizers(u, &t).unwrap();
            let (lc, rc) = labels::idealizers(u, &s.intersect(&t)).unwrap();
            let (lsum, rsum) = labels::idealizers(u, &s.sum(&t)).unwrap();
            assert_eq!(lc, ls.intersect(&lt));
            assert_eq!(rc, rs.intersect(&rt));
            assert!(lsum.contains_subspace(&ls.sum(&lt)));
            assert!(rsum.contains_subspace(&rs.sum(&rt)));
            if t.contains_subspace(&s) {
                assert!(lt.contains_subspace(&ls));
            }
            pairs += 1;
            if pairs >= 200 {
                break 'outer;
            }
        }
    }
    assert!(pairs >= 200);
}

#[test]
fn label_transport_under_random_isotopisms() {
    // applying an isotopism (h2, h1, h0) to U transports point labels
    // along the dual action of h0^-1; histograms and incidence counts
    // are preserved
    let mut rng = gen::rng_from_seed(31337);
    for seed in 0..6u64 {
        let f = gf(3);
        let u = gen::random_bimap(&f, (3, 3, 2), button(seed));
        let h2 = gen::random_invertible(&f, 3, &mut rng);
        let h1 = gen::random_invertible(&f, 3, &mut rng);
        let h0 = gen::random_invertible(&f, 2, &mut rng);
        // build V so that (h2, h1, h0): V -> U is an isotopism: the
        // homotopism identity demands sum_l h0[l][k] S^V_l = h2 S^U_k h1^T,
        // so V is the h2/h1-transported system twisted back by h0^{-1}
        let transported: Vec<Matrix> = u
            .slices
            .iter()
            .map(|s| h2.mul(s).unwrap().mul(&h1.transpose()).unwrap())
            .collect();
        let t_bimap = Bimap::new(f.clone(), (3, 3, 2), transported).unwrap();
        let v = t_bimap.twist_codomain(&h0.inverse().unwrap()).unwrap();
        let hom = Homotopism {
            f2: h2.clone(),
            f1: h1.clone(),
            f0: h0.clone(),
        };
        assert!(is_homotopism(&v, &u, &hom).unwrap());
        let labels_u = labels::vertex_labels(&u);
        let labels_v = labels::vertex_labels(&v);
        // transport: V-point pi maps to U-point pi (h0^-1)^T
        let tr = h0.inverse().unwrap().transpose();
        for (pv, &rank) in &labels_v {
            let row = Matrix::new(f.clone(), 1, 2, pv.coords.clone());
            let img = row.mul(&tr).unwrap();
            let pu = labels::ProjectivePoint::normalize(&f, img.row(0)).unwrap();
            assert_eq!(labels_u[&pu], rank, "seed {seed}");
        }
        assert_eq!(
            labels::point_label_histogram(&labels_u),
            labels::point_label_histogram(&labels_v)
        );
        let geo_u = labels::LabeledGeometry::of(&u);
        let geo_v = labels::LabeledGeometry::of(&v);
        assert!(geo_u.histograms_match(&geo_v));
    }
}

fn button(seed: u64) -> u64 {
    gen::split_seed(0xb0_77_0e, seed)
}

#[test]
fn omega_soundness_against_oracle() {
    // the codomain component of every oracle-found autotopism preserves
    // the labels
    for seed in 0..6u64 {
        let p = [2u64, 3][(seed % 2) as usize];
        let f = gf(p);
        let u = gen::random_bimap(&f, (2, 2, 2), 400 + seed);
        let geo = labels::LabeledGeometry::of(&u);
        let omega = labels::label_transporter_set(&f, &geo, &geo, 1 << 30).unwrap();
        let autos = oracle::brute_isotopisms(&u, &u, oracle::ORACLE_BUDGET).unwrap();
        for a in autos {
            assert!(
                omega.contains(&a.f0),
                "autotopism f0 outside Omega at seed {seed}"
            );
        }
    }
}

#[test]
fn pseudo_isometry_order_vs_autotopism_order() {
    // PsiIsom embeds into the autotopism group: its order divides and
    // never exceeds the isotopism-coset order; all lifts verify
    for seed in 0..4u64 {
        for p in [2u64, 3] {
            let b = gen::random_alternating_bimap(2, p, 2, 600 + seed).unwrap();
            let h = HermitianBimap::detect(b.clone()).unwrap();
            let pc = galg::hermitian::pseudo_isometry_coset(
                &h,
                &h,
                &PseudoOptions {
                    strategy: GStrategy::Full,
                    ..PseudoOptions::default()
                },
            )
            .unwrap();
            let ic = isotopism_coset(
                &b,
                &b,
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
            let psi = pc.order.unwrap();
            let aut = ic.order.unwrap();
            assert!(psi <= aut, "p={p} seed={seed}: {psi} > {aut}");
            let brute = oracle::brute_pseudo_isometries(&b, &b, oracle::ORACLE_BUDGET).unwrap();
            assert_eq!(psi, brute.len() as u128);
        }
    }
}

#[test]
fn regrade_preserves_isomorphism_outcome() {
    // the N -> N_l regrade does not change coset emptiness
    let (a, _) = gen::dense_lie(&[1, 1, 1], 2, None).unwrap();
    let (b, _) = gen::scramble_graded(&a, 77).unwrap();
    let (c, _) = gen::dense_lie(&[1, 1, 1, 1], 2, None).unwrap();
    let opts = GradedIsoOptions::default();
    for (x, y) in [(&a, &b), (&a, &c)] {
        let before = graded_isomorphism_coset(x, y, &opts).unwrap().order;
        let rx = galg::graded::regrade(x).unwrap();
        let ry = galg::graded::regrade(y).unwrap();
        let after = graded_isomorphism_coset(&rx, &ry, &opts).unwrap().order;
        assert_eq!(before == 0, after == 0);
        assert_eq!(before, after);
    }
}

#[test]
fn select_layer_interior_on_long_dense_lie() {
    // on the six-block dense Lie algebra the chosen layer sits strictly
    // inside the grading, away from the first layer
    let (a, _) = gen::dense_lie(&[1, 1, 1, 1, 1, 1], 3, None).unwrap();
    let choice = select_layer(&a, 1 << 20).unwrap();
    let s = choice.degrees[0][0];
    assert!(
        s > 1 && s < 5,
        "expected an interior layer, got s = {s}; scores {:?}",
        choice.all_scores
    );
}

#[test]
fn graded_coset_on_scrambled_dense_lie() {
    // dense_lie conjugated by a random graded basis change stays
    // isomorphic; the coset finds it and every map verifies
    for seed in 0..3u64 {
        let (a, _) = gen::dense_lie(&[1, 1, 1, 1], 3, None).unwrap();
        let (b, _) = gen::scramble_graded(&a, 800 + seed).unwrap();
        let coset = graded_isomorphism_coset(&a, &b, &GradedIsoOptions::default()).unwrap();
        assert!(coset.representative.is_some(), "seed {seed}");
        for g in &coset.elements {
            assert!(galg::graded::is_graded_homomorphism(&a, &b, g).unwrap());
            assert!(g.is_invertible());
        }
    }
}

#[test]
fn twisted_heisenberg_projection_label_shapes() {
    // the (3,5,e) twisted Heisenberg projections have the expected
    // projective counts
    let th = gen::twisted_heisenberg(3, 5, 1, 0).unwrap();
    assert_eq!(th.bimap.dims, (10, 10, 5));
    let w = gen::project_random(&th.bimap, 3, 1).unwrap();
    assert_eq!(w.dims, (10, 10, 3));
    let pts = labels::projective_points(&w.field, 3);
    assert_eq!(pts.len(), 13);
    let lines = labels::projective_lines(&w.field, 3);
    assert_eq!(lines.len(), 13);
}
