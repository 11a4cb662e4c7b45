//! Experiment drivers: the twisted-Heisenberg and random-alternating
//! label/lift tables, and the labeled-geometry report for the worked
//! bimaps D and E.

use crate::report;
use anyhow::anyhow;
use galg::bimap::Bimap;
use galg::gen;
use galg::hermitian::{HermitianBimap, PseudoOptions};
use galg::isotopism::GStrategy;
use galg::labels::{self, line_label_classes, point_label_histogram, LabeledGeometry};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

fn gl_order(p: u128, e: u32) -> u128 {
    let q = p.pow(e);
    let mut acc = 1u128;
    let mut pi = 1u128;
    for _ in 0..e {
        acc *= q - pi;
        pi *= p;
    }
    acc
}

fn gaussian_lines(p: u128, e: u32) -> u128 {
    // number of 2-dimensional subspaces of GF(p)^e
    ((p.pow(e) - 1) * (p.pow(e - 1) - 1)) / ((p * p - 1) * (p - 1))
}

fn point_count(p: u128, e: u32) -> u128 {
    (p.pow(e) - 1) / (p - 1)
}

struct Trial {
    seed: u64,
    omega: u128,
    psi: u128,
    omega_projective: u128,
    psi_projective: u128,
}

fn run_trials(
    mk_bimap: impl Fn(u64) -> anyhow::Result<Bimap>,
    trials: usize,
    master_seed: u64,
) -> anyhow::Result<Vec<Trial>> {
    let mut out = Vec::with_capacity(trials);
    for i in 0..trials {
        let seed = gen::split_seed(master_seed, i as u64);
        let w = mk_bimap(seed)?;
        let h = HermitianBimap::detect(w).map_err(|e| anyhow!("{e}"))?;
        let mut opts = PseudoOptions {
            strategy: GStrategy::Labels,
            with_isometry_group: false,
            ..PseudoOptions::default()
        };
        opts.isometry.seed = seed;
        let coset =
            galg::hermitian::pseudo_isometry_coset(&h, &h, &opts).map_err(|e| anyhow!("{e}"))?;
        out.push(Trial {
            seed,
            omega: coset.candidate_count,
            psi: coset.lift_count,
            omega_projective: coset.candidate_projective_count,
            psi_projective: coset.lift_projective_count,
        });
    }
    Ok(out)
}

fn modal_pair(pairs: impl Iterator<Item = (u128, u128)>) -> (u128, u128) {
    let mut counts: BTreeMap<(u128, u128), usize> = BTreeMap::new();
    for p in pairs {
        *counts.entry(p).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(pair, _)| pair)
        .unwrap_or((0, 0))
}

fn table_report(
    kind: &str,
    params: Value,
    p: u64,
    e: usize,
    trials: Vec<Trial>,
    master_seed: u64,
) -> Value {
    let (momega, mpsi) = modal_pair(trials.iter().map(|t| (t.omega, t.psi)));
    let (momega_p, mpsi_p) = modal_pair(
        trials
            .iter()
            .map(|t| (t.omega_projective, t.psi_projective)),
    );
    let records: Vec<Value> = trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            json!({
                "trial": i,
                "seed": t.seed,
                "omega": t.omega.to_string(),
                "psi": t.psi.to_string(),
                "omega_projective": t.omega_projective.to_string(),
                "psi_projective": t.psi_projective.to_string(),
            })
        })
        .collect();
    report::envelope(
        kind,
        json!({
            "parameters": params,
            "n_points": point_count(p as u128, e as u32).to_string(),
            "n_lines": gaussian_lines(p as u128, e as u32).to_string(),
            "gl_order": gl_order(p as u128, e as u32).to_string(),
            "modal_omega": momega.to_string(),
            "modal_psi": mpsi.to_string(),
            "modal_omega_projective": momega_p.to_string(),
            "modal_psi_projective": mpsi_p.to_string(),
            "trials": records,
        }),
        Some(master_seed),
    )
}

pub fn table1(p: u64, k: u32, e: usize, trials: usize, seed: u64) -> anyhow::Result<Value> {
    let trials = run_trials(
        |s| {
            let th = gen::twisted_heisenberg(p, k, 1, s).map_err(|e| anyhow!("{e}"))?;
            gen::project_random(&th.bimap, e, gen::split_seed(s, 1)).map_err(|e| anyhow!("{e}"))
        },
        trials,
        seed,
    )?;
    Ok(table_report(
        "experiment-table1",
        json!({"p": p, "k": k, "e": e}),
        p,
        e,
        trials,
        seed,
    ))
}

pub fn table2(d: usize, p: u64, e: usize, trials: usize, seed: u64) -> anyhow::Result<Value> {
    let trials = run_trials(
        |s| gen::random_alternating_bimap(d, p, e, s).map_err(|e| anyhow!("{e}")),
        trials,
        seed,
    )?;
    Ok(table_report(
        "experiment-table2",
        json!({"d": d, "p": p, "e": e}),
        p,
        e,
        trials,
        seed,
    ))
}

pub fn geometry_report(u: &Bimap, lines: bool, fingerprint: bool) -> anyhow::Result<Value> {
    let point_labels = labels::vertex_labels(u);
    let points: Vec<Value> = point_labels
        .iter()
        .map(|(p, r)| json!({"point": p.coords, "rank": r}))
        .collect();
    let hist: Vec<Value> = point_label_histogram(&point_labels)
        .into_iter()
        .map(|(r, n)| json!({"rank": r, "count": n}))
        .collect();
    let mut body = Map::new();
    body.insert("points".into(), Value::Array(points));
    body.insert("point_histogram".into(), Value::Array(hist));
    if lines {
        let line_map = labels::line_labels(u, &point_labels);
        let entries: Vec<Value> = line_map
            .iter()
            .map(|(key, label)| {
                json!({
                    "line_basis": key,
                    "rank_multiset": label.rank_multiset,
                    "det_pattern": label.det_pattern,
                })
            })
            .collect();
        body.insert("lines".into(), Value::Array(entries));
        body.insert(
            "line_label_classes".into(),
            json!(line_label_classes(&line_map)),
        );
    }
    if fingerprint {
        let fp = labels::fingerprint(u, 2, 1 << 24).map_err(|e| anyhow!("{e}"))?;
        body.insert(
            "fingerprint".into(),
            json!({
                "point_hist": fp.point_hist
                    .iter()
                    .map(|((l, r), n)| json!({"lambda_dim": l, "rho_dim": r, "count": n}))
                    .collect::<Vec<_>>(),
                "pair_hist": fp.pair_hist
                    .iter()
                    .map(|(d, n)| json!({"intersection_dim": d, "count": n}))
                    .collect::<Vec<_>>(),
            }),
        );
    }
    Ok(Value::Object(body))
}

/// The labeled geometries of D and E with the machine-checkable facts of
/// the worked example embedded.
pub fn figure2() -> anyhow::Result<Value> {
    let d = gen::bimap_d();
    let e = gen::bimap_e();
    let geo_d = LabeledGeometry::of(&d);
    let geo_e = LabeledGeometry::of(&e);

    let rank2_d: Vec<Vec<u64>> = geo_d
        .point_labels
        .iter()
        .filter(|(_, &r)| r == 2)
        .map(|(p, _)| p.coords.clone())
        .collect();
    let rank4_d = geo_d.point_labels.values().filter(|&&r| r == 4).count();
    // all rank-2 points of D on one common line?
    let collinear = if rank2_d.len() >= 2 {
        let f = d.field.clone();
        let mut m = galg::linalg::Matrix::zero(f, rank2_d.len(), 3);
        for (i, p) in rank2_d.iter().enumerate() {
            for (j, &v) in p.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m.rank() <= 2
    } else {
        false
    };

    let mut rank2_e: Vec<Vec<u64>> = geo_e
        .point_labels
        .iter()
        .filter(|(_, &r)| r == 2)
        .map(|(p, _)| p.coords.clone())
        .collect();
    rank2_e.sort();
    let mut expected_e = vec![
        vec![0u64, 0, 1],
        vec![0, 1, 0],
        vec![1, 1, 2],
        vec![1, 2, 1],
    ];
    expected_e.sort();
    // no three rank-2 points of E collinear
    let mut e_no_common_line = true;
    for line in labels::projective_lines(&e.field, 3) {
        let on = rank2_e.iter().filter(|p| line.contains(p)).count();
        if on >= 3 {
            e_no_common_line = false;
        }
    }

    let d_classes = line_label_classes(&geo_d.line_labels);
    let e_classes = line_label_classes(&geo_e.line_labels);

    let checks = json!({
        "d_rank2_count": rank2_d.len(),
        "d_rank4_count": rank4_d,
        "d_rank2_collinear": collinear,
        "e_rank2_points": rank2_e,
        "e_rank2_expected": expected_e,
        "e_rank2_matches": rank2_e == expected_e,
        "e_no_common_line": e_no_common_line,
        "d_line_label_classes": d_classes,
        "e_line_label_classes": e_classes,
    });
    Ok(report::envelope(
        "figure2",
        json!({
            "checks": checks,
            "d": geometry_report(&d, true, false)?,
            "e": geometry_report(&e, true, false)?,
        }),
        None,
    ))
}
