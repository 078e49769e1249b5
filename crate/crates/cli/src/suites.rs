use num_traits::Zero;
use persym::census::{census, max_rank, RankDistribution};
use persym::closedform::{
    closedform_distribution, gamma_general, gamma_k10, general_table, k10_table,
};
use persym::expsum::{f_k_bruteforce, tails_from_tuple};
use persym::fitting::{fit_gamma7, fit_k10_high_ranks};
use persym::identities::{
    adjudicate_transcriptions, pow2_string, r1_closed, r_qnk, verify_moments, Source,
};
use persym::persym::tuple_from_index;
use persym::poly::{rat_string, RatPoly};
use persym::polysys::count_solutions_marginalized;
use persym::{Error, Result};
use serde_json::{json, Value};

use crate::output::{Check, Report};

pub const EXPSUM_LOG2_LIMIT: usize = 30;

pub fn distribution(
    n: usize,
    k: usize,
    source: Source,
    workers: usize,
) -> Result<RankDistribution> {
    match source {
        Source::Census => census(n, k, workers),
        Source::ClosedForm => closedform_distribution(n, k),
    }
}

pub fn moments(ns: &[usize], k: usize, source: Source) -> Result<Report> {
    let mut checks = Vec::new();
    for &n in ns {
        let r = verify_moments(n, k, source)?;
        for c in r.checks {
            checks.push(Check {
                name: format!("n={n} k={k} {}", c.name),
                lhs: rat_string(&c.lhs),
                rhs: rat_string(&c.rhs),
                pass: c.pass,
            });
        }
    }
    Ok(Report {
        suite: "moments",
        checks,
        extra: json!({ "source": source.name() }),
    })
}

/// Closed-form value for rank `i` where one is asserted.
fn formula(i: usize, n: usize, k: usize) -> Option<num_bigint::BigInt> {
    if i > max_rank(n, k) {
        return Some(Zero::zero());
    }
    if k == 10 {
        return Some(gamma_k10(i, n));
    }
    general_table()
        .get(i)
        .filter(|row| k >= row.min_k)
        .and_then(|_| gamma_general(i, n, k).ok())
}

pub fn census_vs_formula(ns: &[usize], k: usize, workers: usize) -> Result<Report> {
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for &n in ns {
        let d = census(n, k, workers)?;
        for i in 0..=max_rank(n, k) {
            match formula(i, n, k) {
                Some(f) => checks.push(Check::new(format!("n={n} k={k} rank {i}"), d.get(i), f)),
                None => skipped.push(json!({ "n": n, "rank": i, "census": d.get(i).to_string() })),
            }
        }
    }
    Ok(Report {
        suite: "census-vs-formula",
        checks,
        extra: json!({ "without_formula": skipped }),
    })
}

pub fn expsum(n: usize, k: usize) -> Result<Report> {
    let log2_cost = n * (k + 1) + k + 2 * n;
    if log2_cost > EXPSUM_LOG2_LIMIT {
        return Err(Error::Budget {
            what: "expsum suite",
            log2_cost,
            limit: EXPSUM_LOG2_LIMIT,
        });
    }
    let mut mismatches = Vec::new();
    let mut sum = num_bigint::BigInt::zero();
    let tuples = 1u64 << (n * (k + 1));
    for idx in 0..tuples {
        let t = tuple_from_index(&idx.into(), n, k)?;
        let f = f_k_bruteforce(&tails_from_tuple(&t), k)?;
        let rank = t.matrix().rank();
        if f != 1i64 << (2 * n + k - rank) {
            mismatches.push(json!({ "index": idx, "f": f, "rank": rank }));
        }
        sum += f;
    }
    let checks = vec![
        Check::new(
            format!("n={n} k={k} f_k = 2^(2n+k-rank) mismatches"),
            mismatches.len(),
            0,
        ),
        Check::new(
            format!("n={n} k={k} tuple sum of f_k over 2^(n(k+1))"),
            sum >> (n * (k + 1)),
            r1_closed(n, k),
        ),
    ];
    Ok(Report {
        suite: "expsum",
        checks,
        extra: json!({
            "tuples": tuples,
            "terms_per_tuple": 1u64 << (k + 2 * n),
            "mismatches": mismatches,
        }),
    })
}

pub fn rq(q: usize, ns: &[usize], k: usize, source: Source, workers: usize) -> Result<Report> {
    let mut checks = Vec::new();
    for &n in ns {
        let from_gamma = r_qnk(q, n, k, &distribution(n, k, source, workers)?)?;
        let direct = count_solutions_marginalized(q, n, k)?;
        checks.push(Check::new(
            format!("R q={q} n={n} k={k}"),
            pow2_string(&from_gamma),
            pow2_string(&direct.into()),
        ));
    }
    Ok(Report {
        suite: "rq",
        checks,
        extra: json!({ "source": source.name(), "oracle": "marginalized solution count" }),
    })
}

fn coeff_list(p: &RatPoly) -> Value {
    p.coeffs().iter().map(rat_string).collect()
}

pub fn fit() -> Result<Report> {
    let g7 = fit_gamma7()?;
    let k10 = fit_k10_high_ranks()?;
    let table7 = &general_table().get(7).expect("rank-7 row").poly;
    let mut checks = vec![Check::new(
        "rank-7 general row matches table",
        g7.poly == *table7,
        true,
    )];
    for (slot, row) in k10.rows.iter().enumerate() {
        checks.push(Check::new(
            format!("width-10 rank {}", 8 + slot),
            row.display("Y"),
            k10_table()[8 + slot].display("Y"),
        ));
    }
    checks.push(Check::new(
        "width-10 system consistent",
        k10.consistent,
        true,
    ));
    let names = ["a", "b", "c", "d", "e", "f", "g"];
    let coeffs: serde_json::Map<String, Value> = names
        .iter()
        .zip(&g7.coeffs)
        .map(|(name, p)| (name.to_string(), coeff_list(p)))
        .collect();
    Ok(Report {
        suite: "fit",
        checks,
        extra: json!({
            "rank7": {
                "variable": "X = 2^k, coefficients ascending",
                "alpha": coeff_list(&g7.alpha),
                "beta": coeff_list(&g7.beta),
                "gamma": coeff_list(&g7.gamma),
                "y_coefficients": coeffs,
            },
            "width10": {
                "variable": "Y = 2^n, coefficients ascending",
                "equations": k10.equations,
                "unknowns": k10.unknowns,
                "consistent": k10.consistent,
                "rows": {
                    "8": coeff_list(&k10.rows[0]),
                    "9": coeff_list(&k10.rows[1]),
                    "10": coeff_list(&k10.rows[2]),
                },
            },
        }),
    })
}

pub fn typos() -> Result<Report> {
    let rep = adjudicate_transcriptions(&[670888385, 67088385], &[5117310, 51117310])?;
    let consistent = |cs: &[persym::identities::TranscriptionCandidate]| {
        cs.iter()
            .filter(|c| c.consistent)
            .map(|c| c.literal.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let candidates = |cs: &[persym::identities::TranscriptionCandidate]| -> Value {
        cs.iter()
            .map(|c| {
                json!({
                    "literal": c.literal,
                    "consistent": c.consistent,
                    "values": c.values.iter().map(pow2_string).collect::<Vec<_>>(),
                })
            })
            .collect()
    };
    let checks = vec![
        Check::new(
            "R_4 expansion Y^2 coefficient / 2^8",
            consistent(&rep.y2_candidates),
            rat_string(&rep.recomputed_y2),
        ),
        Check::new(
            "width-10 rank-7 Y^5 coefficient",
            consistent(&rep.rank7_y5_candidates),
            rat_string(&rep.recomputed_rank7_y5),
        ),
    ];
    Ok(Report {
        suite: "typos",
        checks,
        extra: json!({
            "targets": rep.targets.iter().map(pow2_string).collect::<Vec<_>>(),
            "y2_candidates": candidates(&rep.y2_candidates),
            "rank7_y5_candidates": candidates(&rep.rank7_y5_candidates),
        }),
    })
}
