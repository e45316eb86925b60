//! Bounded search for quasi-canonical tilting candidates.
//!
//! Enumerates the normalized classes of a degree box, prunes pairs failing
//! partial tilting, extends to cliques of the expected summand count, and
//! runs the hereditary check on each clique. Clique checks are independent
//! pure computations and run on the worker pool; output order is canonical
//! regardless of worker count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_items, Workers};
use crate::tilting::{
    expected_rank, Checker, EulerReport, HereditaryReport, HereditaryVerdict, PartialVerdict,
    TiltingCandidate,
};
use crate::wps::LClass;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBox {
    pub pic_min: Vec<i64>,
    pub pic_max: Vec<i64>,
}

pub const ENUMERATION_CAP: usize = 10_000;

#[derive(Debug, Clone)]
pub struct SearchParams {
    pub degree_box: DegreeBox,
    pub max_summands: usize,
    pub require_two_hereditary: bool,
    pub workers: Workers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub candidate: TiltingCandidate,
    pub hereditary: HereditaryReport,
    pub euler: EulerReport,
    /// Generation status of search output: necessary conditions only.
    pub generation: String,
}

/// All normalized classes in the box (every fractional exponent combination
/// over the integral Picard ranges).
pub fn enumerate_box(checker: &Checker, degree_box: &DegreeBox) -> Result<Vec<LClass>> {
    let w = checker.surface;
    let rank = w.base.rank();
    if degree_box.pic_min.len() != rank || degree_box.pic_max.len() != rank {
        return Err(Error::Input("degree box has the wrong rank".into()));
    }
    if degree_box
        .pic_min
        .iter()
        .zip(&degree_box.pic_max)
        .any(|(lo, hi)| lo > hi)
    {
        return Err(Error::Input("empty degree box".into()));
    }
    let mut count: usize = 1;
    for (lo, hi) in degree_box.pic_min.iter().zip(&degree_box.pic_max) {
        count = count.saturating_mul((hi - lo + 1) as usize);
    }
    for d in &w.weighted {
        count = count.saturating_mul(d.weight as usize);
    }
    if count > ENUMERATION_CAP {
        return Err(Error::BoxTooLarge(count, ENUMERATION_CAP));
    }
    let mut out = Vec::with_capacity(count);
    let mut pic = degree_box.pic_min.clone();
    loop {
        let mut frac = vec![0u32; w.r()];
        loop {
            out.push(LClass {
                pic: crate::picard::DivClass(pic.clone()),
                frac: frac.clone(),
            });
            // increment fractional exponents
            let mut i = 0;
            loop {
                if i == frac.len() {
                    break;
                }
                frac[i] += 1;
                if frac[i] < w.weighted[i].weight {
                    break;
                }
                frac[i] = 0;
                i += 1;
            }
            if i == frac.len() {
                break;
            }
        }
        // increment pic coordinates
        let mut i = 0;
        loop {
            if i == rank {
                break;
            }
            pic[i] += 1;
            if pic[i] <= degree_box.pic_max[i] {
                break;
            }
            pic[i] = degree_box.pic_min[i];
            i += 1;
        }
        if i == rank {
            break;
        }
    }
    out.sort();
    Ok(out)
}

pub fn search(checker: &Checker, params: &SearchParams) -> Result<Vec<SearchHit>> {
    let w = checker.surface;
    let n = expected_rank(w).ok_or_else(|| {
        Error::Input("search needs rational weighted divisors for the summand count".into())
    })? as usize;
    if params.max_summands < n {
        return Err(Error::Input(format!(
            "max_summands {} below the expected summand count {n}",
            params.max_summands
        )));
    }
    let classes = enumerate_box(checker, &params.degree_box)?;
    if classes.len() < n {
        return Ok(Vec::new());
    }
    // pairwise partial-tilting compatibility
    let k = classes.len();
    let rows: Vec<Result<Vec<bool>>> = map_items(
        params.workers,
        (0..k).collect::<Vec<_>>(),
        |i| -> Result<Vec<bool>> {
            let mut row = vec![false; k];
            let a = crate::tilting::Summand::Line(classes[i].clone());
            for (j, row_j) in row.iter_mut().enumerate() {
                let b = crate::tilting::Summand::Line(classes[j].clone());
                let fwd = checker.ext_pair(&a, &b, 0)?;
                *row_j = fwd.h1 == 0 && fwd.h2 == 0;
            }
            Ok(row)
        },
    );
    let mut compat = Vec::with_capacity(k);
    for r in rows {
        compat.push(r?);
    }
    let ok = |i: usize, j: usize| compat[i][j] && compat[j][i];

    // cliques of size n in canonical order
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn extend(
        start: usize,
        n: usize,
        k: usize,
        ok: &dyn Fn(usize, usize) -> bool,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let need = n - cur.len();
        for v in start..k {
            if k - v < need {
                break;
            }
            if cur.iter().all(|&u| ok(u, v)) {
                cur.push(v);
                extend(v + 1, n, k, ok, cur, out);
                cur.pop();
            }
        }
    }
    extend(0, n, k, &ok, &mut cur, &mut cliques);

    let checked: Vec<Result<Option<SearchHit>>> =
        map_items(params.workers, cliques, |members| -> Result<Option<SearchHit>> {
            let t = TiltingCandidate::lines(
                members.iter().map(|&i| classes[i].clone()).collect(),
            );
            debug_assert_eq!(checker.partial_tilting(&t)?, PartialVerdict::Pass);
            let hereditary = checker.two_hereditary(&t)?;
            if params.require_two_hereditary
                && !matches!(hereditary.verdict, HereditaryVerdict::Pass { .. })
            {
                return Ok(None);
            }
            let euler = checker.euler_matrix(&t)?;
            Ok(Some(SearchHit {
                candidate: t,
                hereditary,
                euler,
                generation: "necessary conditions only (rank, unimodularity)".into(),
            }))
        });
    let mut hits = Vec::new();
    for c in checked {
        if let Some(hit) = c? {
            hits.push(hit);
        }
    }
    Ok(hits)
}
