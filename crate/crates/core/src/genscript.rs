//! Certificate checker for derived-category generation scripts.
//!
//! A script is an ordered list of moves replayed over formal objects: line
//! classes, torsion sheaves on weighted strata tagged by exponents and
//! restriction degree, and degree-tagged sheaves on unweighted curves. The
//! checker verifies each move only references available objects and that
//! the full generator checklist (base generators for the empty stratum, a
//! consecutive-degree pair per weighted-curve exponent, every crossing-point
//! exponent pair) is reached. It certifies bookkeeping, not exactness.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{DivClass, SurfaceKind};
use crate::presented::{PresentationSide, PresentedBundle};
use crate::tilting::{Summand, TiltingCandidate};
use crate::wps::{LClass, WeightedSurface};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    /// Instantiate the Koszul complex of the named weighted strata, twisted.
    Koszul { strata: Vec<usize>, twist: LClass },
    /// Cokernel of the unit inclusion O(target - D_i/p_i) -> O(target).
    UnitTwistCokernel { target: LClass, index: usize },
    /// Kernel of the restriction O(source) -> O(source)|_curve.
    RestrictionKernel { source: LClass, curve: DivClass },
    /// Cokernel of a nonzero map O(from) -> O(to) along an inventory curve.
    Cone { from: LClass, to: LClass },
    /// Reference moves; closed under summands and shifts.
    Summand { of: usize },
    Shift { of: usize },
    /// Close the defining sequence of a presented summand, reaching its end
    /// line bundle.
    ClosePresentation { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationScript {
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum FormalObj {
    Line(LClass),
    /// Torsion sheaf on the intersection of the listed weighted divisors,
    /// with twist exponents; curve strata carry a restriction degree.
    WeightedStratum {
        strata: Vec<usize>,
        exps: Vec<u32>,
        deg: Option<i64>,
    },
    /// Line bundle of the given degree on an unweighted inventory curve.
    CurveSheaf { curve: DivClass, deg: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenReport {
    pub verified: bool,
    pub trace: Vec<String>,
    pub missing: Vec<String>,
}

pub fn check_generation_script(
    w: &WeightedSurface,
    t: &TiltingCandidate,
    presented: &std::collections::BTreeMap<String, PresentedBundle>,
    script: &GenerationScript,
) -> Result<GenReport> {
    if w.weighted.iter().any(|d| !d.rational) {
        return Err(Error::Input(
            "generation targets need rational weighted divisors".into(),
        ));
    }
    let mut avail: BTreeSet<FormalObj> = BTreeSet::new();
    let mut names: BTreeSet<String> = BTreeSet::new();
    for s in &t.summands {
        match s {
            Summand::Line(l) => {
                avail.insert(FormalObj::Line(l.clone()));
            }
            Summand::Presented(n) => {
                if !presented.contains_key(n) {
                    return Err(Error::MalformedScript(format!(
                        "candidate references unknown presented bundle {n:?}"
                    )));
                }
                names.insert(n.clone());
            }
        }
    }
    let mut trace = Vec::new();
    for (step, mv) in script.moves.iter().enumerate() {
        match apply_move(w, presented, &names, &mut avail, mv) {
            Ok(desc) => trace.push(format!("{step}: {desc}")),
            Err(Error::MalformedScript(e)) => return Err(Error::MalformedScript(e)),
            Err(e) => {
                trace.push(format!("{step}: invalid move: {e}"));
                return Ok(GenReport {
                    verified: false,
                    trace,
                    missing: vec![format!("script aborted at move {step}")],
                });
            }
        }
    }
    let missing = missing_targets(w, &avail);
    Ok(GenReport {
        verified: missing.is_empty(),
        trace,
        missing,
    })
}

fn unit(w: &WeightedSurface, i: usize) -> LClass {
    let mut frac = vec![0i64; w.r()];
    frac[i] = 1;
    w.normalize(DivClass::zero(w.base.rank()), frac)
}

fn apply_move(
    w: &WeightedSurface,
    presented: &std::collections::BTreeMap<String, PresentedBundle>,
    names: &BTreeSet<String>,
    avail: &mut BTreeSet<FormalObj>,
    mv: &Move,
) -> Result<String> {
    match mv {
        Move::Koszul { strata, twist } => {
            let mut idx = strata.clone();
            idx.sort();
            idx.dedup();
            if idx.len() != strata.len() || idx.iter().any(|&i| i >= w.r()) {
                return Err(Error::MalformedScript("bad stratum indices".into()));
            }
            // every twisted Koszul term must be available
            let subsets = 1usize << idx.len();
            for mask in 0..subsets {
                let mut cls = twist.clone();
                for (bit, &i) in idx.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        cls = w.sub(&cls, &unit(w, i));
                    }
                }
                if !avail.contains(&FormalObj::Line(cls.clone())) {
                    return Err(Error::MissingData(format!(
                        "Koszul term {cls:?} not available"
                    )));
                }
            }
            let obj = stratum_object(w, &idx, twist)?;
            let desc = format!("Koszul {idx:?} twist -> {obj:?}");
            avail.insert(obj);
            Ok(desc)
        }
        Move::UnitTwistCokernel { target, index } => {
            let i = *index;
            if i >= w.r() {
                return Err(Error::MalformedScript("bad divisor index".into()));
            }
            let src = w.sub(target, &unit(w, i));
            for cls in [target, &src] {
                if !avail.contains(&FormalObj::Line(cls.clone())) {
                    return Err(Error::MissingData(format!("line {cls:?} not available")));
                }
            }
            let obj = stratum_object(w, &[i], target)?;
            let desc = format!("coker of unit twist into {target:?} -> {obj:?}");
            avail.insert(obj);
            Ok(desc)
        }
        Move::RestrictionKernel { source, curve } => {
            if !avail.contains(&FormalObj::Line(source.clone())) {
                return Err(Error::MissingData(format!("line {source:?} not available")));
            }
            check_inventory_curve(w, curve)?;
            if !source.frac.iter().all(|&l| l == 0) {
                return Err(Error::MalformedScript(
                    "restriction kernels need integral sources".into(),
                ));
            }
            let kernel = w.normalize(
                source.pic.sub(curve),
                source.frac.iter().map(|&x| x as i64).collect(),
            );
            let deg = w.base.pair(&source.pic, curve);
            avail.insert(FormalObj::CurveSheaf {
                curve: curve.clone(),
                deg,
            });
            let desc = format!("kernel {kernel:?} and restriction to {curve:?} deg {deg}");
            avail.insert(FormalObj::Line(kernel));
            Ok(desc)
        }
        Move::Cone { from, to } => {
            for cls in [from, to] {
                if !avail.contains(&FormalObj::Line(cls.clone())) {
                    return Err(Error::MissingData(format!("line {cls:?} not available")));
                }
            }
            if from.frac != to.frac {
                return Err(Error::MalformedScript(
                    "cone endpoints must share fractional parts".into(),
                ));
            }
            let diff = to.pic.sub(&from.pic);
            check_inventory_curve(w, &diff)?;
            let deg = w.base.pair(&to.pic, &diff);
            let obj = FormalObj::CurveSheaf {
                curve: diff.clone(),
                deg,
            };
            let desc = format!("cone along {diff:?} -> deg {deg}");
            avail.insert(obj);
            Ok(desc)
        }
        Move::Summand { of } | Move::Shift { of } => {
            if *of >= avail.len() {
                return Err(Error::MalformedScript(format!(
                    "reference {of} out of range"
                )));
            }
            Ok("reference move".into())
        }
        Move::ClosePresentation { name } => {
            if !names.contains(name) {
                return Err(Error::MissingData(format!(
                    "presented bundle {name:?} is not a summand"
                )));
            }
            let p = presented
                .get(name)
                .ok_or_else(|| Error::MalformedScript(format!("unknown bundle {name:?}")))?;
            for cls in &p.mid {
                if !avail.contains(&FormalObj::Line(cls.clone())) {
                    return Err(Error::MissingData(format!(
                        "middle term {cls:?} not available"
                    )));
                }
            }
            let reached = p.end.clone();
            let side = match p.side {
                PresentationSide::KernelOfSurjection => "surjection target",
                PresentationSide::CokernelOfInjection => "injection source",
            };
            avail.insert(FormalObj::Line(reached.clone()));
            Ok(format!("closed {name}: reached {side} {reached:?}"))
        }
    }
}

fn check_inventory_curve(w: &WeightedSurface, cls: &DivClass) -> Result<()> {
    let ok = w
        .base
        .curves
        .iter()
        .any(|c| c.irreducible && &c.cls == cls);
    if ok {
        Ok(())
    } else {
        Err(Error::MissingData(format!(
            "{cls:?} is not an irreducible inventory curve"
        )))
    }
}

/// Tag of the torsion sheaf O_{D_I} (x) twist: exponent (-l_i) mod p_i per
/// stratum, and for curve strata the restriction degree of the integral
/// part. Twists must be integral along the other weighted divisors.
fn stratum_object(w: &WeightedSurface, idx: &[usize], twist: &LClass) -> Result<FormalObj> {
    for (k, &l) in twist.frac.iter().enumerate() {
        if !idx.contains(&k) && l != 0 {
            return Err(Error::MalformedScript(
                "stratum twist carries fractional parts off the strata".into(),
            ));
        }
    }
    let exps: Vec<u32> = idx
        .iter()
        .map(|&i| {
            let p = w.weighted[i].weight;
            (p - twist.frac[i] % p) % p
        })
        .collect();
    let deg = if idx.len() == 1 {
        let i = idx[0];
        let mut pic = twist.pic.clone();
        if twist.frac[i] != 0 {
            pic = pic.add(&w.weighted[i].class);
        }
        Some(w.base.pair(&pic, &w.weighted[i].class))
    } else {
        None
    };
    Ok(FormalObj::WeightedStratum {
        strata: idx.to_vec(),
        exps,
        deg,
    })
}

fn missing_targets(w: &WeightedSurface, avail: &BTreeSet<FormalObj>) -> Vec<String> {
    let mut missing = Vec::new();
    // base generators for the empty stratum
    let lines: BTreeSet<Vec<i64>> = avail
        .iter()
        .filter_map(|o| match o {
            FormalObj::Line(l) if l.frac.iter().all(|&x| x == 0) => Some(l.pic.0.clone()),
            _ => None,
        })
        .collect();
    match &w.base.kind {
        SurfaceKind::ProjectivePlane => {
            if !plane_trio(&lines, 0) {
                missing.push("three consecutive plane degrees".into());
            }
        }
        SurfaceKind::BlowupP2(c) => {
            if !plane_trio(&lines, c.count) {
                missing.push("three consecutive pullback degrees".into());
            }
            for i in 1..=c.count {
                let mut e = vec![0i64; 1 + c.count];
                e[i] = 1;
                let hit = avail.iter().any(|o| {
                    matches!(o, FormalObj::CurveSheaf { curve, deg: -1 } if curve.0 == e)
                });
                if !hit {
                    missing.push(format!("exceptional sheaf of degree -1 over point {i}"));
                }
            }
        }
        SurfaceKind::P1xP1 | SurfaceKind::Hirzebruch(_) => {
            let swap_allowed = matches!(w.base.kind, SurfaceKind::P1xP1);
            if !ruled_block(&lines, false) && !(swap_allowed && ruled_block(&lines, true)) {
                missing.push("two ruling levels with consecutive fiber degrees".into());
            }
        }
    }
    // weighted curve strata: each exponent with two consecutive degrees
    for (i, d) in w.weighted.iter().enumerate() {
        for j in 0..d.weight.saturating_sub(1) {
            let degs: BTreeSet<i64> = avail
                .iter()
                .filter_map(|o| match o {
                    FormalObj::WeightedStratum { strata, exps, deg }
                        if strata.as_slice() == [i] && exps.as_slice() == [j] =>
                    {
                        *deg
                    }
                    _ => None,
                })
                .collect();
            if !degs.iter().any(|&x| degs.contains(&(x + 1))) {
                missing.push(format!(
                    "weighted curve {i}, exponent {j}: needs two consecutive degrees (have {degs:?})"
                ));
            }
        }
    }
    // crossing points
    for i in 0..w.r() {
        for k in i + 1..w.r() {
            if w.base.pair(&w.weighted[i].class, &w.weighted[k].class) <= 0 {
                continue;
            }
            for ji in 0..w.weighted[i].weight - 1 {
                for jk in 0..w.weighted[k].weight - 1 {
                    let hit = avail.iter().any(|o| {
                        matches!(o, FormalObj::WeightedStratum { strata, exps, .. }
                            if strata.as_slice() == [i, k] && exps.as_slice() == [ji, jk])
                    });
                    if !hit {
                        missing.push(format!(
                            "crossing ({i},{k}) exponents ({ji},{jk}) unreached"
                        ));
                    }
                }
            }
        }
    }
    missing
}

fn plane_trio(lines: &BTreeSet<Vec<i64>>, blowups: usize) -> bool {
    let pure: BTreeSet<i64> = lines
        .iter()
        .filter(|v| v.len() == 1 + blowups && v[1..].iter().all(|&x| x == 0))
        .map(|v| v[0])
        .collect();
    pure.iter()
        .any(|&m| pure.contains(&(m + 1)) && pure.contains(&(m + 2)))
}

fn ruled_block(lines: &BTreeSet<Vec<i64>>, swapped: bool) -> bool {
    let coords: Vec<(i64, i64)> = lines
        .iter()
        .filter(|v| v.len() == 2)
        .map(|v| if swapped { (v[1], v[0]) } else { (v[0], v[1]) })
        .collect();
    let levels: BTreeSet<i64> = coords.iter().map(|&(a, _)| a).collect();
    for &c in &levels {
        if !levels.contains(&(c + 1)) {
            continue;
        }
        let ok = |level: i64| {
            let degs: BTreeSet<i64> = coords
                .iter()
                .filter(|&&(a, _)| a == level)
                .map(|&(_, b)| b)
                .collect();
            degs.iter().any(|&d| degs.contains(&(d + 1)))
        };
        if ok(c) && ok(c + 1) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::{build_surface, PointConfiguration};

    #[test]
    fn empty_script_fails_nonempty_targets() {
        let base = build_surface(SurfaceKind::ProjectivePlane).unwrap();
        let w = WeightedSurface::unweighted(base);
        let t = TiltingCandidate::lines(vec![w.zero()]);
        let rep = check_generation_script(
            &w,
            &t,
            &Default::default(),
            &GenerationScript { moves: vec![] },
        )
        .unwrap();
        assert!(!rep.verified);
        assert!(!rep.missing.is_empty());
    }

    #[test]
    fn beilinson_needs_no_moves() {
        let base = build_surface(SurfaceKind::ProjectivePlane).unwrap();
        let w = WeightedSurface::unweighted(base);
        let t = TiltingCandidate::lines(
            (0..3)
                .map(|d| LClass::integral(DivClass(vec![d]), 0))
                .collect(),
        );
        let rep = check_generation_script(
            &w,
            &t,
            &Default::default(),
            &GenerationScript { moves: vec![] },
        )
        .unwrap();
        assert!(rep.verified, "{:?}", rep.missing);
    }

    #[test]
    fn tdp_one_point_script() {
        let base =
            build_surface(SurfaceKind::BlowupP2(PointConfiguration::general(1))).unwrap();
        let w = WeightedSurface::unweighted(base);
        let line = |h: i64, e: i64| LClass::integral(DivClass(vec![h, e]), 0);
        let t = TiltingCandidate::lines(vec![
            line(0, 1),
            line(1, 0),
            line(1, 1),
            line(2, 0),
        ]);
        let script = GenerationScript {
            moves: vec![
                Move::Cone {
                    from: line(1, 0),
                    to: line(1, 1),
                },
                Move::RestrictionKernel {
                    source: line(0, 1),
                    curve: DivClass(vec![0, 1]),
                },
            ],
        };
        let rep =
            check_generation_script(&w, &t, &Default::default(), &script).unwrap();
        assert!(rep.verified, "{:?}", rep.missing);
    }
}
