//! Surface models: Picard lattices, curve inventories, positivity tests and
//! combinatorial general-position checks.
//!
//! Supported surfaces are the projective plane, P1 x P1, Hirzebruch surfaces
//! and blowups of the plane at up to nine points with declared incidences.
//! Declared incidences (collinear triples, conic sextuples) are the source of
//! truth for special curves; no coordinate geometry happens at this layer.

use std::collections::BTreeSet;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{qi, Q};

/// Integral divisor class in the surface's Picard basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivClass(pub Vec<i64>);

impl DivClass {
    pub fn zero(rank: usize) -> Self {
        DivClass(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &DivClass) -> DivClass {
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivClass) -> DivClass {
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> DivClass {
        DivClass(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> DivClass {
        DivClass(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn to_q(&self) -> QDivClass {
        QDivClass(self.0.iter().map(|&a| qi(a)).collect())
    }
}

/// Exact-rational divisor class (Q-divisors such as K_X + Delta).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDivClass(pub Vec<Q>);

impl QDivClass {
    pub fn zero(rank: usize) -> Self {
        QDivClass(vec![Q::zero(); rank])
    }

    pub fn add(&self, other: &QDivClass) -> QDivClass {
        QDivClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QDivClass) -> QDivClass {
        QDivClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> QDivClass {
        QDivClass(self.0.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale(&self, k: &Q) -> QDivClass {
        QDivClass(self.0.iter().map(|a| a * k).collect())
    }
}

/// Incidence data for blown-up points. Indices are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub count: usize,
    #[serde(default)]
    pub collinear_triples: Vec<BTreeSet<usize>>,
    #[serde(default)]
    pub conic_sextuples: Vec<BTreeSet<usize>>,
    /// Asserted genericity on cubics; has no combinatorial shadow in the
    /// incidence model, so the user vouches for it.
    #[serde(default = "default_true")]
    pub points_general_on_cubic: bool,
}

fn default_true() -> bool {
    true
}

impl PointConfiguration {
    pub fn general(count: usize) -> Self {
        PointConfiguration {
            count,
            collinear_triples: Vec::new(),
            conic_sextuples: Vec::new(),
            points_general_on_cubic: true,
        }
    }

    pub fn with_collinear(count: usize, triples: &[&[usize]]) -> Self {
        PointConfiguration {
            count,
            collinear_triples: triples
                .iter()
                .map(|t| t.iter().copied().collect())
                .collect(),
            conic_sextuples: Vec::new(),
            points_general_on_cubic: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count > 9 {
            return Err(Error::UnsupportedConfiguration(format!(
                "{} points (at most 9 supported)",
                self.count
            )));
        }
        for t in &self.collinear_triples {
            if t.len() != 3 {
                return Err(Error::UnsupportedConfiguration(
                    "collinear set must list exactly 3 indices".into(),
                ));
            }
            if t.iter().any(|&i| i == 0 || i > self.count) {
                return Err(Error::UnsupportedConfiguration(
                    "collinear index out of range".into(),
                ));
            }
        }
        for c in &self.conic_sextuples {
            if c.len() != 6 {
                return Err(Error::UnsupportedConfiguration(
                    "conic set must list exactly 6 indices".into(),
                ));
            }
            if c.iter().any(|&i| i == 0 || i > self.count) {
                return Err(Error::UnsupportedConfiguration(
                    "conic index out of range".into(),
                ));
            }
        }
        Ok(())
    }

    /// Maximal collinear sets: declared triples merged whenever they share
    /// two points (two triples through the same two points lie on one line).
    pub fn line_sets(&self) -> Vec<BTreeSet<usize>> {
        merge_sets(&self.collinear_triples, 2)
    }

    /// Maximal conic sets: declared sextuples merged on five common points.
    pub fn conic_sets(&self) -> Vec<BTreeSet<usize>> {
        merge_sets(&self.conic_sextuples, 5)
    }
}

fn merge_sets(sets: &[BTreeSet<usize>], overlap: usize) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    for s in sets {
        let mut cur = s.clone();
        loop {
            let mut merged = false;
            out.retain(|t| {
                if t.intersection(&cur).count() >= overlap {
                    cur.extend(t.iter().copied());
                    merged = true;
                    false
                } else {
                    true
                }
            });
            if !merged {
                break;
            }
        }
        if !out.contains(&cur) {
            out.push(cur);
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceKind {
    ProjectivePlane,
    P1xP1,
    Hirzebruch(u32),
    BlowupP2(PointConfiguration),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    MinusOne,
    MinusTwo,
    Fiber,
    Section,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub cls: DivClass,
    pub self_int: i64,
    pub kind: CurveKind,
    pub genus: i64,
    /// Whether the class is irreducible given the declared incidences.
    /// Only irreducible curves may be subtracted in h^0 reduction.
    pub irreducible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub basis_labels: Vec<String>,
    pub intersection_matrix: Vec<Vec<i64>>,
    pub canonical: DivClass,
    pub curves: Vec<CurveClass>,
    pub ample_ref: DivClass,
    /// Certified nine-point verdict (set by the anticanon pipeline); only
    /// consulted for K^2 = 0 nine-point models.
    pub nine_point_almost_general: Option<bool>,
    fingerprint: u64,
}

/// Bound on curve-class coefficients in the inventory. Every (-1)/(-2)
/// class on a del Pezzo configuration has coefficients of size at most 6.
pub const INVENTORY_BOUND: i64 = 6;

pub fn build_surface(kind: SurfaceKind) -> Result<SurfaceModel> {
    match kind {
        SurfaceKind::ProjectivePlane => {
            let m = vec![vec![1]];
            Ok(finish_model(
                SurfaceKind::ProjectivePlane,
                vec!["H".into()],
                m,
                DivClass(vec![-3]),
                Vec::new(),
                DivClass(vec![1]),
            ))
        }
        SurfaceKind::P1xP1 => {
            let m = vec![vec![0, 1], vec![1, 0]];
            let curves = vec![
                curve(DivClass(vec![1, 0]), &m, &DivClass(vec![-2, -2]), CurveKind::Fiber, true),
                curve(DivClass(vec![0, 1]), &m, &DivClass(vec![-2, -2]), CurveKind::Fiber, true),
            ];
            Ok(finish_model(
                SurfaceKind::P1xP1,
                vec!["(1,0)".into(), "(0,1)".into()],
                m,
                DivClass(vec![-2, -2]),
                curves,
                DivClass(vec![1, 1]),
            ))
        }
        SurfaceKind::Hirzebruch(s) => {
            if s < 1 {
                return Err(Error::UnsupportedConfiguration(
                    "Hirzebruch index must be >= 1".into(),
                ));
            }
            let si = s as i64;
            let m = vec![vec![-si, 1], vec![1, 0]];
            let k = DivClass(vec![-2, -(si + 2)]);
            let section_kind = if si == 2 { CurveKind::MinusTwo } else { CurveKind::Section };
            let curves = vec![
                curve(DivClass(vec![1, 0]), &m, &k, section_kind, true),
                curve(DivClass(vec![0, 1]), &m, &k, CurveKind::Fiber, true),
            ];
            // -K is ample only for s = 1; otherwise correct by fibers until
            // the Nakai test certifies strict positivity.
            let ample = if si == 1 {
                DivClass(vec![2, 3])
            } else {
                DivClass(vec![2, 2 * si + 1])
            };
            Ok(finish_model(
                SurfaceKind::Hirzebruch(s),
                vec!["C".into(), "F".into()],
                m,
                k,
                curves,
                ample,
            ))
        }
        SurfaceKind::BlowupP2(config) => build_blowup(config),
    }
}

fn finish_model(
    kind: SurfaceKind,
    basis_labels: Vec<String>,
    intersection_matrix: Vec<Vec<i64>>,
    canonical: DivClass,
    curves: Vec<CurveClass>,
    ample_ref: DivClass,
) -> SurfaceModel {
    let fingerprint = fingerprint_of(&kind, &intersection_matrix);
    let model = SurfaceModel {
        kind,
        basis_labels,
        intersection_matrix,
        canonical,
        curves,
        ample_ref,
        nine_point_almost_general: None,
        fingerprint,
    };
    debug_assert!(model.check_ample_ref());
    model
}

fn curve(
    cls: DivClass,
    m: &[Vec<i64>],
    k: &DivClass,
    kind: CurveKind,
    irreducible: bool,
) -> CurveClass {
    let self_int = pair_int(m, &cls, &cls);
    let ck = pair_int(m, &cls, k);
    let genus = 1 + (self_int + ck) / 2;
    CurveClass {
        cls,
        self_int,
        kind,
        genus,
        irreducible,
    }
}

fn pair_int(m: &[Vec<i64>], a: &DivClass, b: &DivClass) -> i64 {
    let mut s = 0;
    for (i, ai) in a.0.iter().enumerate() {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.0.iter().enumerate() {
            s += ai * m[i][j] * bj;
        }
    }
    s
}

fn build_blowup(config: PointConfiguration) -> Result<SurfaceModel> {
    config.validate()?;
    let s = config.count;
    let rank = 1 + s;
    let mut m = vec![vec![0i64; rank]; rank];
    m[0][0] = 1;
    for i in 1..rank {
        m[i][i] = -1;
    }
    let mut k = vec![-3i64; 1];
    k.extend(std::iter::repeat(1).take(s));
    let k = DivClass(k);

    let mut labels = vec!["H".to_string()];
    for i in 1..=s {
        labels.push(format!("E{i}"));
    }

    // Incidence-derived negative curves: strict transforms of declared
    // lines and conics.
    let mut special: Vec<CurveClass> = Vec::new();
    for line in config.line_sets() {
        let mut cls = vec![1i64];
        cls.extend((1..=s).map(|i| if line.contains(&i) { -1 } else { 0 }));
        let cls = DivClass(cls);
        let kind = if line.len() == 3 { CurveKind::MinusTwo } else { CurveKind::Other };
        special.push(curve(cls, &m, &k, kind, true));
    }
    for conic in config.conic_sets() {
        let mut cls = vec![2i64];
        cls.extend((1..=s).map(|i| if conic.contains(&i) { -1 } else { 0 }));
        let cls = DivClass(cls);
        let kind = if conic.len() == 6 { CurveKind::MinusTwo } else { CurveKind::Other };
        special.push(curve(cls, &m, &k, kind, true));
    }

    let mut curves = special.clone();
    for cls in enumerate_minus_one_classes(s, INVENTORY_BOUND) {
        let irreducible = special
            .iter()
            .all(|sp| pair_int(&m, &cls, &sp.cls) >= 0);
        curves.push(curve(cls, &m, &k, CurveKind::MinusOne, irreducible));
    }
    // with a single point the ruling through it is an extremal fiber class
    // not accounted for by (-1)-curves
    if s == 1 {
        curves.push(curve(
            DivClass(vec![1, -1]),
            &m,
            &k,
            CurveKind::Fiber,
            true,
        ));
    }
    curves.sort_by(|a, b| a.cls.cmp(&b.cls));

    // ample_ref: -K when the Nakai test certifies it, otherwise correct by
    // pullback lines until strictly positive on the whole inventory.
    let minus_k = k.neg();
    let ample_ref = if nakai_positive(&m, &minus_k, &curves) {
        minus_k
    } else {
        let mut found = None;
        for a in 4..=12i64 {
            let mut c = vec![a];
            c.extend(std::iter::repeat(-1).take(s));
            let cand = DivClass(c);
            if nakai_positive(&m, &cand, &curves) {
                found = Some(cand);
                break;
            }
        }
        found.ok_or_else(|| {
            Error::UnsupportedConfiguration("no positive reference class found".into())
        })?
    };

    Ok(finish_model(
        SurfaceKind::BlowupP2(config),
        labels,
        m,
        k,
        curves,
        ample_ref,
    ))
}

fn nakai_positive(m: &[Vec<i64>], d: &DivClass, curves: &[CurveClass]) -> bool {
    pair_int(m, d, d) > 0 && curves.iter().all(|c| pair_int(m, d, &c.cls) > 0)
}

/// All integer solutions of C^2 = -1, C.K = -1 with coefficients bounded by
/// `bound` on a blowup of the plane at `s` points, i.e. classes
/// dH - sum m_i E_i with sum m_i = 3d - 1 and sum m_i^2 = d^2 + 1.
pub fn enumerate_minus_one_classes(s: usize, bound: i64) -> Vec<DivClass> {
    let mut out = Vec::new();
    for d in -bound..=bound {
        let target_sum = 3 * d - 1;
        let target_sq = d * d + 1;
        let mut ms = vec![0i64; s];
        fn rec(
            pos: usize,
            s: usize,
            bound: i64,
            sum: i64,
            sq: i64,
            target_sum: i64,
            target_sq: i64,
            ms: &mut Vec<i64>,
            d: i64,
            out: &mut Vec<DivClass>,
        ) {
            if pos == s {
                if sum == target_sum && sq == target_sq {
                    let mut cls = vec![d];
                    cls.extend(ms.iter().map(|&m| -m));
                    out.push(DivClass(cls));
                }
                return;
            }
            let left = (s - pos) as i64;
            for m in -bound..=bound {
                let ns = sum + m;
                let nq = sq + m * m;
                if nq > target_sq {
                    continue;
                }
                if (target_sum - ns).abs() > bound * (left - 1) {
                    continue;
                }
                // Cauchy-Schwarz: the remaining squares must cover the
                // remaining sum.
                if left > 1 {
                    let rem = target_sum - ns;
                    if rem * rem > (target_sq - nq) * (left - 1) {
                        continue;
                    }
                } else if ns != target_sum || nq != target_sq {
                    continue;
                }
                ms[pos] = m;
                rec(pos + 1, s, bound, ns, nq, target_sum, target_sq, ms, d, out);
            }
            ms[pos] = 0;
        }
        if s == 0 {
            if target_sum == 0 && target_sq == 0 {
                out.push(DivClass(vec![d]));
            }
            continue;
        }
        rec(0, s, bound, 0, 0, target_sum, target_sq, &mut ms, d, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

impl SurfaceModel {
    pub fn rank(&self) -> usize {
        self.intersection_matrix.len()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn pair(&self, a: &DivClass, b: &DivClass) -> i64 {
        pair_int(&self.intersection_matrix, a, b)
    }

    pub fn pair_q(&self, a: &QDivClass, b: &QDivClass) -> Q {
        let mut s = Q::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                s += ai * qi(self.intersection_matrix[i][j]) * bj;
            }
        }
        s
    }

    pub fn selfint_q(&self, d: &QDivClass) -> Q {
        self.pair_q(d, d)
    }

    pub fn is_nef(&self, d: &QDivClass) -> bool {
        let ar = self.ample_ref.to_q();
        if self.pair_q(d, &ar).is_negative() {
            return false;
        }
        self.curves
            .iter()
            .all(|c| !self.pair_q(d, &c.cls.to_q()).is_negative())
    }

    pub fn is_big_nef(&self, d: &QDivClass) -> bool {
        self.is_nef(d) && self.selfint_q(d).is_positive()
    }

    pub fn is_ample(&self, d: &QDivClass) -> bool {
        if !self.selfint_q(d).is_positive() {
            return false;
        }
        if !self.pair_q(d, &self.ample_ref.to_q()).is_positive() {
            return false;
        }
        self.curves
            .iter()
            .all(|c| self.pair_q(d, &c.cls.to_q()).is_positive())
    }

    /// A witness curve with D.C < 0 (for nef failures) or <= 0 (ample).
    pub fn negative_witness(&self, d: &QDivClass, strict: bool) -> Option<&CurveClass> {
        self.curves.iter().find(|c| {
            let p = self.pair_q(d, &c.cls.to_q());
            if strict {
                !p.is_positive()
            } else {
                p.is_negative()
            }
        })
    }

    pub fn point_config(&self) -> Option<&PointConfiguration> {
        match &self.kind {
            SurfaceKind::BlowupP2(c) => Some(c),
            _ => None,
        }
    }

    pub fn set_nine_point_verdict(&mut self, almost_general: bool) {
        self.nine_point_almost_general = Some(almost_general);
    }

    /// Euler characteristic of the structure sheaf is 1 for all supported
    /// (rational) surfaces; Noether then pins K^2 + chi_top = 12.
    pub fn chi_top(&self) -> i64 {
        self.rank() as i64 + 2
    }

    fn check_ample_ref(&self) -> bool {
        let ar = &self.ample_ref;
        self.pair(ar, ar) > 0 && self.curves.iter().all(|c| self.pair(ar, &c.cls) > 0)
    }
}

fn fingerprint_of(kind: &SurfaceKind, m: &[Vec<i64>]) -> u64 {
    // FNV-1a over a canonical encoding; stable across runs.
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    };
    let eat_i64 = |h: &mut u64, v: i64| {
        for b in v.to_le_bytes() {
            *h ^= b as u64;
            *h = h.wrapping_mul(0x100000001b3);
        }
    };
    match kind {
        SurfaceKind::ProjectivePlane => eat(1),
        SurfaceKind::P1xP1 => eat(2),
        SurfaceKind::Hirzebruch(s) => {
            eat(3);
            eat_i64(&mut h, *s as i64);
        }
        SurfaceKind::BlowupP2(c) => {
            eat(4);
            eat_i64(&mut h, c.count as i64);
            for t in c.line_sets() {
                eat_i64(&mut h, -1);
                for i in t {
                    eat_i64(&mut h, i as i64);
                }
            }
            for t in c.conic_sets() {
                eat_i64(&mut h, -2);
                for i in t {
                    eat_i64(&mut h, i as i64);
                }
            }
        }
    }
    for row in m {
        for &v in row {
            eat_i64(&mut h, v);
        }
    }
    h
}

/// Exact intersection number of two Q-classes.
pub fn intersect(s: &SurfaceModel, d: &QDivClass, e: &QDivClass) -> Q {
    s.pair_q(d, e)
}

/// Demazure's conditions (i)-(iv) on the declared incidence data.
pub fn is_general_position(config: &PointConfiguration) -> Result<bool> {
    config.validate()?;
    if config.count >= 9 {
        return Err(Error::OutOfRange(
            "general position is defined for fewer than 9 points".into(),
        ));
    }
    let ok = config.collinear_triples.is_empty()
        && config.conic_sextuples.is_empty()
        && (config.count < 8 || config.points_general_on_cubic);
    Ok(ok)
}

pub fn is_almost_general_position(config: &PointConfiguration) -> Result<bool> {
    config.validate()?;
    if config.count >= 9 {
        return Err(Error::OutOfRange(
            "almost general position here covers fewer than 9 points".into(),
        ));
    }
    Ok(almost_general_incidences(config))
}

/// The incidence part of almost-general position: no four points on a line,
/// no seven on a conic. Shared with the nine-point eight-subset check.
pub fn almost_general_incidences(config: &PointConfiguration) -> bool {
    config.line_sets().iter().all(|l| l.len() <= 3)
        && config.conic_sets().iter().all(|c| c.len() <= 6)
}
