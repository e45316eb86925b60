//! L-graded Cox rings: generators with degrees, homogeneous relations,
//! graded-piece monomial bases and multiplication matrices.
//!
//! Relation handling is restricted to normal-form rewriting when a relation
//! isolates a distinguished monomial (t^p or x_4^2 in the builtin rings),
//! with a degreewise linear-algebra quotient as the general fallback.

use std::collections::HashMap;
use std::sync::Mutex;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::picard::{DivClass, SurfaceKind};
use crate::rat::{show_q, Q};
use crate::wps::{LClass, WeightedSurface};

pub type Monomial = Vec<u32>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn mono_divisible(a: &Monomial, by: &Monomial) -> bool {
    a.iter().zip(by).all(|(x, y)| x >= y)
}

fn mono_div(a: &Monomial, by: &Monomial) -> Monomial {
    a.iter().zip(by).map(|(x, y)| x - y).collect()
}

/// Sparse polynomial in the ring generators, kept sorted and combined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub terms: Vec<(Q, Monomial)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly {
            terms: vec![(Q::one(), m)],
        }
    }

    pub fn generator(idx: usize, n: usize) -> Self {
        let mut m = vec![0; n];
        m[idx] = 1;
        Poly::monomial(m)
    }

    pub fn from_terms(mut terms: Vec<(Q, Monomial)>) -> Self {
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out: Vec<(Q, Monomial)> = Vec::new();
        for (c, m) in terms {
            if let Some(last) = out.last_mut() {
                if last.1 == m {
                    last.0 += c;
                    continue;
                }
            }
            out.push((c, m));
        }
        out.retain(|(c, _)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Poly::from_terms(t)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().map(|(c, m)| (-c.clone(), m.clone())));
        Poly::from_terms(t)
    }

    pub fn scale(&self, k: &Q) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(c, m)| (c * k, m.clone()))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut t = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, m1) in &self.terms {
            for (c2, m2) in &other.terms {
                t.push((c1 * c2, mono_mul(m1, m2)));
            }
        }
        Poly::from_terms(t)
    }
}

#[derive(Debug, Clone)]
pub enum Reduction {
    /// No relations.
    Free,
    /// One relation isolating a distinguished monomial; rewriting replaces
    /// that monomial by the (distinguished-free) remainder.
    Hypersurface {
        distinguished: Monomial,
        replacement: Poly,
    },
    /// Degreewise quotient by the span of relation multiples.
    LinearAlgebra,
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub degree: LClass,
}

#[derive(Debug)]
pub struct CoxRing {
    pub surface: WeightedSurface,
    pub generators: Vec<Generator>,
    pub relations: Vec<Poly>,
    pub reduction: Reduction,
    piece_memo: Mutex<HashMap<LClass, GradedPiece>>,
}

#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub degree: LClass,
    pub basis: Vec<Monomial>,
    /// Echelonized span of relation multiples over `all_monomials`
    /// (linear-algebra reduction only).
    all_monomials: Vec<Monomial>,
    span_rows: Vec<Vec<Q>>,
    span_pivots: Vec<usize>,
}

impl GradedPiece {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

impl CoxRing {
    pub fn new(
        surface: WeightedSurface,
        generators: Vec<Generator>,
        relations: Vec<Poly>,
        reduction: Reduction,
    ) -> Result<Self> {
        let ring = CoxRing {
            surface,
            generators,
            relations,
            reduction,
            piece_memo: Mutex::new(HashMap::new()),
        };
        for rel in &ring.relations {
            ring.check_homogeneous(rel)?;
        }
        if let Reduction::Hypersurface {
            distinguished,
            replacement,
        } = &ring.reduction
        {
            if replacement
                .terms
                .iter()
                .any(|(_, m)| mono_divisible(m, distinguished))
            {
                return Err(Error::UnsupportedFamily(
                    "replacement must avoid the distinguished monomial".into(),
                ));
            }
        }
        Ok(ring)
    }

    pub fn n_gens(&self) -> usize {
        self.generators.len()
    }

    fn check_homogeneous(&self, p: &Poly) -> Result<()> {
        let mut deg: Option<LClass> = None;
        for (_, m) in &p.terms {
            let d = self.monomial_degree(m);
            match &deg {
                None => deg = Some(d),
                Some(e) if *e == d => {}
                _ => {
                    return Err(Error::UnsupportedFamily(
                        "relation is not L-homogeneous".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> LClass {
        let w = &self.surface;
        let mut pic = DivClass::zero(w.base.rank());
        let mut frac = vec![0i64; w.r()];
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let d = &self.generators[i].degree;
            pic = pic.add(&d.pic.scale(e as i64));
            for (j, &l) in d.frac.iter().enumerate() {
                frac[j] += e as i64 * l as i64;
            }
        }
        w.normalize(pic, frac)
    }

    /// Rewrite to normal form (hypersurface reduction); identity otherwise.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        match &self.reduction {
            Reduction::Hypersurface {
                distinguished,
                replacement,
            } => {
                let mut cur = p.clone();
                loop {
                    let hit = cur
                        .terms
                        .iter()
                        .position(|(_, m)| mono_divisible(m, distinguished));
                    let Some(i) = hit else { return cur };
                    let (c, m) = cur.terms[i].clone();
                    let rest = Poly::monomial(mono_div(&m, distinguished))
                        .mul(replacement)
                        .scale(&c);
                    let mut terms = cur.terms.clone();
                    terms.remove(i);
                    cur = Poly { terms }.add(&rest);
                }
            }
            _ => p.clone(),
        }
    }

    /// Monomial basis of the graded piece of the given degree.
    pub fn graded_basis(&self, d: &LClass) -> GradedPiece {
        let d = self
            .surface
            .normalize(d.pic.clone(), d.frac.iter().map(|&x| x as i64).collect());
        if let Some(p) = self.piece_memo.lock().unwrap().get(&d) {
            return p.clone();
        }
        let piece = self.compute_piece(&d);
        self.piece_memo
            .lock()
            .unwrap()
            .entry(d)
            .or_insert_with(|| piece.clone());
        piece
    }

    fn compute_piece(&self, d: &LClass) -> GradedPiece {
        let monos = self.enumerate_monomials(d);
        match &self.reduction {
            Reduction::Free => GradedPiece {
                degree: d.clone(),
                basis: monos.clone(),
                all_monomials: monos,
                span_rows: Vec::new(),
                span_pivots: Vec::new(),
            },
            Reduction::Hypersurface { distinguished, .. } => {
                let basis: Vec<Monomial> = monos
                    .iter()
                    .filter(|m| !mono_divisible(m, distinguished))
                    .cloned()
                    .collect();
                GradedPiece {
                    degree: d.clone(),
                    basis,
                    all_monomials: monos,
                    span_rows: Vec::new(),
                    span_pivots: Vec::new(),
                }
            }
            Reduction::LinearAlgebra => self.quotient_piece(d, monos),
        }
    }

    fn quotient_piece(&self, d: &LClass, monos: Vec<Monomial>) -> GradedPiece {
        let index: HashMap<&Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let w = &self.surface;
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for rel in &self.relations {
            if rel.is_zero() {
                continue;
            }
            let rel_deg = self.monomial_degree(&rel.terms[0].1);
            let shift = w.sub(d, &rel_deg);
            for m in self.enumerate_monomials(&shift) {
                let prod = rel.mul(&Poly::monomial(m));
                let mut row = vec![Q::zero(); monos.len()];
                let mut ok = true;
                for (c, mm) in &prod.terms {
                    match index.get(mm) {
                        Some(&i) => row[i] = c.clone(),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    rows.push(row);
                }
            }
        }
        let (span_rows, span_pivots) = echelon_rows(rows);
        let pivot_set: std::collections::HashSet<usize> = span_pivots.iter().copied().collect();
        let basis: Vec<Monomial> = monos
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivot_set.contains(i))
            .map(|(_, m)| m.clone())
            .collect();
        GradedPiece {
            degree: d.clone(),
            basis,
            all_monomials: monos,
            span_rows,
            span_pivots,
        }
    }

    /// All monomials of exact degree d, sorted. Uses the strictly positive
    /// ample grading to bound the search.
    fn enumerate_monomials(&self, d: &LClass) -> Vec<Monomial> {
        let w = &self.surface;
        let budget = w.ample_degree(d);
        if budget.is_negative() {
            return Vec::new();
        }
        let weights: Vec<Q> = self
            .generators
            .iter()
            .map(|g| w.ample_degree(&g.degree))
            .collect();
        assert!(
            weights.iter().all(|x| x.is_positive()),
            "generator degrees must pair positively with the ample reference"
        );
        let n = self.generators.len();
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        rec_enumerate(self, &weights, 0, budget, &mut cur, d, &mut out);
        out.sort();
        out
    }

    /// Coordinates of a polynomial of degree `piece.degree` in the piece
    /// basis (after normal-form / span reduction).
    pub fn express(&self, piece: &GradedPiece, p: &Poly) -> Vec<Q> {
        let nf = self.normal_form(p);
        match &self.reduction {
            Reduction::LinearAlgebra => {
                let index: HashMap<&Monomial, usize> = piece
                    .all_monomials
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m, i))
                    .collect();
                let mut v = vec![Q::zero(); piece.all_monomials.len()];
                for (c, m) in &nf.terms {
                    let i = *index.get(m).expect("monomial outside the graded piece");
                    v[i] = c.clone();
                }
                for (row, &p) in piece.span_rows.iter().zip(&piece.span_pivots) {
                    if !v[p].is_zero() {
                        let f = v[p].clone();
                        for (vi, ri) in v.iter_mut().zip(row) {
                            *vi -= &f * ri;
                        }
                    }
                }
                let pivot_set: std::collections::HashSet<usize> =
                    piece.span_pivots.iter().copied().collect();
                piece
                    .all_monomials
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !pivot_set.contains(i))
                    .map(|(i, _)| v[i].clone())
                    .collect()
            }
            _ => {
                let index: HashMap<&Monomial, usize> = piece
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m, i))
                    .collect();
                let mut v = vec![Q::zero(); piece.basis.len()];
                for (c, m) in &nf.terms {
                    let i = *index.get(m).expect("monomial outside the piece basis");
                    v[i] = c.clone();
                }
                v
            }
        }
    }

    /// Matrix of multiplication by `g` from `from` to `to`, columns indexed
    /// by `from.basis`, rows by `to.basis`.
    pub fn mult_matrix(&self, g: &Poly, from: &GradedPiece, to: &GradedPiece) -> QMat {
        let mut mat = QMat::zeros(to.basis.len(), from.basis.len());
        for (j, m) in from.basis.iter().enumerate() {
            let prod = g.mul(&Poly::monomial(m.clone()));
            for (i, v) in self.express(to, &prod).into_iter().enumerate() {
                mat.set(i, j, v);
            }
        }
        mat
    }

    pub fn render_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (c, m) in &p.terms {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.generators[i].name.clone()
                    } else {
                        format!("{}^{}", self.generators[i].name, e)
                    }
                })
                .collect();
            let mono = if mono.is_empty() {
                "1".to_string()
            } else {
                mono.join("*")
            };
            let part = if c.is_one() {
                mono
            } else if (-c.clone()).is_one() {
                format!("-{mono}")
            } else {
                format!("{}*{}", show_q(c), mono)
            };
            parts.push(part);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[allow(clippy::too_many_arguments)]
fn rec_enumerate(
    ring: &CoxRing,
    weights: &[Q],
    idx: usize,
    remaining: Q,
    cur: &mut Vec<u32>,
    d: &LClass,
    out: &mut Vec<Monomial>,
) {
    if idx == weights.len() {
        if remaining.is_zero() && &ring.monomial_degree(cur) == d {
            out.push(cur.clone());
        }
        return;
    }
    let mut e = 0u32;
    loop {
        let used = crate::rat::qi(e as i64) * &weights[idx];
        if used > remaining {
            break;
        }
        cur[idx] = e;
        let rem = remaining.clone() - used;
        rec_enumerate(ring, weights, idx + 1, rem, cur, d, out);
        e += 1;
    }
    cur[idx] = 0;
}

fn echelon_rows(rows: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut out: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut row in rows {
        loop {
            let Some(p) = row.iter().position(|x| !x.is_zero()) else {
                break;
            };
            if let Some(i) = pivots.iter().position(|&q| q == p) {
                let f = row[p].clone();
                for (r, o) in row.iter_mut().zip(&out[i]) {
                    *r -= &f * o;
                }
            } else {
                let inv = row[p].clone();
                for r in row.iter_mut() {
                    *r /= inv.clone();
                }
                out.push(row);
                pivots.push(p);
                break;
            }
        }
    }
    (out, pivots)
}

/// Builtin Cox rings for the supported weighted-surface families.
pub fn builtin_cox(w: &WeightedSurface) -> Result<CoxRing> {
    let rank = w.base.rank();
    let r = w.r();
    let gen = |name: &str, pic: Vec<i64>, frac: Vec<u32>| Generator {
        name: name.into(),
        degree: LClass {
            pic: DivClass(pic),
            frac,
        },
    };
    match (&w.base.kind, r) {
        (SurfaceKind::P1xP1, 0) => {
            let gens = vec![
                gen("x", vec![1, 0], vec![]),
                gen("y", vec![1, 0], vec![]),
                gen("x'", vec![0, 1], vec![]),
                gen("y'", vec![0, 1], vec![]),
            ];
            CoxRing::new(w.clone(), gens, Vec::new(), Reduction::Free)
        }
        (SurfaceKind::P1xP1, 1) if w.weighted[0].class == DivClass(vec![1, 1]) => {
            let p = w.weighted[0].weight;
            // u, v on one ruling, x, y on the other, t the fractional
            // generator with t^p = uy - vx cutting out the weighted divisor.
            let gens = vec![
                gen("u", vec![1, 0], vec![0]),
                gen("v", vec![1, 0], vec![0]),
                gen("x", vec![0, 1], vec![0]),
                gen("y", vec![0, 1], vec![0]),
                gen("t", vec![0, 0], vec![1]),
            ];
            let mut tp = vec![0u32; 5];
            tp[4] = p;
            let f = Poly::from_terms(vec![
                (Q::one(), vec![1, 0, 0, 1, 0]),
                (-Q::one(), vec![0, 1, 1, 0, 0]),
            ]);
            let relation = Poly::monomial(tp.clone()).sub(&f);
            CoxRing::new(
                w.clone(),
                gens,
                vec![relation],
                Reduction::Hypersurface {
                    distinguished: tp,
                    replacement: f,
                },
            )
        }
        (SurfaceKind::ProjectivePlane, 0) => {
            let gens = vec![
                gen("x", vec![1], vec![]),
                gen("y", vec![1], vec![]),
                gen("z", vec![1], vec![]),
            ];
            CoxRing::new(w.clone(), gens, Vec::new(), Reduction::Free)
        }
        (SurfaceKind::ProjectivePlane, 1) if w.weighted[0].class == DivClass(vec![2]) => {
            if w.weighted[0].weight != 2 {
                return Err(Error::UnsupportedFamily(
                    "conic-weighted plane is built in for weight 2 only".into(),
                ));
            }
            let gens = vec![
                gen("x", vec![1], vec![0]),
                gen("y", vec![1], vec![0]),
                gen("z", vec![1], vec![0]),
                gen("t", vec![0], vec![1]),
            ];
            let t2 = vec![0, 0, 0, 2];
            let f = Poly::from_terms(vec![
                (Q::one(), vec![1, 0, 1, 0]),
                (-Q::one(), vec![0, 2, 0, 0]),
            ]);
            let relation = Poly::monomial(t2.clone()).sub(&f);
            CoxRing::new(
                w.clone(),
                gens,
                vec![relation],
                Reduction::Hypersurface {
                    distinguished: t2,
                    replacement: f,
                },
            )
        }
        (SurfaceKind::ProjectivePlane, 2..=3)
            if w.weighted.iter().all(|d| d.class == DivClass(vec![1])) =>
        {
            // lines in general position: free on the fractional generators
            // plus coordinates completing them to a plane frame.
            let mut gens = Vec::new();
            for i in 0..r {
                let mut frac = vec![0u32; r];
                frac[i] = 1;
                gens.push(gen(&format!("x{}", i + 1), vec![0], frac));
            }
            for j in r..3 {
                gens.push(gen(&format!("z{}", j + 1), vec![1], vec![0; r]));
            }
            CoxRing::new(w.clone(), gens, Vec::new(), Reduction::Free)
        }
        (SurfaceKind::ProjectivePlane, 4)
            if w.weighted
                .iter()
                .all(|d| d.class == DivClass(vec![1]) && d.weight == 2) =>
        {
            // four general lines in coordinates with x1^2+x2^2+x3^2+x4^2 = 0
            let mut gens = Vec::new();
            for i in 0..4 {
                let mut frac = vec![0u32; 4];
                frac[i] = 1;
                gens.push(gen(&format!("x{}", i + 1), vec![0], frac));
            }
            let dist = vec![0, 0, 0, 2];
            let replacement = Poly::from_terms(vec![
                (-Q::one(), vec![2, 0, 0, 0]),
                (-Q::one(), vec![0, 2, 0, 0]),
                (-Q::one(), vec![0, 0, 2, 0]),
            ]);
            let relation = Poly::monomial(dist.clone()).sub(&replacement);
            CoxRing::new(
                w.clone(),
                gens,
                vec![relation],
                Reduction::Hypersurface {
                    distinguished: dist,
                    replacement,
                },
            )
        }
        (SurfaceKind::BlowupP2(c), 0) if c.count <= 3 => CoxRing::new(
            w.clone(),
            toric_blowup_gens(c.count, rank),
            Vec::new(),
            Reduction::Free,
        ),
        (SurfaceKind::BlowupP2(c), 1)
            if c.count == 1 && w.weighted[0].class == DivClass(vec![1, 0]) =>
        {
            // one blown-up point, weighted on a line missing it: free on
            // u (E), y', z' (H - E) and the fractional generator x with
            // x^p the equation of the weighted line.
            let gens = vec![
                gen("u", vec![0, 1], vec![0]),
                gen("y'", vec![1, -1], vec![0]),
                gen("z'", vec![1, -1], vec![0]),
                gen("x", vec![0, 0], vec![1]),
            ];
            CoxRing::new(w.clone(), gens, Vec::new(), Reduction::Free)
        }
        _ => Err(Error::UnsupportedFamily(format!(
            "{:?} with {} weighted divisors",
            w.base.kind, r
        ))),
    }
}

/// Free Cox generators of toric plane blowups at up to 3 coordinate points.
fn toric_blowup_gens(count: usize, rank: usize) -> Vec<Generator> {
    let gen = |name: &str, pic: Vec<i64>| Generator {
        name: name.into(),
        degree: LClass {
            pic: DivClass(pic),
            frac: vec![],
        },
    };
    let e = |i: usize| -> Vec<i64> {
        let mut v = vec![0i64; rank];
        v[i] = 1;
        v
    };
    let h_minus = |idx: &[usize]| -> Vec<i64> {
        let mut v = vec![0i64; rank];
        v[0] = 1;
        for &i in idx {
            v[i] = -1;
        }
        v
    };
    match count {
        1 => vec![
            gen("s", e(1)),
            gen("a", h_minus(&[1])),
            gen("b", h_minus(&[1])),
            gen("z", e(0)),
        ],
        2 => vec![
            gen("e1", e(1)),
            gen("e2", e(2)),
            gen("g12", h_minus(&[1, 2])),
            gen("g1", h_minus(&[1])),
            gen("g2", h_minus(&[2])),
        ],
        3 => vec![
            gen("e1", e(1)),
            gen("e2", e(2)),
            gen("e3", e(3)),
            gen("g12", h_minus(&[1, 2])),
            gen("g13", h_minus(&[1, 3])),
            gen("g23", h_minus(&[2, 3])),
        ],
        _ => unreachable!("toric blowups are built for at most 3 points"),
    }
}
