//! Finite abelian Galois covers: condition (*) checking, stabilizers,
//! induced-module decomposition, isotypic Hom dimensions and induced basic
//! tilting candidates.
//!
//! The group acts on the upstairs Picard lattice by matrices and on the
//! upstairs Cox generators by a scaled permutation; every monomial is then
//! permuted with a root-of-unity scalar, recorded as an exponent modulo the
//! group exponent. Isotypic dimensions come from monomial orbits: an orbit
//! with stabilizer S and scalar character psi contributes one dimension to
//! every character restricting to psi on S. No cyclotomic arithmetic is
//! needed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cohom::cohomology;
use crate::cox::CoxRing;
use crate::error::{Error, Result};
use crate::linalg::int_det;
use crate::picard::{DivClass, SurfaceModel};
use crate::tilting::{Summand, TiltingCandidate};
use crate::wps::LClass;

pub type GroupElt = Vec<u32>;
pub type Character = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    pub orders: Vec<u32>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.iter().any(|&n| n < 2) {
            return Err(Error::Input("cyclic factor orders must be >= 2".into()));
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn size(&self) -> usize {
        self.orders.iter().map(|&n| n as usize).product()
    }

    /// Exponent of the group (lcm of the cyclic orders); scalar exponents
    /// live modulo this.
    pub fn exponent(&self) -> u32 {
        self.orders.iter().fold(1, |a, &b| num::integer::lcm(a, b))
    }

    pub fn zero(&self) -> GroupElt {
        vec![0; self.orders.len()]
    }

    pub fn elements(&self) -> Vec<GroupElt> {
        let mut out = vec![self.zero()];
        for (i, &n) in self.orders.iter().enumerate() {
            let mut next = Vec::new();
            for e in out {
                for v in 0..n {
                    let mut e2 = e.clone();
                    e2[i] = v;
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    pub fn add(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), &n)| (x + y) % n)
            .collect()
    }

    pub fn is_zero(&self, a: &GroupElt) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Character pairing as an exponent modulo the group exponent.
    pub fn pairing(&self, chi: &Character, g: &GroupElt) -> u32 {
        let ex = self.exponent();
        let mut acc: u64 = 0;
        for ((&c, &e), &n) in chi.iter().zip(g).zip(&self.orders) {
            acc += c as u64 * e as u64 * (ex / n) as u64;
        }
        (acc % ex as u64) as u32
    }

    pub fn characters(&self) -> Vec<Character> {
        self.elements()
    }

    /// Subgroup generated by the listed elements.
    pub fn span(&self, gens: &[GroupElt]) -> Vec<GroupElt> {
        let mut set: BTreeSet<GroupElt> = BTreeSet::new();
        set.insert(self.zero());
        loop {
            let mut grew = false;
            let current: Vec<GroupElt> = set.iter().cloned().collect();
            for e in &current {
                for g in gens {
                    let s = self.add(e, g);
                    if set.insert(s) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set.into_iter().collect();
            }
        }
    }

    pub fn is_cyclic_subgroup(&self, elems: &[GroupElt]) -> bool {
        elems
            .iter()
            .any(|g| self.span(std::slice::from_ref(g)).len() == elems.len())
    }
}

/// Action of one group generator on the Cox generators: a permutation with
/// a scalar exponent (over the group exponent) per generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenAction {
    pub perm: Vec<usize>,
    pub scalars: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ramification {
    pub downstairs_class: DivClass,
    pub index: u32,
    pub upstairs_class: DivClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub label: String,
    pub stabilizer_gens: Vec<GroupElt>,
    /// One character per ramification divisor: the action on the fiber of
    /// O(-D~_i) at the point (trivial when the divisor misses the point).
    pub chars: Vec<Character>,
}

pub struct CoverModel {
    pub group: FiniteAbelianGroup,
    pub upstairs: SurfaceModel,
    pub ring: CoxRing,
    /// One Picard matrix per group generator (columns are basis images).
    pub pic_action: Vec<Vec<Vec<i64>>>,
    pub cox_action: Vec<GenAction>,
    pub ramification: Vec<Ramification>,
    pub singular_points: Vec<SingularPoint>,
    /// Asserts equivariant structures for non-cyclic stabilizers.
    pub assert_equivariant: bool,
}

impl CoverModel {
    pub fn validate(&self) -> Result<()> {
        let k = self.group.orders.len();
        if self.pic_action.len() != k || self.cox_action.len() != k {
            return Err(Error::MissingData(
                "one Picard matrix and Cox action per group generator".into(),
            ));
        }
        let rank = self.upstairs.rank();
        let ex = self.group.exponent();
        for (j, m) in self.pic_action.iter().enumerate() {
            if m.len() != rank || m.iter().any(|row| row.len() != rank) {
                return Err(Error::Input("Picard action matrix has wrong shape".into()));
            }
            // intersection form and canonical class preserved
            for a in 0..rank {
                for b in 0..rank {
                    let ea = unit_class(rank, a);
                    let eb = unit_class(rank, b);
                    let ia = apply_matrix(m, &ea);
                    let ib = apply_matrix(m, &eb);
                    if self.upstairs.pair(&ia, &ib) != self.upstairs.intersection_matrix[a][b] {
                        return Err(Error::Input(
                            "Picard action does not preserve the intersection form".into(),
                        ));
                    }
                }
            }
            if apply_matrix(m, &self.upstairs.canonical) != self.upstairs.canonical {
                return Err(Error::Input(
                    "Picard action does not fix the canonical class".into(),
                ));
            }
            let act = &self.cox_action[j];
            let n = self.ring.n_gens();
            if act.perm.len() != n || act.scalars.len() != n {
                return Err(Error::Input("Cox action has wrong shape".into()));
            }
            let mut seen = vec![false; n];
            for &p in &act.perm {
                if p >= n || seen[p] {
                    return Err(Error::Input("Cox action is not a permutation".into()));
                }
                seen[p] = true;
            }
            for (i, &p) in act.perm.iter().enumerate() {
                let src = &self.ring.generators[i].degree;
                let dst = &self.ring.generators[p].degree;
                if apply_matrix(m, &src.pic) != dst.pic {
                    return Err(Error::Input(
                        "Cox permutation is inconsistent with generator degrees".into(),
                    ));
                }
                let order = self.group.orders[j];
                if (act.scalars[i] as u64 * order as u64) % ex as u64 != 0 {
                    return Err(Error::Input(
                        "scalar exponent incompatible with the generator order".into(),
                    ));
                }
            }
        }
        for r in &self.ramification {
            if self.group.size() as u32 % r.index != 0 {
                return Err(Error::Input(
                    "ramification index must divide the group order".into(),
                ));
            }
        }
        for sp in &self.singular_points {
            if sp.chars.len() != self.ramification.len() {
                return Err(Error::MissingData(format!(
                    "singular point {} needs one character per ramification divisor",
                    sp.label
                )));
            }
        }
        Ok(())
    }

    pub fn act_pic(&self, g: &GroupElt, cls: &DivClass) -> DivClass {
        let mut out = cls.clone();
        for (j, &e) in g.iter().enumerate() {
            for _ in 0..e {
                out = apply_matrix(&self.pic_action[j], &out);
            }
        }
        out
    }

    /// Action on a monomial: the permuted monomial and a scalar exponent.
    pub fn act_monomial(&self, g: &GroupElt, m: &[u32]) -> (u32, Vec<u32>) {
        let ex = self.group.exponent();
        let mut scalar: u64 = 0;
        let mut cur = m.to_vec();
        for (j, &e) in g.iter().enumerate() {
            let act = &self.cox_action[j];
            for _ in 0..e {
                let mut next = vec![0u32; cur.len()];
                for (i, &ei) in cur.iter().enumerate() {
                    if ei == 0 {
                        continue;
                    }
                    scalar += act.scalars[i] as u64 * ei as u64;
                    next[act.perm[i]] += ei;
                }
                cur = next;
            }
        }
        ((scalar % ex as u64) as u32, cur)
    }

    /// Condition (*): at every singular point of the branch union, the
    /// recorded characters generate the stabilizer's character group.
    pub fn star_condition(&self) -> Result<(bool, Vec<String>)> {
        self.validate()?;
        let mut witnesses = Vec::new();
        let mut ok = true;
        for sp in &self.singular_points {
            let h = self.group.span(&sp.stabilizer_gens);
            // the characters generate H^ iff their common kernel in H is 0
            let kernel: Vec<&GroupElt> = h
                .iter()
                .filter(|g| {
                    sp.chars
                        .iter()
                        .all(|chi| self.group.pairing(chi, g) == 0)
                })
                .collect();
            if kernel.len() > 1 {
                ok = false;
                witnesses.push(format!(
                    "point {}: characters annihilate a subgroup of order {}",
                    sp.label,
                    kernel.len()
                ));
            }
        }
        Ok((ok, witnesses))
    }

    pub fn stabilizer(&self, cls: &DivClass) -> Vec<GroupElt> {
        self.group
            .elements()
            .into_iter()
            .filter(|g| &self.act_pic(g, cls) == cls)
            .collect()
    }

    pub fn orbit(&self, cls: &DivClass) -> Vec<DivClass> {
        let mut set: BTreeSet<DivClass> = BTreeSet::new();
        for g in self.group.elements() {
            set.insert(self.act_pic(&g, cls));
        }
        set.into_iter().collect()
    }

    /// Decomposition of the induced module of a line bundle class: one
    /// indecomposable of rank [G:H] per character of the stabilizer H,
    /// attached to the lexicographically least class in the orbit.
    pub fn induce_decompose(&self, cls: &DivClass) -> Result<Vec<InducedSummand>> {
        let orbit = self.orbit(cls);
        let rep = orbit[0].clone();
        let stab = self.stabilizer(&rep);
        let h_order = stab.len();
        if h_order > 1
            && !self.group.is_cyclic_subgroup(&stab)
            && !self.assert_equivariant
        {
            return Err(Error::NoEquivariantStructure);
        }
        let rank = (self.group.size() / h_order) as u64;
        // characters of H = G-characters modulo equal restriction
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut out = Vec::new();
        for chi in self.group.characters() {
            let restriction: Vec<u32> = stab
                .iter()
                .map(|g| self.group.pairing(&chi, g))
                .collect();
            if seen.insert(restriction) {
                out.push(InducedSummand {
                    orbit_rep: rep.clone(),
                    character: chi,
                    stab_order: h_order as u64,
                    rank,
                });
            }
        }
        out.sort();
        Ok(out)
    }

    /// Isotypic dimensions of the graded piece of an invariant class
    /// difference, keyed by group character.
    pub fn isotypic_dims(&self, degree: &DivClass) -> BTreeMap<Character, u64> {
        let piece = self
            .ring
            .graded_basis(&LClass::integral(degree.clone(), 0));
        let mut out: BTreeMap<Character, u64> = BTreeMap::new();
        let mut done: BTreeSet<Vec<u32>> = BTreeSet::new();
        let elements = self.group.elements();
        for m in &piece.basis {
            if done.contains(m) {
                continue;
            }
            // orbit of the monomial and the scalar character on its stabilizer
            let mut orbit: BTreeSet<Vec<u32>> = BTreeSet::new();
            let mut stab_scalars: Vec<(&GroupElt, u32)> = Vec::new();
            for g in &elements {
                let (s, mg) = self.act_monomial(g, m);
                if &mg == m {
                    stab_scalars.push((g, s));
                }
                orbit.insert(mg);
            }
            for o in &orbit {
                done.insert(o.clone());
            }
            for chi in self.group.characters() {
                let matches = stab_scalars
                    .iter()
                    .all(|(g, s)| self.group.pairing(&chi, g) == *s);
                if matches {
                    *out.entry(chi).or_insert(0) += 1;
                }
            }
        }
        out
    }

    /// The chi^-1 chi'-isotypic dimension of H^0(O(D' - D)) for invariant
    /// classes D, D'.
    pub fn induced_hom_dims(
        &self,
        d: &DivClass,
        chi: &Character,
        d2: &DivClass,
        chi2: &Character,
    ) -> Result<u64> {
        for cls in [d, d2] {
            if self.stabilizer(cls).len() != self.group.size() {
                return Err(Error::NotInvariant);
            }
        }
        let diff = d2.sub(d);
        let target: Character = chi2
            .iter()
            .zip(chi)
            .zip(&self.group.orders)
            .map(|((&a, &b), &n)| (a + n - b) % n)
            .collect();
        Ok(self
            .isotypic_dims(&diff)
            .get(&target)
            .copied()
            .unwrap_or(0))
    }

    /// Hom dimension between two induced summands. Full-stabilizer pairs go
    /// through isotypic pieces; free-orbit pairs through orbit sums.
    pub fn pair_hom(&self, a: &InducedSummand, b: &InducedSummand) -> Result<u64> {
        let n = self.group.size() as u64;
        let h0 = |cls: &DivClass| -> Result<u64> {
            Ok(cohomology(&self.upstairs, cls)?.h0)
        };
        match (a.stab_order == n, b.stab_order == n) {
            (true, true) => {
                self.induced_hom_dims(&a.orbit_rep, &a.character, &b.orbit_rep, &b.character)
            }
            (true, false) if b.stab_order == 1 => {
                // blocks permuted freely: every character appears once per
                // orbit of (block, monomial) pairs
                let mut total = 0u64;
                for g in self.group.elements() {
                    total += h0(&self.act_pic(&g, &b.orbit_rep).sub(&a.orbit_rep))?;
                }
                debug_assert_eq!(total % n, 0);
                Ok(total / n)
            }
            (false, _) if a.stab_order == 1 => {
                // Hom out of a fully induced module is plain sheaf Hom into
                // the block sum of the target
                let blocks: Vec<DivClass> = if b.stab_order == n {
                    vec![b.orbit_rep.clone()]
                } else if b.stab_order == 1 {
                    self.group
                        .elements()
                        .iter()
                        .map(|g| self.act_pic(g, &b.orbit_rep))
                        .collect()
                } else {
                    return Err(Error::Input(
                        "intermediate stabilizers are not supported in Hom tables".into(),
                    ));
                };
                let mut total = 0u64;
                for cls in blocks {
                    total += h0(&cls.sub(&a.orbit_rep))?;
                }
                Ok(total)
            }
            _ => Err(Error::Input(
                "intermediate stabilizers are not supported in Hom tables".into(),
            )),
        }
    }

    /// Induces a G-stable upstairs candidate downstairs: orbit dedup, then
    /// decomposition; returns the basic summand list and its Hom table.
    pub fn induced_tilting(&self, t: &TiltingCandidate) -> Result<InducedCandidate> {
        let classes: Vec<DivClass> = t
            .summands
            .iter()
            .map(|s| match s {
                Summand::Line(l) if l.frac.is_empty() => Ok(l.pic.clone()),
                _ => Err(Error::Input(
                    "induction starts from unweighted line bundles upstairs".into(),
                )),
            })
            .collect::<Result<_>>()?;
        let set: BTreeSet<DivClass> = classes.iter().cloned().collect();
        for cls in &classes {
            for g in self.group.elements() {
                let img = self.act_pic(&g, cls);
                if !set.contains(&img) {
                    return Err(Error::NotGStable(format!(
                        "orbit of {cls:?} leaves the summand list at {img:?}"
                    )));
                }
            }
        }
        let mut reps: BTreeSet<DivClass> = BTreeSet::new();
        for cls in &classes {
            reps.insert(self.orbit(cls)[0].clone());
        }
        let mut summands = Vec::new();
        for rep in reps {
            summands.extend(self.induce_decompose(&rep)?);
        }
        summands.sort();
        let k = summands.len();
        let mut hom = vec![vec![0i64; k]; k];
        for (i, a) in summands.iter().enumerate() {
            for (j, b) in summands.iter().enumerate() {
                hom[i][j] = self.pair_hom(a, b)? as i64;
            }
        }
        // upstairs Ext^{1,2} vanish across the orbit sums, so the Euler
        // matrix downstairs is the Hom table
        let det = int_det(&hom);
        let unimodular = num::Signed::abs(&det) == num::BigInt::from(1);
        Ok(InducedCandidate {
            summands,
            hom_table: hom,
            determinant: det.to_string(),
            unimodular,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InducedSummand {
    pub orbit_rep: DivClass,
    pub character: Character,
    pub stab_order: u64,
    pub rank: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedCandidate {
    pub summands: Vec<InducedSummand>,
    pub hom_table: Vec<Vec<i64>>,
    pub determinant: String,
    pub unimodular: bool,
}

fn unit_class(rank: usize, i: usize) -> DivClass {
    let mut v = vec![0i64; rank];
    v[i] = 1;
    DivClass(v)
}

fn apply_matrix(m: &[Vec<i64>], v: &DivClass) -> DivClass {
    let rank = m.len();
    let mut out = vec![0i64; rank];
    for (j, &c) in v.0.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for i in 0..rank {
            out[i] += m[i][j] * c;
        }
    }
    DivClass(out)
}
