//! Presented (two-term) bundles and their Ext groups via long exact
//! sequences with multiplication-matrix connecting ranks.
//!
//! A presented bundle is either the kernel of a surjection onto a line
//! bundle or the cokernel of an injection from one, with the middle term a
//! sum of line bundles and the map given by ring elements. Ext groups
//! against lines and against each other are solved from the induced long
//! exact sequences; the only ranks ever computed are of explicit
//! multiplication matrices on graded pieces (or their Serre duals), and the
//! solver refuses when exactness leaves a rank genuinely ambiguous.

use num::Zero;

use crate::cohom::CohomologyVector;
use crate::cox::{CoxRing, GradedPiece, Poly};
use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::rat::Q;
use crate::wps::LClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresentationSide {
    /// 0 -> P -> (+) mid --entries--> end -> 0
    KernelOfSurjection,
    /// 0 -> end --entries--> (+) mid -> P -> 0
    CokernelOfInjection,
}

#[derive(Debug, Clone)]
pub struct PresentedBundle {
    pub name: String,
    pub side: PresentationSide,
    pub mid: Vec<LClass>,
    pub end: LClass,
    /// One ring element per middle summand, of degree end - mid_k (kernel
    /// side) or mid_k - end (cokernel side).
    pub entries: Vec<Poly>,
}

impl PresentedBundle {
    pub fn rank(&self) -> usize {
        self.mid.len() - 1
    }

    pub fn twist(&self, ring: &CoxRing, tau: &LClass) -> PresentedBundle {
        let w = &ring.surface;
        PresentedBundle {
            name: self.name.clone(),
            side: self.side,
            mid: self.mid.iter().map(|m| w.add(m, tau)).collect(),
            end: w.add(&self.end, tau),
            entries: self.entries.clone(),
        }
    }
}

/// The rank-3 bundle presented as the kernel of (+) O(H + H_i/2) -> O(2H).
pub fn builtin_omega(ring: &CoxRing) -> PresentedBundle {
    let w = &ring.surface;
    let n = ring.n_gens();
    let mid = (0..4)
        .map(|i| {
            let mut frac = vec![0i64; 4];
            frac[i] = 1;
            w.normalize(crate::picard::DivClass(vec![1]), frac)
        })
        .collect();
    PresentedBundle {
        name: "omega".into(),
        side: PresentationSide::KernelOfSurjection,
        mid,
        end: LClass::integral(crate::picard::DivClass(vec![2]), 4),
        entries: (0..4).map(|i| Poly::generator(i, n)).collect(),
    }
}

/// The rank-3 bundle presented as the cokernel of O -> (+) O(H_i/2).
pub fn builtin_xi(ring: &CoxRing) -> PresentedBundle {
    let w = &ring.surface;
    let n = ring.n_gens();
    let mid = (0..4)
        .map(|i| {
            let mut frac = vec![0i64; 4];
            frac[i] = 1;
            w.normalize(crate::picard::DivClass(vec![0]), frac)
        })
        .collect();
    PresentedBundle {
        name: "xi".into(),
        side: PresentationSide::CokernelOfInjection,
        mid,
        end: w.zero(),
        entries: (0..4).map(|i| Poly::generator(i, n)).collect(),
    }
}

#[derive(Debug, Clone, Copy)]
struct Col {
    hom: i64,
    ext1: i64,
    ext2: i64,
}

impl From<&CohomologyVector> for Col {
    fn from(v: &CohomologyVector) -> Col {
        Col {
            hom: v.h0 as i64,
            ext1: v.h1 as i64,
            ext2: v.h2 as i64,
        }
    }
}

fn to_vector(c: Col) -> CohomologyVector {
    assert!(
        c.hom >= 0 && c.ext1 >= 0 && c.ext2 >= 0,
        "negative dimension in LES solve"
    );
    CohomologyVector::new(c.hom as u64, c.ext1 as u64, c.ext2 as u64)
}

fn rank_zero_side(a: i64, b: i64, what: &str) -> Result<i64> {
    if a == 0 || b == 0 {
        Ok(0)
    } else {
        Err(Error::AmbiguousRank(format!(
            "{what}: both sides nonzero ({a}, {b})"
        )))
    }
}

/// Exact 0 -> A -> B -> C -> ... -> ext2(C) -> 0 with A, B known:
/// determines C given the ranks ext1(A)->ext1(B) and ext2(A)->ext2(B).
fn solve_third(a: Col, b: Col, r4: i64, r7: i64) -> Col {
    let r1 = a.hom;
    let r2 = b.hom - r1;
    let r3 = a.ext1 - r4;
    let r5 = b.ext1 - r4;
    let r6 = a.ext2 - r7;
    let r8 = b.ext2 - r7;
    assert!(
        r2 >= 0 && r3 >= 0 && r5 >= 0 && r6 >= 0 && r8 >= 0,
        "inconsistent LES data"
    );
    Col {
        hom: r2 + r3,
        ext1: r5 + r6,
        ext2: r8,
    }
}

/// Exact 0 -> A -> B -> C -> ... -> ext2(C) -> 0 with B, C known:
/// determines A given the ranks hom(B)->hom(C) and ext1(B)->ext1(C).
fn solve_first(b: Col, c: Col, r2: i64, r5: i64) -> Col {
    let r1 = b.hom - r2;
    let r3 = c.hom - r2;
    let r4 = b.ext1 - r5;
    let r6 = c.ext1 - r5;
    let r8 = c.ext2;
    let r7 = b.ext2 - r8;
    assert!(
        r1 >= 0 && r3 >= 0 && r4 >= 0 && r6 >= 0 && r7 >= 0,
        "inconsistent LES data"
    );
    Col {
        hom: r1,
        ext1: r3 + r4,
        ext2: r6 + r7,
    }
}

fn line_col(ring: &CoxRing, a: &LClass, b: &LClass) -> Result<Col> {
    Ok(Col::from(&ring.surface.ext_dims(a, b)?))
}

fn sum_cols(cols: Vec<Col>) -> Col {
    cols.into_iter().fold(
        Col {
            hom: 0,
            ext1: 0,
            ext2: 0,
        },
        |x, y| Col {
            hom: x.hom + y.hom,
            ext1: x.ext1 + y.ext1,
            ext2: x.ext2 + y.ext2,
        },
    )
}

/// Stacks per-summand multiplication matrices into one block row.
fn stacked_mult(
    ring: &CoxRing,
    pairs: &[(GradedPiece, &Poly)],
    to: &GradedPiece,
) -> QMat {
    let cols: usize = pairs.iter().map(|(p, _)| p.dimension()).sum();
    let mut big = QMat::zeros(to.dimension(), cols);
    let mut off = 0;
    for (from, entry) in pairs {
        let m = ring.mult_matrix(entry, from, to);
        for i in 0..m.rows {
            for j in 0..m.cols {
                big.set(i, off + j, m.at(i, j).clone());
            }
        }
        off += m.cols;
    }
    big
}

/// Ext^*(P, O(beta)).
pub fn ext_presented_line(
    ring: &CoxRing,
    p: &PresentedBundle,
    beta: &LClass,
) -> Result<CohomologyVector> {
    let w = &ring.surface;
    match p.side {
        PresentationSide::KernelOfSurjection => {
            // 0 -> Hom(M,b) -> Hom(+S,b) -> Hom(P,b) -> ...
            let a = line_col(ring, &p.end, beta)?;
            let b = sum_cols(
                p.mid
                    .iter()
                    .map(|s| line_col(ring, s, beta))
                    .collect::<Result<_>>()?,
            );
            let r4 = rank_zero_side(a.ext1, b.ext1, "ext1(end,beta) -> ext1(mid,beta)")?;
            let r7 = if a.ext2 == 0 || b.ext2 == 0 {
                0
            } else {
                // Serre dual: multiplication Hom(b, S_k + K_A) -> Hom(b, M + K_A)
                let ka = w.k_a();
                let to = ring.graded_basis(&w.sub(&w.add(&p.end, &ka), beta));
                let pairs: Vec<(GradedPiece, &Poly)> = p
                    .mid
                    .iter()
                    .zip(&p.entries)
                    .map(|(s, e)| (ring.graded_basis(&w.sub(&w.add(s, &ka), beta)), e))
                    .collect();
                stacked_mult(ring, &pairs, &to).rank() as i64
            };
            Ok(to_vector(solve_third(a, b, r4, r7)))
        }
        PresentationSide::CokernelOfInjection => {
            // 0 -> Hom(P,b) -> Hom(+S,b) -> Hom(N,b) -> ...
            let b = sum_cols(
                p.mid
                    .iter()
                    .map(|s| line_col(ring, s, beta))
                    .collect::<Result<_>>()?,
            );
            let c = line_col(ring, &p.end, beta)?;
            let to = ring.graded_basis(&w.sub(beta, &p.end));
            let pairs: Vec<(GradedPiece, &Poly)> = p
                .mid
                .iter()
                .zip(&p.entries)
                .map(|(s, e)| (ring.graded_basis(&w.sub(beta, s)), e))
                .collect();
            let r2 = stacked_mult(ring, &pairs, &to).rank() as i64;
            let r5 = rank_zero_side(b.ext1, c.ext1, "ext1(mid,beta) -> ext1(end,beta)")?;
            Ok(to_vector(solve_first(b, c, r2, r5)))
        }
    }
}

/// Ext^*(O(beta), P).
pub fn ext_line_presented(
    ring: &CoxRing,
    beta: &LClass,
    p: &PresentedBundle,
) -> Result<CohomologyVector> {
    let w = &ring.surface;
    match p.side {
        PresentationSide::KernelOfSurjection => {
            // 0 -> Hom(b,P) -> Hom(b,+S) -> Hom(b,M) -> ...
            let b = sum_cols(
                p.mid
                    .iter()
                    .map(|s| line_col(ring, beta, s))
                    .collect::<Result<_>>()?,
            );
            let c = line_col(ring, beta, &p.end)?;
            let to = ring.graded_basis(&w.sub(&p.end, beta));
            let pairs: Vec<(GradedPiece, &Poly)> = p
                .mid
                .iter()
                .zip(&p.entries)
                .map(|(s, e)| (ring.graded_basis(&w.sub(s, beta)), e))
                .collect();
            let r2 = stacked_mult(ring, &pairs, &to).rank() as i64;
            let r5 = rank_zero_side(b.ext1, c.ext1, "ext1(beta,mid) -> ext1(beta,end)")?;
            Ok(to_vector(solve_first(b, c, r2, r5)))
        }
        PresentationSide::CokernelOfInjection => {
            // 0 -> Hom(b,N) -> Hom(b,+S) -> Hom(b,P) -> ...
            let a = line_col(ring, beta, &p.end)?;
            let b = sum_cols(
                p.mid
                    .iter()
                    .map(|s| line_col(ring, beta, s))
                    .collect::<Result<_>>()?,
            );
            let r4 = rank_zero_side(a.ext1, b.ext1, "ext1(beta,end) -> ext1(beta,mid)")?;
            let r7 = if a.ext2 == 0 || b.ext2 == 0 {
                0
            } else {
                // Serre dual: multiplication Hom(S_k, b + K_A) -> Hom(N, b + K_A)
                let ka = w.k_a();
                let target = w.add(beta, &ka);
                let to = ring.graded_basis(&w.sub(&target, &p.end));
                let pairs: Vec<(GradedPiece, &Poly)> = p
                    .mid
                    .iter()
                    .zip(&p.entries)
                    .map(|(s, e)| (ring.graded_basis(&w.sub(&target, s)), e))
                    .collect();
                stacked_mult(ring, &pairs, &to).rank() as i64
            };
            Ok(to_vector(solve_third(a, b, r4, r7)))
        }
    }
}

/// Basis of Hom(O(d), P) for a kernel-type P, as vectors over the ambient
/// concatenated graded pieces of the middle term.
fn kernel_hom_space(
    ring: &CoxRing,
    d: &LClass,
    p: &PresentedBundle,
) -> (Vec<GradedPiece>, Vec<Vec<Q>>) {
    assert_eq!(p.side, PresentationSide::KernelOfSurjection);
    let w = &ring.surface;
    let to = ring.graded_basis(&w.sub(&p.end, d));
    let pieces: Vec<GradedPiece> = p
        .mid
        .iter()
        .map(|s| ring.graded_basis(&w.sub(s, d)))
        .collect();
    let pairs: Vec<(GradedPiece, &Poly)> = pieces
        .iter()
        .cloned()
        .zip(p.entries.iter())
        .collect();
    let big = stacked_mult(ring, &pairs, &to);
    let kernel = big.kernel_basis();
    (pieces, kernel)
}

/// Data of the lifting check for Hom(iota, P'): the cokernel of
/// (+) Hom(O(mid_i), P') -> Hom(O(end), P') for a cokernel-type source.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SyzygyCheck {
    pub target_dim: usize,
    pub image_rank: usize,
    pub coker: usize,
}

/// Rank data of Hom(iota, P') where `xi` is cokernel-type and `p` is
/// kernel-type: every syzygy vector against p's entries must lie in the
/// module generated by entry-multiples of the syzygies one degree up.
pub fn syzygy_liftability(ring: &CoxRing, xi: &PresentedBundle, p: &PresentedBundle) -> SyzygyCheck {
    assert_eq!(xi.side, PresentationSide::CokernelOfInjection);
    let w = &ring.surface;
    let (target_pieces, target_kernel) = kernel_hom_space(ring, &xi.end, p);
    let target_dim = target_kernel.len();
    let target_cols: usize = target_pieces.iter().map(|q| q.dimension()).sum();
    let mut images: Vec<Vec<Q>> = Vec::new();
    for (s, entry) in xi.mid.iter().zip(&xi.entries) {
        let (src_pieces, src_kernel) = kernel_hom_space(ring, s, p);
        if src_kernel.is_empty() {
            continue;
        }
        let blocks: Vec<QMat> = p
            .mid
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let to = ring.graded_basis(&w.sub(a, &xi.end));
                debug_assert_eq!(to.basis, target_pieces[j].basis);
                ring.mult_matrix(entry, &src_pieces[j], &to)
            })
            .collect();
        for v in &src_kernel {
            let mut img = vec![Q::zero(); target_cols];
            let mut src_off = 0;
            let mut dst_off = 0;
            for (j, b) in blocks.iter().enumerate() {
                for row in 0..b.rows {
                    let mut acc = Q::zero();
                    for col in 0..b.cols {
                        acc += b.at(row, col) * &v[src_off + col];
                    }
                    img[dst_off + row] = acc;
                }
                src_off += src_pieces[j].dimension();
                dst_off += b.rows;
            }
            images.push(img);
        }
    }
    let image_rank = if images.is_empty() {
        0
    } else {
        QMat::from_rows(images).rank()
    };
    SyzygyCheck {
        target_dim,
        image_rank,
        coker: target_dim - image_rank,
    }
}

/// Ext^*(A, B) for two presented bundles.
pub fn ext_presented_presented(
    ring: &CoxRing,
    a: &PresentedBundle,
    b: &PresentedBundle,
) -> Result<CohomologyVector> {
    use PresentationSide::*;
    match (a.side, b.side) {
        (CokernelOfInjection, KernelOfSurjection) => {
            // contravariant on a's presentation 0 -> N -> +S -> A -> 0:
            // 0 -> Hom(A,B) -> Hom(+S,B) -> Hom(N,B) -> Ext1(A,B) -> ...
            let bcol = sum_cols(
                a.mid
                    .iter()
                    .map(|s| ext_line_presented(ring, s, b).map(|v| Col::from(&v)))
                    .collect::<Result<_>>()?,
            );
            let ccol = Col::from(&ext_line_presented(ring, &a.end, b)?);
            let syz = syzygy_liftability(ring, a, b);
            let r2 = syz.image_rank as i64;
            let r5 = rank_zero_side(bcol.ext1, ccol.ext1, "ext1(mid,B) -> ext1(end,B)")?;
            Ok(to_vector(solve_first(bcol, ccol, r2, r5)))
        }
        (KernelOfSurjection, _) => {
            // contravariant on a's presentation 0 -> A -> +S -> M -> 0:
            // columns vs B known, A the unknown third.
            let acol = Col::from(&ext_line_or_presented(ring, &a.end, b)?);
            let bcol = sum_cols(
                a.mid
                    .iter()
                    .map(|s| ext_line_or_presented(ring, s, b).map(|v| Col::from(&v)))
                    .collect::<Result<_>>()?,
            );
            let r4 = rank_zero_side(acol.ext1, bcol.ext1, "ext1(end,B) -> ext1(mid,B)")?;
            let r7 = rank_zero_side(acol.ext2, bcol.ext2, "ext2(end,B) -> ext2(mid,B)")?;
            Ok(to_vector(solve_third(acol, bcol, r4, r7)))
        }
        (CokernelOfInjection, CokernelOfInjection) => {
            // covariant on b's presentation 0 -> N' -> +S' -> B -> 0:
            // columns Hom/Ext(A, N') and Hom/Ext(A, +S') known, B third.
            let acol = Col::from(&ext_presented_line(ring, a, &b.end)?);
            let bcol = sum_cols(
                b.mid
                    .iter()
                    .map(|s| ext_presented_line(ring, a, s).map(|v| Col::from(&v)))
                    .collect::<Result<_>>()?,
            );
            let r4 = rank_zero_side(acol.ext1, bcol.ext1, "ext1(A,N') -> ext1(A,mid')")?;
            let r7 = rank_zero_side(acol.ext2, bcol.ext2, "ext2(A,N') -> ext2(A,mid')")?;
            Ok(to_vector(solve_third(acol, bcol, r4, r7)))
        }
    }
}

fn ext_line_or_presented(
    ring: &CoxRing,
    line: &LClass,
    b: &PresentedBundle,
) -> Result<CohomologyVector> {
    ext_line_presented(ring, line, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cox::builtin_cox;
    use crate::picard::{build_surface, DivClass, SurfaceKind};
    use crate::wps::WeightedSurface;

    fn four_line_ring() -> CoxRing {
        let base = build_surface(SurfaceKind::ProjectivePlane).unwrap();
        let w = WeightedSurface::new(base, vec![(DivClass(vec![1]), 2); 4]).unwrap();
        builtin_cox(&w).unwrap()
    }

    fn interval_classes(ring: &CoxRing) -> Vec<LClass> {
        let w = &ring.surface;
        let mut out = vec![w.zero()];
        for i in 0..4 {
            let mut f = vec![0i64; 4];
            f[i] = 1;
            out.push(w.normalize(DivClass(vec![0]), f));
        }
        out.push(LClass::integral(DivClass(vec![1]), 4));
        for i in 0..4 {
            for j in i + 1..4 {
                let mut f = vec![0i64; 4];
                f[i] = 1;
                f[j] = 1;
                out.push(w.normalize(DivClass(vec![0]), f));
            }
        }
        for i in 0..4 {
            let mut f = vec![0i64; 4];
            f[i] = 1;
            out.push(w.normalize(DivClass(vec![1]), f));
        }
        out.push(LClass::integral(DivClass(vec![2]), 4));
        out
    }

    #[test]
    fn interval_has_17_line_classes() {
        let ring = four_line_ring();
        let mut cls = interval_classes(&ring);
        assert_eq!(cls.len(), 17);
        cls.sort();
        cls.dedup();
        assert_eq!(cls.len(), 17);
    }

    #[test]
    fn omega_hom_and_ext_against_interval() {
        let ring = four_line_ring();
        let w = ring.surface.clone();
        let omega = builtin_omega(&ring);
        let ka = w.k_a();
        for d in interval_classes(&ring) {
            for r in 0..=3i64 {
                let twist = w.scale(&ka, -r);
                let om = omega.twist(&ring, &twist);
                let v = ext_line_presented(&ring, &d, &om).unwrap();
                let expect1 =
                    u64::from(r == 0 && d.pic == DivClass(vec![2]) && d.frac == [0; 4]);
                assert_eq!(v.h1, expect1, "Ext1(O({d:?}), Omega(-{r}K))");
                assert_eq!(v.h2, 0, "Ext2(O({d:?}), Omega(-{r}K))");

                // Ext(Omega, O(D - rK)), with the twist shifted onto the
                // target; the twisted-source route must agree by invariance.
                let target = w.add(&d, &twist);
                let v2 = ext_presented_line(&ring, &omega, &target).unwrap();
                let v3 = ext_presented_line(&ring, &om, &w.add(&target, &twist)).unwrap();
                assert_eq!(v2, v3, "twist invariance for Omega");
                let expect1 =
                    u64::from(r == 1 && d.pic == DivClass(vec![0]) && d.frac == [0; 4]);
                assert_eq!(v2.h1, expect1, "Ext1(Omega, O({d:?} - {r}K))");
                assert_eq!(v2.h2, 0);
            }
        }
    }

    #[test]
    fn xi_hom_and_ext_against_interval() {
        let ring = four_line_ring();
        let w = ring.surface.clone();
        let xi = builtin_xi(&ring);
        let ka = w.k_a();
        for d in interval_classes(&ring) {
            for r in 0..=3i64 {
                let twist = w.scale(&ka, -r);
                let target = w.add(&d, &twist);
                let v = ext_presented_line(&ring, &xi, &target).unwrap();
                let expect1 =
                    u64::from(r == 0 && d.pic == DivClass(vec![0]) && d.frac == [0; 4]);
                assert_eq!(v.h1, expect1, "Ext1(Xi, O({d:?} - {r}K))");
                assert_eq!(v.h2, 0);

                let xi_tw = xi.twist(&ring, &twist);
                let v = ext_line_presented(&ring, &d, &xi_tw).unwrap();
                let expect1 =
                    u64::from(r == 1 && d.pic == DivClass(vec![2]) && d.frac == [0; 4]);
                assert_eq!(v.h1, expect1, "Ext1(O({d:?}), Xi(-{r}K))");
                assert_eq!(v.h2, 0);
            }
        }
    }

    #[test]
    fn presented_pairs_vanish() {
        let ring = four_line_ring();
        let w = ring.surface.clone();
        let omega = builtin_omega(&ring);
        let xi = builtin_xi(&ring);
        let ka = w.k_a();
        for r in 0..=3i64 {
            let tw = w.scale(&ka, -r);
            let om_t = omega.twist(&ring, &tw);
            let xi_t = xi.twist(&ring, &tw);
            let v = ext_presented_presented(&ring, &omega, &om_t).unwrap();
            assert_eq!((v.h1, v.h2), (0, 0), "Ext(Omega, Omega(-{r}K))");
            let v = ext_presented_presented(&ring, &xi, &xi_t).unwrap();
            assert_eq!((v.h1, v.h2), (0, 0), "Ext(Xi, Xi(-{r}K))");
            let v = ext_presented_presented(&ring, &omega, &xi_t).unwrap();
            assert_eq!((v.h1, v.h2), (0, 0), "Ext(Omega, Xi(-{r}K))");
            let v = ext_presented_presented(&ring, &xi, &om_t).unwrap();
            assert_eq!((v.h1, v.h2), (0, 0), "Ext(Xi, Omega(-{r}K))");
        }
    }

    #[test]
    fn syzygy_lifting_holds_in_window() {
        let ring = four_line_ring();
        let w = ring.surface.clone();
        let omega = builtin_omega(&ring);
        let xi = builtin_xi(&ring);
        let ka = w.k_a();
        for r in 0..=4i64 {
            let om_t = omega.twist(&ring, &w.scale(&ka, -r));
            let syz = syzygy_liftability(&ring, &xi, &om_t);
            assert_eq!(syz.coker, 0, "liftability at r = {r}: {syz:?}");
        }
    }

    #[test]
    fn split_presentation_matches_sum_of_lines() {
        let ring = four_line_ring();
        let w = ring.surface.clone();
        let mid: Vec<LClass> = (0..2)
            .map(|i| {
                let mut f = vec![0i64; 4];
                f[i] = 1;
                w.normalize(DivClass(vec![1]), f)
            })
            .collect();
        // kernel of ((0,0,id)): the bundle splits as the two line summands
        let split = PresentedBundle {
            name: "split".into(),
            side: PresentationSide::KernelOfSurjection,
            mid: {
                let mut m = mid.clone();
                m.push(LClass::integral(DivClass(vec![3]), 4));
                m
            },
            end: LClass::integral(DivClass(vec![3]), 4),
            entries: vec![Poly::zero(), Poly::zero(), Poly::monomial(vec![0, 0, 0, 0])],
        };
        for d in [w.zero(), LClass::integral(DivClass(vec![1]), 4)] {
            let v = ext_line_presented(&ring, &d, &split).unwrap();
            let a = ring.surface.ext_dims(&d, &mid[0]).unwrap();
            let b = ring.surface.ext_dims(&d, &mid[1]).unwrap();
            assert_eq!((v.h0, v.h1, v.h2), (a.h0 + b.h0, a.h1 + b.h1, a.h2 + b.h2));
        }
    }
}
