//! Builtin Galois covers: the ruling swap on P1 x P1 (plain and blown up at
//! a generic orbit) and the (Z/p)^2 torus covers of plane blowups whose
//! branch polygons have i + 3 lines.

use crate::cox::builtin_cox;
use crate::error::Result;
use crate::picard::{build_surface, DivClass, PointConfiguration, SurfaceKind};
use crate::skewgroup::{
    CoverModel, FiniteAbelianGroup, GenAction, Ramification, SingularPoint,
};
use crate::tilting::TiltingCandidate;
use crate::wps::{LClass, WeightedSurface};

/// Z/2 swapping the rulings of P1 x P1; the quotient is the plane weighted
/// by 1/2 on a smooth conic.
pub fn swap_cover() -> Result<CoverModel> {
    let upstairs = build_surface(SurfaceKind::P1xP1)?;
    let ring = builtin_cox(&WeightedSurface::unweighted(upstairs.clone()))?;
    let cover = CoverModel {
        group: FiniteAbelianGroup::new(vec![2])?,
        upstairs,
        ring,
        pic_action: vec![vec![vec![0, 1], vec![1, 0]]],
        // x <-> x', y <-> y'
        cox_action: vec![GenAction {
            perm: vec![2, 3, 0, 1],
            scalars: vec![0, 0, 0, 0],
        }],
        ramification: vec![Ramification {
            downstairs_class: DivClass(vec![2]),
            index: 2,
            upstairs_class: DivClass(vec![1, 1]),
        }],
        singular_points: Vec::new(),
        assert_equivariant: false,
    };
    cover.validate()?;
    Ok(cover)
}

/// The downstairs weighted surface of the swap cover: the plane with weight
/// 2 on a conic.
pub fn swap_downstairs() -> Result<WeightedSurface> {
    let p2 = build_surface(SurfaceKind::ProjectivePlane)?;
    WeightedSurface::new(p2, vec![(DivClass(vec![2]), 2)])
}

/// The swap acting on P1 x P1 blown up at a generic orbit of two points,
/// realized as the plane blown up at three general points; the involution
/// is the quadratic transformation exchanging E3 with the conic line class.
pub fn swap_cover_blown() -> Result<CoverModel> {
    let upstairs = build_surface(SurfaceKind::BlowupP2(PointConfiguration::general(3)))?;
    let ring = builtin_cox(&WeightedSurface::unweighted(upstairs.clone()))?;
    // g(H) = 2H - E1 - E2 - E3, g(E1) = H - E1 - E3,
    // g(E2) = H - E2 - E3, g(E3) = H - E1 - E2  (columns are images)
    let m = vec![
        vec![2, 1, 1, 1],
        vec![-1, -1, 0, -1],
        vec![-1, 0, -1, -1],
        vec![-1, -1, -1, 0],
    ];
    // hexagon generators e1 e2 e3 g12 g13 g23: e1 <-> g13, e2 <-> g23,
    // e3 <-> g12
    let cover = CoverModel {
        group: FiniteAbelianGroup::new(vec![2])?,
        upstairs,
        ring,
        pic_action: vec![m],
        cox_action: vec![GenAction {
            perm: vec![4, 5, 3, 2, 0, 1],
            scalars: vec![0; 6],
        }],
        ramification: vec![Ramification {
            downstairs_class: DivClass(vec![2, 0]),
            index: 2,
            upstairs_class: DivClass(vec![2, -1, -1, 0]),
        }],
        singular_points: Vec::new(),
        assert_equivariant: false,
    };
    cover.validate()?;
    Ok(cover)
}

/// Downstairs surface of the blown swap cover: the one-point blowup of the
/// plane, weighted 1/2 on the preimage of the conic.
pub fn swap_blown_downstairs() -> Result<WeightedSurface> {
    let base = build_surface(SurfaceKind::BlowupP2(PointConfiguration::general(1)))?;
    WeightedSurface::new(base, vec![(DivClass(vec![2, 0]), 2)])
}

/// (Z/p)^2 acting torically on the plane blown up at i <= 3 coordinate
/// points; the branch divisor downstairs is a polygon of i + 3 lines, each
/// with index p.
pub fn polygon_cover(p: u32, i: usize) -> Result<CoverModel> {
    assert!(i <= 3, "polygon covers are built for at most 3 blowups");
    let kind = if i == 0 {
        SurfaceKind::ProjectivePlane
    } else {
        SurfaceKind::BlowupP2(PointConfiguration::general(i))
    };
    let upstairs = build_surface(kind)?;
    let ring = builtin_cox(&WeightedSurface::unweighted(upstairs.clone()))?;
    let rank = upstairs.rank();
    let identity: Vec<Vec<i64>> = (0..rank)
        .map(|r| (0..rank).map(|c| i64::from(r == c)).collect())
        .collect();

    // characters of the coordinate functions: x -> (1,0), y -> (0,1),
    // z -> (0,0); exceptional sections are invariant-divisor sections and
    // carry the trivial character. Line j of the polygon keeps the
    // character of the coordinate it transforms like.
    let (line_chars, sing): (Vec<(String, [u32; 2])>, Vec<SingularPoint>) = match i {
        0 => {
            // generators x y z; crossings at the three coordinate points
            let chars = vec![
                ("x".into(), [1, 0]),
                ("y".into(), [0, 1]),
                ("z".into(), [0, 0]),
            ];
            let sp = |label: &str, a: usize, b: usize, c: usize| {
                // at the point opposite coordinate c, lines a and b cross;
                // local equations a/c and b/c
                let chars_at = |line: usize| -> Vec<u32> {
                    let table = [[1u32, 0], [0, 1], [0, 0]];
                    if line == a {
                        sub2(table[a], table[c], p)
                    } else if line == b {
                        sub2(table[b], table[c], p)
                    } else {
                        vec![0, 0]
                    }
                };
                SingularPoint {
                    label: label.into(),
                    stabilizer_gens: vec![vec![1, 0], vec![0, 1]],
                    chars: (0..3).map(chars_at).collect(),
                }
            };
            (chars, vec![sp("x^y", 0, 1, 2), sp("x^z", 0, 2, 1), sp("y^z", 1, 2, 0)])
        }
        _ => polygon_blowup_data(i, p),
    };
    let _ = line_chars;

    // Cox action: diagonal scalars on the generators
    let scalars_for = |gen_char: [u32; 2], factor: usize| -> u32 { gen_char[factor] % p };
    let gen_chars: Vec<[u32; 2]> = match i {
        0 => vec![[1, 0], [0, 1], [0, 0]],
        1 => vec![[0, 0], [1, 0], [0, 1], [0, 0]], // s(E), a, b, z
        2 => vec![[0, 0], [0, 0], [1, 0], [0, 1], [0, 0]], // e1 e2 g12 g1 g2
        3 => vec![[0, 0], [0, 0], [0, 0], [0, 0], [0, 1], [1, 0]], // e1 e2 e3 g12 g13 g23
        _ => unreachable!(),
    };
    let n = ring.n_gens();
    let ex = num::integer::lcm(p, p);
    let scale = ex / p;
    let cox_action: Vec<GenAction> = (0..2)
        .map(|factor| GenAction {
            perm: (0..n).collect(),
            scalars: gen_chars
                .iter()
                .map(|c| (scalars_for(*c, factor) * scale) % ex)
                .collect(),
        })
        .collect();

    let ram = polygon_lines(i)
        .into_iter()
        .map(|cls| Ramification {
            downstairs_class: cls.clone(),
            index: p,
            upstairs_class: cls,
        })
        .collect();

    let cover = CoverModel {
        group: FiniteAbelianGroup::new(vec![p, p])?,
        upstairs,
        ring,
        pic_action: vec![identity.clone(), identity],
        cox_action,
        ramification: ram,
        singular_points: sing,
        // invariant divisors generate the Picard lattice here, so every
        // line bundle carries structures for the full (non-cyclic) group
        assert_equivariant: true,
    };
    cover.validate()?;
    Ok(cover)
}

fn sub2(a: [u32; 2], b: [u32; 2], p: u32) -> Vec<u32> {
    vec![
        (a[0] as i64 - b[0] as i64).rem_euclid(p as i64) as u32,
        (a[1] as i64 - b[1] as i64).rem_euclid(p as i64) as u32,
    ]
}

/// Polygon line classes on the blown-up plane (i exceptionals plus the
/// strict transforms of the three coordinate lines).
pub fn polygon_lines(i: usize) -> Vec<DivClass> {
    let rank = 1 + i;
    let e = |k: usize| -> DivClass {
        let mut v = vec![0i64; rank];
        v[k] = 1;
        DivClass(v)
    };
    let h_minus = |idx: &[usize]| -> DivClass {
        let mut v = vec![0i64; rank];
        v[0] = 1;
        for &k in idx {
            v[k] = -1;
        }
        DivClass(v)
    };
    match i {
        0 => vec![h_minus(&[]), h_minus(&[]), h_minus(&[])],
        1 => vec![e(1), h_minus(&[1]), h_minus(&[1]), h_minus(&[])],
        2 => vec![
            e(1),
            e(2),
            h_minus(&[1, 2]),
            h_minus(&[1]),
            h_minus(&[2]),
        ],
        3 => vec![
            e(1),
            e(2),
            e(3),
            h_minus(&[2, 3]),
            h_minus(&[1, 3]),
            h_minus(&[1, 2]),
        ],
        _ => unreachable!(),
    }
}

/// Character and crossing bookkeeping for the blown-up polygon covers. The
/// blown points are torus-fixed, each exceptional curve is a ramification
/// line with trivially-acting section, and crossings pick up the local
/// coordinate characters.
fn polygon_blowup_data(i: usize, p: u32) -> (Vec<(String, [u32; 2])>, Vec<SingularPoint>) {
    // coordinate characters
    let x = [1u32, 0];
    let y = [0u32, 1];
    let z = [0u32, 0];
    // blown points: i = 1: p_z (x^y); i = 2: p_z, p_y (x^z); i = 3: all
    // line order matches polygon_lines
    let lines: Vec<(String, [u32; 2])> = match i {
        1 => vec![
            ("E1".into(), z),
            ("x~".into(), x),
            ("y~".into(), y),
            ("z".into(), z),
        ],
        2 => vec![
            ("E1".into(), z),
            ("E2".into(), z),
            ("x~".into(), x),
            ("y~".into(), y),
            ("z~".into(), z),
        ],
        3 => vec![
            ("E1".into(), z),
            ("E2".into(), z),
            ("E3".into(), z),
            ("x~".into(), x),
            ("y~".into(), y),
            ("z~".into(), z),
        ],
        _ => unreachable!(),
    };
    // crossings: each exceptional E over the point L_a ^ L_b meets the
    // strict transforms of L_a and L_b; unblown coordinate points remain as
    // plain crossings of two lines.
    let mut sing = Vec::new();
    // at E ^ strict(L_a), with E over the point L_a ^ L_b and c the
    // coordinate not vanishing there: strict L_a has local character
    // chi_a - chi_b (the chart function a/b) and E has chi_b - chi_c
    #[allow(clippy::too_many_arguments)]
    fn cross_exceptional(
        sing: &mut Vec<SingularPoint>,
        label: &str,
        e_idx: usize,
        strict_idx: usize,
        a: [u32; 2],
        b: [u32; 2],
        c: [u32; 2],
        n: usize,
        p: u32,
    ) {
        let mut chars = vec![vec![0u32, 0]; n];
        chars[strict_idx] = sub2(a, b, p);
        chars[e_idx] = sub2(b, c, p);
        sing.push(SingularPoint {
            label: label.into(),
            stabilizer_gens: vec![vec![1, 0], vec![0, 1]],
            chars,
        });
    }
    // plain crossing of lines a and b at the point opposite c
    #[allow(clippy::too_many_arguments)]
    fn cross_plain(
        sing: &mut Vec<SingularPoint>,
        label: &str,
        ia: usize,
        ib: usize,
        a: [u32; 2],
        b: [u32; 2],
        c: [u32; 2],
        n: usize,
        p: u32,
    ) {
        let mut chars = vec![vec![0u32, 0]; n];
        chars[ia] = sub2(a, c, p);
        chars[ib] = sub2(b, c, p);
        sing.push(SingularPoint {
            label: label.into(),
            stabilizer_gens: vec![vec![1, 0], vec![0, 1]],
            chars,
        });
    }
    match i {
        1 => {
            // lines: E1, x~, y~, z; E1 over p_z = x^y (third coordinate z)
            let n = 4;
            cross_exceptional(&mut sing, "E1^x~", 0, 1, x, y, z, n, p);
            cross_exceptional(&mut sing, "E1^y~", 0, 2, y, x, z, n, p);
            cross_plain(&mut sing, "x~^z", 1, 3, x, z, y, n, p);
            cross_plain(&mut sing, "y~^z", 2, 3, y, z, x, n, p);
        }
        2 => {
            // E1 over p_z = x^y, E2 over p_y = x^z
            let n = 5;
            cross_exceptional(&mut sing, "E1^x~", 0, 2, x, y, z, n, p);
            cross_exceptional(&mut sing, "E1^y~", 0, 3, y, x, z, n, p);
            cross_exceptional(&mut sing, "E2^x~", 1, 2, x, z, y, n, p);
            cross_exceptional(&mut sing, "E2^z~", 1, 4, z, x, y, n, p);
            cross_plain(&mut sing, "y~^z~", 3, 4, y, z, x, n, p);
        }
        3 => {
            // E1 over p_x = y^z, E2 over p_y = x^z, E3 over p_z = x^y
            let n = 6;
            cross_exceptional(&mut sing, "E1^y~", 0, 4, y, z, x, n, p);
            cross_exceptional(&mut sing, "E1^z~", 0, 5, z, y, x, n, p);
            cross_exceptional(&mut sing, "E2^x~", 1, 3, x, z, y, n, p);
            cross_exceptional(&mut sing, "E2^z~", 1, 5, z, x, y, n, p);
            cross_exceptional(&mut sing, "E3^x~", 2, 3, x, y, z, n, p);
            cross_exceptional(&mut sing, "E3^y~", 2, 4, y, x, z, n, p);
        }
        _ => unreachable!(),
    }
    (lines, sing)
}

/// Downstairs weighted surface of the polygon cover.
pub fn polygon_downstairs(p: u32, i: usize) -> Result<WeightedSurface> {
    let kind = if i == 0 {
        SurfaceKind::ProjectivePlane
    } else {
        SurfaceKind::BlowupP2(PointConfiguration::general(i))
    };
    let base = build_surface(kind)?;
    WeightedSurface::new(
        base,
        polygon_lines(i).into_iter().map(|c| (c, p)).collect(),
    )
}

/// The standard 2-hereditary upstairs bundle on the i-point blowup (the
/// plane itself gets the three twists).
pub fn polygon_upstairs_bundle(i: usize) -> TiltingCandidate {
    let rank = 1 + i;
    let line = |h: i64, es: &[usize]| -> LClass {
        let mut v = vec![0i64; rank];
        v[0] = h;
        for &k in es {
            v[k] = 1;
        }
        LClass::integral(DivClass(v), 0)
    };
    let classes = match i {
        0 => vec![line(0, &[]), line(1, &[]), line(2, &[])],
        1 => vec![line(0, &[1]), line(1, &[]), line(1, &[1]), line(2, &[])],
        2 => vec![
            line(0, &[1, 2]),
            line(1, &[1]),
            line(1, &[2]),
            line(1, &[1, 2]),
            line(2, &[]),
        ],
        3 => vec![
            line(0, &[1, 2, 3]),
            line(1, &[2, 3]),
            line(1, &[1, 3]),
            line(1, &[1, 2]),
            line(1, &[1, 2, 3]),
            line(2, &[]),
        ],
        _ => unreachable!(),
    };
    TiltingCandidate::lines(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn downstairs_expected_ranks() {
        use crate::tilting::expected_rank;
        assert_eq!(expected_rank(&swap_downstairs().unwrap()), Some(5));
        assert_eq!(expected_rank(&swap_blown_downstairs().unwrap()), Some(6));
        for p in [2u32, 3] {
            for i in 0..=3usize {
                let w = polygon_downstairs(p, i).unwrap();
                assert_eq!(
                    expected_rank(&w),
                    Some((p as u64 * p as u64) * (i as u64 + 3)),
                    "p={p} i={i}"
                );
            }
        }
    }

    #[test]
    fn upstairs_bundles_are_stable_and_pass() {
        use crate::tilting::{Checker, HereditaryVerdict, PartialVerdict};
        for i in 0..=3usize {
            let cover = polygon_cover(2, i).unwrap();
            let t = polygon_upstairs_bundle(i);
            let w = WeightedSurface::unweighted(cover.upstairs.clone());
            let c = Checker::lines_only(&w);
            assert_eq!(c.partial_tilting(&t).unwrap(), PartialVerdict::Pass);
            let rep = c.two_hereditary(&t).unwrap();
            assert!(
                matches!(rep.verdict, HereditaryVerdict::Pass { .. }),
                "i={i}: {:?}",
                rep.verdict
            );
        }
    }
}
