//! Quiver-with-relations extraction for quasi-canonical candidates.
//!
//! Vertices are the summands; the arrow space at (a, b) is Hom(a, b) modulo
//! the span of length-two compositions through other vertices, with
//! representatives chosen among monomials where possible. Relations are a
//! kernel basis of the path evaluation map into the Cox ring, computed pair
//! by pair, and a Hilbert check confirms the paths span every Hom space up
//! to the degree bound.

use std::collections::HashMap;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cox::{CoxRing, Poly};
use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::rat::{show_q, Q};
use crate::tilting::{Summand, TiltingCandidate};
use crate::wps::LClass;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub name: String,
    pub poly: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationText {
    pub from: usize,
    pub to: usize,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct Quiver {
    pub vertices: Vec<LClass>,
    pub vertex_labels: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<RelationText>,
    pub degree_bound: Q,
}

/// Naming hints: (from, to, ring element rendered by the ring) -> name.
pub type ArrowNames = HashMap<(usize, usize, String), String>;

const PATH_CAP: usize = 20_000;

pub fn quiver(
    ring: &CoxRing,
    t: &TiltingCandidate,
    degree_bound: Option<Q>,
    names: &ArrowNames,
) -> Result<Quiver> {
    let w = &ring.surface;
    let vertices: Vec<LClass> = t
        .summands
        .iter()
        .map(|s| match s {
            Summand::Line(l) => Ok(l.clone()),
            _ => Err(Error::Input(
                "quiver extraction needs line-bundle summands".into(),
            )),
        })
        .collect::<Result<_>>()?;
    let n = vertices.len();
    let degs: Vec<Q> = vertices.iter().map(|v| w.ample_degree(v)).collect();
    let max_gap = degs
        .iter()
        .flat_map(|a| degs.iter().map(move |b| {
            let d = a - b;
            if d.is_negative() {
                -d
            } else {
                d
            }
        }))
        .max()
        .unwrap_or_else(Q::zero);
    let bound = degree_bound.unwrap_or_else(|| crate::rat::qi(2) * &max_gap);

    // Hom pieces and the length-2 span per ordered pair
    let mut arrows: Vec<Arrow> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dij = w.sub(&vertices[j], &vertices[i]);
            let piece = ring.graded_basis(&dij);
            if piece.dimension() == 0 {
                continue;
            }
            // cycle guard: distinct basic summands cannot map both ways
            let back = ring.graded_basis(&w.sub(&vertices[i], &vertices[j]));
            assert_eq!(back.dimension(), 0, "two-way Hom between basic summands");
            let mut span: Vec<Vec<Q>> = Vec::new();
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let p1 = ring.graded_basis(&w.sub(&vertices[k], &vertices[i]));
                let p2 = ring.graded_basis(&w.sub(&vertices[j], &vertices[k]));
                for f in &p1.basis {
                    for g in &p2.basis {
                        let prod = Poly::monomial(f.clone()).mul(&Poly::monomial(g.clone()));
                        span.push(ring.express(&piece, &prod));
                    }
                }
            }
            // greedy completion of the span by monomial basis vectors
            let mut rows = span;
            let mut rank = if rows.is_empty() {
                0
            } else {
                QMat::from_rows(rows.clone()).rank()
            };
            for m in &piece.basis {
                let cand = ring.express(&piece, &Poly::monomial(m.clone()));
                let mut trial = rows.clone();
                trial.push(cand.clone());
                let r = QMat::from_rows(trial.clone()).rank();
                if r > rank {
                    rank = r;
                    rows = trial;
                    let poly = Poly::monomial(m.clone());
                    let rendered = ring.render_poly(&poly);
                    let name = names
                        .get(&(i, j, rendered.clone()))
                        .cloned()
                        .unwrap_or(rendered);
                    arrows.push(Arrow {
                        from: i,
                        to: j,
                        name,
                        poly,
                    });
                }
            }
            assert_eq!(
                rank,
                piece.dimension(),
                "monomials failed to span a Hom piece"
            );
        }
    }
    arrows.sort_by(|a, b| (a.from, a.to, &a.name).cmp(&(b.from, b.to, &b.name)));

    // paths, relations and the Hilbert check per ordered pair
    let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
    for (idx, a) in arrows.iter().enumerate() {
        out.entry(a.from).or_default().push(idx);
    }
    let mut relations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let gap = &degs[j] - &degs[i];
            if gap.is_negative() || gap > bound {
                continue;
            }
            let paths = enumerate_paths(&arrows, &out, i, j)?;
            let piece = ring.graded_basis(&w.sub(&vertices[j], &vertices[i]));
            if i == j {
                continue;
            }
            if piece.dimension() == 0 {
                continue;
            }
            let evals: Vec<Vec<Q>> = paths
                .iter()
                .map(|p| {
                    let mut acc = Poly::monomial(vec![0; ring.n_gens()]);
                    for &ai in p {
                        acc = acc.mul(&arrows[ai].poly);
                    }
                    ring.express(&piece, &acc)
                })
                .collect();
            if paths.is_empty() {
                if piece.dimension() > 0 {
                    return Err(Error::DegreeBoundTooSmall(format!(
                        "no paths into a {}-dimensional Hom space at pair ({i},{j})",
                        piece.dimension()
                    )));
                }
                continue;
            }
            let mat = QMat::from_rows(evals.clone());
            if mat.rank() != piece.dimension() {
                return Err(Error::DegreeBoundTooSmall(format!(
                    "paths span {} of {} at pair ({i},{j})",
                    mat.rank(),
                    piece.dimension()
                )));
            }
            // kernel of the evaluation map (paths as columns)
            let cols = transpose(&evals);
            let kernel = QMat::from_rows(cols).kernel_basis();
            for v in kernel {
                relations.push(RelationText {
                    from: i,
                    to: j,
                    text: render_relation(&arrows, &paths, &v),
                });
            }
        }
    }
    relations.sort_by(|a, b| (a.from, a.to, &a.text).cmp(&(b.from, b.to, &b.text)));

    let vertex_labels = vertices
        .iter()
        .map(|v| {
            let qd = w.lclass_to_q(v);
            let coords: Vec<String> = qd.0.iter().map(show_q).collect();
            format!("O({})", coords.join(","))
        })
        .collect();
    Ok(Quiver {
        vertices,
        vertex_labels,
        arrows,
        relations,
        degree_bound: bound,
    })
}

fn transpose(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows[0].len();
    (0..cols)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect()
}

fn enumerate_paths(
    arrows: &[Arrow],
    out: &HashMap<usize, Vec<usize>>,
    from: usize,
    to: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut paths = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(from, Vec::new())];
    while let Some((v, path)) = stack.pop() {
        if v == to && !path.is_empty() {
            paths.push(path.clone());
            if paths.len() > PATH_CAP {
                return Err(Error::Input("path explosion in quiver extraction".into()));
            }
            continue;
        }
        if let Some(nexts) = out.get(&v) {
            for &ai in nexts {
                let mut p = path.clone();
                p.push(ai);
                stack.push((arrows[ai].to, p));
            }
        }
    }
    paths.sort();
    Ok(paths)
}

fn render_path(arrows: &[Arrow], path: &[usize]) -> String {
    // concatenated labels with runs collapsed to powers
    let mut parts: Vec<(String, u32)> = Vec::new();
    for &ai in path {
        let name = arrows[ai].name.clone();
        if let Some(last) = parts.last_mut() {
            if last.0 == name {
                last.1 += 1;
                continue;
            }
        }
        parts.push((name, 1));
    }
    parts
        .into_iter()
        .map(|(n, e)| if e == 1 { n } else { format!("{n}^{e}") })
        .collect::<Vec<_>>()
        .join("")
}

fn render_relation(arrows: &[Arrow], paths: &[Vec<usize>], coeffs: &[Q]) -> String {
    // lead term: longest path with nonzero coefficient; the relation is
    // written lead = -(rest)/c
    let lead = paths
        .iter()
        .enumerate()
        .filter(|(k, _)| !coeffs[*k].is_zero())
        .max_by_key(|(k, p)| (p.len(), std::cmp::Reverse(*k)))
        .map(|(k, _)| k)
        .expect("empty relation");
    let c = coeffs[lead].clone();
    let mut rhs = Vec::new();
    for (k, p) in paths.iter().enumerate() {
        if k == lead || coeffs[k].is_zero() {
            continue;
        }
        let coef = -coeffs[k].clone() / c.clone();
        let word = render_path(arrows, p);
        if coef.is_one() {
            rhs.push(word);
        } else if (-coef.clone()).is_one() {
            rhs.push(format!("-{word}"));
        } else {
            rhs.push(format!("{}*{}", show_q(&coef), word));
        }
    }
    let lhs = render_path(arrows, &paths[lead]);
    if rhs.is_empty() {
        format!("{lhs} = 0")
    } else {
        format!("{lhs} = {}", rhs.join(" + ").replace("+ -", "- "))
    }
}

/// A formal linear combination of paths (arrow index sequences).
#[derive(Debug, Clone)]
pub struct StatedRelation {
    pub terms: Vec<(Q, Vec<usize>)>,
}

/// Evaluates a stated relation in the representation; true when it reduces
/// to zero, i.e. the extracted relation ideal contains it.
pub fn reduces_to_zero(ring: &CoxRing, q: &Quiver, rel: &StatedRelation) -> Result<bool> {
    let mut endpoint: Option<(usize, usize)> = None;
    let mut acc = Poly::zero();
    for (c, path) in &rel.terms {
        if path.is_empty() {
            return Err(Error::Input("empty path in stated relation".into()));
        }
        let from = q.arrows[path[0]].from;
        let to = q.arrows[*path.last().unwrap()].to;
        for win in path.windows(2) {
            if q.arrows[win[0]].to != q.arrows[win[1]].from {
                return Err(Error::Input("non-composable stated path".into()));
            }
        }
        match endpoint {
            None => endpoint = Some((from, to)),
            Some(e) if e == (from, to) => {}
            _ => return Err(Error::Input("stated relation mixes endpoints".into())),
        }
        let mut word = Poly::monomial(vec![0; ring.n_gens()]);
        for &ai in path {
            word = word.mul(&q.arrows[ai].poly);
        }
        acc = acc.add(&word.scale(c));
    }
    Ok(ring.normal_form(&acc).is_zero())
}

pub fn to_dot(q: &Quiver) -> String {
    let mut s = String::from("digraph quiver {\n  rankdir=LR;\n");
    for (i, lbl) in q.vertex_labels.iter().enumerate() {
        s.push_str(&format!("  v{i} [label=\"{lbl}\"];\n"));
    }
    for a in &q.arrows {
        s.push_str(&format!(
            "  v{} -> v{} [label=\"{}\"];\n",
            a.from, a.to, a.name
        ));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cox::builtin_cox;
    use crate::picard::{build_surface, DivClass, PointConfiguration, SurfaceKind};
    use crate::rat::qi;
    use crate::wps::WeightedSurface;

    fn half_diag_quiver() -> (CoxRing, Quiver) {
        let base = build_surface(SurfaceKind::P1xP1).unwrap();
        let w = WeightedSurface::new(base, vec![(DivClass(vec![1, 1]), 2)]).unwrap();
        let ring = builtin_cox(&w).unwrap();
        // O, O(1/2,1/2), O(1,1), O(0,1), O(1/2,3/2), O(1,2)
        let cls = |pic: Vec<i64>, l: i64| w.normalize(DivClass(pic), vec![l]);
        let t = TiltingCandidate::lines(vec![
            cls(vec![0, 0], 0),
            cls(vec![0, 0], 1),
            cls(vec![1, 1], 0),
            cls(vec![0, 1], 0),
            cls(vec![0, 1], 1),
            cls(vec![1, 2], 0),
        ]);
        let q = quiver(&ring, &t, None, &ArrowNames::new()).unwrap();
        (ring, q)
    }

    #[test]
    fn half_diag_adjacency_matches_the_display() {
        let (_ring, q) = half_diag_quiver();
        assert_eq!(q.vertices.len(), 6);
        assert_eq!(q.arrows.len(), 12);
        // expected labeled adjacency, vertices indexed as constructed:
        // 0=O, 1=(1/2,1/2), 2=(1,1), 3=(0,1), 4=(1/2,3/2), 5=(1,2)
        let mut expect: Vec<(usize, usize, &str)> = vec![
            (0, 1, "t"),
            (1, 2, "t"),
            (3, 4, "t"),
            (4, 5, "t"),
            (0, 3, "x"),
            (0, 3, "y"),
            (1, 4, "x"),
            (1, 4, "y"),
            (2, 5, "x"),
            (2, 5, "y"),
            (3, 2, "u"),
            (3, 2, "v"),
        ];
        expect.sort();
        let mut got: Vec<(usize, usize, String)> = q
            .arrows
            .iter()
            .map(|a| (a.from, a.to, a.name.clone()))
            .collect();
        got.sort();
        assert_eq!(
            got,
            expect
                .into_iter()
                .map(|(f, t, n)| (f, t, n.to_string()))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn half_diag_stated_relations_reduce_to_zero() {
        let (ring, q) = half_diag_quiver();
        let find = |f: usize, t: usize, n: &str| -> usize {
            q.arrows
                .iter()
                .position(|a| a.from == f && a.to == t && a.name == n)
                .unwrap()
        };
        // xt = tx between O and (1/2,3/2)
        let xt = StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 3, "x"), find(3, 4, "t")]),
                (qi(-1), vec![find(0, 1, "t"), find(1, 4, "x")]),
            ],
        };
        assert!(reduces_to_zero(&ring, &q, &xt).unwrap());
        let yt = StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 3, "y"), find(3, 4, "t")]),
                (qi(-1), vec![find(0, 1, "t"), find(1, 4, "y")]),
            ],
        };
        assert!(reduces_to_zero(&ring, &q, &yt).unwrap());
        // t^2 = uy - vx between O and (1,1): paths through the fractional
        // vertex and through (0,1)
        let t2 = StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 1, "t"), find(1, 2, "t")]),
                (qi(-1), vec![find(0, 3, "y"), find(3, 2, "u")]),
                (qi(1), vec![find(0, 3, "x"), find(3, 2, "v")]),
            ],
        };
        assert!(reduces_to_zero(&ring, &q, &t2).unwrap());
        // a wrong relation does not reduce
        let bad = StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 1, "t"), find(1, 2, "t")]),
                (qi(-1), vec![find(0, 3, "y"), find(3, 2, "u")]),
            ],
        };
        assert!(!reduces_to_zero(&ring, &q, &bad).unwrap());
        // the extracted relation set contains the t^2 relation at (0,2)
        assert!(q
            .relations
            .iter()
            .any(|r| r.from == 0 && r.to == 2 && r.text.starts_with("t^2 =")));
    }

    #[test]
    fn single_vertex_quiver() {
        let base = build_surface(SurfaceKind::ProjectivePlane).unwrap();
        let w = WeightedSurface::unweighted(base);
        let ring = builtin_cox(&w).unwrap();
        let t = TiltingCandidate::lines(vec![w.zero()]);
        let q = quiver(&ring, &t, None, &ArrowNames::new()).unwrap();
        assert_eq!(q.vertices.len(), 1);
        assert!(q.arrows.is_empty());
        let dot = to_dot(&q);
        assert!(dot.contains("v0"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn pf1_quiver_with_named_arrows() {
        let base =
            build_surface(SurfaceKind::BlowupP2(PointConfiguration::general(1))).unwrap();
        let w = WeightedSurface::new(base, vec![(DivClass(vec![1, 0]), 2)]).unwrap();
        let ring = builtin_cox(&w).unwrap();
        let cls = |pic: Vec<i64>, l: i64| w.normalize(DivClass(pic), vec![l]);
        // O, E, H/2, H, 3H/2, 2H
        let t = TiltingCandidate::lines(vec![
            cls(vec![0, 0], 0),
            cls(vec![0, 1], 0),
            cls(vec![0, 0], 1),
            cls(vec![1, 0], 0),
            cls(vec![1, 0], 1),
            cls(vec![2, 0], 0),
        ]);
        let mut names = ArrowNames::new();
        for (f, t2) in [(2usize, 4usize), (3, 5)] {
            names.insert((f, t2, "u*y'".into()), "y".into());
            names.insert((f, t2, "u*z'".into()), "z".into());
        }
        let q = quiver(&ring, &t, None, &names).unwrap();
        assert_eq!(q.arrows.len(), 11);
        let find = |f: usize, t: usize, n: &str| -> usize {
            q.arrows
                .iter()
                .position(|a| a.from == f && a.to == t && a.name == n)
                .unwrap_or_else(|| panic!("missing arrow {f}->{t} {n}"))
        };
        // adjacency: x along the fractional chain, u into E, y',z' out of E,
        // y,z skipping a full line twist
        let _ = find(0, 2, "x");
        let _ = find(2, 3, "x");
        let _ = find(3, 4, "x");
        let _ = find(4, 5, "x");
        let _ = find(0, 1, "u");
        let _ = find(1, 3, "y'");
        let _ = find(1, 3, "z'");
        let _ = find(2, 4, "y");
        let _ = find(2, 4, "z");
        let _ = find(3, 5, "y");
        let _ = find(3, 5, "z");
        // uy'x = xy
        let rel = StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 1, "u"), find(1, 3, "y'"), find(3, 4, "x")]),
                (qi(-1), vec![find(0, 2, "x"), find(2, 4, "y")]),
            ],
        };
        assert!(reduces_to_zero(&ring, &q, &rel).unwrap());
        // uz'x = xz
        let rel = StatedRelation {
            terms: vec![
                (qi(1), vec![find(0, 1, "u"), find(1, 3, "z'"), find(3, 4, "x")]),
                (qi(-1), vec![find(0, 2, "x"), find(2, 4, "z")]),
            ],
        };
        assert!(reduces_to_zero(&ring, &q, &rel).unwrap());
        // y'z = z'y out of E
        let rel = StatedRelation {
            terms: vec![
                (qi(1), vec![find(1, 3, "y'"), find(3, 5, "z")]),
                (qi(-1), vec![find(1, 3, "z'"), find(3, 5, "y")]),
            ],
        };
        assert!(reduces_to_zero(&ring, &q, &rel).unwrap());
        // rendered relation file carries the paper form
        assert!(
            q.relations
                .iter()
                .any(|r| r.text.contains("uy'x = xy") || r.text.contains("xy = uy'x")),
            "{:?}",
            q.relations
        );
    }
}
