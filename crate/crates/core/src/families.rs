//! Named graph families: LPS Ramanujan graphs `X^{p,q}` and incidence
//! graphs of projective planes `PG(2,r)`.
//!
//! The LPS construction takes distinct primes `p, q ≡ 1 (mod 4)` with
//! `q > 2√p`. The `p+1` generators come from the integer quaternions of
//! norm `p` with odd positive leading coordinate, mapped to `PGL(2, F_q)`
//! through a square root of `-1 (mod q)`. The Cayley graph lives on
//! `PSL(2, F_q)` when `p` is a square mod `q` and on all of `PGL(2, F_q)`
//! otherwise, in which case it is bipartite.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    acc as u64
}

fn mod_inv(a: u64, m: u64) -> u64 {
    // m prime
    mod_pow(a, m - 2, m)
}

/// Legendre symbol (a|q) for odd prime q, as ±1 (a not divisible by q).
pub fn legendre(a: u64, q: u64) -> i32 {
    if mod_pow(a % q, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LpsParameters {
    pub p: u64,
    pub q: u64,
    pub legendre: i32,
    pub bipartite: bool,
}

/// 2x2 matrix over F_q, scaled so its first nonzero entry is 1.
fn canon(m: [u64; 4], q: u64) -> [u64; 4] {
    let lead = m.iter().copied().find(|&x| x != 0).expect("nonzero matrix");
    let inv = mod_inv(lead, q);
    [
        m[0] * inv % q,
        m[1] * inv % q,
        m[2] * inv % q,
        m[3] * inv % q,
    ]
}

fn mat_mul(a: [u64; 4], b: [u64; 4], q: u64) -> [u64; 4] {
    [
        (a[0] * b[0] + a[1] * b[2]) % q,
        (a[0] * b[1] + a[1] * b[3]) % q,
        (a[2] * b[0] + a[3] * b[2]) % q,
        (a[2] * b[1] + a[3] * b[3]) % q,
    ]
}

/// Integer quaternion solutions of `a0² + a1² + a2² + a3² = p` with `a0`
/// odd positive and `a1, a2, a3` even. There are exactly `p + 1` of them.
fn quaternion_generators(p: u64) -> Vec<[i64; 4]> {
    let bound = (p as f64).sqrt() as i64 + 1;
    let evens = |b: i64| (-b..=b).filter(|x| x % 2 == 0);
    let mut sols = Vec::new();
    for a0 in (1..=bound).step_by(2) {
        for a1 in evens(bound) {
            for a2 in evens(bound) {
                for a3 in evens(bound) {
                    if a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p as i64 {
                        sols.push([a0, a1, a2, a3]);
                    }
                }
            }
        }
    }
    sols
}

/// Construct the LPS graph `X^{p,q}`.
pub fn lps_graph(p: u64, q: u64) -> Result<(Graph, LpsParameters)> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be a prime congruent to 1 mod 4"
        )));
    }
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} must be a prime congruent to 1 mod 4"
        )));
    }
    if p == q {
        return Err(Error::InvalidParameter("p and q must be distinct".into()));
    }
    if (q as f64) <= 2.0 * (p as f64).sqrt() {
        return Err(Error::InvalidParameter(format!(
            "q = {q} <= 2*sqrt(p): generators degenerate into a multigraph"
        )));
    }

    let quats = quaternion_generators(p);
    if quats.len() != (p + 1) as usize {
        return Err(Error::Discrepancy(format!(
            "expected {} quaternion generators, found {}",
            p + 1,
            quats.len()
        )));
    }

    // square root of -1 mod q
    let i = (2..q)
        .find(|&x| x * x % q == q - 1)
        .ok_or_else(|| Error::InvalidParameter(format!("no sqrt(-1) mod {q}")))?;

    let to_fq = |x: i64| -> u64 { x.rem_euclid(q as i64) as u64 };
    let gens: Vec<[u64; 4]> = quats
        .iter()
        .map(|&[a0, a1, a2, a3]| {
            canon(
                [
                    to_fq(a0 + a1 * i as i64),
                    to_fq(a2 + a3 * i as i64),
                    to_fq(-a2 + a3 * i as i64),
                    to_fq(a0 - a1 * i as i64),
                ],
                q,
            )
        })
        .collect();
    {
        let mut dedup = gens.clone();
        dedup.sort();
        dedup.dedup();
        if dedup.len() != gens.len() {
            return Err(Error::Discrepancy("repeated LPS generators".into()));
        }
    }

    // breadth-first closure of the generated subgroup of PGL(2, F_q)
    let identity = canon([1, 0, 0, 1], q);
    let mut ids = std::collections::HashMap::new();
    let mut elements = vec![identity];
    ids.insert(identity, 0usize);
    let mut edges = std::collections::BTreeSet::new();
    let mut frontier = std::collections::VecDeque::from([0usize]);
    let order_cap = (q * (q * q - 1)) as usize;
    while let Some(x) = frontier.pop_front() {
        let mx = elements[x];
        for g in &gens {
            let y_mat = canon(mat_mul(mx, *g, q), q);
            let y = match ids.get(&y_mat) {
                Some(&y) => y,
                None => {
                    let y = elements.len();
                    if y > order_cap {
                        return Err(Error::Discrepancy("closure exceeded |PGL(2,q)|".into()));
                    }
                    elements.push(y_mat);
                    ids.insert(y_mat, y);
                    frontier.push_back(y);
                    y
                }
            };
            if x == y {
                return Err(Error::Discrepancy(
                    "LPS generator fixes an element (self-loop)".into(),
                ));
            }
            edges.insert((x.min(y), x.max(y)));
        }
    }

    let leg = legendre(p, q);
    let expected_order = if leg == 1 {
        (q * (q * q - 1) / 2) as usize
    } else {
        (q * (q * q - 1)) as usize
    };
    if elements.len() != expected_order {
        return Err(Error::Discrepancy(format!(
            "Cayley closure has {} elements, expected {expected_order}",
            elements.len()
        )));
    }

    let edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
    let graph = Graph::from_edges_with_count(elements.len(), &edge_list)?;
    for u in 0..graph.vertex_count() {
        if graph.degree(u) != (p + 1) as usize {
            return Err(Error::Discrepancy(format!(
                "vertex {u} has degree {}, expected {}",
                graph.degree(u),
                p + 1
            )));
        }
    }
    let bipartite = graph.bipartition().is_some();
    if bipartite != (leg == -1) {
        return Err(Error::Discrepancy(
            "bipartiteness disagrees with the Legendre symbol".into(),
        ));
    }
    Ok((
        graph,
        LpsParameters {
            p,
            q,
            legendre: leg,
            bipartite,
        },
    ))
}

/// Certificate for an LPS graph: measured girth, diameter and spectral gap
/// against the family's stated bounds. The spectral-gap threshold is the
/// Ramanujan value `1 - 2√p/(p+1)`, which goes beyond the stated girth and
/// diameter bounds; it is flagged as such.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpsCertificate {
    pub p: u64,
    pub q: u64,
    pub vertex_count: usize,
    pub degree: usize,
    pub bipartite: bool,
    pub girth: usize,
    pub girth_bound: f64,
    pub girth_pass: bool,
    pub diameter: usize,
    pub diameter_bound: f64,
    pub diameter_pass: bool,
    pub lambda1: f64,
    pub ramanujan_bound: f64,
    pub ramanujan_pass: bool,
    pub ramanujan_beyond_stated_bounds: bool,
}

pub fn validate_lps(graph: &Graph, params: &LpsParameters) -> Result<LpsCertificate> {
    let (girth, diameter) = graph.girth_and_diameter();
    let girth = girth.ok_or_else(|| Error::Discrepancy("LPS graph is acyclic".into()))?;
    let p = params.p as f64;
    let q = params.q as f64;
    let n = graph.vertex_count() as f64;
    let girth_bound = if params.bipartite {
        4.0 * q.ln() / p.ln() - 4.0f64.ln() / p.ln()
    } else {
        2.0 * q.ln() / p.ln()
    };
    let diameter_bound = 2.0 * n.ln() / p.ln() + 2.0 * 2.0f64.ln() / p.ln() + 1.0;
    let lambda1 = graph.spectral_gap_real()?;
    let ramanujan_bound = 1.0 - 2.0 * p.sqrt() / (p + 1.0);
    Ok(LpsCertificate {
        p: params.p,
        q: params.q,
        vertex_count: graph.vertex_count(),
        degree: params.p as usize + 1,
        bipartite: params.bipartite,
        girth,
        girth_bound,
        girth_pass: girth as f64 >= girth_bound,
        diameter,
        diameter_bound,
        diameter_pass: (diameter as f64) <= diameter_bound,
        lambda1,
        ramanujan_bound,
        ramanujan_pass: lambda1 >= ramanujan_bound - 1e-9,
        ramanujan_beyond_stated_bounds: true,
    })
}

/// Points and lines of `PG(2, r)` as normalized homogeneous triples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectivePlaneIncidence {
    pub r: u64,
    pub points: Vec<[u64; 3]>,
    pub lines: Vec<[u64; 3]>,
}

impl ProjectivePlaneIncidence {
    /// Whether point `i` lies on line `j`.
    pub fn incident(&self, i: usize, j: usize) -> bool {
        let p = self.points[i];
        let l = self.lines[j];
        (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]).is_multiple_of(self.r)
    }
}

/// Normalized nonzero triples over F_r: first nonzero coordinate is 1.
fn projective_triples(r: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    out.push([0, 0, 1]);
    for z in 0..r {
        out.push([0, 1, z]);
    }
    for y in 0..r {
        for z in 0..r {
            out.push([1, y, z]);
        }
    }
    out
}

/// Incidence graph of `PG(2, r)` (the generalized triangle of order `r`):
/// bipartite, `(r+1)`-regular, girth 6, `2(r²+r+1)` vertices. Point `i` is
/// vertex `i`; line `j` is vertex `r²+r+1+j`. Every edge is assigned
/// length `π/3` for use as the direction space of a metric cone.
pub fn generalized_triangle(r: u64) -> Result<(Graph, ProjectivePlaneIncidence)> {
    if !is_prime(r) {
        return Err(Error::InvalidParameter(format!(
            "r = {r} must be prime (prime powers are out of scope)"
        )));
    }
    let triples = projective_triples(r);
    let n1 = triples.len();
    debug_assert_eq!(n1 as u64, r * r + r + 1);
    let plane = ProjectivePlaneIncidence {
        r,
        points: triples.clone(),
        lines: triples,
    };
    let mut edges = Vec::new();
    for i in 0..n1 {
        for j in 0..n1 {
            if plane.incident(i, j) {
                edges.push((i, n1 + j));
            }
        }
    }
    let graph = Graph::from_edges_with_count(2 * n1, &edges)?
        .with_uniform_length(std::f64::consts::PI / 3.0)?;
    for u in 0..graph.vertex_count() {
        if graph.degree(u) != (r + 1) as usize {
            return Err(Error::Discrepancy(format!(
                "incidence graph is not {}-regular at vertex {u}",
                r + 1
            )));
        }
    }
    Ok((graph, plane))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_symbols() {
        assert_eq!(legendre(5, 13), -1); // 5 is not a square mod 13
        assert_eq!(legendre(5, 29), 1); // 11^2 = 121 = 5 mod 29
        assert_eq!(legendre(4, 13), 1);
    }

    #[test]
    fn quaternions_of_norm_five() {
        let quats = quaternion_generators(5);
        assert_eq!(quats.len(), 6);
        for q in quats {
            assert_eq!(q.iter().map(|x| x * x).sum::<i64>(), 5);
            assert!(q[0] > 0 && q[0] % 2 == 1);
        }
    }

    #[test]
    fn lps_5_13_structure() {
        let (g, params) = lps_graph(5, 13).unwrap();
        assert_eq!(g.vertex_count(), 13 * 168); // q(q^2-1) = 2184
        assert!(params.bipartite);
        assert_eq!(params.legendre, -1);
        assert!((0..g.vertex_count()).all(|u| g.degree(u) == 6));
    }

    #[test]
    fn lps_5_29_is_not_bipartite() {
        // 5 = 11² mod 29, so the closure stays inside PSL(2, 29)
        let (g, params) = lps_graph(5, 29).unwrap();
        assert_eq!(g.vertex_count(), 29 * 840 / 2); // q(q²-1)/2 = 12180
        assert_eq!(params.legendre, 1);
        assert!(!params.bipartite);
        assert!((0..g.vertex_count()).all(|u| g.degree(u) == 6));
    }

    #[test]
    fn lps_parameter_validation() {
        assert!(lps_graph(5, 5).is_err());
        assert!(lps_graph(6, 13).is_err());
        assert!(lps_graph(13, 5).is_err()); // q <= 2 sqrt(p)
        assert!(lps_graph(5, 7).is_err()); // 7 = 3 mod 4
    }

    #[test]
    fn heawood_graph() {
        let (g, plane) = generalized_triangle(2).unwrap();
        assert_eq!(g.vertex_count(), 14);
        assert!((0..14).all(|u| g.degree(u) == 3));
        assert_eq!(g.girth_and_diameter(), (Some(6), 3));
        assert!(g.bipartition().is_some());
        assert_eq!(plane.points.len(), 7);
        assert!((g.length(0) - std::f64::consts::PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pg2_3_structure() {
        let (g, _) = generalized_triangle(3).unwrap();
        assert_eq!(g.vertex_count(), 26);
        assert!((0..26).all(|u| g.degree(u) == 4));
        assert_eq!(g.girth(), Some(6));
    }

    #[test]
    fn non_prime_rejected() {
        assert!(generalized_triangle(4).is_err());
    }

    #[test]
    fn incidence_axiom() {
        // any two distinct points lie on exactly one common line
        for r in [2u64, 3, 5, 7] {
            let (_, plane) = generalized_triangle(r).unwrap();
            let n1 = plane.points.len();
            for i in 0..n1 {
                for j in (i + 1)..n1 {
                    let common = (0..n1)
                        .filter(|&l| plane.incident(i, l) && plane.incident(j, l))
                        .count();
                    assert_eq!(common, 1, "points {i},{j} of PG(2,{r})");
                }
            }
        }
    }

    #[test]
    fn feit_higman_spectrum() {
        for r in [2u64, 3] {
            let (g, _) = generalized_triangle(r).unwrap();
            let eigs = g.adjacency_eigenvalues().unwrap();
            let n1 = (r * r + r) as usize;
            let mut expected = Vec::new();
            expected.push(-((r + 1) as f64));
            expected.extend(std::iter::repeat_n(-(r as f64).sqrt(), n1));
            expected.extend(std::iter::repeat_n((r as f64).sqrt(), n1));
            expected.push((r + 1) as f64);
            for (got, want) in eigs.iter().zip(&expected) {
                assert!((got - want).abs() < 1e-8, "r={r}: {got} vs {want}");
            }
        }
    }
}
