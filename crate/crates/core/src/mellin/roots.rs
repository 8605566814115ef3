//! Polynomial roots with multiplicity clustering.
//!
//! Raw roots come from the eigenvalues of the companion matrix. A root of
//! multiplicity `m` scatters into a ring of radius about `eps^(1/m)`, so the
//! raw values are grouped by single linkage at a decreasing sequence of radii
//! and a group is accepted as one site once its mean passes the derivative
//! test `p^(k)(mean)/k! ~ 0` for all `k < m`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::ComplexPolynomial;
use crate::error::{Error, Result};

/// Relative threshold for the derivative test that validates a cluster.
const CLUSTER_VALIDATION_REL: f64 = 1e-9;

/// A root of a polynomial (equivalently a pole of its reciprocal) with order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleSite {
    pub location: Complex64,
    pub order: usize,
}

/// The default clustering radius `1e-8 * (1 + max|root|)`.
pub fn default_cluster_tol(p: &ComplexPolynomial) -> f64 {
    let max_root = raw_roots(p).iter().map(|r| r.norm()).fold(0.0, f64::max);
    1e-8 * (1.0 + max_root)
}

/// Unclustered roots: eigenvalues of the companion matrix.
///
/// These are deliberately left unpolished; the mean of a multiple-root
/// cluster is far better conditioned than its members.
pub fn raw_roots(p: &ComplexPolynomial) -> Vec<Complex64> {
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let lead = p.leading().expect("nonzero");
    let monic: Vec<Complex64> = p.coeffs().iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        companion[(i, n - 1)] = -monic[i];
    }
    let eig = nalgebra::Schur::new(companion)
        .eigenvalues()
        .expect("complex Schur form is triangular");
    eig.iter().copied().collect()
}

/// Newton refinement of an `m`-fold root as a simple root of `p^(m-1)`.
fn refine(p: &ComplexPolynomial, m: usize, z: Complex64) -> Complex64 {
    let q = (1..m).fold(p.clone(), |acc, _| acc.derivative());
    newton(&q, &q.derivative(), z)
}

fn newton(p: &ComplexPolynomial, dp: &ComplexPolynomial, mut z: Complex64) -> Complex64 {
    let mut val = p.eval(z).norm();
    for _ in 0..4 {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - p.eval(z) / d;
        let next_val = p.eval(next).norm();
        if !(next_val < val) {
            break;
        }
        z = next;
        val = next_val;
    }
    z
}

/// Roots of `p` grouped into sites; orders sum to the degree.
pub fn poly_roots(p: &ComplexPolynomial, cluster_tol: f64) -> Result<Vec<PoleSite>> {
    let roots = raw_roots(p);
    if roots.is_empty() {
        return Ok(Vec::new());
    }
    let max_root = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let start = 1e-2 * (1.0 + max_root);
    let mut sites = Vec::new();
    let all: Vec<usize> = (0..roots.len()).collect();
    split_groups(p, &roots, &all, start, cluster_tol, &mut sites);

    sites.sort_by(|a: &PoleSite, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .unwrap()
    });
    for (i, a) in sites.iter().enumerate() {
        for b in &sites[i + 1..] {
            if (a.location - b.location).norm() <= 2.0 * cluster_tol {
                return Err(Error::DegenerateCluster {
                    a: a.location,
                    b: b.location,
                    tol: cluster_tol,
                });
            }
        }
    }
    Ok(sites)
}

fn split_groups(
    p: &ComplexPolynomial,
    roots: &[Complex64],
    members: &[usize],
    radius: f64,
    floor: f64,
    out: &mut Vec<PoleSite>,
) {
    for group in linkage(roots, members, radius) {
        let mean = group.iter().map(|&i| roots[i]).sum::<Complex64>() / group.len() as f64;
        let mean = refine(p, group.len(), mean);
        if group.len() == 1 || radius <= floor || is_multiple_root(p, mean, group.len()) {
            if group.len() > 1 && radius <= floor && !is_multiple_root(p, mean, group.len()) {
                // Below the floor: report members individually, the caller's
                // separation check decides whether that is acceptable.
                out.extend(group.iter().map(|&i| PoleSite {
                    location: refine(p, 1, roots[i]),
                    order: 1,
                }));
            } else {
                out.push(PoleSite {
                    location: mean,
                    order: group.len(),
                });
            }
        } else {
            split_groups(p, roots, &group, radius / 10.0, floor, out);
        }
    }
}

fn is_multiple_root(p: &ComplexPolynomial, z: Complex64, m: usize) -> bool {
    let taylor = p.taylor_at(z);
    let scales = p.taylor_scale_at(z);
    (0..m).all(|k| taylor[k].norm() <= CLUSTER_VALIDATION_REL * scales[k])
}

/// Connected components of `members` under `|r_i - r_j| <= radius`.
fn linkage(roots: &[Complex64], members: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..members.len()).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if (roots[members[a]] - roots[members[b]]).norm() <= radius {
                let (ra, rb) = (find(&mut label, a), find(&mut label, b));
                if ra != rb {
                    label[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index_of_root = vec![usize::MAX; members.len()];
    for a in 0..members.len() {
        let r = find(&mut label, a);
        if index_of_root[r] == usize::MAX {
            index_of_root[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index_of_root[r]].push(members[a]);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn has(sites: &[PoleSite], z: Complex64, order: usize) -> bool {
        sites
            .iter()
            .any(|s| (s.location - z).norm() < 1e-10 && s.order == order)
    }

    #[test]
    fn simple_roots_of_z2_plus_z() {
        let p = ComplexPolynomial::from_real(&[0.0, 1.0, 1.0]);
        let s = poly_roots(&p, 1e-8).unwrap();
        assert_eq!(s.len(), 2);
        assert!(has(&s, c(0.0, 0.0), 1));
        assert!(has(&s, c(-1.0, 0.0), 1));
    }

    #[test]
    fn double_root_at_origin() {
        let p = ComplexPolynomial::from_real(&[0.0, 0.0, 1.0]);
        let s = poly_roots(&p, 1e-8).unwrap();
        assert_eq!(s.len(), 1);
        assert!(has(&s, c(0.0, 0.0), 2));
    }

    #[test]
    fn conjugate_pair() {
        let p = ComplexPolynomial::from_real(&[1.0, 0.0, 1.0]);
        let s = poly_roots(&p, 1e-8).unwrap();
        assert!(has(&s, c(0.0, 1.0), 1));
        assert!(has(&s, c(0.0, -1.0), 1));
    }

    #[test]
    fn triple_and_double_cluster() {
        let a = ComplexPolynomial::linear(c(0.3, 0.2)).pow(3);
        let b = ComplexPolynomial::linear(c(-1.5, 0.0)).pow(2);
        let p = &(&a * &b) * &ComplexPolynomial::linear(c(2.0, -1.0));
        let s = poly_roots(&p, 1e-8).unwrap();
        assert_eq!(s.iter().map(|s| s.order).sum::<usize>(), 6);
        assert!(s.iter().any(|s| (s.location - c(0.3, 0.2)).norm() < 1e-9 && s.order == 3));
        assert!(s.iter().any(|s| (s.location - c(-1.5, 0.0)).norm() < 1e-9 && s.order == 2));
    }

    #[test]
    fn sites_closer_than_twice_tolerance_are_degenerate() {
        // Distinct roots 0 and 0.5 cannot be separated at a 0.3 clustering radius.
        let p = &ComplexPolynomial::linear(c(0.0, 0.0)) * &ComplexPolynomial::linear(c(0.5, 0.0));
        assert!(matches!(
            poly_roots(&p, 0.3),
            Err(Error::DegenerateCluster { .. })
        ));
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(poly_roots(&ComplexPolynomial::from_real(&[3.0]), 1e-8)
            .unwrap()
            .is_empty());
    }
}
