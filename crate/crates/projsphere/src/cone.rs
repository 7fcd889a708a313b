//! Polyhedral-cone numerics shared by the convex-body machinery: spans and
//! ranks, nonnegative least squares (cone projections and membership), and
//! the double description method (facet enumeration and extreme rays).
//!
//! Everything here works in a chosen coordinate frame of dimension `d ≤ 8`
//! with explicit tolerances; dimension decisions use a relative
//! singular-value threshold and resolve ties toward the lower dimension.

use nalgebra::{DMatrix, DVector};

/// Absolute tolerance for zero tests on inner products of unit vectors.
const ZERO_TOL: f64 = 1e-10;

/// Orthonormal basis (columns) of the span of the given vectors, by
/// column-pivoted modified Gram-Schmidt with re-orthogonalization.
///
/// Rank is decided by residual norms above `1e-9` times the largest input
/// norm; ties resolve toward the lower dimension.
pub fn span_basis(vectors: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    let scale = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale <= 0.0 {
        return DMatrix::zeros(dim, 0);
    }
    let tol = 1e-9 * scale;
    let mut work: Vec<DVector<f64>> = vectors.to_vec();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    while basis.len() < dim {
        let (mut best_i, mut best_n) = (usize::MAX, tol);
        for (i, w) in work.iter().enumerate() {
            let n = w.norm();
            if n > best_n {
                best_n = n;
                best_i = i;
            }
        }
        if best_i == usize::MAX {
            break;
        }
        let mut b = work.swap_remove(best_i);
        // One re-orthogonalization pass keeps the basis orthonormal to
        // machine precision even for badly scaled inputs.
        for q in &basis {
            let t = b.dot(q);
            b -= q * t;
        }
        let n = b.norm();
        if n <= tol {
            break;
        }
        b /= n;
        for w in work.iter_mut() {
            let t = w.dot(&b);
            *w -= &b * t;
        }
        basis.push(b);
    }
    if basis.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&basis)
    }
}

/// Rank of the set of vectors under the same threshold policy as
/// [`span_basis`].
pub fn rank_of(vectors: &[DVector<f64>], dim: usize) -> usize {
    span_basis(vectors, dim).ncols()
}

/// Orthonormal basis of the null space of the matrix whose rows are `rows`,
/// within the ambient dimension `dim`: the orthogonal complement of the row
/// span.
pub fn null_space(rows: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    let row_span = span_basis(rows, dim);
    let rank = row_span.ncols();
    let mut basis: Vec<DVector<f64>> = (0..rank).map(|j| row_span.column(j).into_owned()).collect();
    let mut complement = Vec::new();
    while basis.len() < dim {
        // Pivot: take the standard axis with the largest residual.
        let mut best: Option<DVector<f64>> = None;
        let mut best_n = 0.0;
        for k in 0..dim {
            let mut v = DVector::zeros(dim);
            v[k] = 1.0;
            for q in &basis {
                let t = v.dot(q);
                v -= q * t;
            }
            let n = v.norm();
            if n > best_n {
                best_n = n;
                best = Some(v);
            }
        }
        let Some(mut v) = best else { break };
        for q in &basis {
            let t = v.dot(q);
            v -= q * t;
        }
        v /= v.norm();
        basis.push(v.clone());
        complement.push(v);
    }
    if complement.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&complement)
    }
}

/// Nonnegative least squares by Lawson-Hanson: minimizes `‖Aλ - b‖` over
/// `λ ≥ 0`. Returns the solution and the residual norm.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let m = a.ncols();
    let mut passive = vec![false; m];
    let mut x = DVector::zeros(m);
    let mut residual = b - a * &x;
    let max_iter = 3 * (m + a.nrows()) + 30;

    for _ in 0..max_iter {
        let w = a.transpose() * &residual;
        let mut best = None;
        let mut best_w = ZERO_TOL * b.norm().max(1.0);
        for j in 0..m {
            if !passive[j] && w[j] > best_w {
                best_w = w[j];
                best = Some(j);
            }
        }
        let Some(j_new) = best else { break };
        passive[j_new] = true;

        // Inner loop: solve the unconstrained problem on the passive set and
        // walk back if any coefficient goes negative.
        loop {
            let idx: Vec<usize> = (0..m).filter(|&j| passive[j]).collect();
            let sub = a.select_columns(idx.iter());
            let sol = least_squares(&sub, b);
            if sol.iter().all(|&v| v > -ZERO_TOL) {
                x.fill(0.0);
                for (k, &j) in idx.iter().enumerate() {
                    x[j] = sol[k].max(0.0);
                }
                break;
            }
            // Step toward `sol` until the first coefficient hits zero.
            let mut alpha = f64::INFINITY;
            for (k, &j) in idx.iter().enumerate() {
                if sol[k] <= ZERO_TOL {
                    let denom = x[j] - sol[k];
                    if denom > 0.0 {
                        alpha = alpha.min(x[j] / denom);
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (k, &j) in idx.iter().enumerate() {
                x[j] += alpha * (sol[k] - x[j]);
                if x[j] < ZERO_TOL {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if idx.iter().all(|&j| !passive[j]) {
                break;
            }
        }
        residual = b - a * &x;
    }
    let r = residual.norm();
    (x, r)
}

/// Least-squares solve of `Ax = b` via normal equations with an escalating
/// ridge, robust enough for the small well-conditioned passive sets that
/// Lawson-Hanson produces.
fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let at = a.transpose();
    let ata = &at * a;
    let atb = &at * b;
    let scale = (0..ata.nrows()).map(|i| ata[(i, i)]).fold(1e-30, f64::max);
    for ridge in [0.0, 1e-12, 1e-9, 1e-6] {
        let mut m = ata.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += ridge * scale;
        }
        if let Some(ch) = m.cholesky() {
            return ch.solve(&atb);
        }
    }
    DVector::zeros(a.ncols())
}

/// Euclidean projection of `p` onto the cone generated by the columns of
/// `gens`. Returns the projection (possibly zero).
pub fn project_onto_cone(gens: &DMatrix<f64>, p: &DVector<f64>) -> DVector<f64> {
    let (lambda, _) = nnls(gens, p);
    gens * lambda
}

/// Whether `p` lies in the cone generated by the columns of `gens`, within
/// `tol` (Euclidean distance after projection).
pub fn cone_member(gens: &DMatrix<f64>, p: &DVector<f64>, tol: f64) -> bool {
    let proj = project_onto_cone(gens, p);
    (proj - p).norm() <= tol
}

/// A polyhedral cone in V-representation: `span(lineality) + cone(rays)`.
#[derive(Debug, Clone)]
pub struct VCone {
    /// Orthonormal basis of the lineality space.
    pub lineality: DMatrix<f64>,
    /// Unit extreme rays modulo the lineality space.
    pub rays: Vec<DVector<f64>>,
}

impl VCone {
    pub fn dim_ambient(&self) -> usize {
        self.lineality.nrows()
    }

    /// Generators of the cone as sphere directions: `±lineality ∪ rays`.
    pub fn generators(&self) -> Vec<DVector<f64>> {
        let mut out = Vec::new();
        for j in 0..self.lineality.ncols() {
            let c = self.lineality.column(j).into_owned();
            out.push(c.clone());
            out.push(-c);
        }
        out.extend(self.rays.iter().cloned());
        out
    }

    /// Whether the cone is just the origin.
    pub fn is_trivial(&self) -> bool {
        self.lineality.ncols() == 0 && self.rays.is_empty()
    }
}

/// Double description: extreme rays and lineality of
/// `{x ∈ R^d : ⟨a, x⟩ ≥ 0 for all a in halfspaces}`.
pub fn intersect_halfspaces(halfspaces: &[DVector<f64>], dim: usize) -> VCone {
    let mut lineality = DMatrix::identity(dim, dim);
    let mut rays: Vec<DVector<f64>> = Vec::new();
    let mut inserted: Vec<DVector<f64>> = Vec::new();

    for a_raw in halfspaces {
        let norm = a_raw.norm();
        if norm < ZERO_TOL {
            continue;
        }
        let a = a_raw / norm;

        // Component of `a` inside the current lineality space.
        let coeffs = lineality.transpose() * &a;
        if coeffs.norm() > ZERO_TOL {
            // Lineality is split: one direction becomes a new extreme ray.
            let b_plus = {
                let v = &lineality * &coeffs;
                let s = a.dot(&v);
                v / s // ⟨a, b_plus⟩ = 1
            };
            // New lineality: the part of the old one orthogonal to `a`.
            // Columns that land near zero are pure cancellation residue
            // (the old basis vector was parallel to b_plus); a relative
            // rank threshold would mistake them for real directions.
            let mut new_lin_cols = Vec::new();
            for j in 0..lineality.ncols() {
                let col = lineality.column(j).into_owned();
                let adj = &col - &b_plus * a.dot(&col);
                if adj.norm() > 1e-8 {
                    new_lin_cols.push(adj);
                }
            }
            lineality = span_basis(&new_lin_cols, dim);
            // Shift existing rays into a^⊥ and add b_plus as a ray. A ray
            // nearly parallel to the killed lineality direction leaves only
            // noise behind; drop it, b_plus and the lineality absorb it.
            for r in rays.iter_mut() {
                let adj = &*r - &b_plus * a.dot(r);
                *r = adj;
            }
            rays.retain(|r| r.norm() > 1e-8);
            for r in rays.iter_mut() {
                let n = r.norm();
                *r /= n;
            }
            rays.push(b_plus.normalize());
            inserted.push(a);
            continue;
        }

        // Lineality already inside a^⊥: classic ray split.
        let margins: Vec<f64> = rays.iter().map(|r| a.dot(r)).collect();
        let has_neg = margins.iter().any(|&m| m < -ZERO_TOL);
        if !has_neg {
            inserted.push(a);
            continue;
        }
        let zero_sets: Vec<Vec<bool>> = rays
            .iter()
            .map(|r| inserted.iter().map(|c| c.dot(r).abs() <= ZERO_TOL).collect())
            .collect();

        let mut new_rays: Vec<DVector<f64>> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if margins[i] >= -ZERO_TOL {
                new_rays.push(r.clone());
            }
        }
        for (i, ri) in rays.iter().enumerate() {
            if margins[i] <= ZERO_TOL {
                continue;
            }
            for (j, rj) in rays.iter().enumerate() {
                if margins[j] >= -ZERO_TOL {
                    continue;
                }
                if !adjacent(&zero_sets, i, j, rays.len()) {
                    continue;
                }
                let combo = ri * (-margins[j]) + rj * margins[i];
                let n = combo.norm();
                if n > 1e-8 {
                    new_rays.push(combo / n);
                }
            }
        }
        rays = dedupe_rays(new_rays);
        inserted.push(a);
    }

    VCone { lineality, rays }
}

/// Combinatorial adjacency test: rays i and j are adjacent iff no third ray
/// is zero on every constraint where both i and j are zero.
fn adjacent(zero_sets: &[Vec<bool>], i: usize, j: usize, n_rays: usize) -> bool {
    for k in 0..n_rays {
        if k == i || k == j {
            continue;
        }
        let dominated = zero_sets[i]
            .iter()
            .zip(&zero_sets[j])
            .zip(&zero_sets[k])
            .all(|((&zi, &zj), &zk)| !(zi && zj) || zk);
        if dominated {
            return false;
        }
    }
    true
}

fn dedupe_rays(rays: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(rays.len());
    for r in rays {
        if out.iter().all(|q| (q - &r).norm() > 1e-9) {
            out.push(r);
        }
    }
    out
}

/// Irredundant facet normals of `cone(gens)` inside `R^d`, assuming the
/// generators span `R^d`. The facets are the extreme rays of the dual cone
/// `{y : ⟨g, y⟩ ≥ 0}`; an empty result means the cone is all of `R^d`.
pub fn facets_of_spanning_cone(gens: &[DVector<f64>], dim: usize) -> Vec<DVector<f64>> {
    let dual = intersect_halfspaces(gens, dim);
    // The dual of a spanning cone is pointed, so any lineality left over is
    // numerical noise below the rank threshold.
    dual.rays
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn dv(v: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(v)
    }

    #[test]
    fn nnls_projects_into_cone() {
        // Cone spanned by e0, e1 in R^2; project (-1, 2).
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let (x, _) = nnls(&a, &dv(&[-1.0, 2.0]));
        assert!(x[0].abs() < 1e-9);
        assert!((x[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn octant_facets() {
        let gens = vec![dv(&[1.0, 0.0, 0.0]), dv(&[0.0, 1.0, 0.0]), dv(&[0.0, 0.0, 1.0])];
        let facets = facets_of_spanning_cone(&gens, 3);
        assert_eq!(facets.len(), 3);
        for f in &facets {
            for g in &gens {
                assert!(f.dot(g) > -1e-10);
            }
        }
    }

    #[test]
    fn halfspace_cone_has_single_facet() {
        // Generators of {x0 >= 0} in R^3.
        let gens = vec![
            dv(&[0.0, 1.0, 0.0]),
            dv(&[0.0, -1.0, 0.0]),
            dv(&[0.0, 0.0, 1.0]),
            dv(&[0.0, 0.0, -1.0]),
            dv(&[1.0, 0.0, 0.0]),
        ];
        let facets = facets_of_spanning_cone(&gens, 3);
        assert_eq!(facets.len(), 1);
        assert!((facets[0][0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn full_space_has_no_facets() {
        let gens = vec![
            dv(&[1.0, 0.0]),
            dv(&[-1.0, 0.0]),
            dv(&[0.0, 1.0]),
            dv(&[0.0, -1.0]),
        ];
        assert!(facets_of_spanning_cone(&gens, 2).is_empty());
    }

    #[test]
    fn intersect_halfspaces_wedge() {
        // {x: x0 >= 0, x1 >= 0} in R^3: lineality e2, rays e0 and e1.
        let cone = intersect_halfspaces(&[dv(&[1.0, 0.0, 0.0]), dv(&[0.0, 1.0, 0.0])], 3);
        assert_eq!(cone.lineality.ncols(), 1);
        assert!((cone.lineality.column(0)[2]).abs() > 0.999);
        assert_eq!(cone.rays.len(), 2);
    }

    /// Cross-validation on random cones: facet membership agrees with the
    /// NNLS convex-combination test.
    #[test]
    fn dd_agrees_with_nnls_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [3usize, 4] {
            for _ in 0..60 {
                let k = rng.random_range(2..=6);
                let gens: Vec<DVector<f64>> = (0..k)
                    .map(|_| {
                        DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)).normalize()
                    })
                    .collect();
                let basis = span_basis(&gens, dim);
                if basis.ncols() < dim {
                    continue; // not spanning; skip, facets_of assumes spanning
                }
                let facets = facets_of_spanning_cone(&gens, dim);
                let gmat = DMatrix::from_fn(dim, k, |i, j| gens[j][i]);
                for _ in 0..40 {
                    let p = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)).normalize();
                    let in_facets = facets.iter().all(|f| f.dot(&p) >= -1e-8);
                    let in_cone = cone_member(&gmat, &p, 1e-8);
                    assert_eq!(
                        in_facets, in_cone,
                        "facet test and NNLS disagree (dim {dim})"
                    );
                }
            }
        }
    }
}
