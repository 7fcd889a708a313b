//! Points, metric, segments, antipodes, group action and cross-ratios on
//! the real projective sphere `S^n`.
//!
//! `S^n` is the quotient of `R^{n+1} - {0}` by positive scaling; we store
//! representatives as unit vectors. Automorphisms are elements of
//! `SL±(n+1, R)` acting by `x ↦ Mx / |Mx|`.

use nalgebra::{DMatrix, DVector};

use crate::{GeometryError, Result, EPS_ANGLE, EPS_NORM};

/// A point of `S^n`, stored as a unit vector of `R^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: DVector<f64>,
}

impl SpherePoint {
    /// Normalizes `coords` onto the sphere. Errors on the zero vector.
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(coords.into()))
    }

    pub fn from_vector(coords: DVector<f64>) -> Result<Self> {
        let norm = coords.norm();
        if norm < EPS_NORM || !norm.is_finite() {
            return Err(GeometryError::ZeroVector);
        }
        Ok(SpherePoint {
            coords: coords / norm,
        })
    }

    /// The k-th standard basis point `e_k` of `S^n` (ambient length n+1).
    pub fn standard(n: usize, k: usize) -> Self {
        let mut v = DVector::zeros(n + 1);
        v[k] = 1.0;
        SpherePoint { coords: v }
    }

    /// Ambient dimension n of the sphere this point lives on.
    pub fn sphere_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.coords.dot(&other.coords)
    }

    /// Antipodal map `x ↦ -x`. An exact involution.
    pub fn antipode(&self) -> SpherePoint {
        SpherePoint {
            coords: -&self.coords,
        }
    }

    /// Two points are considered equal when their distance is below
    /// [`EPS_ANGLE`].
    pub fn approx_eq(&self, other: &SpherePoint) -> bool {
        dist(self, other) < EPS_ANGLE
    }
}

/// Riemannian distance on `S^n`: the angle `arccos ⟨p, q⟩ ∈ [0, π]`.
///
/// Computed as `2·atan2(‖p−q‖, ‖p+q‖)`, which is exact at both ends of the
/// range where `arccos` loses half its digits.
pub fn dist(p: &SpherePoint, q: &SpherePoint) -> f64 {
    let diff = (p.coords() - q.coords()).norm();
    let sum = (p.coords() + q.coords()).norm();
    2.0 * diff.atan2(sum)
}

/// A projective automorphism of `S^n`, i.e. an element of `SL±(n+1, R)`.
///
/// The matrix is normalized to `|det| = 1` at construction; the action on
/// the sphere is scale-invariant so this loses nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    matrix: DMatrix<f64>,
}

impl Automorphism {
    /// Builds an automorphism from any invertible matrix, normalizing the
    /// determinant. Errors when the matrix is singular within tolerance.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(GeometryError::SingularInput);
        }
        let d = matrix.nrows();
        let det = matrix.clone().lu().determinant();
        if !det.is_finite() || det.abs() < 1e-300 {
            return Err(GeometryError::SingularInput);
        }
        let scale = det.abs().powf(1.0 / d as f64);
        let normalized = matrix / scale;
        // Guard against badly conditioned inputs that normalize to junk.
        let det2 = normalized.clone().lu().determinant().abs();
        if (det2 - 1.0).abs() > 1e-6 {
            return Err(GeometryError::SingularInput);
        }
        Ok(Automorphism { matrix: normalized })
    }

    pub fn from_rows(n_plus_1: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n_plus_1 * n_plus_1 {
            return Err(GeometryError::DimensionMismatch {
                expected: n_plus_1 * n_plus_1,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n_plus_1, n_plus_1, entries))
    }

    pub fn identity(n: usize) -> Self {
        Automorphism {
            matrix: DMatrix::identity(n + 1, n + 1),
        }
    }

    /// Diagonal automorphism; entries are determinant-normalized.
    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_row_slice(entries)))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn sphere_dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    /// Projective action `p ↦ normalize(M p)`.
    ///
    /// A zero image cannot occur for `|det| = 1` within tolerance, which the
    /// constructor guarantees.
    pub fn act(&self, p: &SpherePoint) -> SpherePoint {
        let image = &self.matrix * p.coords();
        SpherePoint::from_vector(image).expect("normalized automorphism maps sphere to sphere")
    }

    /// Composition: `(g.compose(h)).act(p) = g.act(h.act(p))`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .expect("normalized automorphism is invertible");
        Automorphism { matrix: inv }
    }
}

/// A convex segment: the minor great-circle arc joining a proper pair.
#[derive(Debug, Clone)]
pub struct Segment {
    a: SpherePoint,
    b: SpherePoint,
    length: f64,
}

impl Segment {
    pub fn endpoints(&self) -> (&SpherePoint, &SpherePoint) {
        (&self.a, &self.b)
    }

    /// Arc length in radians, `< π` for a minor segment.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Point at arc-length fraction `t ∈ [0, 1]` from the first endpoint.
    pub fn point_at(&self, t: f64) -> SpherePoint {
        slerp(&self.a, &self.b, t)
    }

    pub fn midpoint(&self) -> SpherePoint {
        self.point_at(0.5)
    }
}

/// Spherical linear interpolation between two non-antipodal points.
pub fn slerp(a: &SpherePoint, b: &SpherePoint, t: f64) -> SpherePoint {
    let theta = dist(a, b);
    if theta < EPS_ANGLE {
        return a.clone();
    }
    let sin_theta = theta.sin();
    let v = a.coords() * (((1.0 - t) * theta).sin() / sin_theta)
        + b.coords() * ((t * theta).sin() / sin_theta);
    SpherePoint::from_vector(v).expect("slerp of a proper pair stays on the sphere")
}

/// The shorter arc joining a proper pair. Errors when the pair is antipodal
/// within tolerance (no unique minor geodesic exists).
pub fn minor_segment(p: &SpherePoint, q: &SpherePoint) -> Result<Segment> {
    let d = dist(p, q);
    if d >= std::f64::consts::PI - EPS_ANGLE {
        return Err(GeometryError::ImproperPair);
    }
    Ok(Segment {
        a: p.clone(),
        b: q.clone(),
        length: d,
    })
}

/// Rank of the matrix whose rows are the given points, with the relative
/// singular-value threshold used everywhere for dimension decisions.
pub fn point_rank(points: &[&SpherePoint]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let d = points[0].coords().len();
    let mat = DMatrix::from_fn(points.len(), d, |i, j| points[i].coords()[j]);
    let sv = mat.singular_values();
    let scale = sv.max();
    if scale <= 0.0 {
        return 0;
    }
    // Ties resolved toward the lower dimension.
    sv.iter().filter(|&&s| s > 1e-9 * scale).count()
}

/// Whether the points lie on a common great circle within tolerance.
pub fn collinear(points: &[&SpherePoint]) -> bool {
    point_rank(points) <= 2
}

/// Cross-ratio of four points on a common segment of length `< π`:
/// `[o, s; q, p] = (sin d(o,q) / sin d(s,q)) · (sin d(s,p) / sin d(o,p))`.
///
/// The value is invariant under the projective action.
pub fn cross_ratio(
    o: &SpherePoint,
    s: &SpherePoint,
    q: &SpherePoint,
    p: &SpherePoint,
) -> Result<f64> {
    let pts = [o, s, q, p];
    if !collinear(&pts) {
        return Err(GeometryError::NonCollinear);
    }
    // All six pairwise distances must stay inside an arc shorter than π.
    let mut max_d: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            max_d = max_d.max(dist(pts[i], pts[j]));
        }
    }
    if max_d >= std::f64::consts::PI - EPS_ANGLE {
        return Err(GeometryError::DegenerateCrossRatio(
            "points span an arc of length >= pi",
        ));
    }
    if dist(s, q) < EPS_ANGLE {
        return Err(GeometryError::DegenerateCrossRatio("s coincides with q"));
    }
    if dist(o, p) < EPS_ANGLE {
        return Err(GeometryError::DegenerateCrossRatio("o coincides with p"));
    }
    Ok((dist(o, q).sin() / dist(s, q).sin()) * (dist(s, p).sin() / dist(o, p).sin()))
}

/// A closed or open hemisphere inside its great sphere.
///
/// The full-dimensional case (span = `R^{n+1}`) doubles as an affine patch:
/// the open hemisphere carries the affine structure of `R^n`.
#[derive(Debug, Clone)]
pub struct Hemisphere {
    center: SpherePoint,
    /// Orthonormal basis of the containing great sphere's linear span;
    /// the first column is the center.
    span_basis: DMatrix<f64>,
    closed: bool,
}

impl Hemisphere {
    /// Full-dimensional hemisphere `{x : ⟨x, center⟩ ≥ 0}` (or `> 0`).
    pub fn full(center: SpherePoint, closed: bool) -> Self {
        let span_basis = tangent_frame(&center);
        Hemisphere {
            center,
            span_basis,
            closed,
        }
    }

    pub fn center(&self) -> &SpherePoint {
        &self.center
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    /// Dimension i of the hemisphere (span dimension minus one).
    pub fn dim(&self) -> usize {
        self.span_basis.ncols() - 1
    }

    fn in_span(&self, p: &SpherePoint) -> bool {
        if self.span_basis.ncols() == p.coords().len() {
            return true;
        }
        let proj = &self.span_basis * (self.span_basis.transpose() * p.coords());
        (proj - p.coords()).norm() < EPS_ANGLE
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        if !self.in_span(p) {
            return false;
        }
        let margin = p.dot(&self.center);
        if self.closed {
            margin >= -EPS_ANGLE
        } else {
            margin > EPS_ANGLE
        }
    }

    /// Central projection of `p` onto the tangent hyperplane at the center.
    ///
    /// For a patch centered at a standard basis vector `e_k` this gives the
    /// usual affine coordinates `x_i / x_k`. Errors when `p` is on or beyond
    /// the boundary great sphere.
    pub fn patch_coords(&self, p: &SpherePoint) -> Result<Vec<f64>> {
        let h = p.dot(&self.center);
        if h <= EPS_ANGLE {
            return Err(GeometryError::OutOfPatch);
        }
        let mut out = Vec::with_capacity(self.span_basis.ncols() - 1);
        for j in 1..self.span_basis.ncols() {
            let b = self.span_basis.column(j);
            out.push(p.coords().dot(&b.into_owned()) / h);
        }
        Ok(out)
    }

    /// Inverse of [`Hemisphere::patch_coords`].
    pub fn patch_point(&self, coords: &[f64]) -> Result<SpherePoint> {
        if coords.len() != self.span_basis.ncols() - 1 {
            return Err(GeometryError::DimensionMismatch {
                expected: self.span_basis.ncols() - 1,
                got: coords.len(),
            });
        }
        let mut v = self.center.coords().clone();
        for (j, &c) in coords.iter().enumerate() {
            v += self.span_basis.column(j + 1).into_owned() * c;
        }
        SpherePoint::from_vector(v)
    }
}

/// Completes `center` to an orthonormal basis of the ambient space, center
/// first. For a standard basis vector the frame is the remaining standard
/// axes in index order, so patch coordinates match the usual conventions.
pub fn tangent_frame(center: &SpherePoint) -> DMatrix<f64> {
    let d = center.coords().len();
    let mut cols: Vec<DVector<f64>> = vec![center.coords().clone()];
    for k in 0..d {
        let mut v = DVector::zeros(d);
        v[k] = 1.0;
        // Gram-Schmidt against what we already have.
        for c in &cols {
            let t = v.dot(c);
            v -= c * t;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v / norm);
        }
        if cols.len() == d {
            break;
        }
    }
    DMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn sp(v: &[f64]) -> SpherePoint {
        SpherePoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dist_basic_cases() {
        let e0 = SpherePoint::standard(2, 0);
        let e1 = SpherePoint::standard(2, 1);
        assert_relative_eq!(dist(&e0, &e0), 0.0);
        assert_relative_eq!(dist(&e0, &e0.antipode()), PI);
        assert_relative_eq!(dist(&e0, &e1), FRAC_PI_2);
    }

    #[test]
    fn antipode_is_involution() {
        let p = sp(&[0.3, -0.4, 0.85]);
        assert_eq!(p.antipode().antipode(), p);
        assert_relative_eq!(dist(&p, &p.antipode()), PI);
    }

    #[test]
    fn act_fixes_eigenvectors_of_diagonal() {
        let g = Automorphism::diagonal(&[2.0, 1.0, 0.5]).unwrap();
        let e2 = SpherePoint::standard(2, 2);
        assert!(g.act(&e2).approx_eq(&e2));
        let id = Automorphism::identity(2);
        let p = sp(&[1.0, 2.0, -0.5]);
        assert!(id.act(&p).approx_eq(&p));
    }

    #[test]
    fn act_matches_direct_matrix_product() {
        let g = Automorphism::diagonal(&[2.0, 1.0, 0.5]).unwrap();
        let p = sp(&[1.0, 0.0, 1.0]);
        let expected = sp(&[2.0, 0.0, 0.5]);
        assert!(g.act(&p).approx_eq(&expected));
    }

    #[test]
    fn act_is_a_group_action() {
        let g = Automorphism::from_rows(3, &[1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0]).unwrap();
        let h = Automorphism::diagonal(&[3.0, 1.0, 1.0]).unwrap();
        let p = sp(&[0.2, -0.7, 0.4]);
        assert!(g.compose(&h).act(&p).approx_eq(&g.act(&h.act(&p))));
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        assert!(Automorphism::new(m).is_err());
    }

    #[test]
    fn minor_segment_quarter_arc() {
        let e0 = SpherePoint::standard(2, 0);
        let e1 = SpherePoint::standard(2, 1);
        let s = minor_segment(&e0, &e1).unwrap();
        assert_relative_eq!(s.length(), FRAC_PI_2);
        assert!(s.midpoint().approx_eq(&sp(&[1.0, 1.0, 0.0])));
    }

    #[test]
    fn minor_segment_rejects_antipodes() {
        let e0 = SpherePoint::standard(2, 0);
        assert!(matches!(
            minor_segment(&e0, &e0.antipode()),
            Err(GeometryError::ImproperPair)
        ));
    }

    #[test]
    fn cross_ratio_fixed_configuration() {
        // Arc positions (o, s, q, p) = (0, π/2, π/3, π/6) on a great circle.
        let at = |t: f64| sp(&[t.cos(), t.sin(), 0.0]);
        let v = cross_ratio(&at(0.0), &at(FRAC_PI_2), &at(PI / 3.0), &at(PI / 6.0)).unwrap();
        assert_relative_eq!(v, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn cross_ratio_degenerate_cases() {
        let at = |t: f64| sp(&[t.cos(), t.sin(), 0.0]);
        // o = q gives sin d(o,q) = 0.
        let v = cross_ratio(&at(0.1), &at(1.0), &at(0.1), &at(0.4)).unwrap();
        assert_relative_eq!(v, 0.0, epsilon = 1e-12);
        // s = q divides by zero.
        assert!(cross_ratio(&at(0.1), &at(1.0), &at(1.0), &at(0.4)).is_err());
        // Non-collinear input.
        let off = sp(&[0.0, 0.0, 1.0]);
        assert!(matches!(
            cross_ratio(&at(0.0), &at(1.0), &off, &at(0.4)),
            Err(GeometryError::NonCollinear)
        ));
    }

    #[test]
    fn cross_ratio_projectively_invariant() {
        let at = |t: f64| sp(&[t.cos(), t.sin(), 0.0]);
        let (o, s, q, p) = (at(0.0), at(FRAC_PI_2), at(PI / 3.0), at(PI / 6.0));
        let g = Automorphism::diagonal(&[2.0, 1.0, 0.5]).unwrap();
        let v0 = cross_ratio(&o, &s, &q, &p).unwrap();
        let v1 = cross_ratio(&g.act(&o), &g.act(&s), &g.act(&q), &g.act(&p)).unwrap();
        assert_relative_eq!(v0, v1, epsilon = 1e-9);
    }

    #[test]
    fn patch_round_trip() {
        let patch = Hemisphere::full(SpherePoint::standard(2, 0), false);
        assert_eq!(
            patch.patch_coords(&SpherePoint::standard(2, 0)).unwrap(),
            vec![0.0, 0.0]
        );
        let p = sp(&[1.0, 1.0, 0.0]);
        let coords = patch.patch_coords(&p).unwrap();
        assert_relative_eq!(coords[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(coords[1], 0.0, epsilon = 1e-12);
        let q = patch.patch_point(&coords).unwrap();
        assert!(dist(&p, &q) < 1e-12);
        // Boundary point is out of the patch.
        assert!(matches!(
            patch.patch_coords(&SpherePoint::standard(2, 1)),
            Err(GeometryError::OutOfPatch)
        ));
    }
}
