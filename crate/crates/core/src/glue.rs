//! Gluing maps on `C^m − {0}` and the topological shadow of blow-up bundles.
//!
//! A gluing map is a polynomial matrix `Φ(x₁..x_m)`. It is invertible on the
//! punctured space only if `det Φ` is a nonzero constant, since the zero set
//! of a nonconstant polynomial is a hypersurface and cannot sit inside the
//! origin when `m ≥ 2`. Such a map extends over the origin and is homotopic
//! to a constant: first radially to `Φ(0)`, then from `Φ(0)` to the identity.

use num_traits::Zero;

use crate::algebra::mpoly::det;
use crate::algebra::upoly::RootLocation;
use crate::algebra::{GaussianRational, MPoly, Rational, UPoly};
use crate::canonical::CanonicalForm;
use crate::iso_moduli::{are_isomorphic, IsoBounds, IsoError, IsoVerdict};

pub type ConstMatrix = Vec<Vec<GaussianRational>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlueError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("determinant vanishes identically")]
    Singular,
    #[error("determinant {det} is not constant (term with exponents {witness:?})")]
    NotInvertibleOffOrigin { det: MPoly, witness: Vec<u32> },
}

/// A validated gluing map: `det Φ` is the nonzero constant `det`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueMap {
    m: usize,
    entries: Vec<Vec<MPoly>>,
    det: GaussianRational,
}

pub fn validate_glue(m: usize, n: usize, entries: Vec<Vec<MPoly>>) -> Result<GlueMap, GlueError> {
    if m < 2 {
        return Err(GlueError::Shape(format!("ambient dimension must be at least 2, got {m}")));
    }
    if n == 0 || entries.len() != n || entries.iter().any(|r| r.len() != n) {
        return Err(GlueError::Shape(format!("expected a {n}x{n} matrix")));
    }
    if entries.iter().flatten().any(|p| p.nvars() != m) {
        return Err(GlueError::Shape(format!("entries must be polynomials in {m} variables")));
    }
    let d = det(&entries);
    if d.is_zero() {
        return Err(GlueError::Singular);
    }
    if !d.is_constant() {
        let witness = d.nonconstant_part().terms().next().map(|(e, _)| e.clone()).unwrap_or_default();
        return Err(GlueError::NotInvertibleOffOrigin { det: d, witness });
    }
    Ok(GlueMap { m, det: d.constant_term(), entries })
}

impl GlueMap {
    pub fn identity(m: usize, n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { MPoly::one(m) } else { MPoly::zero(m) }).collect())
            .collect();
        GlueMap { m, entries, det: GaussianRational::one() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<MPoly>] {
        &self.entries
    }

    pub fn det(&self) -> &GaussianRational {
        &self.det
    }
}

/// `Φ(0)`, the value of the extension at the origin.
pub fn hartogs_value(phi: &GlueMap) -> ConstMatrix {
    phi.entries.iter().map(|r| r.iter().map(MPoly::constant_term).collect()).collect()
}

/// `I + c·E_{row,col}` with `row ≠ col`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transvection {
    pub row: usize,
    pub col: usize,
    pub c: GaussianRational,
}

/// `Φ(0) = E₁ ⋯ E_r · diag(1, …, 1, δ)`. The path shrinks every transvection
/// coefficient to zero and moves `δ` to `1` along `waypoints`, a polygon
/// avoiding the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryRoute {
    pub n: usize,
    pub factors: Vec<Transvection>,
    pub waypoints: Vec<GaussianRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearStage {
    /// `(1 − t)Φ(0) + tI` is invertible on `[0, 1]`: the real and imaginary
    /// parts of its determinant have no common root there.
    Straight { det_re: UPoly, det_im: UPoly },
    Elementary { det_re: UPoly, det_im: UPoly, bad_roots: Vec<RootLocation>, route: ElementaryRoute },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullhomotopyCertificate {
    pub phi0: ConstMatrix,
    pub det: GaussianRational,
    /// `det Φ(t·x) − det Φ(x)`, checked to be the zero polynomial.
    pub radial_defect: MPoly,
    pub linear: LinearStage,
}

impl NullhomotopyCertificate {
    pub fn is_trivial(&self) -> bool {
        let n = self.phi0.len();
        (0..n).all(|i| (0..n).all(|j| self.phi0[i][j] == delta(i, j)))
    }
}

fn delta(i: usize, j: usize) -> GaussianRational {
    if i == j {
        GaussianRational::one()
    } else {
        GaussianRational::zero()
    }
}

fn split_parts(p: &MPoly) -> (UPoly, UPoly) {
    let deg = p.terms().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
    let mut re = vec![Rational::zero(); deg + 1];
    let mut im = vec![Rational::zero(); deg + 1];
    for (e, c) in p.terms() {
        re[e[0] as usize] = c.re.clone();
        im[e[0] as usize] = c.im.clone();
    }
    (UPoly::new(re), UPoly::new(im))
}

/// `det((1 − t)Φ₀ + tI)` split into real and imaginary parts.
pub fn linear_path_det(phi0: &ConstMatrix) -> (UPoly, UPoly) {
    let n = phi0.len();
    let t = MPoly::var(1, 0);
    let one_minus_t = &MPoly::one(1) - &t;
    let m: Vec<Vec<MPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let a = one_minus_t.scale(&phi0[i][j]);
                    if i == j {
                        &a + &t
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect();
    split_parts(&det(&m))
}

/// Real roots of the complex polynomial `re + i·im` in `[0, 1]`.
fn unit_interval_roots(re: &UPoly, im: &UPoly) -> Vec<RootLocation> {
    let g = re.gcd(im);
    if g.is_zero() {
        panic!("determinant along the path vanishes identically");
    }
    g.isolate_roots(&Rational::zero(), &Rational::from_integer(1.into()))
        .into_iter()
        .map(|r| refine(&g, r))
        .collect()
}

/// Narrows an isolating interval by bisection to width `2^{-16}`, stopping
/// early at an exact rational root.
fn refine(g: &UPoly, r: RootLocation) -> RootLocation {
    let RootLocation::Between(mut a, mut b) = r else { return r };
    let two = Rational::from_integer(2.into());
    for _ in 0..16 {
        let mid = (&a + &b) / &two;
        if g.eval(&mid).is_zero() {
            return RootLocation::Exact(mid);
        }
        if g.count_roots(&a, &mid) == 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    RootLocation::Between(a, b)
}

/// Whether the segment `[a, b]` in `C` passes through the origin.
pub fn segment_hits_origin(a: &GaussianRational, b: &GaussianRational) -> bool {
    if a.is_zero() || b.is_zero() {
        return true;
    }
    let w = a * &b.conj();
    w.im.is_zero() && w.re < Rational::zero()
}

/// Row-reduces `phi0` to `diag(1, …, 1, δ)` with transvections only.
pub fn elementary_route(phi0: &ConstMatrix) -> ElementaryRoute {
    let n = phi0.len();
    let mut a = phi0.clone();
    let mut ops: Vec<Transvection> = Vec::new();
    let mut apply = |a: &mut ConstMatrix, row: usize, col: usize, c: GaussianRational| {
        if c.is_zero() {
            return;
        }
        // row_row += c · row_col
        let src = a[col].clone();
        for (x, s) in a[row].iter_mut().zip(&src) {
            *x += &(&c * s);
        }
        ops.push(Transvection { row, col, c });
    };
    for c in 0..n.saturating_sub(1) {
        if a[c][c].is_zero() {
            let r = (c + 1..n).find(|&r| !a[r][c].is_zero()).expect("invertible matrix");
            apply(&mut a, c, r, GaussianRational::one());
        }
        if !a[c][c].is_one() {
            let piv = a[c][c].clone();
            let below = c + 1;
            let coef = -(&a[below][c] / &piv);
            apply(&mut a, below, c, coef);
            let coef = &(&GaussianRational::one() - &piv) / &piv;
            apply(&mut a, below, c, coef);
            apply(&mut a, c, below, GaussianRational::one());
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let coef = -a[r][c].clone();
                apply(&mut a, r, c, coef);
            }
        }
    }
    let last = n - 1;
    for r in 0..last {
        if !a[r][last].is_zero() {
            let coef = -(&a[r][last] / &a[last][last]);
            apply(&mut a, r, last, coef);
        }
    }
    let d = a[last][last].clone();
    // E_r ⋯ E₁ Φ₀ = D, so Φ₀ = E₁⁻¹ ⋯ E_r⁻¹ D.
    let factors = ops.into_iter().map(|t| Transvection { c: -t.c, ..t }).collect();
    let one = GaussianRational::one();
    let waypoints = if segment_hits_origin(&d, &one) {
        let turned = &d * &GaussianRational::i();
        vec![d, turned, one]
    } else {
        vec![d, one]
    };
    ElementaryRoute { n, factors, waypoints }
}

impl ElementaryRoute {
    /// `E₁ ⋯ E_r · diag(1, …, 1, δ)` with `δ` the first waypoint.
    pub fn product(&self) -> ConstMatrix {
        let n = self.n;
        let mut m: ConstMatrix = (0..n).map(|i| (0..n).map(|j| delta(i, j)).collect()).collect();
        if let Some(d) = self.waypoints.first() {
            m[n - 1][n - 1] = d.clone();
        }
        for t in self.factors.iter().rev() {
            let src = m[t.col].clone();
            for (x, s) in m[t.row].iter_mut().zip(&src) {
                *x += &(&t.c * s);
            }
        }
        m
    }

    /// Reproduces `phi0` and keeps `δ` away from the origin.
    pub fn verify(&self, phi0: &ConstMatrix) -> bool {
        let n = self.n;
        n == phi0.len()
            && self.factors.iter().all(|t| t.row != t.col && t.row < n && t.col < n)
            && self.waypoints.last() == Some(&GaussianRational::one())
            && !self.waypoints.windows(2).any(|w| segment_hits_origin(&w[0], &w[1]))
            && self.product() == *phi0
    }
}

pub fn nullhomotopy_certificate(phi: &GlueMap) -> NullhomotopyCertificate {
    let d = det(&phi.entries);
    let radial_defect = &d.radial() - &d.extend_vars(1);
    assert!(radial_defect.is_zero(), "validated map with non-constant determinant");
    let phi0 = hartogs_value(phi);
    let (det_re, det_im) = linear_path_det(&phi0);
    let bad_roots = unit_interval_roots(&det_re, &det_im);
    let linear = if bad_roots.is_empty() {
        LinearStage::Straight { det_re, det_im }
    } else {
        let route = elementary_route(&phi0);
        debug_assert!(route.verify(&phi0));
        LinearStage::Elementary { det_re, det_im, bad_roots, route }
    };
    NullhomotopyCertificate { phi0, det: phi.det.clone(), radial_defect, linear }
}

/// Re-checks every recorded fact of a certificate against `phi`.
pub fn verify_nullhomotopy(phi: &GlueMap, cert: &NullhomotopyCertificate) -> bool {
    let d = det(&phi.entries);
    if !(&d.radial() - &d.extend_vars(1)).is_zero() || !cert.radial_defect.is_zero() {
        return false;
    }
    if cert.phi0 != hartogs_value(phi) || cert.det != phi.det {
        return false;
    }
    let (re, im) = linear_path_det(&cert.phi0);
    match &cert.linear {
        LinearStage::Straight { det_re, det_im } => {
            *det_re == re && *det_im == im && unit_interval_roots(&re, &im).is_empty()
        }
        LinearStage::Elementary { det_re, det_im, route, .. } => {
            *det_re == re && *det_im == im && route.verify(&cert.phi0)
        }
    }
}

/// Opaque handle for the bundle `E` on the base surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseBundleToken {
    pub id: String,
    pub c1: i64,
    pub surface: String,
}

impl BaseBundleToken {
    pub const RANK: u32 = 2;
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescriptorError {
    #[error("local data must live on the blow-up (k = 1), got k = {0}")]
    WrongDegree(u32),
    #[error("gluing map must be 2x2 in two variables, got {n}x{n} in {m}")]
    WrongGlueShape { m: usize, n: usize },
}

/// `(E, j₁, j₂, p, Φ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupBundleDescriptor {
    base: BaseBundleToken,
    local: CanonicalForm,
    phi: GlueMap,
}

impl BlowupBundleDescriptor {
    pub fn new(base: BaseBundleToken, local: CanonicalForm, phi: GlueMap) -> Result<Self, DescriptorError> {
        if local.k() != 1 {
            return Err(DescriptorError::WrongDegree(local.k()));
        }
        if phi.m() != 2 || phi.n() != 2 {
            return Err(DescriptorError::WrongGlueShape { m: phi.m(), n: phi.n() });
        }
        Ok(BlowupBundleDescriptor { base, local, phi })
    }

    pub fn base(&self) -> &BaseBundleToken {
        &self.base
    }

    pub fn local(&self) -> &CanonicalForm {
        &self.local
    }

    pub fn phi(&self) -> &GlueMap {
        &self.phi
    }
}

/// `(E, j₁, j₂, [p])`. There is deliberately no gluing field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologicalClass {
    pub base: BaseBundleToken,
    pub j1: i64,
    pub j2: i64,
    /// `p` rescaled so that its first nonzero window coefficient is `1`.
    pub p_class: CanonicalForm,
}

/// Rescales `p` by the diagonal gauge `diag(λ, 1)`.
pub fn normalize_p(form: &CanonicalForm) -> CanonicalForm {
    let w = form.window_vector();
    match w.iter().find(|c| !c.is_zero()) {
        None => form.clone(),
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            let scaled: Vec<_> = w.iter().map(|c| c * &inv).collect();
            CanonicalForm::from_window_vector(form.k(), form.split(), &scaled).expect("same window")
        }
    }
}

pub fn topological_class(d: &BlowupBundleDescriptor) -> TopologicalClass {
    let split = d.local.split();
    TopologicalClass { base: d.base.clone(), j1: split.j1, j2: split.j2, p_class: normalize_p(&d.local) }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopoError {
    #[error("isomorphism test was inconclusive within the given bounds")]
    Inconclusive,
    #[error(transparent)]
    Iso(#[from] IsoError),
}

pub fn topo_equal(a: &TopologicalClass, b: &TopologicalClass, bounds: IsoBounds) -> Result<bool, TopoError> {
    if a.base != b.base || (a.j1, a.j2) != (b.j1, b.j2) {
        return Ok(false);
    }
    if a.p_class == b.p_class {
        return Ok(true);
    }
    match are_isomorphic(&a.p_class.transition(), &b.p_class.transition(), bounds)? {
        IsoVerdict::Isomorphic(_) => Ok(true),
        IsoVerdict::Distinct { .. } => Ok(false),
        IsoVerdict::Inconclusive => Err(TopoError::Inconclusive),
    }
}

/// `π*E` itself: trivial splitting and no extension class.
pub fn is_pullback(d: &BlowupBundleDescriptor) -> bool {
    let split = d.local.split();
    split.j1 == 0 && split.j2 == 0 && d.local.is_split()
}
