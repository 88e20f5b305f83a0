//! JSON documents for polynomials, matrices, gluing data, descriptors,
//! certificates and moduli reference families.
//!
//! Rationals travel as strings (`"p/q"` or an integer), complex numbers as
//! `[re, im]` pairs. Serialization is deterministic: terms are emitted in
//! the sorted order of the underlying maps.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::gaussian::{format_rational, parse_rational};
use crate::algebra::upoly::RootLocation;
use crate::algebra::{GaussianRational, LaurentPoly, Mat2, MPoly, Monomial, Rational, UPoly};
use crate::canonical::CanonicalForm;
use crate::certificate::{CongruenceOrder, GaugeCertificate};
use crate::glue::{
    validate_glue, BaseBundleToken, BlowupBundleDescriptor, ConstMatrix, GlueMap, LinearStage,
    NullhomotopyCertificate, TopologicalClass,
};
use crate::iso_moduli::{ProjectivePoint, ReferenceFamily};
use crate::transition::SplittingType;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {message}")]
pub struct SchemaError {
    /// JSON path such as `/entries/0/1/terms/2/u`, or `line L column C` for
    /// syntax errors.
    pub location: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(location: impl Into<String>, message: impl fmt::Display) -> Self {
        SchemaError { location: location.into(), message: message.to_string() }
    }
}

/// Parses a document, reporting the JSON path of any structural mismatch.
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, SchemaError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        use serde_path_to_error::Segment;
        let path: String = e
            .path()
            .iter()
            .map(|s| match s {
                Segment::Seq { index } => format!("/{index}"),
                Segment::Map { key } => format!("/{key}"),
                Segment::Enum { variant } => format!("/{variant}"),
                Segment::Unknown => "/?".to_string(),
            })
            .collect();
        let inner = e.into_inner();
        let location = if path.is_empty() || inner.is_syntax() || inner.is_eof() {
            format!("line {} column {}", inner.line(), inner.column())
        } else {
            path
        };
        SchemaError::new(location, inner)
    })?;
    de.end().map_err(|e| SchemaError::new("trailing data", e))?;
    Ok(value)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize infallibly")
}

pub type ComplexDoc = [String; 2];

pub fn complex_doc(c: &GaussianRational) -> ComplexDoc {
    [format_rational(&c.re), format_rational(&c.im)]
}

pub fn parse_complex(doc: &ComplexDoc, loc: &str) -> Result<GaussianRational, SchemaError> {
    let part = |s: &str, i: usize| {
        parse_rational(s).map_err(|_| SchemaError::new(format!("{loc}/{i}"), format!("malformed rational `{s}`")))
    };
    Ok(GaussianRational::new(part(&doc[0], 0)?, part(&doc[1], 1)?))
}

fn parse_real(s: &str, loc: &str) -> Result<Rational, SchemaError> {
    parse_rational(s).map_err(|_| SchemaError::new(loc, format!("malformed rational `{s}`")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub c: ComplexDoc,
    pub z: i64,
    pub u: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub terms: Vec<TermDoc>,
}

impl PolyDoc {
    pub fn from_poly(p: &LaurentPoly) -> Self {
        PolyDoc {
            terms: p
                .terms()
                .map(|(m, c)| TermDoc { c: complex_doc(c), z: m.z, u: i64::from(m.u) })
                .collect(),
        }
    }

    pub fn to_poly(&self, loc: &str) -> Result<LaurentPoly, SchemaError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (n, t) in self.terms.iter().enumerate() {
            let here = format!("{loc}/terms/{n}");
            let u = u32::try_from(t.u)
                .map_err(|_| SchemaError::new(format!("{here}/u"), format!("u exponent must be a nonnegative integer, got {}", t.u)))?;
            if !seen.insert((t.z, u)) {
                return Err(SchemaError::new(here, format!("duplicate monomial z^{} u^{}", t.z, u)));
            }
            out.push((Monomial::new(t.z, u), parse_complex(&t.c, &format!("{here}/c"))?));
        }
        Ok(LaurentPoly::from_terms(out))
    }
}

pub type MatEntriesDoc = [[PolyDoc; 2]; 2];

pub fn mat_doc(m: &Mat2) -> MatEntriesDoc {
    [[PolyDoc::from_poly(&m.e[0][0]), PolyDoc::from_poly(&m.e[0][1])], [
        PolyDoc::from_poly(&m.e[1][0]),
        PolyDoc::from_poly(&m.e[1][1]),
    ]]
}

pub fn parse_mat(doc: &MatEntriesDoc, loc: &str) -> Result<Mat2, SchemaError> {
    let e = |r: usize, c: usize| doc[r][c].to_poly(&format!("{loc}/{r}/{c}"));
    Ok(Mat2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
}

/// A transition matrix file: `{"k": 1, "entries": [[p, p], [p, p]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub k: u32,
    pub entries: MatEntriesDoc,
}

impl MatrixDoc {
    pub fn new(m: &Mat2, k: u32) -> Self {
        MatrixDoc { k, entries: mat_doc(m) }
    }

    pub fn matrix(&self) -> Result<Mat2, SchemaError> {
        parse_mat(&self.entries, "/entries")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderDoc {
    Word(String),
    Depth(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub k: u32,
    /// `"exact"` or the jet order `N` of a congruence mod `u^{N+1}`.
    pub order: OrderDoc,
    pub h_u: MatEntriesDoc,
    pub h_v: MatEntriesDoc,
}

impl CertificateDoc {
    pub fn from_certificate(c: &GaugeCertificate) -> Self {
        let order = match c.order {
            CongruenceOrder::Exact => OrderDoc::Word("exact".into()),
            CongruenceOrder::UpTo(n) => OrderDoc::Depth(n),
        };
        CertificateDoc { k: c.k, order, h_u: mat_doc(&c.h_u), h_v: mat_doc(&c.h_v) }
    }

    pub fn certificate(&self) -> Result<GaugeCertificate, SchemaError> {
        let order = match &self.order {
            OrderDoc::Word(w) if w == "exact" => CongruenceOrder::Exact,
            OrderDoc::Depth(n) => CongruenceOrder::UpTo(*n),
            OrderDoc::Word(w) => return Err(SchemaError::new("/order", format!("expected \"exact\" or an integer, got `{w}`"))),
        };
        Ok(GaugeCertificate {
            k: self.k,
            h_u: parse_mat(&self.h_u, "/h_u")?,
            h_v: parse_mat(&self.h_v, "/h_v")?,
            order,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MTermDoc {
    pub c: ComplexDoc,
    pub x: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MPolyDoc {
    pub terms: Vec<MTermDoc>,
}

impl MPolyDoc {
    pub fn from_mpoly(p: &MPoly) -> Self {
        MPolyDoc { terms: p.terms().map(|(e, c)| MTermDoc { c: complex_doc(c), x: e.clone() }).collect() }
    }

    pub fn to_mpoly(&self, m: usize, loc: &str) -> Result<MPoly, SchemaError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (n, t) in self.terms.iter().enumerate() {
            let here = format!("{loc}/terms/{n}");
            if t.x.len() != m {
                return Err(SchemaError::new(format!("{here}/x"), format!("expected {m} exponents, got {}", t.x.len())));
            }
            if !seen.insert(t.x.clone()) {
                return Err(SchemaError::new(here, "duplicate monomial"));
            }
            out.push((t.x.clone(), parse_complex(&t.c, &format!("{here}/c"))?));
        }
        Ok(MPoly::from_terms(m, out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlueDoc {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Vec<MPolyDoc>>,
}

impl GlueDoc {
    pub fn from_glue(g: &GlueMap) -> Self {
        GlueDoc {
            m: g.m(),
            n: g.n(),
            entries: g.entries().iter().map(|r| r.iter().map(MPolyDoc::from_mpoly).collect()).collect(),
        }
    }

    /// Parses the raw entries without validating the determinant.
    pub fn raw_entries(&self, loc: &str) -> Result<Vec<Vec<MPoly>>, SchemaError> {
        if self.entries.len() != self.n {
            return Err(SchemaError::new(format!("{loc}/entries"), format!("expected {} rows", self.n)));
        }
        self.entries
            .iter()
            .enumerate()
            .map(|(r, row)| {
                if row.len() != self.n {
                    return Err(SchemaError::new(format!("{loc}/entries/{r}"), format!("expected {} columns", self.n)));
                }
                row.iter()
                    .enumerate()
                    .map(|(c, p)| p.to_mpoly(self.m, &format!("{loc}/entries/{r}/{c}")))
                    .collect()
            })
            .collect()
    }

    pub fn glue_map(&self, loc: &str) -> Result<GlueMap, SchemaError> {
        let entries = self.raw_entries(loc)?;
        validate_glue(self.m, self.n, entries).map_err(|e| SchemaError::new(loc, e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDoc {
    pub id: String,
    pub c1: i64,
    pub surface: String,
}

impl BaseDoc {
    pub fn from_token(t: &BaseBundleToken) -> Self {
        BaseDoc { id: t.id.clone(), c1: t.c1, surface: t.surface.clone() }
    }

    pub fn token(&self) -> BaseBundleToken {
        BaseBundleToken { id: self.id.clone(), c1: self.c1, surface: self.surface.clone() }
    }
}

/// `(E, j₁, j₂, p, Φ)` as a file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorDoc {
    pub base: BaseDoc,
    pub k: u32,
    pub j1: i64,
    pub j2: i64,
    pub p: PolyDoc,
    pub phi: GlueDoc,
}

impl DescriptorDoc {
    pub fn from_descriptor(d: &BlowupBundleDescriptor) -> Self {
        let split = d.local().split();
        DescriptorDoc {
            base: BaseDoc::from_token(d.base()),
            k: d.local().k(),
            j1: split.j1,
            j2: split.j2,
            p: PolyDoc::from_poly(&d.local().p()),
            phi: GlueDoc::from_glue(d.phi()),
        }
    }

    pub fn descriptor(&self) -> Result<BlowupBundleDescriptor, SchemaError> {
        if self.j1 < self.j2 {
            return Err(SchemaError::new("/j1", "splitting type must satisfy j1 >= j2"));
        }
        let p = self.p.to_poly("/p")?;
        let local = CanonicalForm::from_poly(self.k, SplittingType::new(self.j1, self.j2), &p)
            .map_err(|e| SchemaError::new("/p", e))?;
        let phi = self.phi.glue_map("/phi")?;
        BlowupBundleDescriptor::new(self.base.token(), local, phi).map_err(|e| SchemaError::new("", e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopoClassDoc {
    pub base: BaseDoc,
    pub j1: i64,
    pub j2: i64,
    pub p_class: PolyDoc,
}

impl TopoClassDoc {
    pub fn from_class(c: &TopologicalClass) -> Self {
        TopoClassDoc {
            base: BaseDoc::from_token(&c.base),
            j1: c.j1,
            j2: c.j2,
            p_class: PolyDoc::from_poly(&c.p_class.p()),
        }
    }

    pub fn class(&self) -> Result<TopologicalClass, SchemaError> {
        let p = self.p_class.to_poly("/p_class")?;
        let p_class = CanonicalForm::from_poly(1, SplittingType::new(self.j1, self.j2), &p)
            .map_err(|e| SchemaError::new("/p_class", e))?;
        Ok(TopologicalClass { base: self.base.token(), j1: self.j1, j2: self.j2, p_class })
    }
}

fn const_matrix_doc(m: &ConstMatrix) -> Vec<Vec<ComplexDoc>> {
    m.iter().map(|r| r.iter().map(complex_doc).collect()).collect()
}

fn upoly_doc(p: &UPoly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransvectionDoc {
    pub row: usize,
    pub col: usize,
    pub c: ComplexDoc,
}

/// A real root either exactly (`[r]`) or isolated in an open interval (`[lo, hi]`).
pub type RootDoc = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LinearStageDoc {
    Straight { det_re: Vec<String>, det_im: Vec<String> },
    Elementary {
        det_re: Vec<String>,
        det_im: Vec<String>,
        roots_in_unit_interval: Vec<RootDoc>,
        factors: Vec<TransvectionDoc>,
        waypoints: Vec<ComplexDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullhomotopyDoc {
    pub phi0: Vec<Vec<ComplexDoc>>,
    pub det: ComplexDoc,
    /// `det Φ(t·x) − det Φ(x)`; always the empty polynomial.
    pub radial_defect: MPolyDoc,
    pub linear: LinearStageDoc,
}

impl NullhomotopyDoc {
    pub fn from_certificate(c: &NullhomotopyCertificate) -> Self {
        let linear = match &c.linear {
            LinearStage::Straight { det_re, det_im } => {
                LinearStageDoc::Straight { det_re: upoly_doc(det_re), det_im: upoly_doc(det_im) }
            }
            LinearStage::Elementary { det_re, det_im, bad_roots, route } => LinearStageDoc::Elementary {
                det_re: upoly_doc(det_re),
                det_im: upoly_doc(det_im),
                roots_in_unit_interval: bad_roots
                    .iter()
                    .map(|r| match r {
                        RootLocation::Exact(x) => vec![format_rational(x)],
                        RootLocation::Between(a, b) => vec![format_rational(a), format_rational(b)],
                    })
                    .collect(),
                factors: route
                    .factors
                    .iter()
                    .map(|t| TransvectionDoc { row: t.row, col: t.col, c: complex_doc(&t.c) })
                    .collect(),
                waypoints: route.waypoints.iter().map(complex_doc).collect(),
            },
        };
        NullhomotopyDoc {
            phi0: const_matrix_doc(&c.phi0),
            det: complex_doc(&c.det),
            radial_defect: MPolyDoc::from_mpoly(&c.radial_defect),
            linear,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDoc {
    Infinity(String),
    Finite(ComplexDoc),
}

pub fn point_doc(t: &ProjectivePoint) -> PointDoc {
    match t {
        ProjectivePoint::Infinity => PointDoc::Infinity("inf".into()),
        ProjectivePoint::Finite(x) => PointDoc::Finite(complex_doc(x)),
    }
}

pub fn parse_point(doc: &PointDoc, loc: &str) -> Result<ProjectivePoint, SchemaError> {
    match doc {
        PointDoc::Infinity(s) if s == "inf" => Ok(ProjectivePoint::Infinity),
        PointDoc::Infinity(s) => Err(SchemaError::new(loc, format!("expected \"inf\" or a complex pair, got `{s}`"))),
        PointDoc::Finite(c) => Ok(ProjectivePoint::Finite(parse_complex(c, loc)?)),
    }
}

fn vector_doc(w: &[GaussianRational]) -> Vec<ComplexDoc> {
    w.iter().map(complex_doc).collect()
}

fn parse_vector(doc: &[ComplexDoc], len: usize, loc: &str) -> Result<Vec<GaussianRational>, SchemaError> {
    if doc.len() != len {
        return Err(SchemaError::new(loc, format!("expected {len} window coordinates, got {}", doc.len())));
    }
    doc.iter().enumerate().map(|(i, c)| parse_complex(c, &format!("{loc}/{i}"))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericRepDoc {
    pub t: PointDoc,
    pub w: Vec<ComplexDoc>,
}

/// The persisted `j = 2` reference family. Window coordinates are listed in
/// the order `(p₁₀, p₁₁, p₂₁)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceFamilyDoc {
    pub j: i64,
    pub window: Vec<[i64; 2]>,
    pub coordinate: [usize; 2],
    pub q1: Vec<ComplexDoc>,
    pub q2: Vec<ComplexDoc>,
    pub generic: Vec<GenericRepDoc>,
    pub samples: usize,
    pub seed: u64,
}

impl ReferenceFamilyDoc {
    pub fn from_family(f: &ReferenceFamily) -> Self {
        ReferenceFamilyDoc {
            j: 2,
            window: crate::canonical::monomial_window(2, -2, 1).iter().map(|&(i, l)| [i64::from(i), l]).collect(),
            coordinate: [f.coordinate.0, f.coordinate.1],
            q1: vector_doc(&f.q1),
            q2: vector_doc(&f.q2),
            generic: f.generic.iter().map(|(t, w)| GenericRepDoc { t: point_doc(t), w: vector_doc(w) }).collect(),
            samples: f.samples,
            seed: f.seed,
        }
    }

    pub fn family(&self) -> Result<ReferenceFamily, SchemaError> {
        let n = crate::iso_moduli::moduli::J2_WINDOW_LEN;
        if self.j != 2 {
            return Err(SchemaError::new("/j", "only the j = 2 family is supported"));
        }
        if self.coordinate.iter().any(|&c| c >= n) || self.coordinate[0] == self.coordinate[1] {
            return Err(SchemaError::new("/coordinate", "coordinate indices must be distinct window positions"));
        }
        let generic = self
            .generic
            .iter()
            .enumerate()
            .map(|(i, g)| {
                Ok((parse_point(&g.t, &format!("/generic/{i}/t"))?, parse_vector(&g.w, n, &format!("/generic/{i}/w"))?))
            })
            .collect::<Result<_, SchemaError>>()?;
        Ok(ReferenceFamily {
            coordinate: (self.coordinate[0], self.coordinate[1]),
            q1: parse_vector(&self.q1, n, "/q1")?,
            q2: parse_vector(&self.q2, n, "/q2")?,
            generic,
            samples: self.samples,
            seed: self.seed,
        })
    }
}

/// Reads a real number written as a rational string.
pub fn parse_real_arg(s: &str) -> Result<Rational, SchemaError> {
    parse_real(s, "argument")
}

/// Reads `a`, `a/b` or a pair `re,im` as a complex number.
pub fn parse_complex_arg(s: &str) -> Result<GaussianRational, SchemaError> {
    match s.split_once(',') {
        Some((re, im)) => Ok(GaussianRational::new(parse_real(re, "argument")?, parse_real(im, "argument")?)),
        None => Ok(GaussianRational::real(parse_real(s, "argument")?)),
    }
}
