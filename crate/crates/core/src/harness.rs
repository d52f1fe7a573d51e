//! Build specifications, manifests and replay.
//!
//! A [`BuildSpec`] fully determines a code: every random choice is drawn
//! from the strategy seed through `ChaCha8Rng::seed_from_u64`. A
//! [`BuildManifest`] records the spec together with counts, distances and
//! the SHA-256 of the code file, so replaying it can be checked byte for byte.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::center::{direct_survivor_total, predicted_survivor_total, SearchProblem, Strategy};
use crate::code::{Code, MinDistance, Word};
use crate::combined::{build_combined, CombinedParams};
use crate::curve::{Curve, CurveKind, Divisor, Point};
use crate::error::{Error, Result};
use crate::field::{field_of_order, Field, ProjValue};
use crate::goppa::{build_goppa, check_points, combination, points_off_support, space_size, MAX_SPACE_SIZE};
use crate::section::{build_section_code, p1_points, SectionSpace};
use crate::xing::{build_xing, ExpansionTable, XingParams};

pub const MANIFEST_FORMAT: &str = "agcodes-manifest 1";

fn default_curve() -> CurveKind {
    CurveKind::ProjectiveLine
}

fn default_strategy() -> Strategy {
    Strategy::Exhaustive
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum BuildSpec {
    Goppa {
        q: u64,
        #[serde(default = "default_curve")]
        curve: CurveKind,
        divisor: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<String>>,
    },
    Xing {
        q: u64,
        #[serde(default = "default_curve")]
        curve: CurveKind,
        divisor: String,
        m: usize,
        radii: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<String>>,
        #[serde(default = "default_strategy")]
        strategy: Strategy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        centers: Option<Vec<Word>>,
    },
    Section {
        q: u64,
        divisor: String,
        h: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<String>>,
    },
    Combined {
        q: u64,
        divisor: String,
        h: usize,
        s0: usize,
        d0: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<String>>,
        #[serde(default = "default_strategy")]
        strategy: Strategy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Word>,
    },
}

impl BuildSpec {
    /// The CLI command that produces this spec.
    pub fn command(&self) -> &'static str {
        match self {
            BuildSpec::Goppa { .. } => "goppa build",
            BuildSpec::Xing { .. } => "xing build",
            BuildSpec::Section { .. } => "sections code",
            BuildSpec::Combined { .. } => "combined build",
        }
    }

    pub fn q(&self) -> u64 {
        match self {
            BuildSpec::Goppa { q, .. }
            | BuildSpec::Xing { q, .. }
            | BuildSpec::Section { q, .. }
            | BuildSpec::Combined { q, .. } => *q,
        }
    }

    /// The seed of a randomized strategy, if any.
    pub fn seed(&self) -> Option<u64> {
        let strategy = match self {
            BuildSpec::Xing {
                strategy,
                centers: None,
                ..
            }
            | BuildSpec::Combined {
                strategy, center: None, ..
            } => strategy,
            _ => return None,
        };
        match strategy {
            Strategy::Exhaustive => None,
            Strategy::Random { seed, .. } | Strategy::Greedy { seed } => Some(*seed),
        }
    }
}

fn parse_points(points: &Option<Vec<String>>) -> Result<Option<Vec<Point>>> {
    points
        .as_ref()
        .map(|ps| ps.iter().map(|p| Point::parse(p)).collect())
        .transpose()
}

fn parse_p1_points(field: &Field, points: &Option<Vec<String>>) -> Result<Vec<ProjValue>> {
    match parse_points(points)? {
        None => Ok(p1_points(field)),
        Some(ps) => ps
            .iter()
            .map(|p| match p.as_p1() {
                Some(ProjValue::Finite(a)) if a >= field.order() => Err(Error::precondition(format!(
                    "point {p} is not in GF({})",
                    field.order()
                ))),
                Some(v) => Ok(v),
                None => Err(Error::precondition(format!("point {p} is not a point of P^1"))),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub characteristic: u32,
    pub degree: u32,
    /// Modulus coefficients, constant term first.
    pub modulus: Vec<u32>,
}

impl FieldInfo {
    pub fn of(field: &Field) -> FieldInfo {
        FieldInfo {
            characteristic: field.characteristic(),
            degree: field.degree(),
            modulus: field.modulus().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    /// `#L(D)`, as a decimal string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub riemann_roch: Option<String>,
    /// `#M_D(h)`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sections: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survivors: Option<u64>,
    pub code: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildManifest {
    pub format: String,
    pub command: String,
    pub spec: BuildSpec,
    pub seed: Option<u64>,
    pub field: FieldInfo,
    pub points: Vec<String>,
    pub counts: Counts,
    pub claimed_distance: Option<i64>,
    /// A number, `"undefined"` for codes with fewer than two words, or
    /// absent when not measured.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured_distance: Option<String>,
    pub code_file: String,
    pub code_sha256: String,
    pub timings_ms: BTreeMap<String, f64>,
}

impl BuildManifest {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<BuildManifest> {
        let m: BuildManifest = serde_json::from_str(text)?;
        if m.format != MANIFEST_FORMAT {
            return Err(Error::parse(format!("unsupported manifest format '{}'", m.format)));
        }
        Ok(m)
    }
}

/// Parses a bare JSON build spec.
pub fn parse_spec(text: &str) -> Result<BuildSpec> {
    Ok(serde_json::from_str(text)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct BuildOutput {
    pub code: Code,
    pub text: String,
    pub manifest: BuildManifest,
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// Runs the construction described by `spec`. With `measure` set the exact
/// minimum distance is computed; a value below the claimed bound is a
/// verification failure.
pub fn run_build(spec: &BuildSpec, measure: bool) -> Result<BuildOutput> {
    let field = field_of_order(spec.q())?;
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let (code, counts) = match spec {
        BuildSpec::Goppa {
            q,
            curve,
            divisor,
            points,
        } => {
            let curve = Curve::build(*curve, &field)?;
            let d = Divisor::parse(&field, divisor)?;
            let g = build_goppa(&curve, &d, parse_points(points)?)?;
            let source = BigUint::from(*q).pow(g.basis.len() as u32);
            let counts = Counts {
                riemann_roch: Some(source.to_string()),
                code: g.code.len() as u64,
                ..Counts::default()
            };
            (g.code, counts)
        }
        BuildSpec::Xing {
            curve,
            divisor,
            m,
            radii,
            points,
            strategy,
            centers,
            ..
        } => {
            let curve = Curve::build(*curve, &field)?;
            let params = XingParams {
                divisor: Divisor::parse(&field, divisor)?,
                m: *m,
                radii: radii.clone(),
                points: parse_points(points)?,
                strategy: *strategy,
                centers: centers.clone(),
            };
            let res = build_xing(&curve, &params)?;
            let counts = Counts {
                riemann_roch: Some(res.space_size.to_string()),
                survivors: Some(res.survivors.len() as u64),
                code: res.code.len() as u64,
                ..Counts::default()
            };
            (res.code, counts)
        }
        BuildSpec::Section { divisor, h, points, .. } => {
            let space = SectionSpace::new(&field, &Divisor::parse(&field, divisor)?)?;
            let pts = parse_p1_points(&field, points)?;
            let sc = build_section_code(&space, *h, &pts)?;
            let counts = Counts {
                sections: Some(sc.sections.len() as u64),
                code: sc.code.len() as u64,
                ..Counts::default()
            };
            (sc.code, counts)
        }
        BuildSpec::Combined {
            divisor,
            h,
            s0,
            d0,
            points,
            strategy,
            center,
            ..
        } => {
            let params = CombinedParams {
                divisor: Divisor::parse(&field, divisor)?,
                h: *h,
                s0: *s0,
                d0: *d0,
                points: Some(parse_p1_points(&field, points)?),
                strategy: *strategy,
                center: center.clone(),
            };
            let res = build_combined(&field, &params)?;
            let counts = Counts {
                sections: Some(res.section_count as u64),
                survivors: Some(res.survivors.len() as u64),
                code: res.code.len() as u64,
                ..Counts::default()
            };
            (res.code, counts)
        }
    };
    timings.insert("build".to_owned(), ms(start));
    let measured_distance = if measure {
        let start = Instant::now();
        let d = code.exact_min_distance()?;
        timings.insert("distance".to_owned(), ms(start));
        if let Some(claim) = code.meta().claimed_distance {
            if !d.meets(claim) {
                return Err(Error::Verification(format!(
                    "measured minimum distance {d} is below the claimed {claim}"
                )));
            }
        }
        Some(d.to_string())
    } else {
        None
    };
    let text = code.to_text();
    let manifest = BuildManifest {
        format: MANIFEST_FORMAT.to_owned(),
        command: spec.command().to_owned(),
        spec: spec.clone(),
        seed: spec.seed(),
        field: FieldInfo::of(&field),
        points: code.meta().points.iter().map(|p| p.to_string()).collect(),
        counts,
        claimed_distance: code.meta().claimed_distance,
        measured_distance,
        code_file: String::new(),
        code_sha256: sha256_hex(text.as_bytes()),
        timings_ms: timings,
    };
    Ok(BuildOutput { code, text, manifest })
}

/// Rebuilds the code named by a manifest and checks it against the recorded
/// digest. Returns the code file text.
pub fn replay(manifest: &BuildManifest) -> Result<String> {
    let out = run_build(&manifest.spec, false)?;
    if out.manifest.field != manifest.field {
        return Err(Error::Verification(
            "replayed field modulus differs from the manifest".into(),
        ));
    }
    if out.manifest.code_sha256 != manifest.code_sha256 {
        return Err(Error::Verification(format!(
            "replayed code digest {} differs from the recorded {}",
            out.manifest.code_sha256, manifest.code_sha256
        )));
    }
    Ok(out.text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub words: usize,
    pub length: usize,
    pub measured: MinDistance,
    pub claimed: Option<i64>,
}

impl DistanceReport {
    pub fn holds(&self) -> bool {
        self.claimed.is_none_or(|c| self.measured.meets(c))
    }
}

/// Recomputes the exact minimum distance of a code from its words.
pub fn verify_distance(code: &Code) -> Result<DistanceReport> {
    Ok(DistanceReport {
        words: code.len(),
        length: code.length(),
        measured: code.exact_min_distance()?,
        claimed: code.meta().claimed_distance,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragingReport {
    pub items: usize,
    pub alphabet: u32,
    pub n: usize,
    pub radii: Vec<usize>,
    /// Sum over all center tuples of the survivor count, by direct scan.
    pub direct: BigUint,
    /// `#items * prod ball sizes`
    pub predicted: BigUint,
    /// The same sum from the ball-walk counts used by exhaustive search.
    pub walk: BigUint,
}

impl AveragingReport {
    pub fn holds(&self) -> bool {
        self.direct == self.predicted && self.walk == self.predicted
    }
}

/// The averaging identity behind center selection, for the source set and
/// radii of a Xing or combined spec. Distance preconditions are not
/// required: the identity holds for any radii.
pub fn verify_averaging(spec: &BuildSpec) -> Result<AveragingReport> {
    let field = field_of_order(spec.q())?;
    let (items, alphabet, radii) = match spec {
        BuildSpec::Xing {
            curve,
            divisor,
            m,
            radii,
            points,
            ..
        } => {
            let curve = Curve::build(*curve, &field)?;
            let d = Divisor::parse(&field, divisor)?;
            curve.check_divisor(&d)?;
            if radii.len() != *m || *m == 0 {
                return Err(Error::precondition(format!(
                    "expected {m} >= 1 radii, got {}",
                    radii.len()
                )));
            }
            let points = match parse_points(points)? {
                Some(p) => p,
                None => points_off_support(&curve, &d),
            };
            check_points(&curve, &d, &points)?;
            let basis = curve.riemann_roch_basis(&d)?;
            let q = field.order();
            let size = space_size(q, basis.len(), MAX_SPACE_SIZE)?;
            let table = ExpansionTable::new(&curve, &basis, &points, m - 1)?;
            let items: Vec<Vec<Word>> = (0..size)
                .map(|k| {
                    let c = combination(q, k, basis.len());
                    (0..*m).map(|r| table.phi(&c, r)).collect()
                })
                .collect();
            (items, q, radii.clone())
        }
        BuildSpec::Combined {
            divisor, h, s0, points, ..
        } => {
            let space = SectionSpace::new(&field, &Divisor::parse(&field, divisor)?)?;
            let pts = parse_p1_points(&field, points)?;
            let items = space
                .enumerate(*h)?
                .iter()
                .map(|f| Ok(vec![space.phi0(f, &pts)?]))
                .collect::<Result<Vec<_>>>()?;
            (items, field.order() + 1, vec![*s0])
        }
        _ => return Err(Error::precondition("averaging applies to xing and combined specs")),
    };
    let n = items.first().map_or(0, |it| it[0].len());
    let problem = SearchProblem {
        alphabet,
        n,
        radii: &radii,
        items: &items,
    };
    let direct = direct_survivor_total(&problem)?;
    let predicted = predicted_survivor_total(&problem);
    let walk = problem.survivor_counts()?.iter().map(|&c| BigUint::from(c)).sum();
    Ok(AveragingReport {
        items: items.len(),
        alphabet,
        n,
        radii,
        direct,
        predicted,
        walk,
    })
}
