//! Stable JSON documents for every command.
//!
//! Field order is fixed by the struct definitions, and exact values are
//! carried as strings so nothing is lost to floating point. The layout is
//! described in `docs/report.schema.json`.

use serde::Serialize;

use crate::classify::{ClassificationReport, ComponentClass, Kind};
use crate::coxeter::{CoxeterMatrix, Label};
use crate::dsl;
use crate::recognize::NamedType;
use crate::repr::{Ball, FaithfulnessReport, GroupElement, ViolationKind};
use crate::scalar::{FieldContext, Scalar};
use crate::search::Hit;
use crate::tits::{GramForm, KernelBasis, ScalarMatrix, Signature};

pub const SCHEMA: &str = "coxforge.report/1";

/// Exact power-basis coefficients in `gamma = 2cos(pi/N)`, constant term
/// first, plus a decimal approximation for reading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarJson {
    pub coeffs: Vec<String>,
    pub approx: String,
}

impl ScalarJson {
    pub fn new(x: &Scalar) -> Self {
        let d = x.context().degree();
        let mut coeffs: Vec<String> = x.coeffs().iter().map(|c| c.to_string()).collect();
        coeffs.resize(d, "0".to_string());
        let v = x.to_f64();
        let approx = if x.is_zero() {
            format!("{:.12}", 0.0)
        } else {
            format!("{v:.12}")
        };
        ScalarJson { coeffs, approx }
    }
}

fn matrix_json(m: &ScalarMatrix) -> Vec<Vec<ScalarJson>> {
    m.iter().map(|row| row.iter().map(ScalarJson::new).collect()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldJson {
    /// `N` in `gamma = 2cos(pi/N)`.
    pub order: u64,
    pub degree: usize,
    /// Minimal polynomial of `gamma`, constant term first.
    pub minpoly: Vec<String>,
}

impl FieldJson {
    pub fn new(ctx: &FieldContext) -> Self {
        FieldJson {
            order: ctx.order(),
            degree: ctx.degree(),
            minpoly: ctx.minpoly().iter().map(|c| c.to_string()).collect(),
        }
    }
}

/// Generator names of `m`, in order.
pub fn generator_names(m: &CoxeterMatrix) -> Vec<String> {
    (0..m.rank()).map(|s| m.name(s)).collect()
}

/// A word over the generators. Single-character names are concatenated, as
/// in `st`; longer names are joined with `*`.
pub fn word_string(m: &CoxeterMatrix, word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    let names: Vec<String> = word.iter().map(|&s| m.name(s)).collect();
    if names.iter().all(|n| n.chars().count() == 1) {
        names.concat()
    } else {
        names.join("*")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentJson {
    pub generators: Vec<String>,
    pub kind: Kind,
    pub name: NamedType,
    pub signature: Signature,
}

impl ComponentJson {
    fn new(m: &CoxeterMatrix, c: &ComponentClass) -> Self {
        ComponentJson {
            generators: c.vertices.iter().map(|&v| m.name(v)).collect(),
            kind: c.kind,
            name: c.name,
            signature: c.signature,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveJson {
    pub verdict: &'static str,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub generators: Vec<String>,
    pub components: Vec<ComponentJson>,
    pub amenable_radical_factors: Vec<ComponentJson>,
    pub cstar_simple: bool,
    pub unique_trace: bool,
    pub primitive: PrimitiveJson,
}

impl ClassifyJson {
    pub fn new(m: &CoxeterMatrix, r: &ClassificationReport) -> Self {
        ClassifyJson {
            schema: SCHEMA,
            command: "classify",
            generators: generator_names(m),
            components: r.components.iter().map(|c| ComponentJson::new(m, c)).collect(),
            amenable_radical_factors: r
                .amenable_radical_factors
                .iter()
                .map(|c| ComponentJson::new(m, c))
                .collect(),
            cstar_simple: r.cstar.simple,
            unique_trace: r.cstar.unique_trace,
            primitive: PrimitiveJson {
                verdict: if r.primitive.primitive { "yes" } else { "no" },
                reason: r.primitive.reason.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelJson {
    pub dimension: usize,
    /// Generators whose basis vectors span a complement of the kernel.
    pub complement: Vec<String>,
    pub basis: Vec<Vec<ScalarJson>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignatureJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub generators: Vec<String>,
    pub field: FieldJson,
    pub gram: Vec<Vec<ScalarJson>>,
    pub signature: Signature,
    pub kernel: KernelJson,
}

impl SignatureJson {
    pub fn new(g: &GramForm, sig: Signature, k: &KernelBasis) -> Self {
        let m = g.source();
        SignatureJson {
            schema: SCHEMA,
            command: "signature",
            generators: generator_names(m),
            field: FieldJson::new(g.context()),
            gram: matrix_json(g.entries()),
            signature: sig,
            kernel: KernelJson {
                dimension: k.dimension(),
                complement: k.complement_index.iter().map(|&c| m.name(c)).collect(),
                basis: k
                    .vectors
                    .iter()
                    .map(|v| v.iter().map(ScalarJson::new).collect())
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorMatrixJson {
    pub generator: String,
    pub matrix: Vec<Vec<ScalarJson>>,
    pub preserves_form: bool,
    pub fixes_kernel: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BallJson {
    pub radius: usize,
    pub size: usize,
    pub level_sizes: Vec<usize>,
    pub closed: bool,
}

impl BallJson {
    pub fn new(b: &Ball) -> Self {
        BallJson {
            radius: b.radius,
            size: b.len(),
            level_sizes: b.level_sizes.clone(),
            closed: b.closed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReprJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub generators: Vec<String>,
    pub field: FieldJson,
    pub reflections: Vec<GeneratorMatrixJson>,
    pub ball: BallJson,
}

impl ReprJson {
    pub fn new(g: &GramForm, k: &KernelBasis, reflections: &[GroupElement], ball: &Ball) -> Self {
        let m = g.source();
        ReprJson {
            schema: SCHEMA,
            command: "repr",
            generators: generator_names(m),
            field: FieldJson::new(g.context()),
            reflections: reflections
                .iter()
                .enumerate()
                .map(|(s, r)| GeneratorMatrixJson {
                    generator: m.name(s),
                    matrix: matrix_json(&r.matrix()),
                    preserves_form: r.preserves_form(g),
                    fixes_kernel: r.fixes_kernel(k),
                })
                .collect(),
            ball: BallJson::new(ball),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationJson {
    pub word: String,
    pub letters: Vec<String>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaithfulJson {
    pub schema: &'static str,
    pub command: &'static str,
    pub generators: Vec<String>,
    pub signature: Signature,
    pub kernel_dimension: usize,
    pub radius: usize,
    pub checked: usize,
    pub closed: bool,
    /// True when no element of the ball acts as `±I` on the quotient.
    pub faithful_on_ball: bool,
    pub violations: Vec<ViolationJson>,
}

impl FaithfulJson {
    pub fn new(m: &CoxeterMatrix, sig: Signature, r: &FaithfulnessReport) -> Self {
        FaithfulJson {
            schema: SCHEMA,
            command: "verify-faithful",
            generators: generator_names(m),
            signature: sig,
            kernel_dimension: sig.r,
            radius: r.radius,
            checked: r.checked,
            closed: r.closed,
            faithful_on_ball: r.violations.is_empty(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationJson {
                    word: word_string(m, &v.word),
                    letters: v.word.iter().map(|&s| m.name(s)).collect(),
                    kind: v.kind,
                })
                .collect(),
        }
    }
}

/// One line of `search` output.
#[derive(Debug, Clone, Serialize)]
pub struct HitJson {
    pub schema: &'static str,
    pub n: usize,
    pub canonical: Vec<Label>,
    pub dsl: String,
    pub signature: Signature,
    pub kind: Kind,
    pub name: NamedType,
}

impl HitJson {
    pub fn new(h: &Hit) -> Self {
        HitJson {
            schema: SCHEMA,
            n: h.matrix.rank(),
            canonical: h.canonical.clone(),
            dsl: dsl::render(&h.matrix).trim_end().replace('\n', "; "),
            signature: h.class.signature,
            kind: h.class.kind,
            name: h.class.name,
        }
    }
}

/// Pretty-printed document with a trailing newline.
pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types always serialize");
    s.push('\n');
    s
}

/// Single-line document with a trailing newline.
pub fn to_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("report types always serialize");
    s.push('\n');
    s
}
