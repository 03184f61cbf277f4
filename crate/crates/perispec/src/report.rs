//! File ingestion, the full analysis pipeline, and machine-readable reports.
//!
//! Reports serialize to key-sorted JSON with floats at 17 significant digits,
//! so identical inputs and flags produce byte-identical documents (timings
//! aside). This layer is `f64`-concrete; the generic core sits underneath.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::{
    algebra_check, decoherence_split_check, multiplicative_domain, restricted_automorphism_check,
    PersistentAlgebra,
};
use crate::chain::{canonical_form, ReducedForm};
use crate::error::{Error, Result};
use crate::lift::{
    diag_pullover, persistent_iso_check, phase_damping, superop_peripheral, Superoperator,
};
use crate::matrix::{defaults, rank_pivot_threshold, StochasticMatrix};
use crate::spectral::{decoherence_time, numerical_rank, SpectralData};

/// Concrete scalar for the CLI pipeline.
pub type Stochastic = StochasticMatrix<f64>;

/// Input file format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

/// Pick the format from the file extension; anything but `.json` is CSV.
pub fn detect_format(path: &Path) -> MatrixFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => MatrixFormat::Json,
        _ => MatrixFormat::Csv,
    }
}

/// Parse and validate a stochastic matrix from disk. JSON inputs may carry an
/// optional `name`.
pub fn parse_matrix(
    path: &Path,
    format: MatrixFormat,
    validation_tol: f64,
) -> Result<(Stochastic, Option<String>)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };

    match format {
        MatrixFormat::Csv => {
            let mut rows: Vec<Vec<f64>> = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let row = line
                    .split(',')
                    .map(|cell| {
                        cell.trim().parse::<f64>().map_err(|e| {
                            parse_err(format!("line {}: {:?}: {}", lineno + 1, cell.trim(), e))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if let Some(first) = rows.first() {
                    if row.len() != first.len() {
                        return Err(parse_err(format!(
                            "line {}: expected {} fields, found {}",
                            lineno + 1,
                            first.len(),
                            row.len()
                        )));
                    }
                }
                rows.push(row);
            }
            if rows.is_empty() {
                return Err(parse_err("no rows".to_string()));
            }
            Ok((StochasticMatrix::new(&rows, validation_tol)?, None))
        }
        MatrixFormat::Json => {
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?;
            let matrix = value
                .get("matrix")
                .and_then(|m| m.as_array())
                .ok_or_else(|| parse_err("missing \"matrix\" array".to_string()))?;
            let rows = matrix
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.as_array()
                        .ok_or_else(|| parse_err(format!("row {i} is not an array")))?
                        .iter()
                        .map(|x| {
                            x.as_f64()
                                .ok_or_else(|| parse_err(format!("row {i}: non-numeric entry")))
                        })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<Vec<f64>>>>()?;
            let name = value.get("name").and_then(|v| v.as_str()).map(String::from);
            Ok((StochasticMatrix::new(&rows, validation_tol)?, name))
        }
    }
}

/// Pipeline tolerances and budgets, fed from the CLI flags.
#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    /// Projection and algebra tolerance.
    pub tol: f64,
    /// Structural-zero threshold on entries.
    pub zero_tol: f64,
    /// Decoherence-time threshold.
    pub epsilon: f64,
    /// Squaring budget for the projection limit.
    pub max_squarings: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            tol: defaults::PROJ_TOL,
            zero_tol: defaults::ZERO_TOL,
            epsilon: defaults::EPSILON,
            max_squarings: defaults::MAX_SQUARINGS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InputMeta {
    pub digest: String,
    pub name: Option<String>,
    pub source: String,
    pub n: usize,
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Metadata for a file input: sha256 of the raw bytes.
pub fn file_meta(path: &Path, s: &Stochastic, name: Option<String>) -> Result<InputMeta> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(InputMeta {
        digest: hex_digest(&bytes),
        name,
        source: path.display().to_string(),
        n: s.n(),
    })
}

/// Metadata for a parameterized (file-less) input.
pub fn param_meta(description: &str, n: usize) -> InputMeta {
    InputMeta {
        digest: hex_digest(description.as_bytes()),
        name: None,
        source: description.to_string(),
        n,
    }
}

#[derive(Clone, Debug)]
pub struct ClassSummary {
    pub states: Vec<usize>,
    pub period: usize,
    pub cyclic_classes: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct CanonicalSection {
    pub permutation: Vec<usize>,
    pub transient: Vec<usize>,
    pub classes: Vec<ClassSummary>,
    pub period_lcm: usize,
    pub transient_block: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct SpectralSection {
    pub rank_p: usize,
    pub rank_e1: usize,
    pub peripheral_values: Vec<(f64, f64)>,
    pub gap_estimate: f64,
    pub decoherence_time: usize,
    pub epsilon: f64,
}

#[derive(Clone, Debug)]
pub struct AlgebraSection {
    pub commutativity_residual: f64,
    pub associativity_residual: f64,
    pub closure_residual: f64,
    pub unit_residual: f64,
    pub multiplicativity_residual: f64,
    pub order_residual: f64,
    pub idempotent_count: usize,
    pub automorphism_order: usize,
    pub product_coincides: bool,
    pub split_holds: bool,
    pub dim_multiplicative_domain: usize,
    pub dim_vanishing: usize,
    pub multiplicative_domain: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct LiftSection {
    pub kind: String,
    pub algebra_size: usize,
    pub scalar_rank: usize,
    pub superop_rank: usize,
    pub restriction_residual: f64,
    pub dynamics_residual: f64,
    pub structure_residual: f64,
    pub unit_residual: f64,
    pub unitality_residual: f64,
    pub iso_holds: bool,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub input: InputMeta,
    pub canonical: CanonicalSection,
    pub spectral: SpectralSection,
    pub algebra: AlgebraSection,
    pub lift: Option<LiftSection>,
    pub timings: BTreeMap<String, f64>,
}

struct CoreAnalysis {
    rf: ReducedForm,
    alg: PersistentAlgebra<f64>,
    canonical: CanonicalSection,
    spectral_section: SpectralSection,
    algebra_section: AlgebraSection,
    timings: BTreeMap<String, f64>,
}

fn ms(from: Instant) -> f64 {
    from.elapsed().as_secs_f64() * 1e3
}

fn run_core(s: &Stochastic, opts: &AnalyzeOptions) -> Result<CoreAnalysis> {
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let rf = canonical_form(s, opts.zero_tol)?;
    let b00 = rf.transient_block(s);
    let canonical = CanonicalSection {
        permutation: rf.permutation.clone(),
        transient: rf.transient.clone(),
        classes: rf
            .classes
            .iter()
            .map(|c| ClassSummary {
                states: c.states.clone(),
                period: c.period,
                cyclic_classes: c.cyclic_classes.clone(),
            })
            .collect(),
        period_lcm: rf.period_lcm,
        transient_block: (0..b00.n_rows()).map(|i| b00.row(i).to_vec()).collect(),
    };
    timings.insert("canonical_ms".to_string(), ms(t));

    let t = Instant::now();
    let spectral =
        SpectralData::compute(s, &rf, opts.tol, opts.max_squarings, defaults::GAP_ITERS)?;
    let dec_time = decoherence_time(s, &spectral.p, opts.epsilon, defaults::T_MAX)?;
    let spectral_section = SpectralSection {
        rank_p: spectral.rank_p,
        rank_e1: numerical_rank(&spectral.e1, rank_pivot_threshold(&spectral.e1)),
        peripheral_values: spectral
            .peripheral_values
            .iter()
            .map(|r| r.value())
            .collect(),
        gap_estimate: spectral.gap_estimate,
        decoherence_time: dec_time,
        epsilon: opts.epsilon,
    };
    timings.insert("spectral_ms".to_string(), ms(t));

    let t = Instant::now();
    let alg = PersistentAlgebra::build(s, &rf, &spectral.p, defaults::PIVOT_TOL, opts.tol)?;
    let axioms = algebra_check(&alg);
    let auto = restricted_automorphism_check(s, &alg, opts.tol);
    let partition = multiplicative_domain(s, opts.zero_tol);
    let split = decoherence_split_check(s, &spectral.p, &partition, &alg.basis, opts.tol);
    let algebra_section = AlgebraSection {
        commutativity_residual: axioms.commutativity,
        associativity_residual: axioms.associativity,
        closure_residual: axioms.closure,
        unit_residual: axioms.unit_law,
        multiplicativity_residual: auto.multiplicativity,
        order_residual: auto.order_residual,
        idempotent_count: alg.idempotents.len(),
        automorphism_order: auto.order,
        product_coincides: split.product_coincides,
        split_holds: split.split_holds,
        dim_multiplicative_domain: split.dim_multiplicative,
        dim_vanishing: split.dim_vanishing,
        multiplicative_domain: split.partition.clone(),
    };
    timings.insert("algebra_ms".to_string(), ms(t));

    Ok(CoreAnalysis {
        rf,
        alg,
        canonical,
        spectral_section,
        algebra_section,
        timings,
    })
}

/// Full scalar pipeline: canonical form, projections, algebra, split checks.
pub fn analyze_matrix(
    s: &Stochastic,
    input: InputMeta,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport> {
    let total = Instant::now();
    let core = run_core(s, opts)?;
    let mut timings = core.timings;
    timings.insert("total_ms".to_string(), ms(total));
    Ok(AnalysisReport {
        input,
        canonical: core.canonical,
        spectral: core.spectral_section,
        algebra: core.algebra_section,
        lift: None,
        timings,
    })
}

fn lift_report(
    s: &Stochastic,
    phi: &Superoperator<f64>,
    kind: &str,
    params: Option<(f64, f64)>,
    input: InputMeta,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport> {
    let total = Instant::now();
    let core = run_core(s, opts)?;
    let mut timings = core.timings;

    let t = Instant::now();
    let p_phi = superop_peripheral(phi, &core.rf, opts.tol, opts.max_squarings)?;
    let iso = persistent_iso_check(phi, s, &core.alg, &p_phi, opts.tol);
    let lift = LiftSection {
        kind: kind.to_string(),
        algebra_size: phi.n(),
        scalar_rank: iso.scalar_rank,
        superop_rank: iso.superop_rank,
        restriction_residual: iso.restriction_residual,
        dynamics_residual: iso.dynamics_residual,
        structure_residual: iso.structure_residual,
        unit_residual: iso.unit_residual,
        unitality_residual: phi.unitality_residual(),
        iso_holds: iso.holds,
        alpha: params.map(|p| p.0),
        beta: params.map(|p| p.1),
    };
    timings.insert("lift_ms".to_string(), ms(t));
    timings.insert("total_ms".to_string(), ms(total));

    Ok(AnalysisReport {
        input,
        canonical: core.canonical,
        spectral: core.spectral_section,
        algebra: core.algebra_section,
        lift: Some(lift),
        timings,
    })
}

/// Lift a stochastic matrix through the diagonal conditional expectation and
/// verify the persistent-system isomorphism.
pub fn analyze_pullover(
    s: &Stochastic,
    input: InputMeta,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport> {
    let phi = diag_pullover(s);
    lift_report(s, &phi, "pullover", None, input, opts)
}

/// Analyze the two-angle phase-damping map via its embedded stochastic block.
pub fn analyze_phase_damping(
    alpha: f64,
    beta: f64,
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport> {
    let phi = phase_damping(alpha, beta);
    let s = StochasticMatrix::from_matrix(phi.embedded_block(), defaults::VALIDATION_TOL)?;
    let input = param_meta(
        &format!("phase-damping alpha={alpha:.16e} beta={beta:.16e}"),
        s.n(),
    );
    lift_report(&s, &phi, "phase-damping", Some((alpha, beta)), input, opts)
}

// --- serialization ---

/// JSON formatter printing every float with 17 significant digits.
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

impl AnalysisReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let complex = |&(re, im): &(f64, f64)| serde_json::json!({ "re": re, "im": im });
        let mut root = serde_json::json!({
            "input": {
                "digest": self.input.digest,
                "name": self.input.name,
                "source": self.input.source,
                "n": self.input.n,
            },
            "canonical": {
                "permutation": self.canonical.permutation,
                "transient": self.canonical.transient,
                "classes": self.canonical.classes.iter().map(|c| serde_json::json!({
                    "states": c.states,
                    "period": c.period,
                    "cyclic_classes": c.cyclic_classes,
                })).collect::<Vec<_>>(),
                "L": self.canonical.period_lcm,
                "transient_block": self.canonical.transient_block,
            },
            "spectral": {
                "rank_p": self.spectral.rank_p,
                "rank_e1": self.spectral.rank_e1,
                "peripheral_values": self.spectral.peripheral_values.iter().map(complex).collect::<Vec<_>>(),
                "gap_estimate": self.spectral.gap_estimate,
                "decoherence_time": self.spectral.decoherence_time,
                "epsilon": self.spectral.epsilon,
            },
            "algebra": {
                "commutativity_residual": self.algebra.commutativity_residual,
                "associativity_residual": self.algebra.associativity_residual,
                "closure_residual": self.algebra.closure_residual,
                "unit_residual": self.algebra.unit_residual,
                "multiplicativity_residual": self.algebra.multiplicativity_residual,
                "order_residual": self.algebra.order_residual,
                "idempotent_count": self.algebra.idempotent_count,
                "automorphism_order": self.algebra.automorphism_order,
                "product_coincides": self.algebra.product_coincides,
                "split_holds": self.algebra.split_holds,
                "dim_multiplicative_domain": self.algebra.dim_multiplicative_domain,
                "dim_vanishing": self.algebra.dim_vanishing,
                "multiplicative_domain": self.algebra.multiplicative_domain,
            },
            "timings": self.timings,
        });
        if let Some(lift) = &self.lift {
            root["lift"] = serde_json::json!({
                "kind": lift.kind,
                "algebra_size": lift.algebra_size,
                "scalar_rank": lift.scalar_rank,
                "superop_rank": lift.superop_rank,
                "restriction_residual": lift.restriction_residual,
                "dynamics_residual": lift.dynamics_residual,
                "structure_residual": lift.structure_residual,
                "unit_residual": lift.unit_residual,
                "unitality_residual": lift.unitality_residual,
                "iso_holds": lift.iso_holds,
                "alpha": lift.alpha,
                "beta": lift.beta,
            });
        }
        root
    }

    /// Key-sorted JSON with 17-significant-digit floats.
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter);
        self.to_json_value()
            .serialize(&mut ser)
            .expect("in-memory serialization");
        String::from_utf8(buf).expect("json is utf-8")
    }

    /// Human-readable rendering of the same content.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "input: {} (n = {})", self.input.source, self.input.n);
        if let Some(name) = &self.input.name {
            let _ = writeln!(out, "name: {name}");
        }
        let _ = writeln!(out, "digest: {}", self.input.digest);

        let c = &self.canonical;
        let _ = writeln!(out, "\ncanonical form");
        let _ = writeln!(out, "  permutation: {:?}", c.permutation);
        let _ = writeln!(out, "  transient:   {:?}", c.transient);
        for (j, class) in c.classes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  class {j}: states {:?}, period {}, cyclic classes {:?}",
                class.states, class.period, class.cyclic_classes
            );
        }
        let _ = writeln!(out, "  L = {}", c.period_lcm);
        if !c.transient_block.is_empty() {
            let _ = writeln!(out, "  transient block B00:");
            for row in &c.transient_block {
                let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
                let _ = writeln!(out, "    [{}]", cells.join(", "));
            }
        }

        let sp = &self.spectral;
        let _ = writeln!(out, "\nspectral");
        let _ = writeln!(out, "  rank P = {}, rank E1 = {}", sp.rank_p, sp.rank_e1);
        let values: Vec<String> = sp
            .peripheral_values
            .iter()
            .map(|(re, im)| format!("{re}{im:+}i"))
            .collect();
        let _ = writeln!(out, "  peripheral values: [{}]", values.join(", "));
        let _ = writeln!(out, "  gap estimate = {}", sp.gap_estimate);
        let _ = writeln!(
            out,
            "  decoherence time (eps = {}) = {}",
            sp.epsilon, sp.decoherence_time
        );

        let a = &self.algebra;
        let _ = writeln!(out, "\npersistent algebra");
        let _ = writeln!(
            out,
            "  residuals: commutativity {}, associativity {}, closure {}, unit {}",
            a.commutativity_residual, a.associativity_residual, a.closure_residual, a.unit_residual
        );
        let _ = writeln!(
            out,
            "  automorphism: order {}, multiplicativity residual {}, order residual {}",
            a.automorphism_order, a.multiplicativity_residual, a.order_residual
        );
        let _ = writeln!(out, "  idempotents: {}", a.idempotent_count);
        let _ = writeln!(out, "  product coincides: {}", a.product_coincides);
        let _ = writeln!(
            out,
            "  multiplicative domain: {:?} (dim {})",
            a.multiplicative_domain, a.dim_multiplicative_domain
        );
        let _ = writeln!(
            out,
            "  split holds: {} (dim vanishing {})",
            a.split_holds, a.dim_vanishing
        );

        if let Some(l) = &self.lift {
            let _ = writeln!(out, "\nlift ({})", l.kind);
            if let (Some(alpha), Some(beta)) = (l.alpha, l.beta) {
                let _ = writeln!(out, "  alpha = {alpha}, beta = {beta}");
            }
            let _ = writeln!(
                out,
                "  ranks: scalar {}, superoperator {}",
                l.scalar_rank, l.superop_rank
            );
            let _ = writeln!(
                out,
                "  residuals: restriction {}, dynamics {}, structure {}, unit {}, unitality {}",
                l.restriction_residual,
                l.dynamics_residual,
                l.structure_residual,
                l.unit_residual,
                l.unitality_residual
            );
            let _ = writeln!(out, "  isomorphism holds: {}", l.iso_holds);
        }

        let _ = writeln!(out, "\ntimings");
        for (key, value) in &self.timings {
            let _ = writeln!(out, "  {key}: {value:.3}");
        }
        out
    }
}
