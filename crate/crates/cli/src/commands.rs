//! The analyses behind each subcommand. Each returns a [`Report`] and whether
//! the primary verdict was an excluded state.

use fermiex::antisym::{antisymmetrize, exchange_antisymmetry_check, is_excluded, symmetric_pairs, ExclusionVerdict};
use fermiex::format::MatrixFile;
use fermiex::state::{normalize, partial_trace, purity, BasisSpec, NFermionTensor, SpatialMatrix, SpinLabel, SpinVector, Subsystem};
use fermiex::two_fermion::{build_state, exclusion_catalog, overlap_kernel, pauli_pair, slater_report, HeliumVariant};
use fermiex::weak_ent::{pauli_verdict_star, quantum_number_set, rank1_truncate, schmidt};
use fermiex::{Complex64, Error, NORM_INPUT_TOL};
use thiserror::Error;

use crate::report::{Report, Section, Value};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub tol: f64,
    pub rank_tol: f64,
    pub normalize: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub excluded: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.excluded {
            2
        } else {
            0
        }
    }
}

/// Parses `re:im,re:im,…`; a component without `:` is real.
pub fn parse_vector(text: &str) -> CliResult<Vec<Complex64>> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            let (re, im) = part.split_once(':').unwrap_or((part, "0"));
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Usage(format!("invalid vector component {part:?}")))
            };
            Ok(Complex64::new(parse(re)?, parse(im)?))
        })
        .collect()
}

fn verdict_text(v: &ExclusionVerdict) -> String {
    if v.excluded {
        format!("excluded ({})", v.condition)
    } else {
        "allowed".to_owned()
    }
}

fn pairs_value(pairs: &[(usize, usize)]) -> Value {
    Value::List(pairs.iter().map(|(i, j)| Value::Text(format!("({i},{j})"))).collect())
}

fn shape_section(name: &str, t: &NFermionTensor) -> Section {
    let mut s = Section::new(name);
    s.put("particles", t.particles())
        .put("modes", t.spec().modes())
        .put("spin", t.spec().spin())
        .put("norm", t.norm());
    s
}

fn exclusion_section(verdict: &ExclusionVerdict, pairs: &[(usize, usize)]) -> Section {
    let mut s = Section::new("exclusion");
    s.put("excluded", verdict.excluded)
        .put("norm_ratio", verdict.norm_ratio)
        .put("condition", verdict.condition.to_string())
        .put("symmetric_pairs", pairs_value(pairs));
    s
}

fn require_unit(norm: f64, normalize: bool) -> CliResult<()> {
    if !normalize && (norm - 1.0).abs() > NORM_INPUT_TOL {
        return Err(Error::Normalization { norm }.into());
    }
    Ok(())
}

/// Norm, exclusion verdict, pair symmetries and, for two particles, the
/// Slater rank and reduced-density purity of a state file.
pub fn cmd_analyze(input: &NFermionTensor, opts: &Options, pre_antisymmetrize: bool) -> CliResult<Outcome> {
    let mut report = Report::new("analyze");
    let state = if pre_antisymmetrize {
        report.push(shape_section("pre-state", input));
        let verdict = is_excluded(input, opts.tol)?;
        let pairs = symmetric_pairs(input, opts.tol)?;
        report.push(exclusion_section(&verdict, &pairs));
        if verdict.excluded {
            return Ok(Outcome { report, excluded: true });
        }
        normalize(&antisymmetrize(input)?, opts.tol)?
    } else {
        require_unit(input.norm(), opts.normalize)?;
        normalize(input, opts.tol)?
    };

    let antisymmetric = exchange_antisymmetry_check(&state, opts.tol)?;
    let mut shape = shape_section("state", &state);
    shape
        .put("input_norm", input.norm())
        .put("pre_antisymmetrized", pre_antisymmetrize)
        .put("antisymmetric", antisymmetric);
    report.push(shape);

    let mut excluded = false;
    if !pre_antisymmetrize {
        let verdict = is_excluded(&state, opts.tol)?;
        let pairs = symmetric_pairs(&state, opts.tol)?;
        excluded = verdict.excluded;
        report.push(exclusion_section(&verdict, &pairs));
    }

    if state.particles() == 2 {
        let mut slater = Section::new("slater");
        if antisymmetric {
            let rep = slater_report(&state, opts.rank_tol)?;
            slater
                .put("slater_rank", rep.slater_rank)
                .put("entangled", rep.entangled)
                .put("singular_values", rep.singular_values);
        } else {
            slater.put("status", "skipped (state is not antisymmetric)");
        }
        report.push(slater);

        let rho = partial_trace(&state, Subsystem::First)?;
        let mut density = Section::new("density");
        density
            .put("trace", rho.trace().re)
            .put("purity", purity(&rho)?)
            .put("eigenvalues", rho.eigenvalues());
        report.push(density);
    }
    Ok(Outcome { report, excluded })
}

/// Arguments of the `helium` command.
#[derive(Debug, Clone)]
pub struct HeliumArgs {
    pub variant: HeliumVariant,
    pub spin: Vec<Complex64>,
    /// Defaults to `spin` when absent.
    pub spin2: Option<Vec<Complex64>>,
    /// Strength `λ₂/λ₁` above which the weak entanglement warning is shown.
    pub weak_cutoff: f64,
}

/// Index of the basis mode a factor equals up to phase, if any.
fn basis_mode(v: &[Complex64]) -> Option<usize> {
    let (k, w) = v
        .iter()
        .enumerate()
        .map(|(k, a)| (k, a.norm_sqr()))
        .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    ((1.0 - w).abs() <= NORM_INPUT_TOL).then_some(k)
}

fn schmidt_section(m: &SpatialMatrix, opts: &Options, cutoff: f64) -> CliResult<(Section, usize)> {
    let dec = schmidt(m, opts.rank_tol)?;
    let trunc = rank1_truncate(m)?;
    let rep = dec.report;
    let mut s = Section::new("schmidt");
    s.put("singular_values", rep.singular_values.clone())
        .put("schmidt_rank", rep.schmidt_rank)
        .put("strength", rep.strength)
        .put("discarded_weight", trunc.discarded_weight);
    if rep.strength > cutoff {
        s.put(
            "warning",
            format!("spatial entanglement is not weak (strength > {cutoff})"),
        );
    }
    Ok((s, rep.schmidt_rank))
}

/// Catalog, normalization, Schmidt analysis and (for labeled rank-1
/// wavefunctions) quantum numbers of a Helium-type state.
pub fn cmd_helium(file: &MatrixFile, args: &HeliumArgs, opts: &Options) -> CliResult<Outcome> {
    let spin_dim = file.spec.spin();
    let s = SpinVector::new(args.spin.clone())?;
    let s2 = SpinVector::new(args.spin2.clone().unwrap_or_else(|| args.spin.clone()))?;
    if s.len() != spin_dim || s2.len() != spin_dim {
        return Err(CliError::Usage(format!(
            "spin vectors must have {spin_dim} components (got {} and {})",
            s.len(),
            s2.len()
        )));
    }
    let (m, s, s2) = if opts.normalize {
        (file.matrix.normalized()?, s.normalized()?, s2.normalized()?)
    } else {
        (file.matrix.clone(), s, s2)
    };

    let mut report = Report::new("helium");
    let mut input = Section::new("input");
    input.put("variant", args.variant.to_string()).put("modes", m.modes()).put("spin", spin_dim);
    report.push(input);

    let mut kernel = Section::new("kernel");
    kernel
        .put("K", overlap_kernel(&m)?)
        .put("spin_overlap", s.inner(&s2).norm());
    report.push(kernel);

    let catalog = exclusion_catalog(&m, &s, &s2, opts.tol)?;
    let mut cat = Section::new("catalog");
    for v in HeliumVariant::ALL {
        let verdict = catalog.get(v);
        cat.put(&v.to_string(), verdict_text(&verdict))
            .put(&format!("{v}_ratio"), verdict.norm_ratio);
    }
    report.push(cat);

    let mut excluded = catalog.get(args.variant).excluded;
    let mut state = Section::new("state");
    match build_state(args.variant, &m, &s, &s2, opts.tol) {
        Ok(st) => {
            let norm = match st.provenance() {
                fermiex::two_fermion::Provenance::Helium { normalization, .. } => *normalization,
                fermiex::two_fermion::Provenance::PauliPair { .. } => unreachable!("helium builder"),
            };
            let rep = slater_report(st.tensor(), opts.rank_tol)?;
            state
                .put("status", "built")
                .put("normalization", norm)
                .put("norm", st.tensor().norm())
                .put("slater_rank", rep.slater_rank)
                .put("entangled", rep.entangled);
        }
        Err(Error::Excluded { condition, factor }) => {
            excluded = true;
            state
                .put("status", format!("excluded ({condition})"))
                .put("vanishing_factor", factor);
        }
        Err(e) => return Err(e.into()),
    }
    report.push(state);

    let (sch, schmidt_rank) = schmidt_section(&m, opts, args.weak_cutoff)?;
    report.push(sch);

    if file.spec.mode_labels().is_some() && schmidt_rank == 1 {
        let mut qn = Section::new("quantum-numbers");
        let spec = match file.spec.spin_labels() {
            Some(_) => file.spec.clone(),
            None => file.spec.clone().with_spin_labels(SpinLabel::ladder(spin_dim))?,
        };
        let trunc = rank1_truncate(&m)?;
        match (basis_mode(&trunc.psi), basis_mode(&trunc.phi)) {
            (Some(x), Some(y)) => match quantum_number_set(args.variant, x, y, &s, &s2, &spec) {
                Ok(q) => {
                    qn.put("spatial", q.spatial().to_string())
                        .put("spin", q.spin().to_string())
                        .put("joint", q.joint());
                    if args.variant == HeliumVariant::Star {
                        let verdict = pauli_verdict_star(&trunc.psi, &trunc.phi, &s, opts.tol)?;
                        let text = if verdict.excluded {
                            "excluded (all quantum numbers equal)".to_owned()
                        } else {
                            "allowed".to_owned()
                        };
                        qn.put("pauli", text).put("pauli_ratio", verdict.norm_ratio);
                        excluded |= verdict.excluded;
                    } else {
                        qn.put("pauli", "not applicable");
                    }
                }
                Err(e @ (Error::Label(_) | Error::Config(_))) => {
                    qn.put("status", format!("unavailable ({e})"));
                }
                Err(e) => return Err(e.into()),
            },
            _ => {
                qn.put("status", "unavailable (Schmidt factor is not a basis mode)");
            }
        }
        report.push(qn);
    }
    Ok(Outcome { report, excluded })
}

/// Generic exclusion test on a pre-state.
pub fn cmd_exclusion_scan(chi: &NFermionTensor, opts: &Options) -> CliResult<Outcome> {
    let mut report = Report::new("exclusion-scan");
    report.push(shape_section("pre-state", chi));
    let verdict = is_excluded(chi, opts.tol)?;
    let pairs = symmetric_pairs(chi, opts.tol)?;
    report.push(exclusion_section(&verdict, &pairs));
    Ok(Outcome {
        report,
        excluded: verdict.excluded,
    })
}

/// Schmidt spectrum and rank-1 truncation of a spatial matrix.
pub fn cmd_schmidt(file: &MatrixFile, opts: &Options, weak_cutoff: f64) -> CliResult<Outcome> {
    require_unit(file.matrix.frobenius_norm(), opts.normalize)?;
    let m = file.matrix.normalized()?;
    let mut report = Report::new("schmidt");
    let (sch, _) = schmidt_section(&m, opts, weak_cutoff)?;
    report.push(sch);
    let trunc = rank1_truncate(&m)?;
    let mut t = Section::new("truncation");
    t.put("psi", trunc.psi.as_slice()).put("phi", trunc.phi.as_slice());
    report.push(t);
    Ok(Outcome { report, excluded: false })
}

/// Normalized antisymmetric pair of two single-particle vectors.
pub fn cmd_pauli_pair(spec: &BasisSpec, psi: &[Complex64], phi: &[Complex64], opts: &Options)
    -> CliResult<(Outcome, Option<NFermionTensor>)> {
    let dim = spec.dim();
    if psi.len() != dim || phi.len() != dim {
        return Err(CliError::Usage(format!(
            "vectors must have d*spin = {dim} components (got {} and {})",
            psi.len(),
            phi.len()
        )));
    }
    let unit = |v: &[Complex64]| -> CliResult<Vec<Complex64>> {
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        require_unit(n, opts.normalize)?;
        if n == 0.0 {
            return Err(Error::ZeroState { norm: n, tol: 0.0 }.into());
        }
        Ok(v.iter().map(|a| a / n).collect())
    };
    let (psi, phi) = (unit(psi)?, unit(phi)?);
    let overlap: Complex64 = psi.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();

    let mut report = Report::new("pauli-pair");
    let mut p = Section::new("pauli");
    p.put("dim", dim).put("overlap", overlap).put("overlap_abs", overlap.norm());
    match pauli_pair(spec, &psi, &phi, opts.tol) {
        Ok(st) => {
            p.put("excluded", false).put("condition", "none");
            report.push(p);
            let t = st.into_tensor();
            let rep = slater_report(&t, opts.rank_tol)?;
            let mut s = Section::new("state");
            let amps: Vec<Value> = t
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() != 0.0)
                .map(|(flat, a)| {
                    let idx = t.unflatten(flat);
                    Value::Text(format!(
                        "({})={}",
                        idx.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
                        Value::Complex(*a).render()
                    ))
                })
                .collect();
            s.put("norm", t.norm())
                .put("slater_rank", rep.slater_rank)
                .put("amplitudes", Value::List(amps));
            report.push(s);
            Ok((Outcome { report, excluded: false }, Some(t)))
        }
        Err(Error::Excluded { condition, factor }) => {
            p.put("excluded", true)
                .put("condition", condition.to_string())
                .put("vanishing_factor", factor);
            report.push(p);
            Ok((Outcome { report, excluded: true }, None))
        }
        Err(e) => Err(e.into()),
    }
}
