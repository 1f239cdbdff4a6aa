//! Command-line front end: validation reports, gluing construction,
//! extraction, decomposition, demos and state application.
//!
//! Exit codes: 0 success, 1 I/O or schema error, 2 mathematical verdict
//! failure. `CPMGLUE_TOL` overrides the verdict tolerance.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_complex::Complex64;

use crate::channel::KrausChannel;
use crate::constructions::{
    self, CollapseCoupling, DevicePair, SuperpositionProbe,
};
use crate::error::Error;
use crate::gluing::{self, GluingMatrix, LspVectors};
use crate::io;
use crate::matrix::ComplexMatrix;
use crate::numerics::DEFAULT_TOL;
use crate::subspace::{self, BlockSplit};

#[derive(Parser)]
#[command(name = "cpmglue", version, about = "Gluings of completely positive maps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a channel; with a split, also report SP/LSP structure.
    Validate {
        channel: PathBuf,
        #[arg(long)]
        split: Option<PathBuf>,
    },
    /// Build the gluing of two channels from a coefficient matrix or LSP vectors.
    Glue {
        phi1: PathBuf,
        phi2: PathBuf,
        #[arg(long, conflicts_with = "lsp")]
        matrix: Option<PathBuf>,
        /// Two vector files with the LSP coefficients.
        #[arg(long, num_args = 2, value_names = ["C1", "C2"])]
        lsp: Option<Vec<PathBuf>>,
        #[arg(long)]
        split: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Recover the gluing matrix of an SP gluing of two given channels.
    Extract {
        phi: PathBuf,
        phi1: PathBuf,
        phi2: PathBuf,
        #[arg(long)]
        split: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Analyze a coefficient matrix and decompose it into extreme points.
    Decompose { c: PathBuf },
    /// Run a named worked example and assert its claims.
    Demo { name: String },
    /// Apply a channel to a state and print the output matrix.
    Apply { phi: PathBuf, state: PathBuf },
}

fn tol() -> f64 {
    std::env::var("CPMGLUE_TOL")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(DEFAULT_TOL)
}

/// 12 significant digits.
fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{:.11e}", x)
}

fn sig_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| sig(x)).collect::<Vec<_>>().join(", ")
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_matrix(m: &ComplexMatrix) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| {
                let z = m.get(r, c);
                format!("({}, {})", sig(z.re), sig(z.im))
            })
            .collect();
        println!("  [{}]", row.join(", "));
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) => 1,
        _ => 2,
    }
}

/// Parses the process arguments and runs the selected command, returning
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.cmd {
        Cmd::Validate { channel, split } => cmd_validate(&channel, split.as_deref()),
        Cmd::Glue {
            phi1,
            phi2,
            matrix,
            lsp,
            split,
            out,
        } => cmd_glue(&phi1, &phi2, matrix.as_deref(), lsp.as_deref(), &split, &out),
        Cmd::Extract {
            phi,
            phi1,
            phi2,
            split,
            out,
        } => cmd_extract(&phi, &phi1, &phi2, &split, &out),
        Cmd::Decompose { c } => cmd_decompose(&c),
        Cmd::Demo { name } => cmd_demo(&name),
        Cmd::Apply { phi, state } => cmd_apply(&phi, &state),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_validate(channel_path: &Path, split_path: Option<&Path>) -> crate::Result<i32> {
    let phi = io::load_channel(channel_path)?;
    let tol = tol();
    let report = phi.classify_at(tol);
    println!("CP: {}", yesno(report.is_cp));
    println!("TP: {}", yesno(report.is_tp));
    println!("K = {}", report.kraus_number);
    println!("min Choi eigenvalue = {}", sig(report.min_choi_eigenvalue));
    println!("TP residual = {}", sig(report.tp_residual));
    if let Some(split_path) = split_path {
        let split = io::load_split(split_path)?;
        let residual = subspace::sp_residual(&phi, &split)?;
        let sp = residual <= tol * phi.choi().matrix.trace().re.max(1.0);
        println!("SP: {}", yesno(sp));
        println!("SP residual = {}", sig(residual));
        if sp {
            let (b1, b2) = subspace::sp_blocks(&phi, &split)?;
            let r1 = b1.linearly_independent()?;
            let r2 = b2.linearly_independent()?;
            let g = gluing::extract_gluing_matrix_with_reps(&phi, r1.kraus(), r2.kraus(), &split)?;
            let a = gluing::analyze(&g, tol)?;
            println!("singulars: {}", sig_list(&a.singulars));
            println!("LSP: {}", yesno(a.is_lsp));
            println!("extreme: {}", yesno(a.is_extreme));
            println!("predicted K = {}", a.predicted_kraus_number);
        }
    }
    Ok(if report.is_cp { 0 } else { 2 })
}

fn cmd_glue(
    phi1_path: &Path,
    phi2_path: &Path,
    matrix_path: Option<&Path>,
    lsp_paths: Option<&[PathBuf]>,
    split_path: &Path,
    out_path: &Path,
) -> crate::Result<i32> {
    let phi1 = io::load_channel(phi1_path)?;
    let phi2 = io::load_channel(phi2_path)?;
    let split = io::load_split(split_path)?;
    let glued = match (matrix_path, lsp_paths) {
        (Some(matrix_path), None) => {
            let c = io::load_matrix(matrix_path)?;
            let g = gluing::canonical_gluing_matrix(&phi1, &phi2, c)?;
            let built = gluing::build_gluing(&phi1, &phi2, &g, &split)?;
            println!("representations used:");
            println!("rep1:");
            for v in &g.rep1 {
                print_matrix(v);
            }
            println!("rep2:");
            for w in &g.rep2 {
                print_matrix(w);
            }
            built
        }
        (None, Some(paths)) => {
            let c1 = io::load_vector(&paths[0])?;
            let c2 = io::load_vector(&paths[1])?;
            gluing::build_lsp(&phi1, &phi2, &LspVectors { c1, c2 }, &split)?
        }
        _ => {
            return Err(Error::InvalidInput(
                "exactly one of --matrix or --lsp is required".into(),
            ))
        }
    };
    io::save_channel(out_path, &glued, Some("gluing".into()))?;
    println!("wrote {}", out_path.display());
    Ok(0)
}

fn cmd_extract(
    phi_path: &Path,
    phi1_path: &Path,
    phi2_path: &Path,
    split_path: &Path,
    out_path: &Path,
) -> crate::Result<i32> {
    let phi = io::load_channel(phi_path)?;
    let phi1 = io::load_channel(phi1_path)?;
    let phi2 = io::load_channel(phi2_path)?;
    let split = io::load_split(split_path)?;
    let g = gluing::extract_gluing_matrix(&phi, &phi1, &phi2, &split)?;
    io::save_gluing_matrix(out_path, &g)?;
    let a = gluing::analyze(&g, tol())?;
    println!("C:");
    print_matrix(&g.c);
    println!("singulars: {}", sig_list(&a.singulars));
    println!("LSP: {}", yesno(a.is_lsp));
    println!("extreme: {}", yesno(a.is_extreme));
    println!("wrote {}", out_path.display());
    Ok(0)
}

fn cmd_decompose(c_path: &Path) -> crate::Result<i32> {
    let c = io::load_matrix(c_path)?;
    let tol = tol();
    let a = gluing::analyze_matrix(&c, tol)?;
    println!("singulars: {}", sig_list(&a.singulars));
    println!("valid: {}", yesno(a.is_valid));
    println!("LSP: {}", yesno(a.is_lsp));
    println!("extreme: {}", yesno(a.is_extreme));
    println!("unit singulars: {}", a.ones_count);
    if !a.is_valid {
        return Err(Error::InvalidGluingMatrix {
            sigma_max: a.singulars[0],
        });
    }
    // Accepted under a loose tolerance: project onto the unit ball so the
    // decomposition itself stays well defined.
    let smax = a.singulars[0];
    let c = if smax > 1.0 {
        c.scale(Complex64::new(1.0 / smax, 0.0))
    } else {
        c
    };
    let g = GluingMatrix {
        c,
        rep1: vec![],
        rep2: vec![],
    };
    let terms = gluing::extreme_decompose(&g)?;
    println!("extreme decomposition ({} terms):", terms.len());
    for (w, d) in &terms {
        println!("weight {}", sig(*w));
        print_matrix(d);
    }
    Ok(0)
}

fn cmd_apply(phi_path: &Path, state_path: &Path) -> crate::Result<i32> {
    let phi = io::load_channel(phi_path)?;
    let state = io::load_matrix(state_path)?;
    let out = phi.apply(&state)?;
    println!("output:");
    print_matrix(&out);
    Ok(0)
}

struct Claims {
    all_pass: bool,
}

impl Claims {
    fn new() -> Self {
        Self { all_pass: true }
    }

    fn check(&mut self, name: &str, pass: bool, residual: f64) {
        println!(
            "[{}] {} (residual {})",
            if pass { "pass" } else { "fail" },
            name,
            sig(residual)
        );
        self.all_pass &= pass;
    }

    fn code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            2
        }
    }
}

fn pauli_x() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, Complex64::new(1.0, 0.0));
    m.set(1, 0, Complex64::new(1.0, 0.0));
    m
}

fn hadamard() -> ComplexMatrix {
    let h = Complex64::new(0.5f64.sqrt(), 0.0);
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, h);
    m.set(0, 1, h);
    m.set(1, 0, h);
    m.set(1, 1, -h);
    m
}

fn demo_unitary_family(claims: &mut Claims) -> crate::Result<()> {
    let split = BlockSplit::symmetric(2, 2)?;
    let u1 = ComplexMatrix::identity(2);
    let u2 = hadamard();
    let probe = SuperpositionProbe::new(
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        Complex64::new(0.6, 0.0),
        Complex64::new(0.8, 0.0),
    )?;
    println!("r sweep (theta = 0.3):");
    let mut prev = -1.0;
    let mut monotone = true;
    let mut endpoint_err: f64 = 0.0;
    for &r in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let phi = constructions::unitary_gluing(&u1, &u2, r, 0.3)?;
        let m = constructions::coherence_metric(&phi, &split, &probe)?;
        println!("  r = {:<4} coherence = {}", r, sig(m));
        monotone &= m >= prev - 1e-12;
        prev = m;
        endpoint_err = endpoint_err.max((m - r).abs());
    }
    claims.check("coherence equals r across the sweep", endpoint_err <= 1e-10, endpoint_err);
    claims.check("coherence is monotone in r", monotone, 0.0);
    let phi = constructions::unitary_gluing(&u1, &u2, 1.0, 0.3)?;
    let ket = probe.ket(&split)?;
    let out = phi.apply(&(&ket * &ket.adjoint()))?;
    let purity = (&out * &out).trace().re;
    claims.check("r = 1 output is pure", (purity - 1.0).abs() <= 1e-10, (purity - 1.0).abs());
    Ok(())
}

fn demo_collapse(claims: &mut Claims) -> crate::Result<()> {
    let psi1 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let psi2 = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let split = BlockSplit::symmetric(2, 2)?;
    let v = LspVectors {
        c1: psi1.clone(),
        c2: psi2.clone(),
    };
    let phi = constructions::collapse_gluing(&psi1, &psi2, &CollapseCoupling::Vectors(v))?;
    let probe = SuperpositionProbe::new(
        psi1.clone(),
        psi2.clone(),
        Complex64::new(0.6, 0.0),
        Complex64::new(0.8, 0.0),
    )?;
    let ket = probe.ket(&split)?;
    let rho = &ket * &ket.adjoint();
    let fixed = (&phi.apply(&rho)? - &rho).frobenius_norm();
    claims.check("LSP collapse leaves the matched superposition intact", fixed <= 1e-10, fixed);

    let probe_perp = SuperpositionProbe::new(
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        Complex64::new(0.6, 0.0),
        Complex64::new(0.8, 0.0),
    )?;
    let ketp = probe_perp.ket(&split)?;
    let out = phi.apply(&(&ketp * &ketp.adjoint()))?;
    let cross = out.block(0, 2, 2, 2).frobenius_norm();
    claims.check("orthogonal superposition decoheres", cross <= 1e-10, cross);

    let phi = constructions::collapse_gluing(&psi1, &psi2, &CollapseCoupling::Delta)?;
    let mut input = vec![Complex64::new(0.0, 0.0); 4];
    input[1] = Complex64::new(0.5f64.sqrt(), 0.0);
    input[3] = Complex64::new(0.5f64.sqrt(), 0.0);
    let ket = ComplexMatrix::column_from(&input);
    let out = phi.apply(&(&ket * &ket.adjoint()))?;
    let mut target = vec![Complex64::new(0.0, 0.0); 4];
    target[0] = Complex64::new(0.5f64.sqrt(), 0.0);
    target[3] = Complex64::new(0.5f64.sqrt(), 0.0);
    let tk = ComplexMatrix::column_from(&target);
    let dist = (&out - &(&tk * &tk.adjoint())).frobenius_norm();
    claims.check("delta coupling maps the paired superposition to a pure state", dist <= 1e-10, dist);
    Ok(())
}

fn demo_swap_mixture(claims: &mut Claims) -> crate::Result<()> {
    let phi = constructions::swap_mixture(&pauli_x(), &pauli_x())?;
    let split = BlockSplit::symmetric(2, 2)?;
    let residual = subspace::sp_residual(&phi, &split)?;
    claims.check("mixture is SP", residual <= 1e-9, residual);
    let half = Complex64::new(0.5f64.sqrt(), 0.0);
    let rep1 = vec![pauli_x().scale(half), ComplexMatrix::identity(2).scale(half)];
    let rep2 = rep1.clone();
    let g = gluing::extract_gluing_matrix_with_reps(&phi, &rep1, &rep2, &split)?;
    println!("C:");
    print_matrix(&g.c);
    let mut expect = ComplexMatrix::zeros(2, 2);
    expect.set(0, 1, Complex64::new(1.0, 0.0));
    expect.set(1, 0, Complex64::new(1.0, 0.0));
    let dist = (&g.c - &expect).frobenius_norm();
    claims.check("C is the swap matrix", dist <= 1e-10, dist);
    let a = gluing::analyze(&g, tol())?;
    claims.check("not LSP", !a.is_lsp, 0.0);
    let k = phi.classify().kraus_number;
    claims.check("K = 2", k == 2, (k as f64 - 2.0).abs());
    Ok(())
}

fn demo_ancilla(claims: &mut Claims) -> crate::Result<()> {
    let split = BlockSplit::symmetric(2, 2)?;
    let lsp_verdict = |phi: &KrausChannel, ext: &BlockSplit| -> crate::Result<bool> {
        let (b1, b2) = subspace::sp_blocks(phi, ext)?;
        let r1 = b1.linearly_independent()?;
        let r2 = b2.linearly_independent()?;
        let g = gluing::extract_gluing_matrix_with_reps(phi, r1.kraus(), r2.kraus(), ext)?;
        Ok(gluing::analyze(&g, tol())?.is_lsp)
    };
    let mut pure = ComplexMatrix::zeros(2, 2);
    pure.set(0, 0, Complex64::new(1.0, 0.0));
    let ext = BlockSplit::new(2, 2, 4, 4)?;
    let lam = constructions::attach_ancilla(&pure, &split)?;
    claims.check("pure sigma attachment is LSP", lsp_verdict(&lam, &ext)?, 0.0);

    let mut mixed = ComplexMatrix::zeros(2, 2);
    mixed.set(0, 0, Complex64::new(0.5, 0.0));
    mixed.set(1, 1, Complex64::new(0.5, 0.0));
    let lam = constructions::attach_ancilla(&mixed, &split)?;
    claims.check("mixed sigma attachment is not LSP", !lsp_verdict(&lam, &ext)?, 0.0);

    for da in 1..=3usize {
        let tr = constructions::partial_trace_channel(&split, da)?;
        let ext = BlockSplit::new(2 * da, 2 * da, 2, 2)?;
        let is_lsp = lsp_verdict(&tr, &ext)?;
        claims.check(
            &format!("partial trace over dim {da} LSP iff dim 1"),
            is_lsp == (da == 1),
            0.0,
        );
    }
    Ok(())
}

fn demo_sprep(claims: &mut Claims) -> crate::Result<()> {
    let phi = constructions::swap_mixture(&pauli_x(), &pauli_x())?;
    let split = BlockSplit::symmetric(2, 2)?;
    let (k, psi) = constructions::sprep1(&phi, &split)?;
    claims.check("sprep1 ancilla dim is 2", k == 2, (k as f64 - 2.0).abs());
    let single = psi.classify().kraus_number;
    claims.check("sprep1 channel has a single Kraus operator", single == 1, (single as f64 - 1.0).abs());
    let tr = constructions::partial_trace_channel(&split, k)?;
    let dist = psi.then(&tr)?.distance(&phi)?;
    claims.check("sprep1 reconstructs the channel", dist <= 1e-9, dist);

    let a = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let psi2 = constructions::sprep2(&phi, &split, &a)?;
    let ak = ComplexMatrix::column_from(&a);
    let attach = constructions::attach_ancilla(&(&ak * &ak.adjoint()), &split)?;
    let dist = attach.then(&psi2)?.then(&tr)?.distance(&phi)?;
    claims.check("sprep2 reconstructs the channel", dist <= 1e-9, dist);
    let ext = constructions::tensor_split(&split, k)?;
    let (b1, b2) = subspace::sp_blocks(&psi2, &ext)?;
    let r1 = b1.linearly_independent()?;
    let r2 = b2.linearly_independent()?;
    let g = gluing::extract_gluing_matrix_with_reps(&psi2, r1.kraus(), r2.kraus(), &ext)?;
    claims.check("sprep2 channel is LSP", gluing::analyze(&g, tol())?.is_lsp, 0.0);
    Ok(())
}

fn demo_vacuum(claims: &mut Claims) -> crate::Result<()> {
    let u = hadamard();
    let phi = KrausChannel::unitary(u.clone())?;
    let pair = DevicePair::new(phi.clone(), vec![Complex64::new(1.0, 0.0)])?;
    let ext = constructions::vacuum_extend(&pair)?;
    let report = ext.classify();
    claims.check("unit coupling gives a unitary extension", report.kraus_number == 1, 0.0);
    let tp = report.tp_residual;
    claims.check("extension is TP", report.is_tp, tp);

    let pair = DevicePair::new(phi.clone(), vec![Complex64::new(0.0, 0.0)])?;
    let ext = constructions::vacuum_extend(&pair)?;
    let split = BlockSplit::new(2, 1, 2, 1)?;
    let g = gluing::extract_gluing_matrix(&ext, &phi, &KrausChannel::identity(1), &split)?;
    let norm = g.c.frobenius_norm();
    claims.check("zero coupling decoheres the vacuum", norm <= 1e-9, norm);
    Ok(())
}

fn cmd_demo(name: &str) -> crate::Result<i32> {
    let mut claims = Claims::new();
    match name {
        "unitary-family" => demo_unitary_family(&mut claims)?,
        "collapse" => demo_collapse(&mut claims)?,
        "swap-mixture" => demo_swap_mixture(&mut claims)?,
        "ancilla" => demo_ancilla(&mut claims)?,
        "sprep" => demo_sprep(&mut claims)?,
        "vacuum" => demo_vacuum(&mut claims)?,
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown demo '{name}'; known: unitary-family, collapse, swap-mixture, ancilla, sprep, vacuum"
            )))
        }
    }
    Ok(claims.code())
}
