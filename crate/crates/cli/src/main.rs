//! Batch command-line surface over the `symlat` library.
//!
//! Every subcommand is a pure function of its arguments: identical
//! invocations produce byte-identical output (fixed JSON key order, no
//! timestamps), and `--seed` fully determines the randomized verification
//! runs. Exit codes: 0 success, 1 verification mismatch, 2 bad input,
//! 3 size limit.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symlat::exactnum::{scalar, scalar_to_string};
use symlat::homobasis::{basis_element, checked_basis, orthogonal_gram, transition};
use symlat::hyperkahler::{registry, report};
use symlat::lattices::{complement_discriminant, Embedding};
use symlat::orthopoly::monic_poly;
use symlat::randmat::{random_nonsingular_symmetric_gram, rng_from_seed};
use symlat::symform::{induced_gram, GramMatrixFile};
use symlat::theta::{det_closed_form, theta_result, verify_main_theorem};
use symlat::{Error, FactoredInteger, GramMatrix};

#[derive(Parser)]
#[command(name = "symlat", version, about = "Exact symmetric-power forms, orthogonal bases and lattice discriminants")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Report elapsed time on stderr
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// The combinatorial factor in the induced Gram determinant
    Theta { d: u32, k: u32 },

    /// Brute-force check of the determinant closed form on random forms
    Verify {
        /// Largest d (rank - 1)
        #[arg(long, default_value_t = 2)]
        dmax: u32,
        /// Largest symmetric power
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Random forms per shape
        #[arg(long, default_value_t = 5)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Deliberately corrupt the closed form (harness sanity hook)
        #[arg(long, hide = true)]
        corrupt: bool,
    },

    /// Induced Gram matrix of a form loaded from a JSON file
    SymGram {
        /// Gram matrix JSON file
        #[arg(long)]
        gram: PathBuf,
        /// Symmetric power
        #[arg(short)]
        k: u32,
        /// Also compute the determinant and compare with the closed form
        #[arg(long)]
        det: bool,
    },

    /// Monic orthogonal polynomial of degree n with parameter m
    Orthopoly { n: u32, m: i64 },

    /// Homogeneous orthogonal basis in d+1 variables, degree k
    Hbasis {
        d: usize,
        k: u32,
        /// List squared norms
        #[arg(long)]
        norms: bool,
        /// Diagonalized Gram report (norms product vs closed form)
        #[arg(long)]
        gram: bool,
        /// Transition matrix from monomials to the orthogonal basis
        #[arg(long)]
        transition: bool,
    },

    /// Discriminant / torsion report for a lattice embedding JSON file
    Lattice {
        /// Embedding JSON file
        #[arg(long)]
        embedding: PathBuf,
    },

    /// Symmetric-power discriminant reports for hyperkaehler manifolds
    Hk {
        /// K3_Hilb, Kummer, OG6 or OG10
        #[arg(long)]
        manifold: String,
        /// Half the complex dimension (required for K3_Hilb and Kummer)
        #[arg(short)]
        k: Option<u32>,
        /// Known torsion order of the quotient, factored (e.g. "2^277 * 3^46")
        #[arg(long)]
        torsion: Option<String>,
        /// Discriminant of the unscaled form (omit the Fujiki factor)
        #[arg(long)]
        no_cx: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    configure_thread_pool();
    let start = Instant::now();
    let timing = cli.timing;
    let code = match run(cli) {
        Ok(all_ok) => {
            if all_ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SizeLimit(_) => 3,
                _ => 2,
            }
        }
    };
    if timing {
        eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    }
    std::process::exit(code);
}

fn configure_thread_pool() {
    if let Ok(s) = std::env::var("SYMLAT_THREADS") {
        if let Ok(n) = s.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

/// Runs the command; `Ok(false)` means a verification check failed (exit 1).
fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Theta { d, k } => cmd_theta(d, k, cli.format),
        Command::Verify {
            dmax,
            kmax,
            samples,
            seed,
            corrupt,
        } => cmd_verify(dmax, kmax, samples, seed, corrupt, cli.format),
        Command::SymGram { gram, k, det } => cmd_sym_gram(&gram, k, det, cli.format),
        Command::Orthopoly { n, m } => cmd_orthopoly(n, m, cli.format),
        Command::Hbasis {
            d,
            k,
            norms,
            gram,
            transition,
        } => cmd_hbasis(d, k, norms, gram, transition, cli.format),
        Command::Lattice { embedding } => cmd_lattice(&embedding, cli.format),
        Command::Hk {
            manifold,
            k,
            torsion,
            no_cx,
        } => cmd_hk(&manifold, k, torsion.as_deref(), !no_cx, cli.format),
    }
}

#[derive(Serialize)]
struct CommandResult<T: Serialize> {
    status: &'static str,
    payload: T,
}

fn emit<T: Serialize>(format: Format, payload: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => {
            let result = CommandResult {
                status: "ok",
                payload,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&result).expect("serializable payload")
            );
        }
        Format::Text => println!("{}", text()),
    }
}

/// Factored integers print as decimal when square-free (e.g. `105`), and in
/// the canonical `p^e * ...` form otherwise.
fn factored_text(f: &FactoredInteger) -> String {
    if f.is_integer() && !f.is_negative() && f.factors().values().all(|e| *e == 1) {
        scalar_to_string(&f.value())
    } else {
        f.to_string()
    }
}

#[derive(Serialize)]
struct ThetaPayload {
    d: u32,
    k: u32,
    theta: String,
    det_g_exponent: String,
}

fn cmd_theta(d: u32, k: u32, format: Format) -> Result<bool, Error> {
    let r = theta_result(d, k)?;
    let payload = ThetaPayload {
        d,
        k,
        theta: r.value.to_string(),
        det_g_exponent: r.det_g_exponent.to_string(),
    };
    emit(format, &payload, || factored_text(&r.value));
    Ok(true)
}

#[derive(Serialize)]
struct VerifySample {
    sample: u32,
    lhs: String,
    rhs: String,
    equal: bool,
}

#[derive(Serialize)]
struct VerifyShape {
    d: u32,
    k: u32,
    basis_size: usize,
    samples: Vec<VerifySample>,
    all_equal: bool,
}

#[derive(Serialize)]
struct VerifyPayload {
    seed: u64,
    shapes: Vec<VerifyShape>,
    checks: usize,
    all_equal: bool,
}

fn cmd_verify(
    dmax: u32,
    kmax: u32,
    samples: u32,
    seed: u64,
    corrupt: bool,
    format: Format,
) -> Result<bool, Error> {
    let mut rng = rng_from_seed(seed);
    let mut shapes = Vec::new();
    let mut checks = 0;
    let mut all_equal = true;
    for d in 0..=dmax {
        for k in 1..=kmax {
            let mut shape = VerifyShape {
                d,
                k,
                basis_size: 0,
                samples: Vec::new(),
                all_equal: true,
            };
            for sample in 0..samples {
                let g = random_nonsingular_symmetric_gram(&mut rng, d as usize + 1, -5, 5);
                let mut rep = verify_main_theorem(&g, k)?;
                if corrupt {
                    rep.rhs *= scalar(2);
                    rep.equal = rep.lhs == rep.rhs;
                }
                shape.basis_size = rep.basis_size;
                shape.all_equal &= rep.equal;
                checks += 1;
                shape.samples.push(VerifySample {
                    sample,
                    lhs: scalar_to_string(&rep.lhs),
                    rhs: scalar_to_string(&rep.rhs),
                    equal: rep.equal,
                });
            }
            all_equal &= shape.all_equal;
            shapes.push(shape);
        }
    }
    let payload = VerifyPayload {
        seed,
        shapes,
        checks,
        all_equal,
    };
    emit(format, &payload, || {
        let mut out = String::new();
        for s in &payload.shapes {
            for v in &s.samples {
                let mark = if v.equal { "ok" } else { "MISMATCH" };
                out.push_str(&format!(
                    "d={} k={} sample={}: {mark} lhs={} rhs={}\n",
                    s.d, s.k, v.sample, v.lhs, v.rhs
                ));
            }
        }
        out.push_str(&format!(
            "{} checks: {}",
            payload.checks,
            if payload.all_equal {
                "all equal"
            } else {
                "MISMATCH FOUND"
            }
        ));
        out
    });
    Ok(all_equal)
}

#[derive(Serialize)]
struct DetReport {
    det_base: String,
    det_induced: String,
    closed_form: String,
    equal: bool,
}

#[derive(Serialize)]
struct SymGramPayload {
    rank: usize,
    k: u32,
    basis: Vec<String>,
    gram: GramMatrixFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    det: Option<DetReport>,
}

fn cmd_sym_gram(path: &std::path::Path, k: u32, det: bool, format: Format) -> Result<bool, Error> {
    let base = GramMatrix::from_json_file(path)?;
    let form = induced_gram(&base, k)?;
    let det_report = if det {
        let det_base = base.det()?;
        let det_induced = form.gram.det()?;
        let closed = det_closed_form(&det_base, (base.size() - 1) as u32, k)?;
        Some(DetReport {
            det_base: scalar_to_string(&det_base),
            det_induced: scalar_to_string(&det_induced),
            closed_form: scalar_to_string(&closed),
            equal: det_induced == closed,
        })
    } else {
        None
    };
    let ok = det_report.as_ref().map_or(true, |d| d.equal);
    let payload = SymGramPayload {
        rank: base.size(),
        k,
        basis: form.basis.iter().map(|b| b.to_string()).collect(),
        gram: form.gram.to_file(),
        det: det_report,
    };
    emit(format, &payload, || {
        let mut out = format!(
            "rank: {}\nk: {}\nbasis: {}\n",
            payload.rank,
            payload.k,
            payload.basis.join(", ")
        );
        for row in &payload.gram.rows {
            out.push_str(&format!("[{}]\n", row.join(", ")));
        }
        if let Some(d) = &payload.det {
            out.push_str(&format!(
                "det_base: {}\ndet_induced: {}\nclosed_form: {}\nequal: {}\n",
                d.det_base, d.det_induced, d.closed_form, d.equal
            ));
        }
        out.trim_end().to_string()
    });
    Ok(ok)
}

#[derive(Serialize)]
struct OrthopolyPayload {
    n: u32,
    m: i64,
    poly: String,
    coeffs: Vec<String>,
}

fn cmd_orthopoly(n: u32, m: i64, format: Format) -> Result<bool, Error> {
    let p = monic_poly(n, m)?;
    let payload = OrthopolyPayload {
        n,
        m,
        poly: p.to_string(),
        coeffs: p.coeffs().iter().map(scalar_to_string).collect(),
    };
    emit(format, &payload, || payload.poly.clone());
    Ok(true)
}

#[derive(Serialize)]
struct HbasisElementPayload {
    alpha: String,
    poly: String,
}

#[derive(Serialize)]
struct HbasisNormPayload {
    alpha: String,
    norm: String,
}

#[derive(Serialize)]
struct HbasisGramPayload {
    diagonal: Vec<String>,
    product: String,
    theta: String,
    orthogonal: bool,
    matches_theta: bool,
}

#[derive(Serialize)]
struct HbasisTransitionPayload {
    basis: Vec<String>,
    rows: Vec<Vec<String>>,
    unit_diagonal: bool,
    lower_triangular: bool,
    reconstruction_ok: bool,
}

#[derive(Serialize)]
struct HbasisPayload {
    d: usize,
    k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<HbasisElementPayload>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norms: Option<Vec<HbasisNormPayload>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gram: Option<HbasisGramPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transition: Option<HbasisTransitionPayload>,
}

fn cmd_hbasis(
    d: usize,
    k: u32,
    norms: bool,
    gram: bool,
    want_transition: bool,
    format: Format,
) -> Result<bool, Error> {
    let mut payload = HbasisPayload {
        d,
        k,
        elements: None,
        norms: None,
        gram: None,
        transition: None,
    };
    let mut ok = true;

    if !norms && !gram && !want_transition {
        let mut elements = Vec::new();
        for alpha in checked_basis(d, k)? {
            let e = basis_element(&alpha)?;
            elements.push(HbasisElementPayload {
                alpha: alpha.to_string(),
                poly: e.poly.to_string(),
            });
        }
        payload.elements = Some(elements);
    }
    if norms {
        let mut out = Vec::new();
        for alpha in checked_basis(d, k)? {
            let e = basis_element(&alpha)?;
            out.push(HbasisNormPayload {
                alpha: alpha.to_string(),
                norm: scalar_to_string(&e.norm),
            });
        }
        payload.norms = Some(out);
    }
    if gram {
        let r = orthogonal_gram(d, k)?;
        ok &= r.pairwise_orthogonal && r.matches_theta;
        payload.gram = Some(HbasisGramPayload {
            diagonal: r.norms.iter().map(|(_, n)| scalar_to_string(n)).collect(),
            product: scalar_to_string(&r.determinant),
            theta: r.theta.to_string(),
            orthogonal: r.pairwise_orthogonal,
            matches_theta: r.matches_theta,
        });
    }
    if want_transition {
        let r = transition(d, k)?;
        ok &= r.unit_diagonal && r.lower_triangular && r.reconstruction_ok;
        payload.transition = Some(HbasisTransitionPayload {
            basis: r.basis.iter().map(|b| b.to_string()).collect(),
            rows: (0..r.basis.len())
                .map(|i| {
                    (0..r.basis.len())
                        .map(|j| scalar_to_string(r.matrix.get(i, j)))
                        .collect()
                })
                .collect(),
            unit_diagonal: r.unit_diagonal,
            lower_triangular: r.lower_triangular,
            reconstruction_ok: r.reconstruction_ok,
        });
    }

    emit(format, &payload, || {
        let mut out = String::new();
        if let Some(elements) = &payload.elements {
            for e in elements {
                out.push_str(&format!("h{} = {}\n", e.alpha, e.poly));
            }
        }
        if let Some(norms) = &payload.norms {
            for n in norms {
                out.push_str(&format!("|h{}|^2 = {}\n", n.alpha, n.norm));
            }
        }
        if let Some(g) = &payload.gram {
            out.push_str(&format!(
                "diagonal: {}\nproduct: {}\ntheta: {}\northogonal: {}\nmatches_theta: {}\n",
                g.diagonal.join(", "),
                g.product,
                g.theta,
                g.orthogonal,
                g.matches_theta
            ));
        }
        if let Some(t) = &payload.transition {
            out.push_str(&format!("basis: {}\n", t.basis.join(", ")));
            for (b, row) in t.basis.iter().zip(&t.rows) {
                out.push_str(&format!("row {b}: {}\n", row.join(", ")));
            }
            out.push_str(&format!(
                "unit_diagonal: {}\nlower_triangular: {}\nreconstruction_ok: {}\n",
                t.unit_diagonal, t.lower_triangular, t.reconstruction_ok
            ));
        }
        out.trim_end().to_string()
    });
    Ok(ok)
}

#[derive(Serialize)]
struct LatticePayload {
    target_rank: usize,
    target_unimodular: bool,
    rank: usize,
    discriminant: String,
    torsion: String,
    primitive: bool,
    complement_rank: usize,
    complement_basis: Vec<Vec<String>>,
    complement_discriminant: String,
    saturation_discriminant: String,
    /// Only meaningful over a unimodular target: complement discriminant
    /// equals discriminant / torsion^2.
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient_consistent: Option<bool>,
}

fn cmd_lattice(path: &std::path::Path, format: Format) -> Result<bool, Error> {
    let e = Embedding::from_json_file(path)?;
    let disc = e.sublattice_discriminant()?;
    let torsion = e.quotient_torsion()?;
    let perp = e.orthogonal_complement()?;
    let satur = e.double_complement()?;
    let target_unimodular = e.target().is_unimodular()?;
    let perp_disc = perp.sublattice_discriminant()?;
    let satur_disc = satur.sublattice_discriminant()?;
    let quotient_consistent = if target_unimodular {
        let expected = complement_discriminant(&disc, &torsion)?;
        Some(perp_disc == expected && satur_disc == expected)
    } else {
        None
    };
    let ok = quotient_consistent.unwrap_or(true);
    let payload = LatticePayload {
        target_rank: e.target().rank(),
        target_unimodular,
        rank: e.rank(),
        discriminant: disc.to_string(),
        torsion: torsion.to_string(),
        primitive: torsion.is_one(),
        complement_rank: perp.rank(),
        complement_basis: (0..perp.basis().rows())
            .map(|i| perp.basis().row(i).iter().map(scalar_to_string).collect())
            .collect(),
        complement_discriminant: perp_disc.to_string(),
        saturation_discriminant: satur_disc.to_string(),
        quotient_consistent,
    };
    emit(format, &payload, || {
        let mut out = format!(
            "target_rank: {}\ntarget_unimodular: {}\nrank: {}\ndiscriminant: {}\ntorsion: {}\nprimitive: {}\ncomplement_rank: {}\n",
            payload.target_rank,
            payload.target_unimodular,
            payload.rank,
            payload.discriminant,
            payload.torsion,
            payload.primitive,
            payload.complement_rank
        );
        for row in &payload.complement_basis {
            out.push_str(&format!("complement_basis: [{}]\n", row.join(", ")));
        }
        out.push_str(&format!(
            "complement_discriminant: {}\nsaturation_discriminant: {}\n",
            payload.complement_discriminant, payload.saturation_discriminant
        ));
        if let Some(c) = payload.quotient_consistent {
            out.push_str(&format!("quotient_consistent: {c}\n"));
        }
        out.trim_end().to_string()
    });
    Ok(ok)
}

fn cmd_hk(
    manifold: &str,
    k: Option<u32>,
    torsion: Option<&str>,
    include_cx: bool,
    format: Format,
) -> Result<bool, Error> {
    let m = registry(manifold, k)?;
    let torsion = torsion
        .map(|s| s.parse::<FactoredInteger>())
        .transpose()?;
    let r = report(&m, include_cx, torsion.as_ref())?;
    emit(format, &r, || {
        let mut out = format!(
            "manifold: {}\nk: {}\nb2: {}\nrank: {}\nincludes_cx: {}\ndiscriminant: {}\n",
            r.manifold, r.k, r.b2, r.rank, r.includes_cx, r.discriminant
        );
        if let Some(sq) = &r.square_root {
            out.push_str(&format!("square_root: {sq}\n"));
        }
        out.push_str(&format!(
            "prime_set: {}\n",
            r.prime_set
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        if let Some(t) = &r.torsion {
            out.push_str(&format!("torsion: {t}\n"));
        }
        if let Some(c) = &r.complement_discriminant {
            out.push_str(&format!("complement_discriminant: {c}\n"));
        }
        out.trim_end().to_string()
    });
    Ok(true)
}
