//! Command line front end: degree matrices to ambient rays, equations to
//! tropical fans, fan surgery, divisor polytopes and Minkowski arithmetic.
//! Every command validates its input before computing and writes its output
//! in one piece. Exit codes: 0 success, 1 mathematical infeasibility (with
//! the certificate on stdout), 2 malformed input.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tropfan::bergman::{coarse_bergman, fine_bergman, TropMembership, TropicalFan};
use tropfan::divisor::{
    class_group_presentation, divisor_polytope, minkowski_decompose, nef_cone, ClassPresentation,
    DivisorClass,
};
use tropfan::equations::parse_linear_forms;
use tropfan::fan::Fan;
use tropfan::gfan::GfanDocument;
use tropfan::linalg::{gale_transform, IntegerVector, RationalMatrix};
use tropfan::matroid::matroid_from_equations;
use tropfan::polytope::Polytope;
use tropfan::rational::{format_rational, parse_rational, Rational};
use tropfan::Error as CoreError;

#[derive(Parser)]
#[command(name = "tropfan", version, about = "exact tropical fan and polytope toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Structure {
    Coarse,
    Fine,
}

#[derive(Clone, Copy, ValueEnum)]
enum FanFormat {
    Gfan,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BodyFormat {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Signs {
    /// Rays of the fan live in tropical coordinates; test w directly.
    Trop,
    /// Rays are the toric ray matrix; test -w instead.
    Toric,
}

#[derive(Args)]
struct OutArg {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Gale transform of a degree matrix in (A | I) block form.
    Gale {
        /// Matrix file: whitespace text rows, or .json rows of "p/q" strings.
        matrix: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Tropicalize the linear subspace cut out by the given equations.
    Tropicalize {
        /// Equation file (`x2+x4+1` grammar, one form per line or braced).
        equations: PathBuf,
        #[arg(long, value_enum, default_value = "coarse")]
        structure: Structure,
        #[arg(long, value_enum, default_value = "gfan")]
        format: FanFormat,
        /// Emit `# index` ray comments (with flat annotations).
        #[arg(long)]
        annotations: bool,
        /// Reorder rays and cones to match this reference document.
        #[arg(long)]
        like: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Validate a fan file and print its report.
    FanValidate { fan: PathBuf },
    /// Stellar subdivision of a fan at a lattice vector.
    FanStellar {
        fan: PathBuf,
        /// Comma-separated coordinates, e.g. "1,1,1,0,0".
        #[arg(long, allow_hyphen_values = true)]
        ray: String,
        #[arg(long, value_enum, default_value = "gfan")]
        format: FanFormat,
        #[command(flatten)]
        out: OutArg,
    },
    /// Subfan of the cones whose orbits meet the tropicalized subspace.
    Subfan {
        fan: PathBuf,
        #[arg(long)]
        equations: PathBuf,
        #[arg(long, value_enum, default_value = "trop")]
        signs: Signs,
        #[arg(long, value_enum, default_value = "gfan")]
        format: FanFormat,
        #[command(flatten)]
        out: OutArg,
    },
    /// Flag chains of a (sub)fan inside an ambient maximal cone.
    Flags {
        fan: PathBuf,
        /// Ray indices of the ambient maximal cone, e.g. "2,3,4,5,6".
        #[arg(long = "max-cone")]
        max_cone: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "gfan")]
        format: FanFormat,
        #[command(flatten)]
        out: OutArg,
    },
    /// Nef cone generators of a complete simplicial fan.
    Nef {
        fan: PathBuf,
        /// Present classes in the row basis of this degree matrix instead of
        /// the canonical Hermite presentation.
        #[arg(long = "degree-matrix")]
        degree_matrix: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Divisor polytope (Newton-Okounkov body of a nef class on a toric
    /// model), optionally decomposed over a Minkowski basis.
    Nobody {
        fan: PathBuf,
        /// One coefficient per ray, e.g. "0,0,1,3,1".
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Basis file (JSON) for the decomposition route.
        #[arg(long)]
        decompose: Option<PathBuf>,
        /// Class of the divisor in the basis file's lattice, e.g. "3,-1,-1,-1,-1".
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: BodyFormat,
        #[command(flatten)]
        out: OutArg,
    },
    /// Polytope Minkowski arithmetic.
    Minkowski {
        #[command(subcommand)]
        op: MinkowskiOp,
    },
    /// Normalized volume (dim! times Euclidean volume) of a polytope file.
    Volume { polytope: PathBuf },
    /// Convert fan files between the gfan text format and the JSON mirror.
    Convert {
        fan: PathBuf,
        #[arg(long, value_enum)]
        to: FanFormat,
        #[arg(long)]
        annotations: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum MinkowskiOp {
    /// Minkowski sum of two polytope JSON files.
    Sum {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decompose a class over a basis file.
    Decompose {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            // mathematical infeasibility: certificate on stdout, exit 1
            if let Some(core) = err.downcast_ref::<CoreError>() {
                if let CoreError::Infeasible { reason, certificate } = core {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "infeasible": reason,
                            "separating_functional": certificate,
                        }))
                        .expect("serializable")
                    );
                    eprintln!("error: {core}");
                    return ExitCode::from(1);
                }
                eprintln!("error: {err:#}");
                return ExitCode::from(if core.is_input_error() { 2 } else { 1 });
            }
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Gale { matrix, out } => {
            let m = load_matrix(&matrix)?;
            let gale = gale_transform(&m)?;
            write_output(&out.out, &gale.to_text())
        }
        Command::Tropicalize { equations, structure, format, annotations, like, out } => {
            let trop = tropicalize(&equations, structure)?;
            let mut doc = GfanDocument::from_fan(&trop.fan);
            if annotations {
                for (i, f) in trop.flat_labels.iter().enumerate() {
                    let elements: Vec<String> =
                        f.elements.iter().map(usize::to_string).collect();
                    doc.annotations.insert(i, format!("flat {{{}}}", elements.join(" ")));
                }
            }
            if let Some(reference_path) = like {
                let reference = GfanDocument::parse(&read(&reference_path)?)?;
                doc = doc.reordered_like(&reference)?;
            }
            match format {
                FanFormat::Gfan => emit_fan_doc(&doc, format, annotations, &out.out),
                FanFormat::Json => {
                    // JSON mirror plus the flat labels as a sidecar map
                    let mut value = doc.to_json()?;
                    let doc_fan = doc.fan()?;
                    let labels: BTreeMap<String, Vec<usize>> = trop
                        .flat_labels
                        .iter()
                        .enumerate()
                        .map(|(i, f)| {
                            let idx = doc_fan
                                .ray_index(&trop.fan.rays()[i])
                                .expect("reordering is a bijection");
                            (idx.to_string(), f.elements.clone())
                        })
                        .collect();
                    value["flat_labels"] = serde_json::to_value(&labels)?;
                    write_output(&out.out, &(serde_json::to_string_pretty(&value)? + "\n"))
                }
            }
        }
        Command::FanValidate { fan } => {
            let fan = load_fan(&fan)?;
            let report = fan.validate();
            let mut text = String::new();
            text.push_str(&format!("DIM {}\n", report.dim));
            let fv: Vec<String> = report.fvector.iter().map(usize::to_string).collect();
            text.push_str(&format!("F_VECTOR {}\n", fv.join(" ")));
            text.push_str(&format!("SIMPLICIAL {}\n", report.simplicial as u8));
            text.push_str(&format!("PURE {}\n", report.pure as u8));
            text.push_str(&format!("LINEALITY_DIM {}\n", report.lineality_dim));
            text.push_str(&format!("COMPLETE {}\n", fan.is_complete() as u8));
            text.push_str(&format!(
                "FACE_TO_FACE_CHECKED {}\n",
                report.face_to_face_checked as u8
            ));
            text.push_str(&format!("ISSUES {}\n", report.issues.len()));
            for issue in &report.issues {
                text.push_str(&format!("  {issue}\n"));
            }
            print!("{text}");
            if report.issues.is_empty() {
                Ok(())
            } else {
                Err(CoreError::InvalidFan(format!("{} issues", report.issues.len())).into())
            }
        }
        Command::FanStellar { fan, ray, format, out } => {
            let fan = load_fan(&fan)?;
            let v = IntegerVector(parse_int_list(&ray)?);
            let subdivided = fan.stellar_subdivision(&v)?;
            emit_fan_doc(&GfanDocument::from_fan(&subdivided), format, false, &out.out)
        }
        Command::Subfan { fan, equations, signs, format, out } => {
            let fan = load_fan(&fan)?;
            let (forms, ambient) = load_equations(&equations)?;
            let matroid = matroid_from_equations(&forms, ambient)?;
            if ambient != fan.ambient_dim() + 1 {
                bail!(
                    "equations live in {} homogeneous coordinates but the fan has ambient dimension {}",
                    ambient,
                    fan.ambient_dim()
                );
            }
            let oracle = TropMembership::new(&matroid)?;
            let sub = match signs {
                Signs::Trop => fan.subfan_meeting(|w| oracle.contains(w))?,
                Signs::Toric => fan.subfan_meeting(|w| {
                    let neg: Vec<Rational> = w.iter().map(|x| -x).collect();
                    oracle.contains(&neg)
                })?,
            };
            emit_fan_doc(&GfanDocument::from_fan(&sub), format, false, &out.out)
        }
        Command::Flags { fan, max_cone, depth, format, out } => {
            let fan = load_fan(&fan)?;
            let cone: Vec<usize> = parse_usize_list(&max_cone)?;
            let chains = fan.flag_chains(&cone, depth);
            let text = match format {
                FanFormat::Json => {
                    let value: Vec<Vec<Vec<usize>>> =
                        chains.iter().map(|c| c.cones.clone()).collect();
                    serde_json::to_string_pretty(&value)? + "\n"
                }
                FanFormat::Gfan => {
                    let mut t = String::new();
                    for chain in &chains {
                        let parts: Vec<String> = chain
                            .cones
                            .iter()
                            .map(|c| {
                                let idx: Vec<String> = c.iter().map(usize::to_string).collect();
                                format!("{{{}}}", idx.join(" "))
                            })
                            .collect();
                        t.push_str(&parts.join(" < "));
                        t.push('\n');
                    }
                    t
                }
            };
            write_output(&out.out, &text)
        }
        Command::Nef { fan, degree_matrix, out } => {
            let fan = load_fan(&fan)?;
            let presentation = match degree_matrix {
                None => class_group_presentation(&fan)?,
                Some(path) => ClassPresentation::with_projection(&fan, load_matrix(&path)?)?,
            };
            let generators = nef_cone(&fan, &presentation)?;
            let gens: Vec<Vec<String>> = generators
                .iter()
                .map(|g| g.0 .0.iter().map(|x| x.to_string()).collect())
                .collect();
            let value = json!({
                "class_rank": presentation.class_rank(),
                "projection": presentation.projection.to_string_rows(),
                "generators": gens,
            });
            write_output(&out.out, &(serde_json::to_string_pretty(&value)? + "\n"))
        }
        Command::Nobody { fan, coeffs, decompose, class, format, out } => {
            let fan = load_fan(&fan)?;
            let coeffs = parse_rat_list(&coeffs)?;
            let body = divisor_polytope(&fan, &coeffs)?;
            let decomposition = match (decompose, class) {
                (None, None) => None,
                (Some(basis_path), Some(class_text)) => {
                    let basis = load_basis(&basis_path)?;
                    let target = DivisorClass(IntegerVector(parse_int_list(&class_text)?));
                    let classes: Vec<DivisorClass> =
                        basis.elements.iter().map(|e| e.class.clone()).collect();
                    let d = minkowski_decompose(&target, &classes)?;
                    // rebuild the body as the Minkowski sum of the summands
                    let mut sum: Option<Polytope> = None;
                    for (element, coeff) in basis.elements.iter().zip(&d.coefficients) {
                        if tropfan::num::Zero::is_zero(coeff) {
                            continue;
                        }
                        let rc = element.ray_coeffs.as_ref().ok_or_else(|| {
                            anyhow!(
                                "basis element {} has no ray coefficients on this fan",
                                element.name
                            )
                        })?;
                        let piece = divisor_polytope(&fan, rc)?.scale(coeff)?;
                        sum = Some(match sum {
                            None => piece,
                            Some(acc) => acc.minkowski_sum(&piece)?,
                        });
                    }
                    let sum = sum.ok_or_else(|| anyhow!("decomposition is identically zero"))?;
                    if sum != body {
                        return Err(CoreError::InvalidFan(
                            "decomposition does not recombine to the divisor polytope".into(),
                        )
                        .into());
                    }
                    let named: BTreeMap<String, String> = basis
                        .elements
                        .iter()
                        .zip(&d.coefficients)
                        .filter(|(_, c)| !tropfan::num::Zero::is_zero(*c))
                        .map(|(e, c)| (e.name.clone(), format_rational(c)))
                        .collect();
                    Some(json!({ "coefficients": named, "unique": d.unique }))
                }
                _ => bail!("--decompose and --class go together"),
            };
            match format {
                BodyFormat::Svg => {
                    let svg = body.to_svg()?;
                    write_output(&out.out, &svg)
                }
                BodyFormat::Json => {
                    let mut value = serde_json::to_value(&body)?;
                    if let Some(d) = decomposition {
                        value["decomposition"] = d;
                    }
                    write_output(&out.out, &(serde_json::to_string_pretty(&value)? + "\n"))
                }
            }
        }
        Command::Minkowski { op } => match op {
            MinkowskiOp::Sum { a, b, out } => {
                let pa: Polytope = serde_json::from_str(&read(&a)?)?;
                let pb: Polytope = serde_json::from_str(&read(&b)?)?;
                let sum = pa.minkowski_sum(&pb)?;
                write_output(&out.out, &(serde_json::to_string_pretty(&sum)? + "\n"))
            }
            MinkowskiOp::Decompose { basis, class, out } => {
                let basis = load_basis(&basis)?;
                let target = DivisorClass(IntegerVector(parse_int_list(&class)?));
                let classes: Vec<DivisorClass> =
                    basis.elements.iter().map(|e| e.class.clone()).collect();
                let d = minkowski_decompose(&target, &classes)?;
                let named: BTreeMap<String, String> = basis
                    .elements
                    .iter()
                    .zip(&d.coefficients)
                    .map(|(e, c)| (e.name.clone(), format_rational(c)))
                    .collect();
                let value = json!({ "coefficients": named, "unique": d.unique });
                write_output(&out.out, &(serde_json::to_string_pretty(&value)? + "\n"))
            }
        },
        Command::Volume { polytope } => {
            let p: Polytope = serde_json::from_str(&read(&polytope)?)?;
            let v = p.normalized_volume()?;
            println!("{}", format_rational(&v));
            Ok(())
        }
        Command::Convert { fan, to, annotations, out } => {
            let doc = load_fan_doc(&fan)?;
            match to {
                FanFormat::Gfan => write_output(&out.out, &doc.emit(annotations)),
                FanFormat::Json => {
                    write_output(&out.out, &(serde_json::to_string_pretty(&doc.to_json()?)? + "\n"))
                }
            }
        }
    }
}

fn tropicalize(path: &Path, structure: Structure) -> anyhow::Result<TropicalFan> {
    let (forms, ambient) = load_equations(path)?;
    let matroid = matroid_from_equations(&forms, ambient)?;
    Ok(match structure {
        Structure::Coarse => coarse_bergman(&matroid)?,
        Structure::Fine => fine_bergman(&matroid)?,
    })
}

/// Equations from the text grammar, or from JSON rows of coefficient
/// vectors over the homogeneous coordinates.
fn load_equations(path: &Path) -> anyhow::Result<(RationalMatrix, usize)> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let rows: Vec<Vec<String>> = serde_json::from_str(&text)?;
        let m = RationalMatrix::from_string_rows(&rows)?;
        let ambient = m.cols();
        Ok((m, ambient))
    } else {
        Ok(parse_linear_forms(&text)?)
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_output(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
    }
}

fn load_matrix(path: &Path) -> anyhow::Result<RationalMatrix> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let rows: Vec<Vec<String>> = serde_json::from_str(&text)?;
        Ok(RationalMatrix::from_string_rows(&rows)?)
    } else {
        Ok(RationalMatrix::parse_text(&text)?)
    }
}

fn load_fan_doc(path: &Path) -> anyhow::Result<GfanDocument> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let value: serde_json::Value = serde_json::from_str(&text)?;
        Ok(GfanDocument::from_json(&value)?)
    } else {
        Ok(GfanDocument::parse(&text)?)
    }
}

fn load_fan(path: &Path) -> anyhow::Result<Fan> {
    Ok(load_fan_doc(path)?.fan()?)
}

struct BasisFile {
    elements: Vec<BasisElement>,
}

struct BasisElement {
    name: String,
    class: DivisorClass,
    ray_coeffs: Option<Vec<Rational>>,
}

fn load_basis(path: &Path) -> anyhow::Result<BasisFile> {
    let value: serde_json::Value = serde_json::from_str(&read(path)?)?;
    let elements = value["elements"]
        .as_array()
        .ok_or_else(|| anyhow!("basis file needs an `elements` array"))?;
    let mut out = Vec::with_capacity(elements.len());
    for e in elements {
        let name = e["name"]
            .as_str()
            .ok_or_else(|| anyhow!("basis element without a name"))?
            .to_string();
        let class_values = e["class"]
            .as_array()
            .ok_or_else(|| anyhow!("basis element {name} without a class"))?;
        let class: Vec<tropfan::Int> = class_values
            .iter()
            .map(|x| {
                x.as_i64()
                    .map(tropfan::Int::from)
                    .or_else(|| x.as_str().and_then(|s| s.parse().ok()))
                    .ok_or_else(|| anyhow!("malformed class entry in {name}"))
            })
            .collect::<anyhow::Result<_>>()?;
        let ray_coeffs = match &e["ray_coeffs"] {
            serde_json::Value::Null => None,
            serde_json::Value::Array(arr) => Some(
                arr.iter()
                    .map(|x| {
                        x.as_i64()
                            .map(|v| Rational::from_integer(v.into()))
                            .or_else(|| x.as_str().and_then(|s| parse_rational(s).ok()))
                            .ok_or_else(|| anyhow!("malformed ray coefficient in {name}"))
                    })
                    .collect::<anyhow::Result<Vec<Rational>>>()?,
            ),
            _ => bail!("malformed ray_coeffs for {name}"),
        };
        out.push(BasisElement {
            name,
            class: DivisorClass(IntegerVector(class)),
            ray_coeffs,
        });
    }
    Ok(BasisFile { elements: out })
}

fn parse_int_list(text: &str) -> anyhow::Result<Vec<tropfan::Int>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<tropfan::Int>()
                .map_err(|_| anyhow!("malformed integer `{t}`"))
        })
        .collect()
}

fn parse_usize_list(text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| anyhow!("malformed index `{t}`"))
        })
        .collect()
}

fn parse_rat_list(text: &str) -> anyhow::Result<Vec<Rational>> {
    text.split(',')
        .map(|t| Ok(parse_rational(t.trim())?))
        .collect()
}

fn emit_fan_doc(
    doc: &GfanDocument,
    format: FanFormat,
    annotations: bool,
    out: &Option<PathBuf>,
) -> anyhow::Result<()> {
    match format {
        FanFormat::Gfan => write_output(out, &doc.emit(annotations)),
        FanFormat::Json => {
            write_output(out, &(serde_json::to_string_pretty(&doc.to_json()?)? + "\n"))
        }
    }
}
