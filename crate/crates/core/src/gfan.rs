//! Parser and emitter for the `SymmetricFan` text format: a `_key value`
//! header followed by sections AMBIENT_DIM, DIM, LINEALITY_DIM, RAYS,
//! N_RAYS, F_VECTOR, SIMPLICIAL, PURE, CONES and MAXIMAL_CONES. Parsing is
//! tolerant of comments, preamble chatter and arbitrary whitespace; emission
//! is canonical. Declared metadata is recomputed and any disagreement is a
//! parse error. Cone and ray order is preserved so that re-emitting a parsed
//! document reproduces it token for token.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::IntegerVector;
use crate::rational::Int;

pub const DEFAULT_HEADER: [&str; 3] = ["_application fan", "_version 2.2", "_type SymmetricFan"];

const KNOWN_SECTIONS: [&str; 11] = [
    "AMBIENT_DIM",
    "DIM",
    "LINEALITY_DIM",
    "LINEALITY_SPACE",
    "RAYS",
    "N_RAYS",
    "F_VECTOR",
    "SIMPLICIAL",
    "PURE",
    "CONES",
    "MAXIMAL_CONES",
];

/// Where the top-dimensional cones are printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConesLayout {
    /// Everything under CONES (no MAXIMAL_CONES section).
    Single,
    /// Non-maximal cones under CONES, maximal ones under MAXIMAL_CONES.
    SplitMaximal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfanDocument {
    pub header: Vec<String>,
    pub ambient_dim: usize,
    pub lineality_dim: usize,
    pub dim: usize,
    pub fvector: Vec<usize>,
    pub simplicial: bool,
    pub pure: bool,
    pub rays: Vec<IntegerVector>,
    /// Cones in emission order, grouped as printed under CONES (dimension,
    /// cones of that dimension). The zero cone is implicit.
    pub cones_by_dim: Vec<(usize, Vec<Vec<usize>>)>,
    /// Cones printed under MAXIMAL_CONES, when the layout splits them off.
    pub maximal_by_dim: Option<Vec<(usize, Vec<Vec<usize>>)>>,
    /// Ray index -> annotation text net of the ray number (for instance a
    /// `(*)` marker).
    pub annotations: BTreeMap<usize, String>,
    /// Raw LINEALITY_SPACE payload, preserved verbatim.
    pub lineality_section: Option<String>,
    /// Unknown sections, preserved verbatim in order.
    pub unknown_sections: Vec<(String, String)>,
}

impl GfanDocument {
    pub fn layout(&self) -> ConesLayout {
        if self.maximal_by_dim.is_some() {
            ConesLayout::SplitMaximal
        } else {
            ConesLayout::Single
        }
    }

    /// All cones (both sections) in document order.
    pub fn all_cones(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (_, group) in &self.cones_by_dim {
            out.extend(group.iter().cloned());
        }
        if let Some(max) = &self.maximal_by_dim {
            for (_, group) in max {
                out.extend(group.iter().cloned());
            }
        }
        out
    }

    pub fn fan(&self) -> Result<Fan> {
        Fan::new(
            self.ambient_dim,
            self.rays.clone(),
            self.all_cones(),
            self.lineality_dim,
        )
    }

    /// Canonical document for a fan: default header, cones grouped by
    /// dimension in the fan's canonical order, single-section layout.
    pub fn from_fan(fan: &Fan) -> Self {
        let report = fan.validate();
        let mut cones_by_dim: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
        for d in 1..=report.dim {
            let group: Vec<Vec<usize>> = fan
                .cones()
                .iter()
                .filter(|c| fan.cone_dim(c) == d)
                .cloned()
                .collect();
            if !group.is_empty() {
                cones_by_dim.push((d, group));
            }
        }
        GfanDocument {
            header: DEFAULT_HEADER.iter().map(|s| s.to_string()).collect(),
            ambient_dim: fan.ambient_dim(),
            lineality_dim: fan.lineality_dim(),
            dim: report.dim,
            fvector: report.fvector,
            simplicial: report.simplicial,
            pure: report.pure,
            rays: fan.rays().to_vec(),
            cones_by_dim,
            maximal_by_dim: None,
            annotations: BTreeMap::new(),
            lineality_section: None,
            unknown_sections: Vec::new(),
        }
    }

    /// Reorders rays and cones (and copies layout and header) to match a
    /// reference document describing the same fan, so the two emissions are
    /// token-identical. Fails when rays or cones do not coincide as sets.
    pub fn reordered_like(&self, reference: &GfanDocument) -> Result<GfanDocument> {
        let fan = self.fan()?;
        let ref_fan = reference.fan()?;
        let mapping = fan.match_rays(&ref_fan).ok_or_else(|| {
            Error::InvalidFan("ray sets differ from the reference document".into())
        })?;
        let mut my_cones: Vec<Vec<usize>> = self
            .all_cones()
            .iter()
            .map(|c| {
                let mut mapped: Vec<usize> = c.iter().map(|&i| mapping[i]).collect();
                mapped.sort_unstable();
                mapped
            })
            .collect();
        my_cones.sort();
        let mut ref_cones: Vec<Vec<usize>> = reference.all_cones();
        for c in ref_cones.iter_mut() {
            c.sort_unstable();
        }
        ref_cones.sort();
        if my_cones != ref_cones {
            return Err(Error::InvalidFan(
                "cone sets differ from the reference document".into(),
            ));
        }
        let remap_annotations: BTreeMap<usize, String> = self
            .annotations
            .iter()
            .map(|(&i, t)| (mapping[i], t.clone()))
            .collect();
        Ok(GfanDocument {
            header: reference.header.clone(),
            annotations: remap_annotations,
            ..reference.clone()
        })
    }

    pub fn parse(text: &str) -> Result<GfanDocument> {
        let mut header: Vec<String> = Vec::new();
        let mut sections: Vec<(String, Vec<(usize, String)>)> = Vec::new();
        let mut seen_header = false;
        let mut in_sections = false;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let trimmed = raw.trim();
            let first_token = trimmed.split_whitespace().next().unwrap_or("");
            let is_section = !first_token.is_empty()
                && first_token.chars().next().unwrap().is_ascii_uppercase()
                && first_token
                    .chars()
                    .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
                && (in_sections || seen_header || KNOWN_SECTIONS.contains(&first_token));
            if is_section {
                in_sections = true;
                let rest = trimmed[first_token.len()..].trim().to_string();
                let mut payload = Vec::new();
                if !rest.is_empty() {
                    payload.push((lineno, rest));
                }
                sections.push((first_token.to_string(), payload));
                continue;
            }
            if !in_sections {
                if trimmed.starts_with('_') {
                    header.push(trimmed.to_string());
                    seen_header = true;
                }
                // anything else before the sections is preamble chatter
                continue;
            }
            if let Some((_, payload)) = sections.last_mut() {
                payload.push((lineno, raw.to_string()));
            }
        }

        if sections.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "no sections found".into(),
            });
        }

        let mut ambient_dim: Option<usize> = None;
        let mut declared_dim: Option<usize> = None;
        let mut lineality_dim: usize = 0;
        let mut declared_n_rays: Option<usize> = None;
        let mut declared_fvector: Option<Vec<usize>> = None;
        let mut declared_simplicial: Option<bool> = None;
        let mut declared_pure: Option<bool> = None;
        let mut rays: Vec<IntegerVector> = Vec::new();
        let mut annotations: BTreeMap<usize, String> = BTreeMap::new();
        let mut cones_by_dim: Option<Vec<(usize, Vec<Vec<usize>>)>> = None;
        let mut maximal_by_dim: Option<Vec<(usize, Vec<Vec<usize>>)>> = None;
        let mut lineality_section: Option<String> = None;
        let mut unknown_sections: Vec<(String, String)> = Vec::new();

        for (name, payload) in &sections {
            if name.contains("SYMMETRY") || name.contains("ORBIT") {
                return Err(Error::Parse {
                    line: payload.first().map(|(l, _)| *l).unwrap_or(0),
                    msg: format!("orbit-compressed documents are not supported (section {name})"),
                });
            }
            match name.as_str() {
                "AMBIENT_DIM" => ambient_dim = Some(parse_scalar(payload)?),
                "DIM" => declared_dim = Some(parse_scalar(payload)?),
                "LINEALITY_DIM" => lineality_dim = parse_scalar(payload)?,
                "N_RAYS" => declared_n_rays = Some(parse_scalar(payload)?),
                "SIMPLICIAL" => declared_simplicial = Some(parse_scalar::<usize>(payload)? != 0),
                "PURE" => declared_pure = Some(parse_scalar::<usize>(payload)? != 0),
                "F_VECTOR" => {
                    let mut values = Vec::new();
                    for (lineno, line) in payload {
                        for tok in strip_comment(line).split_whitespace() {
                            values.push(tok.parse::<usize>().map_err(|_| Error::Parse {
                                line: *lineno,
                                msg: format!("malformed F_VECTOR entry `{tok}`"),
                            })?);
                        }
                    }
                    declared_fvector = Some(values);
                }
                "RAYS" => {
                    let dim = ambient_dim.ok_or_else(|| Error::Parse {
                        line: payload.first().map(|(l, _)| *l).unwrap_or(0),
                        msg: "RAYS before AMBIENT_DIM".into(),
                    })?;
                    let (r, a) = parse_rays(payload, dim)?;
                    rays = r;
                    annotations = a;
                }
                "CONES" => cones_by_dim = Some(parse_cone_groups(payload)?),
                "MAXIMAL_CONES" => maximal_by_dim = Some(parse_cone_groups(payload)?),
                "LINEALITY_SPACE" => {
                    lineality_section = Some(
                        payload
                            .iter()
                            .map(|(_, l)| l.clone())
                            .collect::<Vec<_>>()
                            .join("\n"),
                    )
                }
                _ => unknown_sections.push((
                    name.clone(),
                    payload
                        .iter()
                        .map(|(_, l)| l.clone())
                        .collect::<Vec<_>>()
                        .join("\n"),
                )),
            }
        }

        let ambient_dim = ambient_dim.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing AMBIENT_DIM".into(),
        })?;
        let cones_by_dim = cones_by_dim.unwrap_or_default();

        let doc = GfanDocument {
            header,
            ambient_dim,
            lineality_dim,
            dim: declared_dim.unwrap_or(0),
            fvector: declared_fvector.clone().unwrap_or_else(|| vec![1]),
            simplicial: declared_simplicial.unwrap_or(true),
            pure: declared_pure.unwrap_or(true),
            rays,
            cones_by_dim,
            maximal_by_dim,
            annotations,
            lineality_section,
            unknown_sections,
        };

        if let Some(n) = declared_n_rays {
            if n != doc.rays.len() {
                return Err(Error::DeclaredMismatch {
                    field: "N_RAYS",
                    declared: n.to_string(),
                    computed: doc.rays.len().to_string(),
                });
            }
        }
        for c in doc.all_cones() {
            if let Some(&bad) = c.iter().find(|&&i| i >= doc.rays.len()) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("cone index {bad} out of range ({} rays)", doc.rays.len()),
                });
            }
        }
        if doc.lineality_dim == 0 {
            let fan = doc.fan()?;
            let report = fan.validate();
            if let Some(d) = declared_dim {
                if d != report.dim {
                    return Err(Error::DeclaredMismatch {
                        field: "DIM",
                        declared: d.to_string(),
                        computed: report.dim.to_string(),
                    });
                }
            }
            if let Some(fv) = &declared_fvector {
                if *fv != report.fvector {
                    return Err(Error::DeclaredMismatch {
                        field: "F_VECTOR",
                        declared: format!("{fv:?}"),
                        computed: format!("{:?}", report.fvector),
                    });
                }
            }
            if let Some(s) = declared_simplicial {
                if s != report.simplicial {
                    return Err(Error::DeclaredMismatch {
                        field: "SIMPLICIAL",
                        declared: s.to_string(),
                        computed: report.simplicial.to_string(),
                    });
                }
            }
            if let Some(p) = declared_pure {
                if p != report.pure {
                    return Err(Error::DeclaredMismatch {
                        field: "PURE",
                        declared: p.to_string(),
                        computed: report.pure.to_string(),
                    });
                }
            }
            // declared per-group dimensions
            let groups = doc
                .cones_by_dim
                .iter()
                .chain(doc.maximal_by_dim.iter().flatten());
            for (d, group) in groups {
                for c in group {
                    let computed = fan.cone_dim(c);
                    if computed != *d {
                        return Err(Error::DeclaredMismatch {
                            field: "CONES",
                            declared: format!("dimension {d} for {c:?}"),
                            computed: computed.to_string(),
                        });
                    }
                }
            }
            return Ok(GfanDocument {
                dim: report.dim,
                fvector: report.fvector,
                simplicial: report.simplicial,
                pure: report.pure,
                ..doc
            });
        }
        Ok(doc)
    }

    /// Canonical emission. Ray comments (`# index annotation`) are written
    /// only on request.
    pub fn emit(&self, with_comments: bool) -> String {
        let mut out = String::new();
        for h in &self.header {
            out.push_str(h);
            out.push('\n');
        }
        let section = |name: &str, body: String, out: &mut String| {
            out.push('\n');
            out.push_str(name);
            out.push('\n');
            out.push_str(&body);
            if !body.is_empty() && !body.ends_with('\n') {
                out.push('\n');
            }
        };
        section("AMBIENT_DIM", format!("{}", self.ambient_dim), &mut out);
        section("DIM", format!("{}", self.dim), &mut out);
        section("LINEALITY_DIM", format!("{}", self.lineality_dim), &mut out);
        let mut rays_body = String::new();
        for (i, r) in self.rays.iter().enumerate() {
            let coords: Vec<String> = r.0.iter().map(Int::to_string).collect();
            rays_body.push_str(&coords.join(" "));
            if with_comments {
                rays_body.push_str(&format!("\t# {i}"));
                if let Some(a) = self.annotations.get(&i) {
                    rays_body.push(' ');
                    rays_body.push_str(a);
                }
            }
            rays_body.push('\n');
        }
        section("RAYS", rays_body, &mut out);
        section("N_RAYS", format!("{}", self.rays.len()), &mut out);
        let fv: Vec<String> = self.fvector.iter().map(usize::to_string).collect();
        section("F_VECTOR", fv.join(" "), &mut out);
        section("SIMPLICIAL", if self.simplicial { "1" } else { "0" }.into(), &mut out);
        section("PURE", if self.pure { "1" } else { "0" }.into(), &mut out);
        if let Some(lin) = &self.lineality_section {
            section("LINEALITY_SPACE", lin.clone(), &mut out);
        }
        section("CONES", emit_cone_groups(&self.cones_by_dim, true), &mut out);
        if let Some(max) = &self.maximal_by_dim {
            section("MAXIMAL_CONES", emit_cone_groups(max, false), &mut out);
        }
        for (name, body) in &self.unknown_sections {
            section(name, body.clone(), &mut out);
        }
        out
    }

    /// JSON mirror: `{ambient_dim, lineality_dim, rays, cones_by_dim,
    /// annotations}`.
    pub fn to_json(&self) -> Result<Value> {
        let rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .map(|r| {
                r.0.iter()
                    .map(|x| {
                        i64::try_from(x).map_err(|_| {
                            Error::Shape(format!("ray entry {x} does not fit JSON integer"))
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut cones: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
        cones.insert("0".into(), vec![vec![]]);
        for (d, group) in self
            .cones_by_dim
            .iter()
            .chain(self.maximal_by_dim.iter().flatten())
        {
            cones.entry(d.to_string()).or_default().extend(group.iter().cloned());
        }
        let annotations: BTreeMap<String, String> = self
            .annotations
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        Ok(json!({
            "ambient_dim": self.ambient_dim,
            "lineality_dim": self.lineality_dim,
            "rays": rays,
            "cones_by_dim": cones,
            "annotations": annotations,
        }))
    }

    pub fn from_json(value: &Value) -> Result<GfanDocument> {
        let bad = |msg: &str| Error::Parse { line: 0, msg: msg.into() };
        let ambient_dim = value["ambient_dim"].as_u64().ok_or_else(|| bad("ambient_dim"))? as usize;
        let lineality_dim =
            value["lineality_dim"].as_u64().ok_or_else(|| bad("lineality_dim"))? as usize;
        let rays: Vec<IntegerVector> = value["rays"]
            .as_array()
            .ok_or_else(|| bad("rays"))?
            .iter()
            .map(|row| {
                let coords: Option<Vec<Int>> = row
                    .as_array()?
                    .iter()
                    .map(|x| x.as_i64().map(Int::from))
                    .collect();
                coords.map(IntegerVector)
            })
            .collect::<Option<_>>()
            .ok_or_else(|| bad("rays"))?;
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for (_, group) in value["cones_by_dim"].as_object().ok_or_else(|| bad("cones_by_dim"))? {
            for cone in group.as_array().ok_or_else(|| bad("cones_by_dim"))? {
                let c: Option<Vec<usize>> = cone
                    .as_array()
                    .map(|a| a.iter().map(|x| x.as_u64().map(|v| v as usize)).collect())
                    .and_then(|v: Option<Vec<usize>>| v);
                let c = c.ok_or_else(|| bad("cones_by_dim"))?;
                if !c.is_empty() {
                    cones.push(c);
                }
            }
        }
        let fan = Fan::new(ambient_dim, rays, cones, lineality_dim)?;
        let mut doc = GfanDocument::from_fan(&fan);
        if let Some(ann) = value["annotations"].as_object() {
            for (k, v) in ann {
                let idx: usize = k.parse().map_err(|_| bad("annotations"))?;
                doc.annotations.insert(idx, v.as_str().unwrap_or_default().to_string());
            }
        }
        Ok(doc)
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_scalar<T: std::str::FromStr>(payload: &[(usize, String)]) -> Result<T> {
    let mut tokens = Vec::new();
    let mut first_line = 0;
    for (lineno, line) in payload {
        for tok in strip_comment(line).split_whitespace() {
            if tokens.is_empty() {
                first_line = *lineno;
            }
            tokens.push(tok.to_string());
        }
    }
    if tokens.len() != 1 {
        return Err(Error::Parse {
            line: first_line,
            msg: format!("expected a single value, found {}", tokens.len()),
        });
    }
    tokens[0].parse::<T>().map_err(|_| Error::Parse {
        line: first_line,
        msg: format!("malformed value `{}`", tokens[0]),
    })
}

fn parse_rays(
    payload: &[(usize, String)],
    ambient_dim: usize,
) -> Result<(Vec<IntegerVector>, BTreeMap<usize, String>)> {
    let mut rays: Vec<IntegerVector> = Vec::new();
    let mut annotations = BTreeMap::new();
    let mut buffer: Vec<Int> = Vec::new();
    for (lineno, line) in payload {
        let code = strip_comment(line);
        let comment = line.strip_prefix(code).unwrap_or("").trim_start_matches('#');
        let completed_before = rays.len();
        for tok in code.split_whitespace() {
            let value: Int = tok.parse().map_err(|_| Error::Parse {
                line: *lineno,
                msg: format!("malformed ray entry `{tok}`"),
            })?;
            buffer.push(value);
            if buffer.len() == ambient_dim {
                rays.push(IntegerVector(std::mem::take(&mut buffer)));
            }
        }
        // attach a line comment to the single ray completed on this line
        let comment = comment.trim();
        if !comment.is_empty() && rays.len() == completed_before + 1 {
            let index = rays.len() - 1;
            let mut net = comment;
            if let Some(first) = net.split_whitespace().next() {
                if first.parse::<usize>() == Ok(index) {
                    net = net[first.len()..].trim();
                }
            }
            if !net.is_empty() {
                annotations.insert(index, net.to_string());
            }
        }
    }
    if !buffer.is_empty() {
        return Err(Error::Parse {
            line: payload.last().map(|(l, _)| *l).unwrap_or(0),
            msg: format!(
                "ray data ends mid-vector ({} of {} entries)",
                buffer.len(),
                ambient_dim
            ),
        });
    }
    Ok((rays, annotations))
}

fn parse_cone_groups(payload: &[(usize, String)]) -> Result<Vec<(usize, Vec<Vec<usize>>)>> {
    #[derive(PartialEq)]
    enum Tok {
        Open,
        Close,
        Word(String),
    }
    let mut tokens: Vec<(usize, Tok)> = Vec::new();
    for (lineno, line) in payload {
        let code = strip_comment(line);
        let mut word = String::new();
        for c in code.chars() {
            match c {
                '{' | '}' => {
                    if !word.is_empty() {
                        tokens.push((*lineno, Tok::Word(std::mem::take(&mut word))));
                    }
                    tokens.push((*lineno, if c == '{' { Tok::Open } else { Tok::Close }));
                }
                c if c.is_whitespace() => {
                    if !word.is_empty() {
                        tokens.push((*lineno, Tok::Word(std::mem::take(&mut word))));
                    }
                }
                c => word.push(c),
            }
        }
        if !word.is_empty() {
            tokens.push((*lineno, Tok::Word(word)));
        }
    }

    let mut groups: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
    let mut current_dim: Option<usize> = None;
    let mut i = 0;
    while i < tokens.len() {
        match &tokens[i] {
            (lineno, Tok::Word(w)) if w == "Dimension" => {
                let Some((_, Tok::Word(d))) = tokens.get(i + 1) else {
                    return Err(Error::Parse {
                        line: *lineno,
                        msg: "Dimension heading without a value".into(),
                    });
                };
                let d: usize = d.parse().map_err(|_| Error::Parse {
                    line: *lineno,
                    msg: format!("malformed dimension `{d}`"),
                })?;
                groups.push((d, Vec::new()));
                current_dim = Some(d);
                i += 2;
            }
            (lineno, Tok::Open) => {
                let mut cone = Vec::new();
                i += 1;
                loop {
                    match tokens.get(i) {
                        Some((_, Tok::Close)) => {
                            i += 1;
                            break;
                        }
                        Some((l, Tok::Word(w))) => {
                            let idx: usize = w.parse().map_err(|_| Error::Parse {
                                line: *l,
                                msg: format!("malformed cone index `{w}`"),
                            })?;
                            cone.push(idx);
                            i += 1;
                        }
                        _ => {
                            return Err(Error::Parse {
                                line: *lineno,
                                msg: "unterminated cone set".into(),
                            })
                        }
                    }
                }
                let dim = current_dim.unwrap_or(cone.len());
                if groups.last().map(|(d, _)| *d) != Some(dim) {
                    groups.push((dim, Vec::new()));
                }
                if !cone.is_empty() {
                    groups.last_mut().expect("pushed").1.push(cone);
                }
            }
            (lineno, Tok::Word(w)) => {
                return Err(Error::Parse {
                    line: *lineno,
                    msg: format!("unexpected token `{w}` in cone section"),
                })
            }
            (lineno, Tok::Close) => {
                return Err(Error::Parse {
                    line: *lineno,
                    msg: "unmatched `}`".into(),
                })
            }
        }
        // drop empty trailing groups created by a bare Dimension 0 heading
    }
    groups.retain(|(d, cones)| !cones.is_empty() || *d != 0);
    Ok(groups)
}

fn emit_cone_groups(groups: &[(usize, Vec<Vec<usize>>)], with_zero: bool) -> String {
    let mut out = String::new();
    if with_zero {
        out.push_str(" Dimension 0\n{}\n");
    }
    for (d, cones) in groups {
        if *d == 0 {
            continue;
        }
        out.push_str(&format!(" Dimension {d}\n"));
        let mut line_len = 0usize;
        for c in cones {
            let words: Vec<String> = c.iter().map(usize::to_string).collect();
            let text = format!("{{{}}}", words.join(" "));
            if line_len + text.len() > 60 && line_len > 0 {
                out.push('\n');
                line_len = 0;
            }
            out.push_str(&text);
            line_len += text.len();
        }
        out.push('\n');
    }
    out
}

/// Token stream with comments removed and braces split out; used for
/// token-level document comparison.
pub fn tokens_ignoring_comments(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for line in text.lines() {
        let code = strip_comment(line);
        let mut word = String::new();
        for c in code.chars() {
            match c {
                '{' | '}' => {
                    if !word.is_empty() {
                        tokens.push(std::mem::take(&mut word));
                    }
                    tokens.push(c.to_string());
                }
                c if c.is_whitespace() => {
                    if !word.is_empty() {
                        tokens.push(std::mem::take(&mut word));
                    }
                }
                c => word.push(c),
            }
        }
        if !word.is_empty() {
            tokens.push(word);
        }
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::p2_fan;

    const SMALL: &str = "\
_application fan
_version 2.2
_type SymmetricFan

AMBIENT_DIM
2

DIM
2

LINEALITY_DIM
0

RAYS
1 0   # 0
0 1   # 1 (*)
-1 -1 # 2

N_RAYS
3

F_VECTOR
1 3 3

SIMPLICIAL
1

PURE
1

CONES
 Dimension 0
{}
 Dimension 1
{0}{1}{2}
 Dimension 2
{0 1}{1 2}{0 2}
";

    #[test]
    fn parses_the_small_document() {
        let doc = GfanDocument::parse(SMALL).unwrap();
        assert_eq!(doc.ambient_dim, 2);
        assert_eq!(doc.rays.len(), 3);
        assert_eq!(doc.fvector, vec![1, 3, 3]);
        assert!(doc.simplicial && doc.pure);
        assert_eq!(doc.annotations.len(), 1);
        assert_eq!(doc.annotations[&1], "(*)");
        assert_eq!(doc.layout(), ConesLayout::Single);
        let fan = doc.fan().unwrap();
        assert_eq!(fan, p2_fan());
    }

    #[test]
    fn emit_parse_round_trip_is_token_identical() {
        let doc = GfanDocument::parse(SMALL).unwrap();
        let emitted = doc.emit(false);
        assert_eq!(
            tokens_ignoring_comments(&emitted),
            tokens_ignoring_comments(SMALL)
        );
        let again = GfanDocument::parse(&emitted).unwrap();
        assert_eq!(again.fan().unwrap(), doc.fan().unwrap());
        // emitting with comments preserves annotations through a reparse
        let with_comments = doc.emit(true);
        let reparsed = GfanDocument::parse(&with_comments).unwrap();
        assert_eq!(reparsed.annotations, doc.annotations);
    }

    #[test]
    fn preamble_chatter_is_skipped() {
        let noisy = format!(
            "Q[x1,x2]\n{{x1+x2+1}}\nLP algorithm being used: \"cddgmp\".\n{SMALL}"
        );
        let doc = GfanDocument::parse(&noisy).unwrap();
        assert_eq!(doc.rays.len(), 3);
    }

    #[test]
    fn declared_mismatches_are_rejected() {
        let wrong = SMALL.replace("1 3 3", "1 3 2");
        assert!(matches!(
            GfanDocument::parse(&wrong),
            Err(Error::DeclaredMismatch { field: "F_VECTOR", .. })
        ));
        let wrong = SMALL.replace("N_RAYS\n3", "N_RAYS\n4");
        assert!(matches!(
            GfanDocument::parse(&wrong),
            Err(Error::DeclaredMismatch { field: "N_RAYS", .. })
        ));
    }

    #[test]
    fn minimal_document_with_zero_cone() {
        let text = "_application fan\n_type SymmetricFan\n\nAMBIENT_DIM\n3\n\nCONES\n Dimension 0\n{}\n";
        let doc = GfanDocument::parse(text).unwrap();
        assert_eq!(doc.ambient_dim, 3);
        assert!(doc.rays.is_empty());
        assert_eq!(doc.fvector, vec![1]);
        let emitted = doc.emit(false);
        assert!(emitted.contains("F_VECTOR\n1\n"));
    }

    #[test]
    fn from_fan_emits_f_vector() {
        let doc = GfanDocument::from_fan(&p2_fan());
        let emitted = doc.emit(false);
        assert!(emitted.contains("F_VECTOR\n1 3 3"));
        let back = GfanDocument::parse(&emitted).unwrap();
        assert_eq!(back.fan().unwrap(), p2_fan());
    }

    #[test]
    fn symmetry_sections_are_rejected() {
        let text = format!("{SMALL}\nSYMMETRY_GENERATORS\n(1 2 0)\n");
        assert!(GfanDocument::parse(&text).is_err());
    }

    #[test]
    fn json_mirror_round_trip() {
        let doc = GfanDocument::parse(SMALL).unwrap();
        let value = doc.to_json().unwrap();
        let back = GfanDocument::from_json(&value).unwrap();
        assert_eq!(back.fan().unwrap(), doc.fan().unwrap());
        assert_eq!(back.annotations, doc.annotations);
    }
}
