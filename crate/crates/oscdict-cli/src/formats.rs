//! Dictionary file formats. Three interchange encodings of the same data:
//!
//! * JSON — self-describing, 17-significant-digit decimal floats (exact
//!   double round-trip), one entry object per line;
//! * CSV — flat table with `#`-prefixed metadata comment lines;
//! * raw-f64 — bit-exact little-endian doubles behind a 24-byte header
//!   (magic "OSCD", u32 version, u64 p, u64 count). Vectors only: per-entry
//!   labels are rebuilt positionally from the canonical generation order,
//!   so raw files must come from canonically parameterized dictionaries.

use num_complex::Complex64;
use oscdict_core::dict::ORDERING;
use oscdict_core::tori::canonical_torus;
use oscdict_core::weil::CharacterTable;
use oscdict_core::{CVec, DictEntry, DictKind, Dictionary, Kind, RepParams};
use serde::Deserialize;
use std::fmt;
use std::path::Path;

pub const RAW_MAGIC: &[u8; 4] = b"OSCD";
pub const RAW_VERSION: u32 = 1;

#[derive(Debug)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FormatError {}

fn bad<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    RawF64,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::RawF64 => "oscd",
        }
    }

    /// Pick a format from the file extension, falling back to content
    /// sniffing (raw magic, then leading '{' for JSON, else CSV).
    pub fn detect(path: &Path, bytes: &[u8]) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => return Format::Json,
            Some("csv") => return Format::Csv,
            Some("oscd") => return Format::RawF64,
            _ => {}
        }
        if bytes.starts_with(RAW_MAGIC) {
            return Format::RawF64;
        }
        if bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{') {
            return Format::Json;
        }
        Format::Csv
    }
}

/// 17 significant digits: the shortest fixed form that round-trips every
/// finite double exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn kind_str(kind: Kind) -> &'static str {
    match kind {
        Kind::Split => "split",
        Kind::Nonsplit => "nonsplit",
    }
}

/// The meta object shared by the JSON dictionary encoding and the report.
pub fn meta_json(dict: &Dictionary) -> String {
    let d = match dict.d {
        Some(d) => d.to_string(),
        None => "null".into(),
    };
    let (s, t) = match dict.st {
        Some((s, t)) => (s.to_string(), t.to_string()),
        None => ("null".into(), "null".into()),
    };
    let c = match dict.c_scalar {
        Some(c) => format!("[{}, {}]", fmt_f64(c.re), fmt_f64(c.im)),
        None => "null".into(),
    };
    format!(
        "{{\"p\": {}, \"kind\": \"{}\", \"D\": {}, \"alpha\": {}, \"s\": {}, \"t\": {}, \"c_scalar\": {}, \"version\": \"{}\", \"ordering\": \"{}\"}}",
        dict.p,
        dict.kind.as_str(),
        d,
        dict.alpha,
        s,
        t,
        c,
        json_escape(&dict.version),
        json_escape(&dict.ordering),
    )
}

fn rep_json(rep: &RepParams) -> String {
    match rep {
        RepParams::Split { y, z } => format!("{{\"y\": {y}, \"z\": {z}}}"),
        RepParams::Nonsplit { a, c, w } => {
            format!("{{\"a\": {a}, \"c\": {c}, \"w\": {w}}}")
        }
    }
}

pub fn encode_json(dict: &Dictionary) -> String {
    let mut out = String::new();
    out.push_str("{\n\"meta\": ");
    out.push_str(&meta_json(dict));
    out.push_str(",\n\"entries\": [\n");
    for (i, e) in dict.entries.iter().enumerate() {
        let re: Vec<String> = e.vector.entries.iter().map(|z| fmt_f64(z.re)).collect();
        let im: Vec<String> = e.vector.entries.iter().map(|z| fmt_f64(z.im)).collect();
        out.push_str(&format!(
            "{{\"kind\": \"{}\", \"char_index\": {}, \"rep\": {}, \"re\": [{}], \"im\": [{}]}}{}\n",
            kind_str(e.kind),
            e.char_index,
            rep_json(&e.rep),
            re.join(", "),
            im.join(", "),
            if i + 1 < dict.entries.len() { "," } else { "" },
        ));
    }
    out.push_str("]\n}\n");
    out
}

#[derive(Deserialize)]
struct JsonDict {
    meta: JsonMeta,
    entries: Vec<JsonEntry>,
}

#[derive(Deserialize)]
struct JsonMeta {
    p: u64,
    kind: String,
    #[serde(rename = "D")]
    d: Option<u64>,
    alpha: u64,
    s: Option<u64>,
    t: Option<u64>,
    c_scalar: Option<[f64; 2]>,
    version: String,
    ordering: String,
}

#[derive(Deserialize)]
struct JsonEntry {
    kind: String,
    char_index: u64,
    rep: JsonRep,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Deserialize, Default)]
#[serde(default)]
struct JsonRep {
    y: Option<u64>,
    z: Option<u64>,
    a: Option<u64>,
    c: Option<u64>,
    w: Option<bool>,
}

fn parse_dict_kind(s: &str) -> Result<DictKind, FormatError> {
    match s {
        "split" => Ok(DictKind::Split),
        "nonsplit" => Ok(DictKind::Nonsplit),
        "both" => Ok(DictKind::Both),
        other => bad(format!("unknown dictionary kind {other:?}")),
    }
}

fn entry_from_parts(
    p: u64,
    kind: &str,
    char_index: u64,
    rep: &JsonRep,
    re: &[f64],
    im: &[f64],
) -> Result<DictEntry, FormatError> {
    if re.len() != p as usize || im.len() != p as usize {
        return bad(format!(
            "entry has {}+{} coordinates, expected {p}+{p}",
            re.len(),
            im.len()
        ));
    }
    let vector = CVec::new(
        re.iter()
            .zip(im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect(),
    );
    match kind {
        "split" => {
            let (Some(y), Some(z)) = (rep.y, rep.z) else {
                return bad("split entry must carry rep fields y and z");
            };
            Ok(DictEntry {
                vector,
                kind: Kind::Split,
                char_index,
                rep: RepParams::Split { y, z },
            })
        }
        "nonsplit" => {
            let (Some(a), Some(c), Some(w)) = (rep.a, rep.c, rep.w) else {
                return bad("nonsplit entry must carry rep fields a, c and w");
            };
            Ok(DictEntry {
                vector,
                kind: Kind::Nonsplit,
                char_index,
                rep: RepParams::Nonsplit { a, c, w },
            })
        }
        other => bad(format!("unknown entry kind {other:?}")),
    }
}

pub fn decode_json(text: &str) -> Result<Dictionary, FormatError> {
    let parsed: JsonDict =
        serde_json::from_str(text).map_err(|e| FormatError(format!("malformed JSON: {e}")))?;
    let meta = parsed.meta;
    let kind = parse_dict_kind(&meta.kind)?;
    let mut entries = Vec::with_capacity(parsed.entries.len());
    for e in &parsed.entries {
        entries.push(entry_from_parts(
            meta.p,
            &e.kind,
            e.char_index,
            &e.rep,
            &e.re,
            &e.im,
        )?);
    }
    Ok(Dictionary {
        p: meta.p,
        d: meta.d,
        kind,
        entries,
        alpha: meta.alpha,
        st: match (meta.s, meta.t) {
            (Some(s), Some(t)) => Some((s, t)),
            _ => None,
        },
        c_scalar: meta.c_scalar.map(|[re, im]| Complex64::new(re, im)),
        version: meta.version,
        ordering: meta.ordering,
    })
}

// ---- CSV ----

pub fn encode_csv(dict: &Dictionary) -> String {
    let mut out = String::new();
    out.push_str(&format!("# p={}\n", dict.p));
    out.push_str(&format!("# kind={}\n", dict.kind.as_str()));
    if let Some(d) = dict.d {
        out.push_str(&format!("# D={d}\n"));
    }
    out.push_str(&format!("# alpha={}\n", dict.alpha));
    if let Some((s, t)) = dict.st {
        out.push_str(&format!("# s={s}\n# t={t}\n"));
    }
    if let Some(c) = dict.c_scalar {
        out.push_str(&format!(
            "# c_scalar_re={}\n# c_scalar_im={}\n",
            fmt_f64(c.re),
            fmt_f64(c.im)
        ));
    }
    out.push_str(&format!("# version={}\n", dict.version));
    out.push_str(&format!("# ordering={}\n", dict.ordering));

    out.push_str("kind,char_index,rp0,rp1,rp2");
    for t in 0..dict.p {
        out.push_str(&format!(",re{t},im{t}"));
    }
    out.push('\n');
    for e in &dict.entries {
        let (rp0, rp1, rp2) = match e.rep {
            RepParams::Split { y, z } => (y, z, 0),
            RepParams::Nonsplit { a, c, w } => (a, c, u64::from(w)),
        };
        out.push_str(&format!(
            "{},{},{rp0},{rp1},{rp2}",
            kind_str(e.kind),
            e.char_index
        ));
        for z in &e.vector.entries {
            out.push_str(&format!(",{},{}", fmt_f64(z.re), fmt_f64(z.im)));
        }
        out.push('\n');
    }
    out
}

pub fn decode_csv(text: &str) -> Result<Dictionary, FormatError> {
    // metadata rides in comment lines the CSV reader will skip
    let mut meta: std::collections::HashMap<String, String> = std::collections::HashMap::new();
    for line in text.lines() {
        let Some(rest) = line.strip_prefix("# ") else {
            continue;
        };
        if let Some((k, v)) = rest.split_once('=') {
            meta.insert(k.trim().to_string(), v.to_string());
        }
    }
    let field = |k: &str| -> Result<String, FormatError> {
        meta.get(k)
            .cloned()
            .ok_or_else(|| FormatError(format!("missing metadata line: # {k}=...")))
    };
    let num = |k: &str| -> Result<u64, FormatError> {
        field(k)?
            .trim()
            .parse()
            .map_err(|_| FormatError(format!("metadata {k} is not an integer")))
    };
    let opt_num = |k: &str| -> Result<Option<u64>, FormatError> {
        match meta.get(k) {
            None => Ok(None),
            Some(v) => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| FormatError(format!("metadata {k} is not an integer"))),
        }
    };
    let p = num("p")?;
    let kind = parse_dict_kind(&field("kind")?)?;
    let d = opt_num("D")?;
    let st = match (opt_num("s")?, opt_num("t")?) {
        (Some(s), Some(t)) => Some((s, t)),
        _ => None,
    };
    let c_scalar = match (meta.get("c_scalar_re"), meta.get("c_scalar_im")) {
        (Some(re), Some(im)) => {
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| FormatError("bad c_scalar_re".into()))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| FormatError("bad c_scalar_im".into()))?;
            Some(Complex64::new(re, im))
        }
        _ => None,
    };

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| FormatError(format!("malformed CSV: {e}")))?;
        if record.len() != 5 + 2 * p as usize {
            return bad(format!(
                "CSV row has {} fields, expected {}",
                record.len(),
                5 + 2 * p
            ));
        }
        let get = |i: usize| record.get(i).unwrap().trim();
        let parse_u64 = |i: usize| -> Result<u64, FormatError> {
            get(i)
                .parse()
                .map_err(|_| FormatError(format!("bad integer field {:?}", get(i))))
        };
        let parse_f64 = |i: usize| -> Result<f64, FormatError> {
            get(i)
                .parse()
                .map_err(|_| FormatError(format!("bad float field {:?}", get(i))))
        };
        let char_index = parse_u64(1)?;
        let (rp0, rp1, rp2) = (parse_u64(2)?, parse_u64(3)?, parse_u64(4)?);
        let rep = JsonRep {
            y: Some(rp0),
            z: Some(rp1),
            a: Some(rp0),
            c: Some(rp1),
            w: Some(rp2 != 0),
        };
        let mut re = Vec::with_capacity(p as usize);
        let mut im = Vec::with_capacity(p as usize);
        for t in 0..p as usize {
            re.push(parse_f64(5 + 2 * t)?);
            im.push(parse_f64(6 + 2 * t)?);
        }
        entries.push(entry_from_parts(p, get(0), char_index, &rep, &re, &im)?);
    }
    Ok(Dictionary {
        p,
        d,
        kind,
        entries,
        alpha: num("alpha")?,
        st,
        c_scalar,
        version: field("version")?,
        ordering: field("ordering")?,
    })
}

// ---- raw-f64 ----

pub fn encode_raw(dict: &Dictionary) -> Vec<u8> {
    let mut out = Vec::with_capacity(24 + dict.entries.len() * 16 * dict.p as usize);
    out.extend_from_slice(RAW_MAGIC);
    out.extend_from_slice(&RAW_VERSION.to_le_bytes());
    out.extend_from_slice(&dict.p.to_le_bytes());
    out.extend_from_slice(&(dict.entries.len() as u64).to_le_bytes());
    for e in &dict.entries {
        for z in &e.vector.entries {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

/// (kind, char_index, rep) for each entry, in generation order.
type EntryLabels = Vec<(Kind, u64, RepParams)>;

/// Rebuild the per-entry labels a raw file does not carry, in the canonical
/// generation order. Assumes the file was produced with canonical
/// parameters (no D override).
fn canonical_labels(p: u64, kind: DictKind) -> Result<(EntryLabels, Dictionary), FormatError> {
    let mut labels = Vec::new();
    if matches!(kind, DictKind::Split | DictKind::Both) {
        for x in 1..=p - 2 {
            for y in 0..p {
                for z in 0..=(p - 1) / 2 {
                    labels.push((Kind::Split, x, RepParams::Split { y, z }));
                }
            }
        }
    }
    let mut skeleton = Dictionary {
        p,
        d: None,
        kind,
        entries: Vec::new(),
        alpha: oscdict_core::field::primitive_root(p).value(),
        st: None,
        c_scalar: None,
        version: env!("CARGO_PKG_VERSION").into(),
        ordering: ORDERING.into(),
    };
    if matches!(kind, DictKind::Nonsplit | DictKind::Both) {
        let ct = CharacterTable::new(p);
        let (d, (s, t), gd) = canonical_torus(p, None)
            .map_err(|e| FormatError(format!("cannot rebuild torus metadata: {e}")))?;
        let basis = oscdict_core::dict::nonsplit_basis(&ct, &gd)
            .map_err(|e| FormatError(format!("cannot rebuild eigenbasis labels: {e}")))?;
        let ks: Vec<u64> = basis.eigenpairs.iter().map(|e| e.k).collect();
        skeleton.d = Some(d.value());
        skeleton.st = Some((s.value(), t.value()));
        skeleton.c_scalar = Some(basis.c_scalar);
        let push_rep = |a: u64, c: u64, w: bool, labels: &mut Vec<(Kind, u64, RepParams)>| {
            for &k in &ks {
                labels.push((Kind::Nonsplit, k, RepParams::Nonsplit { a, c, w }));
            }
        };
        if p % 4 == 3 {
            for a in 1..=(p - 1) / 2 {
                for c in 0..p {
                    push_rep(a, c, false, &mut labels);
                }
            }
        } else {
            let s_set = oscdict_core::tori::build_s(p)
                .map_err(|e| FormatError(format!("cannot rebuild rep set: {e}")))?;
            for a in s_set {
                for c in 0..p {
                    push_rep(a.value(), c, false, &mut labels);
                    push_rep(a.value(), c, true, &mut labels);
                }
            }
        }
    }
    Ok((labels, skeleton))
}

pub fn decode_raw(bytes: &[u8]) -> Result<Dictionary, FormatError> {
    if bytes.len() < 24 {
        return bad("raw file shorter than its 24-byte header");
    }
    if &bytes[0..4] != RAW_MAGIC {
        return bad("raw file lacks the OSCD magic");
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != RAW_VERSION {
        return bad(format!("unsupported raw version {version}"));
    }
    let p = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let count = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    if !(5..=1 << 20).contains(&p) || !oscdict_core::field::is_prime(p) {
        return bad(format!("raw header carries invalid p = {p}"));
    }
    let want = 24 + count as usize * 16 * p as usize;
    if bytes.len() != want {
        return bad(format!(
            "raw file is {} bytes, header implies {want}",
            bytes.len()
        ));
    }
    let split_n = p * (p + 1) * (p - 2) / 2;
    let ns_n = p * p * (p - 1) / 2;
    let kind = if count == split_n {
        DictKind::Split
    } else if count == ns_n {
        DictKind::Nonsplit
    } else if count == split_n + ns_n {
        DictKind::Both
    } else {
        return bad(format!(
            "raw entry count {count} matches no family size at p = {p}"
        ));
    };
    let (labels, mut dict) = canonical_labels(p, kind)?;
    debug_assert_eq!(labels.len() as u64, count);
    let mut off = 24;
    for (kind, char_index, rep) in labels {
        let mut entries = Vec::with_capacity(p as usize);
        for _ in 0..p {
            let re = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
            let im = f64::from_le_bytes(bytes[off + 8..off + 16].try_into().unwrap());
            entries.push(Complex64::new(re, im));
            off += 16;
        }
        dict.entries.push(DictEntry {
            vector: CVec::new(entries),
            kind,
            char_index,
            rep,
        });
    }
    Ok(dict)
}

// ---- umbrella ----

pub fn encode(dict: &Dictionary, format: Format) -> Vec<u8> {
    match format {
        Format::Json => encode_json(dict).into_bytes(),
        Format::Csv => encode_csv(dict).into_bytes(),
        Format::RawF64 => encode_raw(dict),
    }
}

pub fn decode(bytes: &[u8], format: Format) -> Result<Dictionary, FormatError> {
    match format {
        Format::Json => decode_json(
            std::str::from_utf8(bytes).map_err(|_| FormatError("file is not UTF-8".into()))?,
        ),
        Format::Csv => decode_csv(
            std::str::from_utf8(bytes).map_err(|_| FormatError("file is not UTF-8".into()))?,
        ),
        Format::RawF64 => decode_raw(bytes),
    }
}
