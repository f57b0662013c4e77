use std::fs;
use std::io::{Read, Write};

use magic4::correspond::{
    apply_f, check_multiplicative, compatible_squares, f_inverse, first_bit_violation,
};
use magic4::enumerate::{count_d8_orbits, normal_catalog, orbit_index};
use magic4::forms::{class_census, class_members, decompose, ADMISSIBLE_CLASSES, EXPECTED_CENSUS};
use magic4::groups::canonical_d8;
use magic4::square::{check_additive, line_sums, lines};
use magic4::{AdditiveSquare, ClassLabel, Decomposition, PrimeBasis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::document::{csv_header, parse_documents, parse_primes, Kind, SquareDocument};
use crate::error::CliError;
use crate::{Direction, Filter, Format, InputArgs, OutputArgs, Representative};

/// Reads all documents. `--primes` fills in a missing basis; with `promote`
/// it also turns plain additive documents into multiplicative ones.
fn read_input(
    input: &InputArgs,
    promote: bool,
    stdin: &mut dyn Read,
) -> Result<Vec<SquareDocument>, CliError> {
    let text = match input.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
            .map_err(|e| CliError::io(format!("reading {}", p.display()), e))?,
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::io("reading standard input", e))?;
            s
        }
    };
    let mut docs = parse_documents(&text)?;
    let primes = input.primes.as_deref().map(parse_primes).transpose()?;
    for doc in &mut docs {
        if input.one_based {
            doc.shift_one_based()?;
        }
        if let (None, Some(p)) = (doc.primes, primes) {
            doc.primes = Some(p);
            if promote {
                doc.kind = Kind::Multiplicative;
            }
        }
    }
    Ok(docs)
}

/// Renders documents; text catalogs end with `summary` as a comment line.
fn render(docs: &[SquareDocument], format: Format, summary: Option<&str>) -> String {
    match format {
        Format::Text => {
            let mut out = docs
                .iter()
                .map(SquareDocument::to_text)
                .collect::<Vec<_>>()
                .join("\n");
            if let Some(s) = summary {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&format!("# {s}\n"));
            }
            out
        }
        Format::Json => docs.iter().map(|d| d.to_json() + "\n").collect(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(csv_header()).expect("in-memory write");
            for d in docs {
                w.write_record(d.csv_record()).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
        }
    }
}

fn emit(out: &OutputArgs, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &out.output {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e)),
        None => write_all(stdout, body),
    }
}

fn write_all(w: &mut dyn Write, body: &str) -> Result<(), CliError> {
    w.write_all(body.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io("writing output", e))
}

fn annotate(doc: &mut SquareDocument, a: &AdditiveSquare) {
    doc.orbit = orbit_index(a);
    if let Ok(d) = decompose(a) {
        set_decomposition(doc, &d);
    }
}

fn set_decomposition(doc: &mut SquareDocument, d: &Decomposition) {
    doc.class = Some(d.class().to_string());
    doc.planes = Some(d.labels.map(|l| l.to_string()));
}

pub fn enumerate(
    filter: Filter,
    representative: Representative,
    out: &OutputArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let (squares, orbits): (&[AdditiveSquare], usize) = match filter {
        Filter::All => {
            let cat = normal_catalog();
            (&cat.squares, cat.d8_orbit_count)
        }
        Filter::Compatible => {
            let sq = compatible_squares();
            (sq, count_d8_orbits(sq))
        }
    };
    let selected: Vec<AdditiveSquare> = match representative {
        Representative::Full => squares.to_vec(),
        Representative::D8Canonical => squares
            .iter()
            .filter(|a| canonical_d8(*a) == **a)
            .copied()
            .collect(),
    };
    let docs: Vec<SquareDocument> = selected
        .iter()
        .map(|a| {
            let mut d = SquareDocument::additive(a);
            annotate(&mut d, a);
            d
        })
        .collect();
    let summary = format!(
        "total={} d8_orbits={} records={}",
        squares.len(),
        orbits,
        docs.len()
    );
    emit(out, &render(&docs, out.format, Some(&summary)), stdout)?;
    // the text catalog already carries the summary when it goes to stdout
    match (&out.output, out.format) {
        (Some(_), _) => write_all(stdout, &format!("{summary}\n")),
        (None, Format::Text) => Ok(()),
        (None, _) => write_all(stderr, &format!("{summary}\n")),
    }
}

#[derive(Debug, Serialize)]
struct PlaneReport {
    weight: u32,
    label: String,
    rows: [String; 4],
}

#[derive(Debug, Default, Serialize)]
struct ClassifyReport {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    primes: Option<[u64; 4]>,
    magic: bool,
    /// Decimal string; multiplicative constants may exceed 64 bits.
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<String>,
    normal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    compatible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    planes: Option<Vec<PlaneReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
}

impl ClassifyReport {
    fn to_text(&self) -> String {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut s = format!("kind: {}\n", self.kind);
        if let Some(p) = self.primes {
            s += &format!("primes: {} {} {} {}\n", p[0], p[1], p[2], p[3]);
        }
        s += &format!("magic: {}", yes(self.magic));
        if let Some(c) = &self.constant {
            s += &format!(" (constant {c})");
        }
        s += &format!("\nnormal: {}\n", yes(self.normal));
        if let Some(c) = self.compatible {
            s += &format!("compatible: {}\n", yes(c));
        }
        if let Some(c) = &self.class {
            s += &format!("class: {c}\n");
        }
        if let Some(planes) = &self.planes {
            s += "planes:\n";
            for p in planes {
                s += &format!("  {}·{:<3} {}\n", p.weight, p.label, p.rows.join(" "));
            }
        }
        if let Some(d) = &self.diagnostic {
            s += &format!("diagnostic: {d}\n");
        }
        s
    }
}

fn classify_one(doc: &SquareDocument) -> Result<ClassifyReport, CliError> {
    let mut rep = ClassifyReport::default();
    let a = match doc.kind {
        Kind::Additive => {
            let a = doc.additive_square()?;
            rep.kind = "additive".into();
            let check = check_additive(&a);
            rep.magic = check.is_magic;
            rep.normal = check.is_normal;
            rep.constant = check.constant.map(|c| c.to_string());
            if !check.is_magic {
                let sums = line_sums(&a);
                let (li, s) = sums
                    .iter()
                    .enumerate()
                    .find(|&(_, &s)| s != sums[0])
                    .expect("a non-magic square has two different line sums");
                rep.diagnostic = Some(format!(
                    "not magic: {} sums to {s}, row 0 sums to {}",
                    lines()[li].kind,
                    sums[0]
                ));
            }
            a
        }
        Kind::Multiplicative => {
            let m = doc.mult_square()?;
            rep.kind = "multiplicative".into();
            rep.primes = Some(m.basis().primes());
            let check = check_multiplicative(&m);
            rep.magic = check.is_magic;
            rep.normal = check.is_normal;
            rep.constant = check.constant.map(|c| c.to_string());
            if !check.is_magic {
                let products = lines().map(|l| {
                    m.values()
                        .line_values(&l)
                        .iter()
                        .fold(magic4::Wide::from(1u8), |acc, &v| {
                            acc.saturating_mul(magic4::Wide::from(v))
                        })
                });
                let li = (1..10).find(|&i| products[i] != products[0]).unwrap_or(1);
                rep.diagnostic = Some(format!(
                    "not magic: {} product differs from row 0",
                    lines()[li].kind
                ));
            }
            apply_f(&m)
        }
    };
    if rep.magic && !rep.normal {
        rep.diagnostic = Some(match &rep.constant {
            Some(c) => format!("magic, non-normal (constant {c})"),
            None => "magic, non-normal".into(),
        });
    }
    if rep.normal {
        match first_bit_violation(&a) {
            Some((li, pos, count)) => {
                rep.compatible = Some(false);
                rep.diagnostic = Some(format!(
                    "not compatible: {} has {count} entries with bit position {pos} set (expected 2)",
                    lines()[li].kind
                ));
            }
            None => {
                let d = decompose(&a)?;
                rep.compatible = Some(true);
                rep.class = Some(d.class().to_string());
                rep.planes = Some(
                    d.planes
                        .iter()
                        .zip(d.labels)
                        .enumerate()
                        .map(|(k, (p, l))| PlaneReport {
                            weight: 8 >> k,
                            label: l.to_string(),
                            rows: [0, 1, 2, 3].map(|i| p.row_string(i)),
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(rep)
}

pub fn classify(
    input: &InputArgs,
    format: Format,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let docs = read_input(input, true, stdin)?;
    let mut body = String::new();
    let mut failures = Vec::new();
    for (i, doc) in docs.iter().enumerate() {
        let rep = classify_one(doc)?;
        if let Some(d) = &rep.diagnostic {
            failures.push(if docs.len() > 1 {
                format!("square {i}: {d}")
            } else {
                d.clone()
            });
        }
        match format {
            Format::Json => {
                body += &serde_json::to_string(&rep).expect("report serializes");
                body.push('\n');
            }
            Format::Text | Format::Csv => {
                if i > 0 {
                    body.push('\n');
                }
                body += &rep.to_text();
            }
        }
    }
    write_all(stdout, &body)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failures.join("; ")))
    }
}

pub fn convert(
    input: &InputArgs,
    direction: Direction,
    out: &OutputArgs,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let docs = read_input(input, direction == Direction::ToAdditive, stdin)?;
    let converted = docs
        .iter()
        .map(|doc| match direction {
            Direction::ToAdditive => {
                if doc.kind != Kind::Multiplicative {
                    return Err(CliError::Validation(
                        "to-additive needs a multiplicative square (add a primes header or --primes)"
                            .into(),
                    ));
                }
                let m = doc.mult_square()?;
                Ok(SquareDocument::additive(&apply_f(&m)))
            }
            Direction::ToMultiplicative => {
                if doc.kind != Kind::Additive {
                    return Err(CliError::Validation(
                        "to-multiplicative needs an additive square".into(),
                    ));
                }
                let primes = doc.primes.ok_or_else(|| {
                    CliError::Validation("to-multiplicative needs --primes".into())
                })?;
                let basis = PrimeBasis::new(primes)?;
                let a = doc.additive_square()?;
                Ok(SquareDocument::multiplicative(&f_inverse(&a, &basis)?))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    emit(out, &render(&converted, out.format, None), stdout)
}

pub fn construct(
    class: &str,
    count: &str,
    seed: u64,
    primes: Option<&str>,
    out: &OutputArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let label: ClassLabel = class.parse()?;
    if !label.is_admissible() {
        let list: Vec<String> = ADMISSIBLE_CLASSES.iter().map(ToString::to_string).collect();
        return Err(CliError::Validation(format!(
            "class {label} contains no normal squares; admissible classes are {}",
            list.join(", ")
        )));
    }
    let basis = primes
        .map(parse_primes)
        .transpose()?
        .map(PrimeBasis::new)
        .transpose()?;
    let members = class_members(&label);
    let chosen: Vec<usize> = if count.eq_ignore_ascii_case("all") {
        (0..members.len()).collect()
    } else {
        let n: usize = count.parse().map_err(|_| {
            CliError::Validation(format!("--count {count:?} is not a number or `all`"))
        })?;
        if n > members.len() {
            return Err(CliError::Validation(format!(
                "--count {n} exceeds the {} squares of class {label}",
                members.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = rand::seq::index::sample(&mut rng, members.len(), n).into_vec();
        idx.sort_unstable();
        idx
    };
    let docs = chosen
        .into_iter()
        .map(|i| {
            let (a, d) = &members[i];
            let mut doc = match basis {
                Some(b) => SquareDocument::multiplicative(&f_inverse(a, &b)?),
                None => SquareDocument::additive(a),
            };
            doc.orbit = orbit_index(a);
            set_decomposition(&mut doc, d);
            Ok(doc)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let summary = format!("class={label} records={}", docs.len());
    emit(out, &render(&docs, out.format, Some(&summary)), stdout)
}

pub fn census(out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let census = class_census();
    let total: usize = census.values().sum();
    let expected: std::collections::BTreeMap<_, _> = EXPECTED_CENSUS.into_iter().collect();
    let body = match out.format {
        Format::Text => {
            let mut s = format!("{:<10} {:>5} {:>9}\n", "class", "count", "expected");
            for (c, n) in &census {
                let e = expected.get(c).map_or("-".to_string(), |e| e.to_string());
                s += &format!("{:<10} {:>5} {:>9}\n", c.to_string(), n, e);
            }
            let e_total: usize = expected.values().sum();
            s += &format!("{:<10} {:>5} {:>9}\n", "total", total, e_total);
            s
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = census
                .iter()
                .map(|(c, n)| (c.to_string(), (*n).into()))
                .collect();
            serde_json::json!({ "census": map, "total": total }).to_string() + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["class", "count"]).expect("in-memory write");
            for (c, n) in &census {
                w.write_record([c.to_string(), n.to_string()])
                    .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
        }
    };
    emit(out, &body, stdout)?;
    if census != expected {
        return Err(CliError::Invariant(
            "class census differs from the expected table".into(),
        ));
    }
    Ok(())
}
