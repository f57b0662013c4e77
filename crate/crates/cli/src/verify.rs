//! `magic4 verify`: recomputes every count and construction and prints a
//! pass/fail table.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use magic4::correspond::{compatible_squares, count_compatible};
use magic4::enumerate::{
    brute_semimagic_order3, count_semimagic_order3, normal_catalog, BRUTE_SEMIMAGIC_MAX,
};
use magic4::forms::generate_from_forms;
use magic4::forms::{
    class_census, complement_pairs, compose, enumerate_forms, fundamental_forms, orbit,
    EXPECTED_CENSUS,
};
use magic4::groups::{apply_bitperm, orbit_size_s4, BitPermutation};
use magic4::square::line_sums;
use magic4::OrbitLetter;

use crate::error::CliError;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn expect_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T, detail: String) -> Outcome {
    if got == want {
        Ok(detail)
    } else {
        Err(format!("{detail} (got {got:?}, expected {want:?})"))
    }
}

fn normal_count() -> Outcome {
    let n = normal_catalog().total;
    expect_eq(n, 7040, format!("{n} normal squares"))
}

fn normal_orbits() -> Outcome {
    let n = normal_catalog().d8_orbit_count;
    expect_eq(n, 880, format!("{n} D8 orbits"))
}

fn compatible_count() -> Outcome {
    let (total, orbits) = count_compatible();
    expect_eq(
        (total, orbits),
        (4224, 528),
        format!("{total} compatible squares, {orbits} D8 orbits"),
    )
}

fn s4_divisibility() -> Outcome {
    let (total, _) = count_compatible();
    if total % 24 == 0 {
        Ok(format!("{total} / 24 = {}", total / 24))
    } else {
        Err(format!("24 does not divide {total}"))
    }
}

fn free_s4_action() -> Outcome {
    let perms = BitPermutation::all();
    for a in compatible_squares() {
        for p in perms.iter().filter(|p| !p.is_identity()) {
            if apply_bitperm(*p, a).map_err(|e| e.to_string())? == *a {
                return Err(format!("{:?} fixes {a:?}", p.targets()));
            }
        }
        let size = orbit_size_s4(a).map_err(|e| e.to_string())?;
        if size != 24 {
            return Err(format!("S4 orbit of {a:?} has {size} elements"));
        }
    }
    Ok("every S4 orbit has 24 elements".into())
}

fn form_count() -> Outcome {
    let n = enumerate_forms().len();
    expect_eq(n, 16, format!("{n} forms"))
}

fn orbit_sizes() -> Outcome {
    let sizes: Vec<usize> = OrbitLetter::ALL.iter().map(|&l| orbit(l).len()).collect();
    expect_eq(
        sizes.clone(),
        vec![2, 4, 4, 4, 2],
        format!("orbit sizes {sizes:?}"),
    )
}

fn complements() -> Outcome {
    let n = complement_pairs().len();
    expect_eq(n, 8, format!("{n} complement pairs"))
}

fn composition_theorem() -> Outcome {
    let forms = enumerate_forms();
    let mut n = 0;
    for &a in &forms {
        for &b in &forms {
            for &c in &forms {
                for &d in &forms {
                    if line_sums(&compose(&[a, b, c, d])) != [30; 10] {
                        return Err(format!(
                            "composition of {a:?} {b:?} {c:?} {d:?} is not magic"
                        ));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} quadruples, all line sums 30"))
}

fn oracle_equivalence() -> Outcome {
    let generated = generate_from_forms();
    let filtered: BTreeSet<_> = compatible_squares().iter().copied().collect();
    if generated == filtered {
        Ok(format!(
            "{} squares from forms = {} compatible",
            generated.len(),
            filtered.len()
        ))
    } else {
        Err(format!(
            "{} from forms vs {} compatible",
            generated.len(),
            filtered.len()
        ))
    }
}

fn census() -> Outcome {
    let census = class_census();
    let terms: Vec<String> = census.values().map(ToString::to_string).collect();
    let total: usize = census.values().sum();
    let detail = format!("{} classes, {} = {total}", census.len(), terms.join(" + "));
    expect_eq(census, BTreeMap::from(EXPECTED_CENSUS), detail)
}

fn fundamentals_present() -> Outcome {
    let forms = enumerate_forms();
    let missing: Vec<_> = fundamental_forms()
        .into_iter()
        .filter(|(_, f)| !forms.contains(f))
        .map(|(l, _)| l)
        .collect();
    expect_eq(missing, vec![], "five fundamental forms are forms".into())
}

fn semimagic() -> Outcome {
    for r in 0..=BRUTE_SEMIMAGIC_MAX {
        let brute = brute_semimagic_order3(r).map_err(|e| e.to_string())?;
        let formula = count_semimagic_order3(u64::from(r)).map_err(|e| e.to_string())?;
        if brute != formula {
            return Err(format!("r = {r}: formula {formula}, brute force {brute}"));
        }
    }
    Ok(format!(
        "formula = brute force for r = 0..={BRUTE_SEMIMAGIC_MAX}"
    ))
}

pub fn checks() -> Vec<Check> {
    vec![
        ("normal-count", normal_count),
        ("normal-d8-orbits", normal_orbits),
        ("compatible-count", compatible_count),
        ("s4-divisibility", s4_divisibility),
        ("s4-free-action", free_s4_action),
        ("form-count", form_count),
        ("fundamental-forms", fundamentals_present),
        ("orbit-sizes", orbit_sizes),
        ("complement-pairs", complements),
        ("composition-theorem", composition_theorem),
        ("oracle-equivalence", oracle_equivalence),
        ("class-census", census),
        ("semimagic-order3", semimagic),
    ]
}

pub fn run(stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut body = String::new();
    let mut failed = Vec::new();
    for (name, check) in checks() {
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(name);
                ("FAIL", d)
            }
        };
        body += &format!("{status}  {name:<20} {detail}\n");
    }
    stdout
        .write_all(body.as_bytes())
        .map_err(|e| CliError::io("writing output", e))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}
