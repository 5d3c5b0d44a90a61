//! Witness files: a `group: <name>` header, then one word per line.
//! Blank lines and `#` comments are ignored.
//!
//! ```text
//! # found by anneal, seed 0
//! group: chw:2
//! x1
//! x2 x1^2
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use super::{check_square, FiniteSubset, UpReport};
use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::word::GeneratorWord;

/// The groups a witness file may name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSpec {
    Chw(usize),
    FreeProduct(usize),
    Integers,
}

impl GroupSpec {
    pub fn rank(&self) -> usize {
        match *self {
            GroupSpec::Chw(n) | GroupSpec::FreeProduct(n) => n,
            GroupSpec::Integers => 1,
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rank = |r: &str| {
            r.parse::<usize>()
                .map_err(|_| Error::UnknownGroup(s.to_string()))
        };
        if let Some(r) = s.strip_prefix("chw:") {
            Ok(GroupSpec::Chw(rank(r)?))
        } else if let Some(r) = s.strip_prefix("fp:") {
            Ok(GroupSpec::FreeProduct(rank(r)?))
        } else if s == "z" {
            Ok(GroupSpec::Integers)
        } else {
            Err(Error::UnknownGroup(s.to_string()))
        }
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupSpec::Chw(n) => write!(f, "chw:{n}"),
            GroupSpec::FreeProduct(n) => write!(f, "fp:{n}"),
            GroupSpec::Integers => f.write_str("z"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFile {
    pub group: GroupSpec,
    pub words: Vec<GeneratorWord>,
}

pub fn parse_witness_file(text: &str) -> Result<WitnessFile> {
    let mut group = None;
    let mut words = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match group {
            None => {
                let spec = line.strip_prefix("group:").ok_or_else(|| {
                    Error::WitnessFile(format!(
                        "line {}: expected `group: <name>` header",
                        lineno + 1
                    ))
                })?;
                group = Some(spec.parse::<GroupSpec>()?);
            }
            Some(spec) => {
                let word = GeneratorWord::parse(line, spec.rank())
                    .map_err(|e| Error::WitnessFile(format!("line {}: {e}", lineno + 1)))?;
                words.push(word);
            }
        }
    }
    let group = group.ok_or_else(|| Error::WitnessFile("missing group header".into()))?;
    Ok(WitnessFile { group, words })
}

/// Reads a set file into a subset of `ctx`, rejecting duplicates.
pub fn load_subset<C: GroupContext + ?Sized>(
    ctx: &C,
    text: &str,
) -> Result<FiniteSubset<C::Element>> {
    let file = parse_witness_file(text)?;
    if file.group.to_string() != ctx.name() {
        return Err(Error::WitnessFile(format!(
            "file is for {}, not {}",
            file.group,
            ctx.name()
        )));
    }
    let elements = file
        .words
        .iter()
        .map(|w| ctx.evaluate(w))
        .collect::<Result<Vec<_>>>()?;
    FiniteSubset::new(ctx, elements)
}

/// Exact `check_square` report for a persisted set.
pub fn verify_witness<C: GroupContext + ?Sized>(ctx: &C, text: &str) -> Result<UpReport> {
    check_square(ctx, &load_subset(ctx, text)?)
}

/// Renders a set in witness-file form, one normal-form word per line.
pub fn format_witness_file<C: GroupContext + ?Sized>(
    ctx: &C,
    set: &FiniteSubset<C::Element>,
    comments: &[String],
) -> Result<String> {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "# {c}").expect("string write");
    }
    writeln!(out, "group: {}", ctx.name()).expect("string write");
    for e in set.elements() {
        let word = ctx
            .word_for(e)
            .ok_or_else(|| Error::WitnessFile(format!("{} has no word form", ctx.name())))?;
        if word.is_empty() {
            // the empty word would read back as a blank line
            writeln!(out, "x1^0").expect("string write");
        } else {
            writeln!(out, "{word}").expect("string write");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chw::Gn;
    use crate::group::Integers;

    #[test]
    fn parses_header_comments_and_words() {
        let text = "# comment\n\ngroup: chw:2  # trailing\nx1\nx2^-2 x1 # c\n";
        let f = parse_witness_file(text).unwrap();
        assert_eq!(f.group, GroupSpec::Chw(2));
        assert_eq!(f.words.len(), 2);
        assert_eq!(f.words[1].to_string(), "x2^-2 x1");
    }

    #[test]
    fn rejects_missing_header_and_bad_words() {
        assert!(parse_witness_file("x1\n").is_err());
        assert!(parse_witness_file("# nothing\n").is_err());
        assert!(parse_witness_file("group: chw:2\nx3\n").is_err());
        assert!(matches!(
            parse_witness_file("group: hw:3\n"),
            Err(Error::UnknownGroup(_))
        ));
    }

    #[test]
    fn duplicates_after_normalization_are_rejected() {
        let text = "group: chw:2\nx1 x2^2\nx2^-2 x1\n";
        assert!(matches!(
            verify_witness(&Gn::new(2), text),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn group_must_match_context() {
        assert!(verify_witness(&Gn::new(3), "group: chw:2\nx1\n").is_err());
    }

    #[test]
    fn identity_survives_a_roundtrip() {
        let set = FiniteSubset::new(&Integers, vec![0, 3, -2]).unwrap();
        let text = format_witness_file(&Integers, &set, &["test".into()]).unwrap();
        assert_eq!(load_subset(&Integers, &text).unwrap(), set);
        assert_eq!(verify_witness(&Integers, &text).unwrap().unique_count, 3);
    }
}
