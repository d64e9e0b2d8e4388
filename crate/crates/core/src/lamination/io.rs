//! TOML files for lamination specs and built laminations.
//!
//! A spec names `degree`, `generators` (lists of angle strings) and `depth`.
//! A built lamination adds one `[[classes]]` table per class with its angles,
//! pullback depth, preperiod, period and kind. Files carrying `[[classes]]` are
//! read back as the stored collection itself.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Class, Lamination, LaminationError, StoredClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub angles: Vec<String>,
    #[serde(default)]
    pub depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preperiod: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaminationFile {
    pub degree: u32,
    #[serde(default)]
    pub depth: u32,
    #[serde(default)]
    pub generators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassEntry>>,
}

/// A parsed file: either a spec to be closed under pullback, or a stored collection.
#[derive(Clone, Debug)]
pub struct ParsedFile {
    pub degree: u32,
    pub depth: u32,
    pub generators: Vec<Class>,
    pub stored: Option<Lamination>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, column)
}

fn token_error(text: &str, token: &str, err: &LaminationError) -> FormatError {
    let quoted = format!("\"{token}\"");
    let offset = text
        .find(&quoted)
        .or_else(|| text.find(token))
        .unwrap_or(0);
    let (line, column) = position(text, offset);
    FormatError {
        line,
        column,
        message: format!("token `{token}`: {err}"),
    }
}

fn parse_class(text: &str, tokens: &[String]) -> Result<Class, FormatError> {
    for t in tokens {
        if let Err(e) = Class::parse_angles(std::slice::from_ref(t)) {
            return Err(token_error(text, t, &e));
        }
    }
    Class::parse_angles(tokens).map_err(|e| {
        let (line, column) = (1, 1);
        FormatError {
            line,
            column,
            message: e.to_string(),
        }
    })
}

pub fn parse_file(text: &str) -> Result<ParsedFile, FormatError> {
    let raw: LaminationFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map_or((1, 1), |s| position(text, s.start));
        FormatError {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    if raw.degree < 2 {
        return Err(FormatError {
            line: 1,
            column: 1,
            message: format!("degree must be at least 2, got {}", raw.degree),
        });
    }
    let generators = raw
        .generators
        .iter()
        .map(|g| parse_class(text, g))
        .collect::<Result<Vec<_>, _>>()?;
    let stored = match &raw.classes {
        None => None,
        Some(entries) => {
            let classes = entries
                .iter()
                .map(|e| {
                    Ok(StoredClass {
                        class: parse_class(text, &e.angles)?,
                        depth: e.depth,
                    })
                })
                .collect::<Result<Vec<_>, FormatError>>()?;
            let gen_ids = generators
                .iter()
                .filter_map(|g| classes.iter().position(|c| c.class == *g))
                .collect();
            Some(
                Lamination::from_parts(raw.degree, raw.depth, classes, gen_ids).map_err(|e| {
                    FormatError {
                        line: 1,
                        column: 1,
                        message: e.to_string(),
                    }
                })?,
            )
        }
    };
    Ok(ParsedFile {
        degree: raw.degree,
        depth: raw.depth,
        generators,
        stored,
    })
}

fn angle_strings(c: &Class) -> Vec<String> {
    c.angles().iter().map(|a| a.to_string()).collect()
}

/// Spec text for `degree`, `generators` and `depth`.
pub fn write_spec(degree: u32, generators: &[Class], depth: u32) -> String {
    let file = LaminationFile {
        degree,
        depth,
        generators: generators.iter().map(angle_strings).collect(),
        classes: None,
    };
    toml::to_string(&file).expect("spec serializes")
}

/// Full listing of a lamination, one `[[classes]]` table per class.
pub fn write_lamination(lam: &Lamination) -> Result<String, LaminationError> {
    let d = lam.degree();
    let classes = lam
        .classes()
        .iter()
        .map(|s| {
            let p = s.class.orbit_portrait(d)?;
            Ok(ClassEntry {
                angles: angle_strings(&s.class),
                depth: s.depth,
                preperiod: Some(p.preperiod),
                period: Some(p.period),
                kind: Some(s.class.kind().to_string()),
            })
        })
        .collect::<Result<Vec<_>, LaminationError>>()?;
    let file = LaminationFile {
        degree: d,
        depth: lam.depth(),
        generators: lam
            .generators()
            .iter()
            .map(|&g| angle_strings(lam.class(g)))
            .collect(),
        classes: Some(classes),
    };
    Ok(toml::to_string(&file).expect("lamination serializes"))
}

#[cfg(test)]
mod tests {
    use super::super::pullback_closure;
    use super::*;

    #[test]
    fn spec_round_trip() {
        let text = "degree = 2\ndepth = 3\ngenerators = [[\"1/12\", \"7/12\"], [\"1/7\", \"2/7\", \"4/7\"]]\n";
        let parsed = parse_file(text).unwrap();
        assert_eq!(parsed.degree, 2);
        assert_eq!(parsed.depth, 3);
        assert_eq!(parsed.generators.len(), 2);
        assert!(parsed.stored.is_none());
        let again = write_spec(2, &parsed.generators, 3);
        let reparsed = parse_file(&again).unwrap();
        assert_eq!(reparsed.generators, parsed.generators);
    }

    #[test]
    fn bad_token_reports_position() {
        let text = "degree = 2\ndepth = 1\ngenerators = [[\"1/12\", \"7/x\"]]\n";
        let err = parse_file(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.column, 24);
        assert!(err.message.contains("7/x"));
        let err = parse_file("degree = 2\ndepth = \"a\"\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn lamination_round_trip() {
        let gens: Vec<Class> = ["{1/12,7/12}", "{1/7,2/7,4/7}"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let lam = pullback_closure(2, &gens, 2).unwrap();
        let text = write_lamination(&lam).unwrap();
        assert!(text.contains("kind = \"gap\""));
        let back = parse_file(&text).unwrap().stored.unwrap();
        assert_eq!(back.classes(), lam.classes());
        assert_eq!(back.generators(), lam.generators());
    }
}
