//! Family file formats.
//!
//! JSON: `{"n":4,"sets":[[1,2],[3,4]]}` with an optional `"distinct"` flag
//! (default `true`; only written when `false`).
//!
//! Text: first line `n`, then one member per line as space-separated labels.
//! Blank lines are ignored and lines starting with `#` are comments. A member
//! with no elements is written as a single `-`. The text format does not carry
//! the distinct flag; reading always yields `distinct = true`.

use serde::{Deserialize, Serialize};

use super::{FamilyError, SetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyFormat {
    Json,
    Text,
}

impl FamilyFormat {
    /// JSON if the first non-whitespace byte is `{`, text otherwise.
    pub fn detect(bytes: &[u8]) -> Self {
        match bytes.iter().find(|b| !b.is_ascii_whitespace()) {
            Some(b'{') => FamilyFormat::Json,
            _ => FamilyFormat::Text,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    n: i64,
    sets: Vec<Vec<i64>>,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    distinct: bool,
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

fn to_label(set: usize, n: usize, value: i64) -> Result<u32, FamilyError> {
    u32::try_from(value)
        .ok()
        .filter(|&e| e >= 1 && e as usize <= n)
        .ok_or(FamilyError::OutOfRange {
            set,
            element: value.clamp(0, u32::MAX as i64) as u32,
            n,
        })
}

/// Reads a family, detecting the format from the content.
pub fn read_family(bytes: &[u8]) -> Result<SetFamily, FamilyError> {
    match FamilyFormat::detect(bytes) {
        FamilyFormat::Json => read_json(bytes),
        FamilyFormat::Text => read_text(bytes),
    }
}

fn read_json(bytes: &[u8]) -> Result<SetFamily, FamilyError> {
    let raw: FamilyJson = serde_json::from_slice(bytes).map_err(|e| FamilyError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n = usize::try_from(raw.n)
        .ok()
        .filter(|&n| n > 0)
        .ok_or(FamilyError::EmptyGround)?;
    let sets = raw
        .sets
        .iter()
        .enumerate()
        .map(|(idx, set)| set.iter().map(|&v| to_label(idx, n, v)).collect())
        .collect::<Result<Vec<Vec<u32>>, _>>()?;
    SetFamily::with_distinct(n, sets, raw.distinct)
}

fn read_text(bytes: &[u8]) -> Result<SetFamily, FamilyError> {
    let text = std::str::from_utf8(bytes).map_err(|e| FamilyError::Parse {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        column: 1,
        message: "input is not UTF-8".into(),
    })?;

    let mut n: Option<usize> = None;
    let mut sets = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut members = Vec::new();
        let mut offset = 0;
        for token in line.split_whitespace() {
            let column = line[offset..].find(token).map_or(offset, |p| p + offset) + 1;
            offset = column - 1 + token.len();
            let err = |message: String| FamilyError::Parse {
                line: line_idx + 1,
                column,
                message,
            };
            if n.is_some() && token == "-" {
                if line.split_whitespace().count() != 1 {
                    return Err(err("`-` must stand alone on its line".into()));
                }
                continue;
            }
            let value: i64 = token
                .parse()
                .map_err(|_| err(format!("expected an integer, found {token:?}")))?;
            members.push((value, column));
        }
        match n {
            None => {
                let [(value, column)] = members[..] else {
                    return Err(FamilyError::Parse {
                        line: line_idx + 1,
                        column: 1,
                        message: "first line must hold only the ground-set size".into(),
                    });
                };
                if value <= 0 {
                    return Err(FamilyError::Parse {
                        line: line_idx + 1,
                        column,
                        message: "ground-set size must be positive".into(),
                    });
                }
                n = Some(value as usize);
            }
            Some(n) => {
                let set = sets.len();
                let labels = members
                    .iter()
                    .map(|&(v, _)| to_label(set, n, v))
                    .collect::<Result<Vec<_>, _>>()?;
                sets.push(labels);
            }
        }
    }
    let n = n.ok_or(FamilyError::Parse {
        line: 1,
        column: 1,
        message: "missing ground-set size".into(),
    })?;
    SetFamily::new(n, sets)
}

impl From<&SetFamily> for FamilyJson {
    fn from(family: &SetFamily) -> Self {
        FamilyJson {
            n: family.n() as i64,
            sets: family
                .sets()
                .iter()
                .map(|s| s.iter().map(|&e| e as i64).collect())
                .collect(),
            distinct: family.distinct_required(),
        }
    }
}

impl SetFamily {
    /// The JSON file form as a value.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FamilyJson::from(self)).expect("family JSON is always serializable")
    }
}

/// Serializes a family; output ends with a newline.
pub fn write_family(family: &SetFamily, format: FamilyFormat) -> Vec<u8> {
    match format {
        FamilyFormat::Json => {
            let mut out = serde_json::to_vec(&FamilyJson::from(family)).expect("family JSON is always serializable");
            out.push(b'\n');
            out
        }
        FamilyFormat::Text => {
            let mut out = format!("{}\n", family.n());
            for set in family.sets() {
                if set.is_empty() {
                    out.push('-');
                } else {
                    let labels: Vec<String> = set.iter().map(u32::to_string).collect();
                    out.push_str(&labels.join(" "));
                }
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_and_text_agree() {
        let a = read_family(br#"{"n":4,"sets":[[1,2],[3,4]]}"#).unwrap();
        let b = read_family(b"4\n1 2\n3 4\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 4);
        assert_eq!(a.len(), 2);
        assert!(a.distinct_required());
    }

    #[test]
    fn json_canonical_bytes() {
        let raw = "{\"n\":4,\"sets\":[[1,2],[3,4]]}\n";
        let f = read_family(raw.as_bytes()).unwrap();
        assert_eq!(write_family(&f, FamilyFormat::Json), raw.as_bytes());
        let relaxed = read_family(br#"{"n":2,"sets":[[1],[1]],"distinct":false}"#).unwrap();
        assert!(!relaxed.distinct_required());
        assert_eq!(
            write_family(&relaxed, FamilyFormat::Json),
            b"{\"n\":2,\"sets\":[[1],[1]],\"distinct\":false}\n"
        );
    }

    #[test]
    fn text_comments_blank_lines_and_empty_members() {
        let f = read_family(b"# header\n\n5\n# a comment\n1 2\n\n-\n3 5\n").unwrap();
        assert_eq!(f.sets(), &[vec![1, 2], vec![], vec![3, 5]]);
        assert_eq!(write_family(&f, FamilyFormat::Text), b"5\n1 2\n-\n3 5\n");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match read_family(b"4\n1 2\n3 x\n") {
            Err(FamilyError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match read_family(b"{\"n\":4,\n\"sets\":[[1,2],}") {
            Err(FamilyError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            read_family(b"4 5\n1\n"),
            Err(FamilyError::Parse { line: 1, .. })
        ));
        assert!(matches!(read_family(b""), Err(FamilyError::Parse { .. })));
    }

    #[test]
    fn range_violations_are_input_errors() {
        assert!(matches!(
            read_family(b"3\n1 4\n"),
            Err(FamilyError::OutOfRange {
                set: 0,
                element: 4,
                n: 3
            })
        ));
        assert!(matches!(
            read_family(br#"{"n":3,"sets":[[-1]]}"#),
            Err(FamilyError::OutOfRange { .. })
        ));
        assert!(matches!(read_family(b"3\n2 1\n"), Err(FamilyError::Unsorted { .. })));
    }

    fn arb_canonical() -> impl Strategy<Value = SetFamily> {
        (1usize..=12, 0usize..=8).prop_flat_map(|(n, m)| {
            let set = proptest::collection::btree_set(1..=n as u32, 0..=n);
            proptest::collection::vec(set, m).prop_map(move |sets| {
                let sets = sets.into_iter().map(|s| s.into_iter().collect()).collect();
                SetFamily::new(n, sets).unwrap().canonicalize()
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip_both_formats(f in arb_canonical()) {
            for format in [FamilyFormat::Json, FamilyFormat::Text] {
                let bytes = write_family(&f, format);
                let back = read_family(&bytes).unwrap();
                prop_assert_eq!(&back, &f);
                prop_assert_eq!(write_family(&back, format), bytes);
            }
        }
    }
}
