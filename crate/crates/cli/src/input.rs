//! Element arguments.
//!
//! An argument is one of
//! - a node list `0:0 1/4:1/2 1/2:3/4 1:1`,
//! - a tree pair `domain|range` in dot notation,
//! - a `.json` file holding one array of `["x","y"]` pairs or an array of them,
//! - a `.fw` file with one F-word per non-empty line (`#` starts a comment),
//! - a fixture name (`x0`, `x1`, `g2`, `g3`, `two_bump`, `id`),
//! - an F-word such as `x0^-1 x1 x0`.

use std::fs;
use std::path::Path;

use plsol::thompson::{FWord, TreePair};
use plsol::{fixtures, PLMap, PlError, Rational};

#[derive(Debug, thiserror::Error)]
#[error("argument {index} ({arg:?}){}: {message}", location(.line, .column))]
pub struct InputError {
    pub index: usize,
    pub arg: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

fn location(line: &Option<usize>, column: &Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" line {l}, column {c}"),
        (Some(l), None) => format!(" line {l}"),
        (None, Some(c)) => format!(" column {c}"),
        (None, None) => String::new(),
    }
}

impl InputError {
    fn new(index: usize, arg: &str, message: impl Into<String>) -> Self {
        InputError {
            index,
            arg: arg.to_string(),
            line: None,
            column: None,
            message: message.into(),
        }
    }

    fn at(mut self, line: Option<usize>, column: Option<usize>) -> Self {
        self.line = line;
        self.column = column;
        self
    }
}

/// Parses every argument; files may contribute several elements.
pub fn parse_arguments<S: AsRef<str>>(args: &[S]) -> Result<Vec<PLMap>, InputError> {
    let mut out = Vec::new();
    for (i, a) in args.iter().enumerate() {
        out.extend(parse_argument(i + 1, a.as_ref())?);
    }
    Ok(out)
}

pub fn parse_argument(index: usize, arg: &str) -> Result<Vec<PLMap>, InputError> {
    let err = |m: String| InputError::new(index, arg, m);
    if arg.contains(':') {
        return parse_nodes(arg)
            .map(|f| vec![f])
            .map_err(|(col, m)| err(m).at(None, Some(col)));
    }
    if arg.contains('|') {
        return parse_tree_pair(arg).map(|f| vec![f]).map_err(err);
    }
    if arg.ends_with(".json") {
        let text = fs::read_to_string(arg).map_err(|e| err(e.to_string()))?;
        return parse_json(&text).map_err(|(line, col, m)| err(m).at(Some(line), Some(col)));
    }
    if arg.ends_with(".fw") {
        let text = fs::read_to_string(Path::new(arg)).map_err(|e| err(e.to_string()))?;
        return parse_fw(&text).map_err(|(line, col, m)| err(m).at(Some(line), col));
    }
    if let Some(f) = fixtures::by_name(arg) {
        return Ok(vec![f]);
    }
    arg.parse::<FWord>()
        .map(|w| vec![w.to_plmap()])
        .map_err(|e| match &e {
            plsol::thompson::ThompsonError::Syntax { offset, .. } => {
                err(e.to_string()).at(None, Some(offset + 1))
            }
            _ => err(e.to_string()),
        })
}

/// Node list with 1-based error columns.
pub fn parse_nodes(s: &str) -> Result<PLMap, (usize, String)> {
    let mut raw = Vec::new();
    let mut columns = Vec::new();
    let mut pos = 0;
    for token in s.split_whitespace() {
        let start = pos + s[pos..].find(token).unwrap_or(0);
        pos = start + token.len();
        let col = start + 1;
        let (x, y) = token
            .split_once(':')
            .ok_or_else(|| (col, format!("expected x:y, found {token:?}")))?;
        let x: Rational = x.parse().map_err(|e| (col, format!("{e}")))?;
        let y: Rational = y
            .parse()
            .map_err(|e| (col + token.find(':').unwrap_or(0) + 1, format!("{e}")))?;
        raw.push((x, y));
        columns.push(col);
    }
    PLMap::from_nodes(raw).map_err(|e| {
        let col = match &e {
            PlError::NonIncreasingDomain(i) | PlError::NonIncreasingRange(i) => {
                columns.get(*i).copied().unwrap_or(1)
            }
            PlError::EndpointViolation => 1,
            _ => 1,
        };
        (col, e.to_string())
    })
}

fn parse_tree_pair(s: &str) -> Result<PLMap, String> {
    s.parse::<TreePair>()
        .map(|t| t.to_plmap())
        .map_err(|e| e.to_string())
}

/// One element (array of pairs) or a list of elements.
pub fn parse_json(text: &str) -> Result<Vec<PLMap>, (usize, usize, String)> {
    let depth = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .take_while(|c| *c == '[')
        .count();
    let parsed = if depth >= 3 {
        serde_json::from_str::<Vec<PLMap>>(text)
    } else {
        serde_json::from_str::<PLMap>(text).map(|f| vec![f])
    };
    parsed.map_err(|e| (e.line(), e.column(), e.to_string()))
}

/// One F-word per non-empty line.
pub fn parse_fw(text: &str) -> Result<Vec<PLMap>, (usize, Option<usize>, String)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let w = body.parse::<FWord>().map_err(|e| {
            let col = match &e {
                plsol::thompson::ThompsonError::Syntax { offset, .. } => Some(indent + offset + 1),
                _ => None,
            };
            (i + 1, col, e.to_string())
        })?;
        out.push(w.to_plmap());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_agree() {
        let x0 = fixtures::x0();
        assert_eq!(parse_argument(1, "x0").unwrap(), vec![x0.clone()]);
        assert_eq!(
            parse_argument(1, "0:0 1/4:1/2 1/2:3/4 1:1").unwrap(),
            vec![x0.clone()]
        );
        assert_eq!(
            parse_argument(1, "((..).)|(.(..))").unwrap(),
            vec![x0.clone()]
        );
        assert_eq!(
            parse_argument(1, "x0 x0^-1").unwrap(),
            vec![PLMap::identity()]
        );
    }

    #[test]
    fn node_errors_carry_columns() {
        let (col, _) = parse_nodes("0:0 1/2:x 1:1").unwrap_err();
        assert_eq!(col, 9);
        let (col, _) = parse_nodes("0:0 1/2:1/2 1/4:3/4 1:1").unwrap_err();
        assert_eq!(col, 13);
        assert!(parse_nodes("0:0 1/0:1 1:1").is_err());
    }

    #[test]
    fn json_shapes() {
        let one = r#"[["0","0"],["1/4","1/2"],["1/2","3/4"],["1","1"]]"#;
        assert_eq!(parse_json(one).unwrap(), vec![fixtures::x0()]);
        let many = format!("[{one}, {one}]");
        assert_eq!(parse_json(&many).unwrap().len(), 2);
        let (line, _, _) =
            parse_json("[[\"0\",\"0\"],\n[\"1/2\",\"x\"],[\"1\",\"1\"]]").unwrap_err();
        assert_eq!(line, 2);
    }

    #[test]
    fn fw_lines() {
        let v = parse_fw("# generators\nx0\n\n  x1 x0^-1\n").unwrap();
        assert_eq!(v.len(), 2);
        let (line, col, _) = parse_fw("x0\n  x0 y1\n").unwrap_err();
        assert_eq!(line, 2);
        assert!(col.is_some());
    }
}
