//! Line-oriented text format:
//!
//! ```text
//! stepfn/1
//! tail <Rat>
//! bp <Rat> value <Rat> right <Rat>
//! ...
//! ```

use std::fmt::Write;

use super::{Breakpoint, StepFunction};
use crate::error::{Error, Result};
use crate::exactnum::Rat;

pub const FORMAT_TAG: &str = "stepfn/1";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn rat_at(line: usize, token: &str) -> Result<Rat> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("malformed rational {token:?}")))
}

pub fn parse_stepfn(text: &str) -> Result<StepFunction> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).enumerate();

    match lines.next() {
        Some((_, FORMAT_TAG)) => {}
        Some((_, other)) => return Err(parse_err(1, format!("expected header {FORMAT_TAG:?}, found {other:?}"))),
        None => return Err(parse_err(1, "empty input")),
    }
    let tail = match lines.next() {
        Some((i, line)) => match line.split(' ').collect::<Vec<_>>().as_slice() {
            ["tail", v] => rat_at(i + 1, v)?,
            _ => return Err(parse_err(i + 1, format!("expected `tail <Rat>`, found {line:?}"))),
        },
        None => return Err(parse_err(2, "missing `tail` line")),
    };

    let mut bps: Vec<Breakpoint> = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        match line.split(' ').collect::<Vec<_>>().as_slice() {
            ["bp", at, "value", v, "right", c] => {
                let at = rat_at(n, at)?;
                if let Some(prev) = bps.last() {
                    if prev.at >= at {
                        return Err(parse_err(n, format!("breakpoint {at} does not exceed previous {}", prev.at)));
                    }
                }
                bps.push(Breakpoint::new(at, rat_at(n, v)?, rat_at(n, c)?));
            }
            [directive, ..] if !["bp", "tail"].contains(directive) => {
                return Err(parse_err(n, format!("unknown directive {directive:?}")));
            }
            _ => return Err(parse_err(n, format!("expected `bp <Rat> value <Rat> right <Rat>`, found {line:?}"))),
        }
    }
    StepFunction::new(tail, bps)
}

impl StepFunction {
    pub fn to_text(&self) -> String {
        let mut out = format!("{FORMAT_TAG}\ntail {}\n", self.tail_left);
        for bp in &self.breakpoints {
            let _ = writeln!(out, "bp {} value {} right {}", bp.at, bp.value, bp.right);
        }
        out
    }
}

impl std::str::FromStr for StepFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_stepfn(s)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{two_bump, unit_box};
    use super::*;

    #[test]
    fn unit_box_text() {
        let text = unit_box().to_text();
        assert_eq!(text, "stepfn/1\ntail 0\nbp 0 value 1 right 1\nbp 1 value 1 right 0\n");
        assert_eq!(parse_stepfn(&text).unwrap(), unit_box());
        assert_eq!(parse_stepfn(&two_bump().to_text()).unwrap(), two_bump());
    }

    #[test]
    fn constant_has_no_breakpoint_lines() {
        let f = parse_stepfn("stepfn/1\ntail -7/3").unwrap();
        assert_eq!(f, StepFunction::constant("-7/3".parse().unwrap()));
    }

    fn line_of(text: &str) -> usize {
        match parse_stepfn(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(""), 1);
        assert_eq!(line_of("stepfn/2\ntail 0\n"), 1);
        assert_eq!(line_of("stepfn/1\n"), 2);
        assert_eq!(line_of("stepfn/1\ntail x\n"), 2);
        assert_eq!(line_of("stepfn/1\ntail 0\nbp 1 value 1 right 1/0\n"), 3);
        assert_eq!(line_of("stepfn/1\ntail 0\nbp 1 value 1 right 0\nbp 1 value 0 right 0\n"), 4);
        assert_eq!(line_of("stepfn/1\ntail 0\nbp 1 value 1 right 0\njump 2\n"), 4);
        assert_eq!(line_of("stepfn/1\ntail 0\nbp 1 value 1\n"), 3);
        assert_eq!(line_of("stepfn/1\ntail 0\n\n"), 3);
        assert_eq!(line_of("stepfn/1\ntail 0\ntail 1\n"), 3);
    }
}
