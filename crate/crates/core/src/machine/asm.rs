//! Program text: one instruction per line, `MNEMONIC op op ...` with decimal
//! operands, `#` starting a comment, and 0-based jump targets.

use std::fmt::Write as _;

use thiserror::Error;

use super::{arity, Instruction, Program, MNEMONICS};
use crate::Nat;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn assemble(text: &str) -> Result<Program, ParseError> {
    let mut instructions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = tokens_with_columns(body);
        let Some((col, mnemonic)) = tokens.next() else {
            continue;
        };
        let upper = mnemonic.to_ascii_uppercase();
        let Some(tag) = MNEMONICS.iter().position(|m| *m == upper) else {
            return Err(ParseError {
                line,
                column: col,
                message: format!("unknown instruction `{mnemonic}`"),
            });
        };
        let tag = tag as u32;
        let mut ops = Vec::new();
        for (col, tok) in tokens {
            let v: Nat = tok.parse().map_err(|_| ParseError {
                line,
                column: col,
                message: format!("expected a decimal operand, found `{tok}`"),
            })?;
            ops.push(v);
        }
        if ops.len() != arity(tag) {
            return Err(ParseError {
                line,
                column: col,
                message: format!(
                    "{upper} takes {} operand(s), found {}",
                    arity(tag),
                    ops.len()
                ),
            });
        }
        instructions.push(Instruction::from_parts(tag, &ops));
    }
    Ok(Program::new(instructions))
}

fn tokens_with_columns(s: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st + 1, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &s[st..]));
    }
    out.into_iter()
}

pub fn disassemble(p: &Program) -> String {
    let mut out = String::new();
    for ins in &p.instructions {
        out.push_str(ins.mnemonic());
        for op in ins.operands() {
            let _ = write!(out, " {op}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::ins::*;

    #[test]
    fn parses_examples() {
        assert_eq!(assemble("INC 0\nINC 0").unwrap(), Program::new(vec![inc(0), inc(0)]));
        assert_eq!(assemble("").unwrap().code(), Nat::from(0u32));
        assert_eq!(assemble("JZ 1 99").unwrap(), Program::new(vec![jz(1, 99)]));
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = assemble("# header\n\n  inc 3   # bump\nDEC 3\n").unwrap();
        assert_eq!(p, Program::new(vec![inc(3), dec(3)]));
    }

    #[test]
    fn reports_position() {
        let err = assemble("INC 0\nJZ 1 x").unwrap_err();
        assert_eq!((err.line, err.column), (2, 6));
        let err = assemble("  FOO 1").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
        let err = assemble("JZ 1").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn roundtrip() {
        let p = Program::new(vec![inc(0), jz(2, 7), set(1, 123456789u64), call(0, 1, 0)]);
        assert_eq!(assemble(&disassemble(&p)).unwrap(), p);
    }
}
