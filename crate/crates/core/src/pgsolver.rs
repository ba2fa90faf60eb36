//! PGSolver text format: parsing and canonical serialization.
//!
//! Grammar accepted (whitespace-tolerant):
//!
//! ```text
//! file    := { line }
//! line    := "--" comment | "parity" MAXID ";" | node ";" | blank
//! node    := ID COLOR OWNER [ SUCC ("," SUCC)* ] [ "name" in quotes ]
//! ```
//!
//! Node ids in files may be sparse; they are compacted to dense ids in
//! ascending order of the original id, which is retained for output.

use std::fmt;

use thiserror::Error;

use crate::game::{Game, GameError, NodeData, Player};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected {expected}")]
    Expected { expected: &'static str },
    #[error("owner must be 0 or 1, got {0}")]
    InvalidOwner(u64),
    #[error("color {0} too large (colors must fit in 32 bits)")]
    ColorTooLarge(u64),
    #[error("duplicate definition of node {0}")]
    DuplicateNode(u64),
    #[error("node {node} has no successors")]
    NoSuccessors { node: u64 },
    #[error("node {node} references undefined successor {successor}")]
    UnknownSuccessor { node: u64, successor: u64 },
    #[error("node id {id} exceeds header maximum {header}")]
    IdExceedsHeader { id: u64, header: u64 },
    #[error("number too large")]
    NumberTooLarge,
    #[error("unterminated string")]
    UnterminatedString,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.kind)
    }
}

struct Cursor<'s> {
    rest: &'s str,
    line: u32,
    col: u32,
}

impl<'s> Cursor<'s> {
    fn new(text: &'s str) -> Self {
        Cursor { rest: text, line: 1, col: 1 }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, col: self.col, kind }
    }

    fn bump(&mut self, len: usize) {
        let (skipped, rest) = self.rest.split_at(len);
        for ch in skipped.chars() {
            if ch == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.rest = rest;
    }

    fn skip_space(&mut self) {
        let len = self.rest.len() - self.rest.trim_start().len();
        self.bump(len);
    }

    /// Skips whitespace and whole-line `--` comments.
    fn skip_trivia(&mut self) {
        loop {
            self.skip_space();
            if self.rest.starts_with("--") {
                let len = self.rest.find('\n').map_or(self.rest.len(), |i| i + 1);
                self.bump(len);
            } else {
                return;
            }
        }
    }

    fn eof(&mut self) -> bool {
        self.skip_trivia();
        self.rest.is_empty()
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest.starts_with(token) {
            self.bump(token.len());
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        let digits = self.rest.len() - self.rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 {
            return Err(self.error(ParseErrorKind::Expected { expected: "a number" }));
        }
        let value: u64 = self.rest[..digits]
            .parse()
            .map_err(|_| self.error(ParseErrorKind::NumberTooLarge))?;
        self.bump(digits);
        Ok(value)
    }

    fn quoted(&mut self) -> Result<String, ParseError> {
        debug_assert!(self.rest.starts_with('"'));
        match self.rest[1..].find('"') {
            Some(end) => {
                let name = self.rest[1..1 + end].to_string();
                self.bump(end + 2);
                Ok(name)
            }
            None => Err(self.error(ParseErrorKind::UnterminatedString)),
        }
    }
}

struct RawNode {
    id: u64,
    color: u32,
    owner: Player,
    successors: Vec<u64>,
    name: Option<String>,
    line: u32,
    col: u32,
}

/// Parses PGSolver text into a [`Game`].
pub fn parse_pgsolver(text: &str) -> Result<Game, ParseError> {
    let mut cur = Cursor::new(text);
    let mut header: Option<u64> = None;
    let mut raw: Vec<RawNode> = Vec::new();

    while !cur.eof() {
        if cur.eat("parity") {
            cur.skip_space();
            let max_id = cur.number()?;
            cur.skip_space();
            if !cur.eat(";") {
                return Err(cur.error(ParseErrorKind::Expected { expected: "';'" }));
            }
            header = Some(max_id);
            continue;
        }

        let (line, col) = (cur.line, cur.col);
        let id = cur.number()?;
        cur.skip_space();
        let color = cur.number()?;
        if color > u32::MAX as u64 {
            return Err(ParseError { line, col, kind: ParseErrorKind::ColorTooLarge(color) });
        }
        cur.skip_space();
        let owner = match cur.number()? {
            0 => Player::Even,
            1 => Player::Odd,
            other => return Err(cur.error(ParseErrorKind::InvalidOwner(other))),
        };

        let mut successors = Vec::new();
        cur.skip_space();
        if cur.rest.starts_with(|c: char| c.is_ascii_digit()) {
            successors.push(cur.number()?);
            loop {
                cur.skip_space();
                if cur.eat(",") {
                    cur.skip_space();
                    successors.push(cur.number()?);
                } else {
                    break;
                }
            }
        }

        cur.skip_space();
        let name = if cur.rest.starts_with('"') { Some(cur.quoted()?) } else { None };

        cur.skip_space();
        if !cur.eat(";") {
            return Err(cur.error(ParseErrorKind::Expected { expected: "';'" }));
        }

        raw.push(RawNode { id, color: color as u32, owner, successors, name, line, col });
    }

    raw.sort_by_key(|n| n.id);
    for pair in raw.windows(2) {
        if pair[0].id == pair[1].id {
            return Err(ParseError {
                line: pair[1].line,
                col: pair[1].col,
                kind: ParseErrorKind::DuplicateNode(pair[1].id),
            });
        }
    }
    if let Some(max_id) = header {
        if let Some(bad) = raw.iter().find(|n| n.id > max_id) {
            return Err(ParseError {
                line: bad.line,
                col: bad.col,
                kind: ParseErrorKind::IdExceedsHeader { id: bad.id, header: max_id },
            });
        }
    }

    let external: Vec<u64> = raw.iter().map(|n| n.id).collect();
    let lookup = |id: u64| external.binary_search(&id).ok().map(|i| i as u32);

    let mut nodes = Vec::with_capacity(raw.len());
    for node in &raw {
        if node.successors.is_empty() {
            return Err(ParseError {
                line: node.line,
                col: node.col,
                kind: ParseErrorKind::NoSuccessors { node: node.id },
            });
        }
        let mut succs = Vec::with_capacity(node.successors.len());
        for &s in &node.successors {
            match lookup(s) {
                Some(internal) => succs.push(internal),
                None => {
                    if header.is_some_and(|max_id| s > max_id) {
                        return Err(ParseError {
                            line: node.line,
                            col: node.col,
                            kind: ParseErrorKind::IdExceedsHeader { id: s, header: header.unwrap() },
                        });
                    }
                    return Err(ParseError {
                        line: node.line,
                        col: node.col,
                        kind: ParseErrorKind::UnknownSuccessor { node: node.id, successor: s },
                    });
                }
            }
        }
        nodes.push(NodeData { owner: node.owner, color: node.color, successors: succs, name: node.name.clone() });
    }

    let mut game = Game::new(nodes).map_err(|e| match e {
        // unreachable after the checks above; mapped for completeness
        GameError::NoSuccessors { node } => ParseError {
            line: raw[node as usize].line,
            col: raw[node as usize].col,
            kind: ParseErrorKind::NoSuccessors { node: raw[node as usize].id },
        },
        other => panic!("game construction failed after validation: {other}"),
    })?;
    if external.iter().enumerate().any(|(i, &e)| e != i as u64) {
        game.set_external_ids(external);
    }
    Ok(game)
}

/// Serializes a game in canonical form: a header, then one line per node
/// in ascending id order with ascending successor lists.
///
/// `parse(serialize(g))` reproduces `g` exactly; serializing again yields
/// the identical text.
pub fn serialize_pgsolver(game: &Game) -> String {
    let mut out = String::new();
    let max_id = game.nodes().map(|v| game.external_id(v)).max().unwrap_or(0);
    out.push_str(&format!("parity {max_id};\n"));
    for v in game.nodes() {
        out.push_str(&format!(
            "{} {} {} ",
            game.external_id(v),
            game.color(v),
            game.owner(v)
        ));
        let succs: Vec<String> =
            game.successors(v).iter().map(|&w| game.external_id(w).to_string()).collect();
        out.push_str(&succs.join(","));
        if let Some(name) = game.name(v) {
            out.push_str(&format!(" \"{name}\""));
        }
        out.push_str(";\n");
    }
    out
}
