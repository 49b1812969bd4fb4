//! Free-group kernel: letters, free reduction, word arithmetic and ball
//! enumeration in the Cayley tree.
//!
//! Letters are written `a, b, c, …` for the generators and `A, B, C, …` for
//! their inverses. Ranks above 26 use `x1, x2, …` and `X1, X2, …`; that form
//! is accepted at every rank.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rank `n ≥ 2` of the free group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Rank(usize);

impl Rank {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("rank must be at least 2, got {n}")));
        }
        if n > u32::MAX as usize / 2 {
            return Err(Error::InvalidInput(format!("rank {n} too large")));
        }
        Ok(Rank(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Number of letters `2n` (the degree of every vertex in `T_n`).
    pub fn degree(self) -> usize {
        2 * self.0
    }

    /// `2n - 1`, the growth of the tree.
    pub fn branching(self) -> usize {
        2 * self.0 - 1
    }

    /// `log(2n - 1)`, the Poincaré exponent of the free group itself.
    pub fn log_branching(self) -> f64 {
        (self.branching() as f64).ln()
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.degree()).map(Letter::from_code)
    }
}

impl TryFrom<usize> for Rank {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Rank::new(n)
    }
}

impl From<Rank> for usize {
    fn from(r: Rank) -> usize {
        r.0
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A generator or its inverse.
///
/// Letters are totally ordered by their code `2(gen-1) + [inverse]`, i.e.
/// `a < A < b < B < …`. This is the letter order used by transition tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    /// `gen` is 1-based; `sign` is `+1` or `-1`.
    pub fn new(gen: usize, sign: i8) -> Result<Self> {
        if gen == 0 || gen > u32::MAX as usize / 2 {
            return Err(Error::InvalidInput(format!("generator index {gen} out of range")));
        }
        let inv = match sign {
            1 => 0,
            -1 => 1,
            _ => return Err(Error::InvalidInput(format!("sign must be ±1, got {sign}"))),
        };
        Ok(Letter(2 * (gen as u32 - 1) + inv))
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn gen(self) -> usize {
        (self.0 / 2) as usize + 1
    }

    pub fn sign(self) -> i8 {
        if self.0 & 1 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn in_rank(self, rank: Rank) -> bool {
        self.code() < rank.degree()
    }

    fn fmt_with(self, f: &mut fmt::Formatter<'_>, long: bool) -> fmt::Result {
        let g = self.gen();
        if long {
            let c = if self.is_positive() { 'x' } else { 'X' };
            write!(f, "{c}{g}")
        } else {
            let base = if self.is_positive() { b'a' } else { b'A' };
            write!(f, "{}", (base + (g - 1) as u8) as char)
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, self.gen() > 26)
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    rank: Rank,
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity(rank: Rank) -> Self {
        ReducedWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length, which equals the distance `d(id, g)` in the tree.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        ReducedWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&first), Some(&last)) => self.letters.len() == 1 || first != last.inverse(),
            _ => true,
        }
    }

    /// `self^k` for `k ≥ 0`; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = ReducedWord::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = multiply(&out, &base).expect("same rank");
        }
        out
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let long = self.rank.get() > 26;
        for l in &self.letters {
            l.fmt_with(f, long)?;
        }
        Ok(())
    }
}

/// True when no two adjacent letters cancel.
pub fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0] != w[1].inverse())
}

/// Freely reduces a raw letter sequence.
pub fn reduce(rank: Rank, raw: &[Letter]) -> Result<ReducedWord> {
    let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        if !l.in_rank(rank) {
            return Err(Error::InvalidInput(format!(
                "letter {l} outside rank {rank}"
            )));
        }
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Ok(ReducedWord { rank, letters: out })
}

pub fn multiply(u: &ReducedWord, v: &ReducedWord) -> Result<ReducedWord> {
    if u.rank != v.rank {
        return Err(Error::RankMismatch {
            left: u.rank.get(),
            right: v.rank.get(),
        });
    }
    let mut letters = u.letters.clone();
    for &l in &v.letters {
        if letters.last() == Some(&l.inverse()) {
            letters.pop();
        } else {
            letters.push(l);
        }
    }
    Ok(ReducedWord {
        rank: u.rank,
        letters,
    })
}

/// Strips inverse pairs from both ends: the result is the shortest word in the
/// conjugacy class.
pub fn cyclic_reduce(w: &ReducedWord) -> ReducedWord {
    let l = &w.letters;
    let (mut i, mut j) = (0usize, l.len());
    while j - i >= 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    ReducedWord {
        rank: w.rank,
        letters: l[i..j].to_vec(),
    }
}

/// Number of reduced words of length at most `radius`:
/// `1 + 2n((2n-1)^R - 1)/(2n-2)`.
pub fn ball_count(rank: Rank, radius: usize) -> BigUint {
    let n = rank.get() as u64;
    let q = BigUint::from(2 * n - 1);
    let pow: BigUint = Pow::pow(&q, radius);
    BigUint::one() + BigUint::from(2 * n) * (pow - BigUint::one()) / BigUint::from(2 * n - 2)
}

/// Number of reduced words of length exactly `r`.
pub fn sphere_count(rank: Rank, r: usize) -> BigUint {
    if r == 0 {
        return BigUint::one();
    }
    let n = rank.get() as u64;
    BigUint::from(2 * n) * Pow::pow(&BigUint::from(2 * n - 1), r - 1)
}

/// Iterator over all reduced words of length exactly `len`, in lexicographic
/// letter order.
pub fn reduced_words(rank: Rank, len: usize) -> ReducedWords {
    ReducedWords {
        rank,
        stack: if len == 0 { Vec::new() } else { vec![0] },
        len,
        done: false,
    }
}

pub struct ReducedWords {
    rank: Rank,
    stack: Vec<usize>,
    len: usize,
    done: bool,
}

impl ReducedWords {
    fn admissible(&self, pos: usize, code: usize) -> bool {
        pos == 0 || code != (self.stack[pos - 1] ^ 1)
    }

    // Advance `stack` to the next admissible full word; the current stack is a
    // prefix candidate whose last entry may be inadmissible.
    fn settle(&mut self) -> bool {
        let d = self.rank.degree();
        loop {
            let pos = self.stack.len() - 1;
            let code = self.stack[pos];
            if code >= d {
                self.stack.pop();
                if self.stack.is_empty() {
                    return false;
                }
                *self.stack.last_mut().unwrap() += 1;
                continue;
            }
            if !self.admissible(pos, code) {
                self.stack[pos] += 1;
                continue;
            }
            if self.stack.len() == self.len {
                return true;
            }
            self.stack.push(0);
        }
    }
}

impl Iterator for ReducedWords {
    type Item = ReducedWord;

    fn next(&mut self) -> Option<ReducedWord> {
        if self.done {
            return None;
        }
        if self.len == 0 {
            self.done = true;
            return Some(ReducedWord::identity(self.rank));
        }
        if !self.settle() {
            self.done = true;
            return None;
        }
        let word = ReducedWord {
            rank: self.rank,
            letters: self.stack.iter().map(|&c| Letter::from_code(c)).collect(),
        };
        *self.stack.last_mut().unwrap() += 1;
        Some(word)
    }
}

// ---------------------------------------------------------------------------
// Text format

struct Parser<'a> {
    rank: Rank,
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(rank: Rank, src: &'a str) -> Self {
        Parser {
            rank,
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::InvalidInput(format!("{} in word {:?}", msg.into(), self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn letter(&mut self, c: char) -> Result<Letter> {
        let long = (c == 'x' || c == 'X')
            && self.chars.get(self.pos).is_some_and(|d| d.is_ascii_digit());
        let (gen, sign) = if long {
            let g = self.number().ok_or_else(|| self.err("bad generator index"))?;
            (g as usize, if c == 'x' { 1 } else { -1 })
        } else if c.is_ascii_lowercase() {
            ((c as u8 - b'a') as usize + 1, 1)
        } else {
            ((c as u8 - b'A') as usize + 1, -1)
        };
        if gen == 0 || gen > self.rank.get() {
            return Err(self.err(format!("generator {gen} outside rank {}", self.rank)));
        }
        Letter::new(gen, sign)
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_ws();
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let k = self.number().ok_or_else(|| self.err("expected exponent after '^'"))? as i64;
        Ok(Some(if neg { -k } else { k }))
    }

    // sequence := (atom exponent?)*
    fn sequence(&mut self, nested: bool) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else {
                if nested {
                    return Err(self.err("unclosed '('"));
                }
                return Ok(out);
            };
            self.pos += 1;
            let atom: Vec<Letter> = match c {
                '(' => self.sequence(true)?,
                ')' if nested => return Ok(out),
                '1' | 'ε' => Vec::new(),
                c if c.is_ascii_alphabetic() => vec![self.letter(c)?],
                c => return Err(self.err(format!("unexpected character {c:?}"))),
            };
            match self.exponent()? {
                None => out.extend(atom),
                Some(k) => {
                    let unit: Vec<Letter> = if k < 0 {
                        atom.iter().rev().map(|l| l.inverse()).collect()
                    } else {
                        atom
                    };
                    for _ in 0..k.unsigned_abs() {
                        out.extend_from_slice(&unit);
                    }
                }
            }
        }
    }
}

/// Parses one word; whitespace inside the word is ignored, so `"a b B"` and
/// `"abB"` are the same word. The result is freely reduced.
pub fn parse_word(rank: Rank, src: &str) -> Result<ReducedWord> {
    let raw = Parser::new(rank, src).sequence(false)?;
    reduce(rank, &raw)
}

/// Parses a relator file: whitespace-separated words, `#` comments, and
/// `(…)^k` powers. Each relator is freely reduced; identity relators are
/// dropped.
pub fn parse_relators(rank: Rank, text: &str) -> Result<Vec<ReducedWord>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in split_words(line) {
            let w = parse_word(rank, tok)?;
            if !w.is_empty() {
                out.push(w);
            }
        }
    }
    Ok(out)
}

// Splits on whitespace that is outside parentheses and not adjacent to '^'.
fn split_words(line: &str) -> Vec<&str> {
    let mut words = Vec::new();
    let mut depth = 0i32;
    let mut start: Option<usize> = None;
    let bytes: Vec<(usize, char)> = line.char_indices().collect();
    for (idx, &(i, c)) in bytes.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth <= 0 {
            let prev = bytes[..idx].iter().rev().find(|(_, ch)| !ch.is_whitespace());
            let next = bytes[idx + 1..].iter().find(|(_, ch)| !ch.is_whitespace());
            let glued = prev.is_some_and(|&(_, ch)| ch == '^')
                || next.is_some_and(|&(_, ch)| ch == '^');
            if !glued {
                if let Some(s) = start.take() {
                    words.push(&line[s..i]);
                }
            }
            continue;
        }
        if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        words.push(line[s..].trim_end());
    }
    words
}

impl FromStr for Rank {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let n: usize = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad rank {s:?}")))?;
        Rank::new(n)
    }
}
