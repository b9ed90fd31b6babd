//! Symbolic and barycentric arithmetic on the Sierpinski n-gasket.
//!
//! Points are eventually-constant addresses `w t t t ...`, i.e. the vertices of
//! the gasket. A vertex that is not a corner of the whole gasket has exactly two
//! addresses `u a b̄ = u b ā`; the canonical representative is the one whose last
//! word letter is smaller than its tail letter.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

pub type Letter = u8;

/// Largest supported gasket dimension.
pub const MAX_DIMENSION: usize = 64;

pub(crate) fn check_dimension(n: usize) -> Result<()> {
    if (2..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

fn check_letters(n: usize, letters: &[Letter]) -> Result<()> {
    match letters.iter().find(|&&l| l as usize > n) {
        Some(&letter) => Err(Error::LetterOutOfRange { letter, n }),
        None => Ok(()),
    }
}

/// A finite word over the alphabet `{0, ..., n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    n: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        check_dimension(n)?;
        check_letters(n, &letters)?;
        Ok(Word { n, letters })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Word::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn child(&self, letter: Letter) -> Result<Word> {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Word::new(self.n, letters)
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            n: self.n,
            letters,
        })
    }
}

/// A cell `⟨w⟩ = F_w(S_n)` of side length `2^-|w|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    word: Word,
}

impl Cell {
    pub fn new(word: Word) -> Self {
        Cell { word }
    }

    pub fn from_letters(n: usize, letters: Vec<Letter>) -> Result<Self> {
        Ok(Cell::new(Word::new(n, letters)?))
    }

    pub fn root(n: usize) -> Result<Self> {
        Ok(Cell::new(Word::empty(n)?))
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn n(&self) -> usize {
        self.word.n
    }

    pub fn level(&self) -> usize {
        self.word.len()
    }

    /// Side length `2^-level`.
    pub fn side(&self) -> Dyadic {
        Dyadic::pow2_neg(self.level() as u32)
    }

    /// Boundary point `⟨w ī⟩`.
    pub fn corner(&self, i: Letter) -> Result<PointAddress> {
        PointAddress::new(self.n(), self.word.letters.clone(), i).map(|p| p.canonicalize())
    }

    pub fn corners(&self) -> Vec<PointAddress> {
        (0..=self.n() as Letter)
            .map(|i| self.corner(i).expect("corner letter in range"))
            .collect()
    }

    pub fn child(&self, letter: Letter) -> Result<Cell> {
        Ok(Cell::new(self.word.child(letter)?))
    }

    pub fn contains_cell(&self, other: &Cell) -> bool {
        self.word.is_prefix_of(&other.word)
    }

    /// Whether `p` lies in this cell.
    pub fn contains(&self, p: &PointAddress) -> bool {
        p.n == self.n() && p.relative_to(self).is_some()
    }

    /// Whether two cells share at least one point.
    pub fn intersects(&self, other: &Cell) -> bool {
        if self.contains_cell(other) || other.contains_cell(self) {
            return true;
        }
        let mine = self.corners();
        other.corners().iter().any(|c| mine.contains(c))
    }

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("cell must look like [w1 w2 ...]: {s:?}")))?;
        Cell::from_letters(n, parse_letters(inner)?)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let s = s.trim();
    let tokens: Vec<&str> = if s.contains(char::is_whitespace) || s.contains(',') {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect()
    } else {
        // "202" is read letter by letter
        s.split("").filter(|t| !t.is_empty()).collect()
    };
    tokens
        .into_iter()
        .map(|t| {
            t.parse::<Letter>()
                .map_err(|_| Error::Parse(format!("bad letter {t:?}")))
        })
        .collect()
}

/// An eventually-constant address `word tail tail tail ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointAddress {
    n: usize,
    word: Vec<Letter>,
    tail: Letter,
}

impl PointAddress {
    /// Builds an address without canonicalizing it.
    pub fn new(n: usize, word: Vec<Letter>, tail: Letter) -> Result<Self> {
        check_dimension(n)?;
        check_letters(n, &word)?;
        check_letters(n, &[tail])?;
        Ok(PointAddress { n, word, tail })
    }

    /// The corner `q_i = ⟨ī⟩`.
    pub fn corner(n: usize, i: Letter) -> Result<Self> {
        PointAddress::new(n, Vec::new(), i)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn tail(&self) -> Letter {
        self.tail
    }

    /// Letter at 0-based position `j` of the infinite address.
    pub fn letter(&self, j: usize) -> Letter {
        self.word.get(j).copied().unwrap_or(self.tail)
    }

    /// Canonical representative of the point: trailing tail letters stripped and,
    /// for vertices with two addresses, the form whose last word letter is smaller
    /// than the tail.
    pub fn canonicalize(&self) -> PointAddress {
        let mut word = self.word.clone();
        while word.last() == Some(&self.tail) {
            word.pop();
        }
        let mut tail = self.tail;
        if let Some(last) = word.last_mut() {
            if *last > tail {
                std::mem::swap(last, &mut tail);
            }
        }
        PointAddress {
            n: self.n,
            word,
            tail,
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// The other address `⟨u b ā⟩` of a vertex `⟨u a b̄⟩`; `None` for the corners
    /// `⟨ī⟩` of the gasket, which have a single address.
    pub fn dual_address(&self) -> Option<PointAddress> {
        let c = self.canonicalize();
        let mut word = c.word;
        let last = word.pop()?;
        word.push(c.tail);
        Some(PointAddress {
            n: c.n,
            word,
            tail: last,
        })
    }

    /// All addresses of the point, canonical form first.
    pub fn addresses(&self) -> Vec<PointAddress> {
        let c = self.canonicalize();
        match c.dual_address() {
            Some(d) => vec![c, d],
            None => vec![c],
        }
    }

    pub fn same_point(&self, other: &PointAddress) -> bool {
        self.canonicalize() == other.canonicalize()
    }

    /// Address of `F_w^{-1}(p)` when `p ∈ ⟨w⟩`.
    pub fn relative_to(&self, cell: &Cell) -> Option<PointAddress> {
        let prefix = cell.word().letters();
        self.addresses().into_iter().find_map(|a| {
            let matches = prefix.iter().enumerate().all(|(j, &l)| a.letter(j) == l);
            matches.then(|| {
                let word = a.word.get(prefix.len()..).unwrap_or(&[]).to_vec();
                PointAddress {
                    n: a.n,
                    word,
                    tail: a.tail,
                }
                .canonicalize()
            })
        })
    }

    /// Barycentric coordinates: `c_i = Σ_{j : w_j = i} 2^-j`, with `2^-|w|` added to
    /// the tail coordinate.
    pub fn to_bary(&self) -> BaryCoord {
        let len = self.word.len();
        let mut nums = vec![BigInt::zero(); self.n + 1];
        for (j, &l) in self.word.iter().enumerate() {
            nums[l as usize] += BigInt::one() << (len - j - 1);
        }
        nums[self.tail as usize] += BigInt::one();
        BaryCoord {
            coords: nums
                .into_iter()
                .map(|k| Dyadic::new(k, len as u32))
                .collect(),
        }
    }

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("address must look like [w1 w2 ... | t]: {s:?}"));
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(err)?;
        let (word, tail) = inner.split_once('|').ok_or_else(err)?;
        let tail: Letter = tail.trim().parse().map_err(|_| err())?;
        PointAddress::new(n, parse_letters(word)?, tail)
    }
}

/// Text form `[w1 w2 ... wk | t]`, e.g. `[2 0 2 | 1]`; corners print as `[| 0]`.
impl fmt::Display for PointAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for l in &self.word {
            write!(f, "{l} ")?;
        }
        write!(f, "| {}]", self.tail)
    }
}

impl Serialize for PointAddress {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Barycentric coordinates `(c_0, ..., c_n)` with exact dyadic entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BaryCoord {
    coords: Vec<Dyadic>,
}

impl BaryCoord {
    /// Validates nonnegativity and that the coordinates sum to exactly 1.
    /// Gasket membership is checked by [`BaryCoord::to_addresses`].
    pub fn new(coords: Vec<Dyadic>) -> Result<Self> {
        check_dimension(coords.len().saturating_sub(1))?;
        if coords.iter().any(Dyadic::is_negative) {
            return Err(Error::InvalidInput("negative barycentric coordinate".into()));
        }
        if coords.iter().cloned().sum::<Dyadic>() != Dyadic::one() {
            return Err(Error::InvalidInput(
                "barycentric coordinates must sum to 1".into(),
            ));
        }
        Ok(BaryCoord { coords })
    }

    pub fn corner(n: usize, i: Letter) -> Result<Self> {
        Ok(PointAddress::corner(n, i)?.to_bary())
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Dyadic] {
        &self.coords
    }

    pub fn get(&self, i: Letter) -> &Dyadic {
        &self.coords[i as usize]
    }

    /// Addresses of the point via greedy digit extraction, canonical first. Vertices
    /// off the outer corners yield both of their addresses.
    pub fn to_addresses(&self) -> Result<Vec<PointAddress>> {
        let n = self.n();
        let half = Dyadic::pow2_neg(1);
        let one = Dyadic::one();
        let mut r = self.coords.clone();
        let mut word = Vec::new();
        loop {
            if let Some(i) = r.iter().position(|c| *c == one) {
                let p = PointAddress::new(n, word, i as Letter)?;
                return Ok(p.addresses());
            }
            let big: Vec<usize> = (0..=n).filter(|&i| r[i] >= half).collect();
            match big.as_slice() {
                [] => return Err(Error::NotOnGasket),
                [i, j] => {
                    // two coordinates of exactly 1/2: a bridge point of the current cell
                    let mut w = word.clone();
                    w.push(*i as Letter);
                    let p = PointAddress::new(n, w, *j as Letter)?;
                    return Ok(p.addresses());
                }
                [i] => {
                    let i = *i;
                    word.push(i as Letter);
                    for (k, c) in r.iter_mut().enumerate() {
                        *c = if k == i { c.shl(1) - &one } else { c.shl(1) };
                    }
                }
                _ => unreachable!("coordinates sum to 1"),
            }
        }
    }

    pub fn to_address(&self) -> Result<PointAddress> {
        Ok(self.to_addresses()?.remove(0))
    }

    /// `F_i(x)`: `[F_i x]_i = (1 + x_i)/2`, `[F_i x]_k = x_k / 2`.
    pub fn apply_letter(&self, i: Letter) -> BaryCoord {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == i as usize {
                    (c + &Dyadic::one()).half()
                } else {
                    c.half()
                }
            })
            .collect();
        BaryCoord { coords }
    }

    /// `F_i^{-1}(x)` for `x ∈ ⟨i⟩`.
    pub fn unapply_letter(&self, i: Letter) -> Result<BaryCoord> {
        let ci = &self.coords[i as usize];
        if *ci < Dyadic::pow2_neg(1) {
            return Err(Error::NotInCell);
        }
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == i as usize {
                    c.shl(1) - Dyadic::one()
                } else {
                    c.shl(1)
                }
            })
            .collect();
        Ok(BaryCoord { coords })
    }
}

/// Canonical representative of `p`.
pub fn canonicalize(p: &PointAddress) -> PointAddress {
    p.canonicalize()
}

pub fn dual_address(p: &PointAddress) -> Option<PointAddress> {
    p.dual_address()
}

pub fn address_to_bary(p: &PointAddress) -> BaryCoord {
    p.to_bary()
}

pub fn bary_to_address(c: &BaryCoord) -> Result<Vec<PointAddress>> {
    c.to_addresses()
}

/// The smallest cell containing both points.
pub fn common_cell(x: &PointAddress, y: &PointAddress) -> Result<Cell> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch(x.n, y.n));
    }
    if x.same_point(y) {
        return Err(Error::SamePoint);
    }
    let mut best: Vec<Letter> = Vec::new();
    for ax in x.addresses() {
        for ay in y.addresses() {
            let horizon = ax.word.len().max(ay.word.len()) + 1;
            let mut prefix = Vec::new();
            for j in 0..horizon {
                if ax.letter(j) != ay.letter(j) {
                    break;
                }
                prefix.push(ax.letter(j));
            }
            if prefix.len() > best.len() {
                best = prefix;
            }
        }
    }
    Cell::from_letters(x.n, best)
}

/// Image of a point under `F_w`.
pub fn apply_map(w: &Word, p: &PointAddress) -> Result<PointAddress> {
    if w.n() != p.n {
        return Err(Error::DimensionMismatch(w.n(), p.n));
    }
    let mut word = w.letters().to_vec();
    word.extend_from_slice(&p.word);
    Ok(PointAddress {
        n: p.n,
        word,
        tail: p.tail,
    }
    .canonicalize())
}

/// Preimage `F_w^{-1}(p)`; fails with `NotInCell` when `p ∉ ⟨w⟩`.
pub fn inverse_map(w: &Word, p: &PointAddress) -> Result<PointAddress> {
    if w.n() != p.n {
        return Err(Error::DimensionMismatch(w.n(), p.n));
    }
    p.relative_to(&Cell::new(w.clone())).ok_or(Error::NotInCell)
}

pub fn apply_map_bary(w: &Word, x: &BaryCoord) -> BaryCoord {
    w.letters()
        .iter()
        .rev()
        .fold(x.clone(), |acc, &l| acc.apply_letter(l))
}

pub fn inverse_map_bary(w: &Word, x: &BaryCoord) -> Result<BaryCoord> {
    w.letters()
        .iter()
        .try_fold(x.clone(), |acc, &l| acc.unapply_letter(l))
}

/// `φ(p) = [F_w^{-1}(p)]_i`, the scaled barycentric coordinate toward the
/// boundary point `⟨w ī⟩` of the cell.
pub fn phi_projection(cell: &Cell, i: Letter, p: &PointAddress) -> Result<Dyadic> {
    if i as usize > cell.n() {
        return Err(Error::LetterOutOfRange { letter: i, n: cell.n() });
    }
    let rel = p.relative_to(cell).ok_or(Error::NotInCell)?;
    Ok(rel.to_bary().get(i).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(n: usize, w: &[u8], t: u8) -> PointAddress {
        PointAddress::new(n, w.to_vec(), t).unwrap()
    }

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn bary(v: &[&str]) -> BaryCoord {
        BaryCoord::new(v.iter().map(|s| d(s)).collect()).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(addr(2, &[2, 1], 1).canonicalize(), addr(2, &[1], 2));
        assert_eq!(addr(2, &[2], 1).canonicalize(), addr(2, &[1], 2));
        assert_eq!(addr(2, &[], 0).canonicalize(), addr(2, &[], 0));
        let p = addr(3, &[3, 3, 1, 1], 1);
        assert_eq!(p.canonicalize().canonicalize(), p.canonicalize());
    }

    #[test]
    fn letters_are_range_checked() {
        assert_eq!(
            PointAddress::new(2, vec![3], 0),
            Err(Error::LetterOutOfRange { letter: 3, n: 2 })
        );
        assert!(PointAddress::new(2, vec![0], 5).is_err());
        assert!(PointAddress::new(1, vec![], 0).is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(addr(2, &[1], 2).dual_address(), Some(addr(2, &[2], 1)));
        assert_eq!(addr(2, &[], 0).dual_address(), None);
        assert_eq!(
            addr(2, &[1, 0, 1], 2).dual_address(),
            Some(addr(2, &[1, 0, 2], 1))
        );
        // ⟨1012 0̄⟩ = ⟨1010 2̄⟩ from the labelled picture of S_2
        assert!(addr(2, &[1, 0, 1, 2], 0).same_point(&addr(2, &[1, 0, 1, 0], 2)));
    }

    #[test]
    fn address_to_bary_examples() {
        assert_eq!(addr(2, &[], 0).to_bary(), bary(&["1", "0", "0"]));
        assert_eq!(addr(2, &[1, 0], 1).to_bary(), bary(&["1/4", "3/4", "0"]));
        assert_eq!(addr(2, &[1, 1], 0).to_bary(), bary(&["1/4", "3/4", "0"]));
        assert_eq!(
            addr(3, &[2, 0, 2], 1).to_bary(),
            bary(&["1/4", "1/8", "5/8", "0"])
        );
    }

    #[test]
    fn bary_to_address_examples() {
        assert_eq!(
            bary(&["1", "0", "0"]).to_addresses().unwrap(),
            vec![addr(2, &[], 0)]
        );
        let both = bary(&["1/2", "1/2", "0"]).to_addresses().unwrap();
        assert_eq!(both, vec![addr(2, &[0], 1), addr(2, &[1], 0)]);
        // (1/2, 1/4, 1/4) is the edge midpoint ⟨0 1 2̄⟩ = ⟨0 2 1̄⟩
        assert_eq!(
            bary(&["1/2", "1/4", "1/4"]).to_address().unwrap(),
            addr(2, &[0, 1], 2)
        );
        // centre of the removed middle triangle
        assert_eq!(
            bary(&["3/8", "3/8", "1/4"]).to_addresses(),
            Err(Error::NotOnGasket)
        );
        assert_eq!(
            bary(&["1/4", "1/4", "1/2"]).to_addresses().unwrap(),
            vec![addr(2, &[2, 0], 1), addr(2, &[2, 1], 0)]
        );
    }

    #[test]
    fn bary_rejects_bad_sums() {
        assert!(BaryCoord::new(vec![d("1/2"), d("1/4"), d("0")]).is_err());
        assert!(BaryCoord::new(vec![d("3/2"), d("-1/2"), d("0")]).is_err());
    }

    #[test]
    fn common_cell_examples() {
        let cell = |x: PointAddress, y: PointAddress| common_cell(&x, &y).unwrap();
        assert_eq!(
            cell(addr(2, &[1], 0), addr(2, &[2], 0)),
            Cell::from_letters(2, vec![0]).unwrap()
        );
        assert_eq!(
            cell(addr(2, &[1, 1], 0), addr(2, &[2, 2], 0)),
            Cell::root(2).unwrap()
        );
        // both points are corners of ⟨0 2⟩
        assert_eq!(
            cell(addr(2, &[0, 0], 2), addr(2, &[0, 1], 2)),
            Cell::from_letters(2, vec![0, 2]).unwrap()
        );
        assert_eq!(
            cell(addr(2, &[1], 2), addr(2, &[2, 2], 0)),
            Cell::from_letters(2, vec![2]).unwrap()
        );
        assert_eq!(
            common_cell(&addr(2, &[2], 1), &addr(2, &[1], 2)),
            Err(Error::SamePoint)
        );
    }

    #[test]
    fn maps_and_inverses() {
        let w1 = Word::new(2, vec![1]).unwrap();
        let q0 = addr(2, &[], 0);
        let image = apply_map(&w1, &q0).unwrap();
        assert_eq!(image.to_bary(), bary(&["1/2", "1/2", "0"]));
        assert_eq!(apply_map_bary(&w1, &q0.to_bary()), image.to_bary());
        assert_eq!(
            inverse_map(&w1, &addr(2, &[1, 0], 1)).unwrap(),
            addr(2, &[0], 1)
        );
        assert_eq!(
            inverse_map(&w1, &addr(2, &[2], 0)),
            Err(Error::NotInCell)
        );
        assert_eq!(
            inverse_map_bary(&w1, &addr(2, &[2], 0).to_bary()),
            Err(Error::NotInCell)
        );
    }

    #[test]
    fn phi_examples() {
        let cell = Cell::from_letters(2, vec![1, 0]).unwrap();
        for i in 0..=2u8 {
            let corner = cell.corner(i).unwrap();
            for j in 0..=2u8 {
                let expect = if i == j { Dyadic::one() } else { Dyadic::zero() };
                assert_eq!(phi_projection(&cell, j, &corner).unwrap(), expect);
            }
        }
        let root = Cell::root(2).unwrap();
        assert_eq!(
            phi_projection(&root, 0, &addr(2, &[1, 0], 1)).unwrap(),
            d("1/4")
        );
        assert_eq!(
            phi_projection(&cell, 0, &addr(2, &[2], 0)),
            Err(Error::NotInCell)
        );
    }

    #[test]
    fn text_format() {
        let p = PointAddress::parse(3, "[2 0 2 | 1]").unwrap();
        assert_eq!(p, addr(3, &[2, 0, 2], 1));
        assert_eq!(PointAddress::parse(3, "[2 0 2|1]").unwrap(), p);
        assert_eq!(PointAddress::parse(3, "[202|1]").unwrap(), p);
        assert_eq!(p.to_string(), "[2 0 2 | 1]");
        assert_eq!(addr(2, &[], 0).to_string(), "[| 0]");
        assert_eq!(PointAddress::parse(2, "[| 0]").unwrap(), addr(2, &[], 0));
        assert!(PointAddress::parse(2, "[1 2]").is_err());
        assert_eq!(Cell::parse(2, "[1 1]").unwrap().to_string(), "[1 1]");
        assert_eq!(Cell::parse(2, "[]").unwrap(), Cell::root(2).unwrap());
        let json = serde_json::to_string(&addr(2, &[1, 0], 1).to_bary()).unwrap();
        assert_eq!(json, r#"["1/4","3/4","0"]"#);
    }
}
