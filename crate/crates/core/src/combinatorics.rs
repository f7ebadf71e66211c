//! Combinatorial data of interval exchanges and Rauzy moves.
//!
//! Letters are indices into an [`Alphabet`]. Ranks are 1-based at every
//! public interface: `pair.pi0(a) == 1` means `I_a` is the leftmost interval.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Index of a symbol in its alphabet.
pub type Letter = usize;

/// Default cap for Rauzy-class enumeration.
pub const CLASS_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new(letters: Vec<String>) -> Result<Self> {
        if letters.len() < 2 {
            return Err(Error::InvalidPair(format!(
                "alphabet needs at least 2 symbols, got {}",
                letters.len()
            )));
        }
        for (i, a) in letters.iter().enumerate() {
            if letters[..i].contains(a) {
                return Err(Error::InvalidPair(format!("duplicate symbol `{a}`")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// `A, B, C, …` for `d ≤ 26`, then `L26, L27, …`.
    pub fn standard(d: usize) -> Self {
        let letters = (0..d)
            .map(|i| {
                if i < 26 {
                    ((b'A' + i as u8) as char).to_string()
                } else {
                    format!("L{i}")
                }
            })
            .collect();
        Alphabet::new(letters).expect("standard alphabet is valid for d >= 2")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.letters[a]
    }

    pub fn index_of(&self, symbol: &str) -> Option<Letter> {
        self.letters.iter().position(|s| s == symbol)
    }

    pub fn symbols(&self) -> &[String] {
        &self.letters
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.letters
    }
}

/// Type of a Rauzy move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum MoveType {
    /// The top interval `I_{α(0)}` wins.
    Zero,
    /// The image `f(I_{α(1)})` wins.
    One,
}

impl MoveType {
    pub const BOTH: [MoveType; 2] = [MoveType::Zero, MoveType::One];

    pub fn index(self) -> usize {
        match self {
            MoveType::Zero => 0,
            MoveType::One => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            MoveType::Zero => MoveType::One,
            MoveType::One => MoveType::Zero,
        }
    }
}

impl TryFrom<u8> for MoveType {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(MoveType::Zero),
            1 => Ok(MoveType::One),
            _ => Err(format!("move type must be 0 or 1, got {v}")),
        }
    }
}

impl From<MoveType> for u8 {
    fn from(t: MoveType) -> u8 {
        t.index() as u8
    }
}

impl fmt::Display for MoveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    alphabet: Alphabet,
    pi0: Vec<usize>,
    pi1: Vec<usize>,
}

/// Combinatorial data `π = (π₀, π₁)`, validated to be an irreducible pair of
/// bijections onto `{1..d}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct Pair {
    alphabet: Alphabet,
    pi0: Vec<usize>,
    pi1: Vec<usize>,
}

impl TryFrom<PairRepr> for Pair {
    type Error = Error;
    fn try_from(r: PairRepr) -> Result<Self> {
        Pair::new(r.alphabet, r.pi0, r.pi1)
    }
}

impl From<Pair> for PairRepr {
    fn from(p: Pair) -> Self {
        PairRepr {
            alphabet: p.alphabet,
            pi0: p.pi0,
            pi1: p.pi1,
        }
    }
}

/// Outcome of [`validate_pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validity {
    pub bijective: bool,
    /// Smallest `j < d` with `π₀⁻¹{1..j} = π₁⁻¹{1..j}`.
    pub reducible_at: Option<usize>,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.bijective && self.reducible_at.is_none()
    }
}

fn is_bijection(ranks: &[usize]) -> bool {
    let d = ranks.len();
    let mut seen = vec![false; d];
    for &r in ranks {
        if r == 0 || r > d || seen[r - 1] {
            return false;
        }
        seen[r - 1] = true;
    }
    true
}

/// Checks bijectivity and irreducibility of rank maps given per letter.
pub fn validate_pair(pi0: &[usize], pi1: &[usize]) -> Validity {
    let bijective = pi0.len() == pi1.len() && is_bijection(pi0) && is_bijection(pi1);
    if !bijective {
        return Validity { bijective, reducible_at: None };
    }
    let d = pi0.len();
    let reducible_at = (1..d).find(|&j| (0..d).all(|a| (pi0[a] <= j) == (pi1[a] <= j)));
    Validity { bijective, reducible_at }
}

impl Pair {
    pub fn new(alphabet: Alphabet, pi0: Vec<usize>, pi1: Vec<usize>) -> Result<Self> {
        if pi0.len() != alphabet.len() || pi1.len() != alphabet.len() {
            return Err(Error::InvalidPair(format!(
                "rank lists must have length {}",
                alphabet.len()
            )));
        }
        let v = validate_pair(&pi0, &pi1);
        if !v.bijective {
            return Err(Error::InvalidPair("ranks are not a bijection onto 1..d".into()));
        }
        if let Some(j) = v.reducible_at {
            return Err(Error::Reducible(j));
        }
        Ok(Pair { alphabet, pi0, pi1 })
    }

    /// Pair on the standard alphabet whose top row is `A, B, C, …` and whose
    /// monodromy (see [`Pair::monodromy`]) is `p`.
    pub fn from_monodromy(p: &[usize]) -> Result<Self> {
        let d = p.len();
        if d < 2 || !is_bijection(p) {
            return Err(Error::InvalidPair(format!("{p:?} is not a permutation of 1..d")));
        }
        let pi0 = (1..=d).collect();
        let mut pi1 = vec![0; d];
        for (k, &top) in p.iter().enumerate() {
            pi1[top - 1] = k + 1;
        }
        Pair::new(Alphabet::standard(d), pi0, pi1)
    }

    /// The unique irreducible pair for `d = 2`: `A B / B A`.
    pub fn rotation() -> Self {
        Pair::from_monodromy(&[2, 1]).expect("valid")
    }

    pub fn d(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Top rank of `a`, in `1..=d`.
    pub fn pi0(&self, a: Letter) -> usize {
        self.pi0[a]
    }

    /// Bottom rank of `a`, in `1..=d`.
    pub fn pi1(&self, a: Letter) -> usize {
        self.pi1[a]
    }

    pub fn rank(&self, row: MoveType, a: Letter) -> usize {
        match row {
            MoveType::Zero => self.pi0[a],
            MoveType::One => self.pi1[a],
        }
    }

    pub fn ranks0(&self) -> &[usize] {
        &self.pi0
    }

    pub fn ranks1(&self) -> &[usize] {
        &self.pi1
    }

    /// Letter at 1-based position `k` of row `row`.
    pub fn letter_at(&self, row: MoveType, k: usize) -> Letter {
        let ranks = match row {
            MoveType::Zero => &self.pi0,
            MoveType::One => &self.pi1,
        };
        ranks.iter().position(|&r| r == k).expect("ranks are a bijection")
    }

    /// Letters of row `row` from left to right.
    pub fn row(&self, row: MoveType) -> Vec<Letter> {
        (1..=self.d()).map(|k| self.letter_at(row, k)).collect()
    }

    /// `α(ε)`: the last letter of row `ε`.
    pub fn last(&self, eps: MoveType) -> Letter {
        self.letter_at(eps, self.d())
    }

    /// `(winner, loser)` of a move of type `eps`.
    pub fn winner_loser(&self, eps: MoveType) -> (Letter, Letter) {
        (self.last(eps), self.last(eps.other()))
    }

    /// Top ranks listed in bottom order: entry `k` is `π₀(π₁⁻¹(k))`.
    pub fn monodromy(&self) -> Vec<usize> {
        self.row(MoveType::One).iter().map(|&a| self.pi0[a]).collect()
    }

    pub fn symbol(&self, a: Letter) -> &str {
        self.alphabet.name(a)
    }
}

impl fmt::Debug for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |row| {
            self.row(row)
                .iter()
                .map(|&a| self.symbol(a).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "({} / {})", line(MoveType::Zero), line(MoveType::One))
    }
}

/// `Ω_π`: `+1` if `π₁(α) > π₁(β)` and `π₀(α) < π₀(β)`, `−1` for the reverse.
pub fn omega_matrix(pair: &Pair) -> IntMatrix {
    let d = pair.d();
    let mut m = IntMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let v = if pair.pi1[a] > pair.pi1[b] && pair.pi0[a] < pair.pi0[b] {
                1
            } else if pair.pi1[a] < pair.pi1[b] && pair.pi0[a] > pair.pi0[b] {
                -1
            } else {
                0
            };
            m[(a, b)] = v.into();
        }
    }
    m
}

/// `rank(Ω_π) / 2`.
pub fn genus(pair: &Pair) -> usize {
    omega_matrix(pair).rank() / 2
}

/// The Rauzy move `r_ε`.
pub fn rauzy_move(pair: &Pair, eps: MoveType) -> Pair {
    let d = pair.d();
    let winner = pair.last(eps);
    let (keep, change) = match eps {
        MoveType::Zero => (&pair.pi0, &pair.pi1),
        MoveType::One => (&pair.pi1, &pair.pi0),
    };
    let pivot = change[winner];
    let moved: Vec<usize> = change
        .iter()
        .map(|&r| {
            if r <= pivot {
                r
            } else if r < d {
                r + 1
            } else {
                pivot + 1
            }
        })
        .collect();
    let (pi0, pi1) = match eps {
        MoveType::Zero => (keep.clone(), moved),
        MoveType::One => (moved, keep.clone()),
    };
    Pair {
        alphabet: pair.alphabet.clone(),
        pi0,
        pi1,
    }
}

/// One step of a Rauzy path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RauzyStep {
    /// Pair before the move.
    pub pair: Pair,
    pub eps: MoveType,
    pub winner: Letter,
    pub loser: Letter,
}

impl RauzyStep {
    pub fn new(pair: Pair, eps: MoveType) -> Self {
        let (winner, loser) = pair.winner_loser(eps);
        RauzyStep { pair, eps, winner, loser }
    }
}

/// A path in a Rauzy diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RauzyPath {
    start: Pair,
    steps: Vec<RauzyStep>,
}

impl RauzyPath {
    pub fn empty(start: Pair) -> Self {
        RauzyPath { start, steps: Vec::new() }
    }

    pub fn from_moves(start: Pair, moves: &[MoveType]) -> Self {
        let mut path = Self::empty(start);
        for &m in moves {
            path.push(m);
        }
        path
    }

    /// Appends the move `eps` from the current end pair.
    pub fn push(&mut self, eps: MoveType) {
        let pair = self.end();
        self.steps.push(RauzyStep::new(pair, eps));
    }

    pub fn start(&self) -> &Pair {
        &self.start
    }

    /// Pair reached after all steps.
    pub fn end(&self) -> Pair {
        match self.steps.last() {
            Some(s) => rauzy_move(&s.pair, s.eps),
            None => self.start.clone(),
        }
    }

    pub fn steps(&self) -> &[RauzyStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn moves(&self) -> Vec<MoveType> {
        self.steps.iter().map(|s| s.eps).collect()
    }

    pub fn prefix(&self, n: usize) -> RauzyPath {
        RauzyPath {
            start: self.start.clone(),
            steps: self.steps[..n.min(self.steps.len())].to_vec(),
        }
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &RauzyPath) -> Result<RauzyPath> {
        if self.end() != other.start {
            return Err(Error::NotPeriodic("paths do not connect".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Ok(RauzyPath { start: self.start.clone(), steps })
    }

    /// Checks the consistency invariants of the stored steps.
    pub fn is_consistent(&self) -> bool {
        let mut pair = self.start.clone();
        for s in &self.steps {
            if s.pair != pair || (s.winner, s.loser) != pair.winner_loser(s.eps) {
                return false;
            }
            pair = rauzy_move(&pair, s.eps);
        }
        true
    }
}

/// Vertices and labeled edges of a Rauzy class.
#[derive(Debug, Clone)]
pub struct RauzyClass {
    pub vertices: Vec<Pair>,
    /// `(from, type, to)` as vertex indices.
    pub edges: Vec<(usize, MoveType, usize)>,
}

impl RauzyClass {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, p: &Pair) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }
}

/// Breadth-first closure under both moves, with the default cap.
pub fn rauzy_class(pair: &Pair) -> Result<RauzyClass> {
    rauzy_class_capped(pair, CLASS_CAP)
}

pub fn rauzy_class_capped(pair: &Pair, cap: usize) -> Result<RauzyClass> {
    let mut index: HashMap<Pair, usize> = HashMap::new();
    let mut vertices = vec![pair.clone()];
    index.insert(pair.clone(), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for eps in MoveType::BOTH {
            let next = rauzy_move(&vertices[i], eps);
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if vertices.len() >= cap {
                        return Err(Error::ClassCap(cap));
                    }
                    let j = vertices.len();
                    index.insert(next.clone(), j);
                    vertices.push(next);
                    queue.push_back(j);
                    j
                }
            };
            edges.push((i, eps, j));
        }
    }
    Ok(RauzyClass { vertices, edges })
}

/// Shortest sequence of moves taking `from` to `to`; empty when equal.
pub fn find_path(from: &Pair, to: &Pair) -> Result<Vec<MoveType>> {
    if from == to {
        return Ok(Vec::new());
    }
    if from.alphabet != to.alphabet {
        return Err(Error::NoPath);
    }
    let mut parent: HashMap<Pair, (Pair, MoveType)> = HashMap::new();
    let mut queue = VecDeque::from([from.clone()]);
    let mut seen = 1usize;
    while let Some(p) = queue.pop_front() {
        for eps in MoveType::BOTH {
            let q = rauzy_move(&p, eps);
            if q == *from || parent.contains_key(&q) {
                continue;
            }
            parent.insert(q.clone(), (p.clone(), eps));
            if q == *to {
                let mut moves = Vec::new();
                let mut cur = q;
                while cur != *from {
                    let (prev, e) = parent[&cur].clone();
                    moves.push(e);
                    cur = prev;
                }
                moves.reverse();
                return Ok(moves);
            }
            seen += 1;
            if seen > CLASS_CAP {
                return Err(Error::ClassCap(CLASS_CAP));
            }
            queue.push_back(q);
        }
    }
    Err(Error::NoPath)
}

/// First failing case of the k-boundedness condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundednessWitness {
    pub n: usize,
    pub beta: Letter,
    pub gamma: Letter,
}

/// Three-valued verdict of [`k_bounded_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundedness {
    /// Every checkable `(n, β, γ)` has a chain.
    Holds,
    Fails {
        first: BoundednessWitness,
        all: Vec<BoundednessWitness>,
    },
    /// The prefix is shorter than `2k + d`.
    Undetermined,
}

impl Boundedness {
    pub fn holds(&self) -> Option<bool> {
        match self {
            Boundedness::Holds => Some(true),
            Boundedness::Fails { .. } => Some(false),
            Boundedness::Undetermined => None,
        }
    }
}

/// Checks k-bounded combinatorics on a finite prefix.
///
/// Only levels `n` in `k−1 ..= len−k` are checked, so that every admissible
/// window `(n−k, n+k)` lies inside the prefix.
pub fn k_bounded_check(path: &RauzyPath, k: usize) -> Boundedness {
    let len = path.len();
    let d = path.start().d();
    if k == 0 || len < 2 * k + d {
        return Boundedness::Undetermined;
    }
    let steps = path.steps();
    let mut all = Vec::new();
    for n in (k - 1)..=(len - k) {
        let lo = n + 1 - k;
        let hi = n + k - 1;
        for beta in 0..d {
            for gamma in 0..d {
                let found = (lo..=hi).any(|n1| {
                    if steps[n1].winner != beta {
                        return false;
                    }
                    let mut m = n1;
                    loop {
                        if steps[m].loser == gamma {
                            return true;
                        }
                        if m + 1 > hi || steps[m].loser != steps[m + 1].winner {
                            return false;
                        }
                        m += 1;
                    }
                });
                if !found {
                    all.push(BoundednessWitness { n, beta, gamma });
                }
            }
        }
    }
    match all.first() {
        None => Boundedness::Holds,
        Some(&first) => Boundedness::Fails { first, all },
    }
}
