//! Rauzy–Veech induction on a [`Giem`].
//!
//! A level-`n` state stores, per letter, the fundamental interval
//! `I⁽ⁿ⁾_α = [start, start + len)`, the left endpoint of its image under
//! `Rⁿf`, and the return word: the letters visited by the `f`-orbit of
//! `I⁽ⁿ⁾_α` before it comes back. `Rⁿf` is evaluated by composing original
//! branches along that word, so no rescaling happens here.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::combinatorics::{rauzy_move, Letter, MoveType, Pair, RauzyPath};
use crate::error::{Error, Result};
use crate::maps::Giem;
use crate::scalar::{DoubleDouble, Precision, Scalar};

/// Length difference below which a step is treated as a connection.
pub const CONNECTION_TOL: f64 = 1e-13;
/// Allowed escape of an orbit point from the branch it should be in.
pub const DRIFT_TOL: f64 = 1e-10;
/// Slack on domain membership for return-map evaluation.
pub const DOMAIN_TOL: f64 = 1e-13;
/// Default iteration cap of [`brute_force_first_return`].
pub const RETURN_CAP: u64 = 1_000_000;

#[derive(Clone)]
enum Node {
    Leaf(Letter),
    Cat(Word, Word, u64),
}

/// Immutable word over the original alphabet, shared between levels.
#[derive(Clone)]
pub struct Word(Arc<Node>);

impl Word {
    pub fn letter(a: Letter) -> Self {
        Word(Arc::new(Node::Leaf(a)))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Word) -> Word {
        let len = self.len() + next.len();
        Word(Arc::new(Node::Cat(self.clone(), next.clone(), len)))
    }

    pub fn len(&self) -> u64 {
        match &*self.0 {
            Node::Leaf(_) => 1,
            Node::Cat(_, _, n) => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Letters in time order.
    pub fn iter(&self) -> WordIter<'_> {
        WordIter { stack: vec![self], rev: false }
    }

    /// Letters in reverse time order.
    pub fn iter_rev(&self) -> WordIter<'_> {
        WordIter { stack: vec![self], rev: true }
    }

    pub fn to_vec(&self) -> Vec<Letter> {
        self.iter().collect()
    }

    pub fn first(&self) -> Letter {
        self.iter().next().expect("words are nonempty")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 64 {
            write!(f, "{:?}", self.to_vec())
        } else {
            write!(f, "Word(len = {})", self.len())
        }
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().eq(other.iter())
    }
}

pub struct WordIter<'a> {
    stack: Vec<&'a Word>,
    rev: bool,
}

impl Iterator for WordIter<'_> {
    type Item = Letter;
    fn next(&mut self) -> Option<Letter> {
        while let Some(w) = self.stack.pop() {
            match &*w.0 {
                Node::Leaf(a) => return Some(*a),
                Node::Cat(l, r, _) => {
                    if self.rev {
                        self.stack.push(l);
                        self.stack.push(r);
                    } else {
                        self.stack.push(r);
                        self.stack.push(l);
                    }
                }
            }
        }
        None
    }
}

/// Value and derivatives of a composition at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<S> {
    pub value: S,
    pub d1: f64,
    pub d2: f64,
}

fn check_drift(f: &Giem, step: usize, a: Letter, x: f64) -> Result<()> {
    let b = f.branch(a);
    let excess = (b.a - x).max(x - b.b);
    if excess > DRIFT_TOL {
        return Err(Error::ItineraryDrift { step, letter: a, x, excess });
    }
    Ok(())
}

/// Composes the branches of `f` along `word`, starting at `x`.
///
/// Fails with [`Error::ItineraryDrift`] if an orbit point leaves the branch it
/// is supposed to be in by more than [`DRIFT_TOL`].
pub fn compose_along<S: Scalar>(f: &Giem, word: &Word, x: S) -> Result<Jet<S>> {
    let mut jet = Jet { value: x, d1: 1.0, d2: 0.0 };
    for (step, a) in word.iter().enumerate() {
        let b = f.branch(a);
        let xf = jet.value.to_f64();
        check_drift(f, step, a, xf)?;
        let (v, g1, g2) = b.jet(jet.value);
        // D²(g∘h) = g''(h)·h'² + g'(h)·h''
        jet = Jet {
            value: v,
            d1: g1 * jet.d1,
            d2: g2 * jet.d1 * jet.d1 + g1 * jet.d2,
        };
    }
    Ok(jet)
}

/// Value only; cheaper than [`compose_along`].
pub fn value_along<S: Scalar>(f: &Giem, word: &Word, x: S) -> Result<S> {
    let mut y = x;
    for (step, a) in word.iter().enumerate() {
        check_drift(f, step, a, y.to_f64())?;
        y = f.branch(a).value(y);
    }
    Ok(y)
}

/// Inverts the composition along `word` at `y`, branch by branch.
pub fn inverse_along<S: Scalar>(f: &Giem, word: &Word, y: S) -> Result<S> {
    let n = word.len() as usize;
    let mut x = y;
    for (k, a) in word.iter_rev().enumerate() {
        let b = f.branch(a);
        let yf = x.to_f64();
        let excess = (b.u - yf).max(yf - b.v);
        if excess > DRIFT_TOL {
            return Err(Error::ItineraryDrift { step: n - 1 - k, letter: a, x: yf, excess });
        }
        x = b.inverse(x);
    }
    Ok(x)
}

/// Renormalization data at level `n`.
#[derive(Debug, Clone)]
pub struct InductionState {
    pub level: usize,
    pub pair: Pair,
    /// `|I⁽ⁿ⁾|`; the domain is `[0, domain_len)`.
    pub domain_len: f64,
    pub start: Vec<f64>,
    pub len: Vec<f64>,
    /// Left endpoint of `Rⁿf(I⁽ⁿ⁾_α)`.
    pub image_start: Vec<f64>,
    pub words: Vec<Word>,
    pub q: Vec<BigUint>,
    /// Moves taken from level 0.
    pub history: RauzyPath,
}

/// Outcome of [`InductionState::rv_type`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepType {
    pub eps: MoveType,
    pub winner: Letter,
    pub loser: Letter,
}

impl InductionState {
    pub fn initial(f: &Giem) -> Self {
        let d = f.d();
        InductionState {
            level: 0,
            pair: f.pair().clone(),
            domain_len: 1.0,
            start: f.branches().iter().map(|b| b.a).collect(),
            len: f.lengths(),
            image_start: f.branches().iter().map(|b| b.u).collect(),
            words: (0..d).map(Word::letter).collect(),
            q: vec![BigUint::one(); d],
            history: RauzyPath::empty(f.pair().clone()),
        }
    }

    pub fn d(&self) -> usize {
        self.len.len()
    }

    pub fn end(&self, a: Letter) -> f64 {
        self.start[a] + self.len[a]
    }

    pub fn image_len(&self, a: Letter) -> f64 {
        let next = self.pair.pi1(a);
        let end = if next == self.d() {
            self.domain_len
        } else {
            self.image_start[self.pair.letter_at(MoveType::One, next + 1)]
        };
        end - self.image_start[a]
    }

    /// Type of the next step: `0` iff `|I_{α(0)}| > |Rⁿf(I_{α(1)})|`.
    pub fn rv_type(&self) -> Result<StepType> {
        let top = self.pair.last(MoveType::Zero);
        let bottom = self.pair.last(MoveType::One);
        let a = self.len[top];
        let b = self.domain_len - self.image_start[bottom];
        if (a - b).abs() < CONNECTION_TOL {
            return Err(Error::Connection { level: self.level, gap: (a - b).abs() });
        }
        let eps = if a > b { MoveType::Zero } else { MoveType::One };
        let (winner, loser) = self.pair.winner_loser(eps);
        Ok(StepType { eps, winner, loser })
    }

    /// One Rauzy–Veech step, evaluating `Rⁿf` in precision `S`.
    pub fn rv_step<S: Scalar>(&self, f: &Giem) -> Result<InductionState> {
        let StepType { eps, winner: w, loser: l } = self.rv_type()?;
        let mut next = self.clone();
        next.level += 1;
        next.pair = rauzy_move(&self.pair, eps);
        next.history.push(eps);
        next.q[l] = &self.q[l] + &self.q[w];
        match eps {
            MoveType::Zero => {
                // cut f(I_{α(1)}) off the right end
                let c = self.image_start[l];
                next.domain_len = c;
                next.len[w] = c - self.start[w];
                next.words[l] = self.words[l].then(&self.words[w]);
                next.image_start[l] = value_along(f, &self.words[w], S::from_f64(c))?.to_f64();
            }
            MoveType::One => {
                // cut I_{α(0)} off; the part of I_w landing on it becomes I_l
                let y = self.start[l];
                next.domain_len = y;
                let z = inverse_along(f, &self.words[w], S::from_f64(y))?.to_f64();
                next.start[l] = z;
                next.len[l] = self.end(w) - z;
                next.len[w] = z - self.start[w];
                next.words[l] = self.words[w].then(&self.words[l]);
            }
        }
        if next.len.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::Connection { level: self.level, gap: 0.0 });
        }
        Ok(next)
    }

    fn check_domain(&self, a: Letter, x: f64) -> Result<()> {
        let (s, e) = (self.start[a], self.end(a));
        if x < s - DOMAIN_TOL || x > e + DOMAIN_TOL {
            return Err(Error::Domain { x, start: s, end: e });
        }
        Ok(())
    }

    /// `Rⁿf` on the closure of `I⁽ⁿ⁾_α` with first and second derivatives.
    pub fn return_jet<S: Scalar>(&self, f: &Giem, a: Letter, x: S) -> Result<Jet<S>> {
        self.check_domain(a, x.to_f64())?;
        compose_along(f, &self.words[a], x)
    }

    /// Derivative of order 0, 1 or 2 of `Rⁿf` at `x ∈ I⁽ⁿ⁾_α`.
    pub fn eval_return_map(&self, f: &Giem, a: Letter, x: f64, order: u8) -> Result<f64> {
        let jet = self.return_jet(f, a, x)?;
        match order {
            0 => Ok(jet.value),
            1 => Ok(jet.d1),
            2 => Ok(jet.d2),
            o => Err(Error::InvalidArgument(format!("derivative order {o} is not 0, 1 or 2"))),
        }
    }

    /// Return-map value in the requested precision.
    pub fn eval_return_value(&self, f: &Giem, a: Letter, x: f64, precision: Precision) -> Result<f64> {
        self.check_domain(a, x)?;
        match precision {
            Precision::Std => value_along(f, &self.words[a], x),
            Precision::Dd => Ok(value_along(f, &self.words[a], DoubleDouble::from_f64(x))?.to_f64()),
        }
    }

    /// Letter of the fundamental interval containing `x ∈ [0, |I⁽ⁿ⁾|)`.
    pub fn letter_at(&self, x: f64) -> Option<Letter> {
        (0..self.d()).find(|&a| x >= self.start[a] && x < self.end(a))
    }

    /// The `f`-orbit of `I⁽ⁿ⁾_α` up to its return: `(letter, lo, hi)` for
    /// `f^i(I⁽ⁿ⁾_α)`, `0 ≤ i < q_α`.
    pub fn orbit(&self, f: &Giem, a: Letter) -> Vec<(Letter, f64, f64)> {
        let mut out = Vec::with_capacity(self.words[a].len() as usize);
        let (mut lo, mut hi) = (self.start[a], self.end(a));
        for b in self.words[a].iter() {
            out.push((b, lo, hi));
            let br = f.branch(b);
            lo = br.value(lo);
            hi = br.value(hi);
        }
        out
    }

    pub fn export(&self, f_words_cap: u64) -> StateExport {
        let name = |a: Letter| self.pair.symbol(a).to_string();
        StateExport {
            level: self.level,
            pair: self.pair.clone(),
            domain_length: fmt17(self.domain_len),
            starts: self.start.iter().map(|&x| fmt17(x)).collect(),
            lengths: self.len.iter().map(|&x| fmt17(x)).collect(),
            q: self.q.iter().map(ToString::to_string).collect(),
            history: self
                .history
                .steps()
                .iter()
                .map(|s| HistoryEntry {
                    eps: s.eps.index() as u8,
                    winner: name(s.winner),
                    loser: name(s.loser),
                })
                .collect(),
            words: self
                .words
                .iter()
                .map(|w| (w.len() <= f_words_cap).then(|| w.iter().map(name).collect()))
                .collect(),
        }
    }
}

/// Scientific notation with 17 significant digits, which round-trips `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct HistoryEntry {
    #[serde(rename = "type")]
    pub eps: u8,
    pub winner: String,
    pub loser: String,
}

/// JSON form of an [`InductionState`].
#[derive(Debug, Clone, Serialize)]
pub struct StateExport {
    pub level: usize,
    pub pair: Pair,
    pub domain_length: String,
    pub starts: Vec<String>,
    pub lengths: Vec<String>,
    pub q: Vec<String>,
    pub history: Vec<HistoryEntry>,
    /// `None` for words longer than the export cap.
    pub words: Vec<Option<Vec<String>>>,
}

/// Levels `0..=n` of the induction, and the reason it stopped early if it did.
#[derive(Debug, Clone)]
pub struct Renormalization {
    pub states: Vec<InductionState>,
    pub stopped: Option<Error>,
}

impl Renormalization {
    pub fn last(&self) -> &InductionState {
        self.states.last().expect("level 0 is always present")
    }

    pub fn path(&self) -> &RauzyPath {
        &self.last().history
    }

    pub fn into_result(self) -> Result<Vec<InductionState>> {
        match self.stopped {
            Some(e) => Err(e),
            None => Ok(self.states),
        }
    }
}

pub fn renormalize_with<S: Scalar>(f: &Giem, n: usize) -> Renormalization {
    let mut states = vec![InductionState::initial(f)];
    for _ in 0..n {
        match states.last().expect("nonempty").rv_step::<S>(f) {
            Ok(s) => states.push(s),
            Err(e) => return Renormalization { states, stopped: Some(e) },
        }
    }
    Renormalization { states, stopped: None }
}

/// Levels `0..=n` of the induction in binary64.
pub fn renormalize(f: &Giem, n: usize) -> Renormalization {
    renormalize_with::<f64>(f, n)
}

pub fn renormalize_precision(f: &Giem, n: usize, precision: Precision) -> Renormalization {
    match precision {
        Precision::Std => renormalize_with::<f64>(f, n),
        Precision::Dd => renormalize_with::<DoubleDouble>(f, n),
    }
}

/// First return of `x` to `J = [0, j_len)` under `f`: `(point, time)`.
pub fn brute_force_first_return<S: Scalar>(f: &Giem, j_len: f64, x: S, cap: u64) -> Result<(S, u64)> {
    let xf = x.to_f64();
    if !(0.0..j_len).contains(&xf) {
        return Err(Error::Domain { x: xf, start: 0.0, end: j_len });
    }
    let mut y = f.eval(x)?;
    let mut k = 1;
    while !(y.to_f64() >= 0.0 && y.to_f64() < j_len) {
        if k >= cap {
            return Err(Error::NoReturn(cap));
        }
        y = f.eval(y)?;
        k += 1;
    }
    Ok((y, k))
}

/// One element `f^i(I⁽ⁿ⁾_α)` of a dynamical partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionElement {
    pub letter: Letter,
    pub i: u64,
    pub start: f64,
    pub end: f64,
    /// Whether the element already belonged to the previous partition.
    /// At level 0 every element is reported as preserved.
    pub preserved: bool,
}

impl PartitionElement {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

/// Partition tolerance for gaps, overlaps and containment.
pub const PARTITION_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct DynamicalPartition {
    pub level: usize,
    /// Sorted by left endpoint.
    pub elements: Vec<PartitionElement>,
}

impl DynamicalPartition {
    pub fn preserved(&self) -> impl Iterator<Item = &PartitionElement> {
        self.elements.iter().filter(|e| e.preserved)
    }

    pub fn new_elements(&self) -> impl Iterator<Item = &PartitionElement> {
        self.elements.iter().filter(|e| !e.preserved)
    }

    pub fn total_length(&self) -> f64 {
        self.elements.iter().map(PartitionElement::len).sum()
    }

    /// Checks that every element lies in exactly one element of `coarse`.
    pub fn check_refines(&self, coarse: &DynamicalPartition) -> Result<()> {
        for e in &self.elements {
            let hosts = coarse
                .elements
                .iter()
                .filter(|c| e.start >= c.start - PARTITION_TOL && e.end <= c.end + PARTITION_TOL)
                .count();
            if hosts != 1 {
                return Err(Error::PartitionDefect(format!(
                    "element ({}, {}) = [{}, {}) lies in {hosts} elements of level {}",
                    e.letter, e.i, e.start, e.end, coarse.level
                )));
            }
        }
        Ok(())
    }
}

/// Whether `(β, i)` at this level is an element of the previous partition.
fn is_preserved(state: &InductionState, prev: &InductionState, beta: Letter, i: u64) -> bool {
    let last = state.history.steps().last().expect("level >= 1");
    let top = last.pair.last(MoveType::Zero);
    let bottom = last.pair.last(MoveType::One);
    if beta != top && beta != bottom {
        return true;
    }
    let q_bottom = prev.words[bottom].len();
    match last.eps {
        MoveType::Zero => beta == bottom && i < q_bottom,
        MoveType::One => beta == top && i >= q_bottom,
    }
}

/// `ξ_n = {f^i(I⁽ⁿ⁾_α)}`, split into preserved and new elements relative to
/// level `n−1`, and checked to tile `[0, 1)`.
pub fn dynamical_partition(
    state: &InductionState,
    prev: Option<&InductionState>,
    f: &Giem,
) -> Result<DynamicalPartition> {
    let mut elements = Vec::new();
    for a in 0..state.d() {
        for (i, (_, lo, hi)) in state.orbit(f, a).into_iter().enumerate() {
            let i = i as u64;
            let preserved = match prev {
                Some(p) if state.level > 0 => is_preserved(state, p, a, i),
                _ => true,
            };
            elements.push(PartitionElement { letter: a, i, start: lo, end: hi, preserved });
        }
    }
    elements.sort_by(|x, y| x.start.total_cmp(&y.start));
    let mut x = 0.0;
    for e in &elements {
        if (e.start - x).abs() > PARTITION_TOL || !(e.end > e.start) {
            return Err(Error::PartitionDefect(format!(
                "gap or overlap of {:e} before element ({}, {})",
                e.start - x,
                e.letter,
                e.i
            )));
        }
        x = e.end;
    }
    if (x - 1.0).abs() > PARTITION_TOL {
        return Err(Error::PartitionDefect(format!("elements end at {x}, not 1")));
    }
    Ok(DynamicalPartition { level: state.level, elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{make_standard_iem, Shape};
    use num_bigint::BigUint;

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    fn golden() -> Giem {
        make_standard_iem(&Pair::rotation(), &[2.0 - phi(), phi() - 1.0]).unwrap()
    }

    fn qs(s: &InductionState) -> Vec<u64> {
        s.q.iter().map(|x| x.to_u64_digits().first().copied().unwrap_or(0)).collect()
    }

    #[test]
    fn word_rope() {
        let a = Word::letter(0);
        let b = Word::letter(1);
        let w = a.then(&b).then(&a.then(&a));
        assert_eq!(w.to_vec(), vec![0, 1, 0, 0]);
        assert_eq!(w.iter_rev().collect::<Vec<_>>(), vec![0, 0, 1, 0]);
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn golden_types_and_lengths() {
        let f = golden();
        let s0 = InductionState::initial(&f);
        let t = s0.rv_type().unwrap();
        assert_eq!((t.eps, t.winner, t.loser), (MoveType::Zero, 1, 0));
        let s1 = s0.rv_step::<f64>(&f).unwrap();
        assert_eq!(qs(&s1), vec![2, 1]);
        assert!((s1.domain_len - (phi() - 1.0)).abs() < 1e-15);
        assert!((s1.len[0] - (2.0 - phi())).abs() < 1e-15);
        assert!((s1.len[1] - (2.0 * phi() - 3.0)).abs() < 1e-15);
        let t1 = s1.rv_type().unwrap();
        assert_eq!((t1.eps, t1.winner), (MoveType::One, 0));
    }

    #[test]
    fn golden_q_history() {
        let r = renormalize(&golden(), 15);
        assert!(r.stopped.is_none());
        assert_eq!(r.states.len(), 16);
        let hist: Vec<Vec<u64>> = r.states[..5].iter().map(qs).collect();
        assert_eq!(hist, vec![vec![1, 1], vec![2, 1], vec![2, 3], vec![5, 3], vec![5, 8]]);
        let types: Vec<usize> = r.path().moves().iter().map(|m| m.index()).collect();
        assert!(types.iter().enumerate().all(|(i, &t)| t == i % 2));
        for s in &r.states {
            let sum: f64 = s.len.iter().sum();
            assert!((sum - s.domain_len).abs() < 1e-12);
            for (a, w) in s.words.iter().enumerate() {
                assert_eq!(BigUint::from(w.len()), s.q[a]);
            }
        }
    }

    #[test]
    fn equal_lengths_are_a_connection() {
        let f = make_standard_iem(&Pair::rotation(), &[0.5, 0.5]).unwrap();
        let s0 = InductionState::initial(&f);
        assert!(matches!(s0.rv_type(), Err(Error::Connection { level: 0, .. })));
        let r = make_standard_iem(&Pair::rotation(), &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let out = renormalize(&r, 10);
        assert!(matches!(out.stopped, Some(Error::Connection { .. })));
        assert!(out.states.len() < 11);
    }

    #[test]
    fn level_zero() {
        let r = renormalize(&golden(), 0);
        assert_eq!(r.states.len(), 1);
        assert_eq!(qs(&r.states[0]), vec![1, 1]);
    }

    #[test]
    fn oracle_on_golden_level_3() {
        let f = golden();
        let r = renormalize(&f, 3);
        let s = &r.states[3];
        let mid = s.start[0] + 0.5 * s.len[0];
        let (y, k) = brute_force_first_return(&f, s.domain_len, mid, RETURN_CAP).unwrap();
        assert_eq!(k, 5);
        assert!((y - s.eval_return_map(&f, 0, mid, 0).unwrap()).abs() < 1e-12);
        let (y, k) = brute_force_first_return(&f, 1.0, 0.3, RETURN_CAP).unwrap();
        assert_eq!(k, 1);
        assert_eq!(y, f.eval(0.3).unwrap());
    }

    #[test]
    fn standard_map_has_unit_derivative() {
        let f = golden();
        let r = renormalize(&f, 10);
        for s in &r.states {
            for a in 0..2 {
                let x = s.start[a] + 0.37 * s.len[a];
                assert_eq!(s.eval_return_map(&f, a, x, 1).unwrap(), 1.0);
                assert_eq!(s.eval_return_map(&f, a, x, 2).unwrap(), 0.0);
            }
        }
        let s = r.last();
        assert!(matches!(
            s.eval_return_map(&f, 0, s.end(0) + 0.1, 0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn golden_partition_level_3() {
        let f = golden();
        let r = renormalize(&f, 4);
        let p0 = dynamical_partition(&r.states[0], None, &f).unwrap();
        assert_eq!(p0.elements.len(), 2);
        let p3 = dynamical_partition(&r.states[3], Some(&r.states[2]), &f).unwrap();
        assert_eq!(p3.elements.len(), 8);
        assert!((p3.total_length() - 1.0).abs() < 1e-12);
        let p2 = dynamical_partition(&r.states[2], Some(&r.states[1]), &f).unwrap();
        p3.check_refines(&p2).unwrap();
        // preserved elements are elements of the previous level
        for e in p3.preserved() {
            assert!(p2
                .elements
                .iter()
                .any(|c| (c.start - e.start).abs() < 1e-12 && (c.end - e.end).abs() < 1e-12));
        }
        for e in p3.new_elements() {
            assert!(!p2
                .elements
                .iter()
                .any(|c| (c.start - e.start).abs() < 1e-12 && (c.end - e.end).abs() < 1e-12));
        }
    }

    #[test]
    fn moebius_return_map_matches_oracle() {
        let shapes = [Shape::moebius(1.3).unwrap(), Shape::moebius(0.8).unwrap()];
        let f = Giem::new(Pair::rotation(), &[0.38, 0.62], &[0.6, 0.4], &shapes).unwrap();
        let r = renormalize(&f, 8);
        assert!(r.stopped.is_none());
        for s in &r.states {
            for a in 0..2 {
                for k in 0..20 {
                    let x = s.start[a] + (k as f64 + 0.5) / 20.0 * s.len[a];
                    let (y, t) = brute_force_first_return(&f, s.domain_len, x, RETURN_CAP).unwrap();
                    assert_eq!(BigUint::from(t), s.q[a]);
                    assert!((y - s.eval_return_map(&f, a, x, 0).unwrap()).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn double_double_induction_agrees() {
        let shapes = [Shape::moebius(1.3).unwrap(), Shape::power_kink(0.4, 0.6, 0.5).unwrap()];
        let f = Giem::new(Pair::rotation(), &[0.38, 0.62], &[0.6, 0.4], &shapes).unwrap();
        let a = renormalize_precision(&f, 12, Precision::Std);
        let b = renormalize_precision(&f, 12, Precision::Dd);
        assert_eq!(a.path().moves(), b.path().moves());
        for (x, y) in a.last().len.iter().zip(&b.last().len) {
            assert!((x - y).abs() < 1e-13);
        }
    }
}
