//! Finite Kripke models with a global equivalence relation, program
//! denotations and satisfaction.
//!
//! Relations and state sets are dense bit matrices (multiple 64-bit words
//! per row), which keeps composition and reflexive-transitive closure
//! cheap at the scales this crate works at, canonical models included.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Formula, Program, Signature};

pub type StateId = usize;
/// Assignment of a transition relation to each atomic program.
pub type ProgramValuation = BTreeMap<String, Relation>;

/// A set of states out of a fixed universe `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet {
    n: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = StateSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_states(n: usize, states: impl IntoIterator<Item = StateId>) -> Self {
        let mut s = StateSet::empty(n);
        for i in states {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: StateId) {
        debug_assert!(i < self.n);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: StateId) -> bool {
        i < self.n && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn union_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.n, other.n);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.n, other.n);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub fn complement(&self) -> StateSet {
        let mut out = StateSet {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let used = self.n % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.n).filter(move |i| self.contains(*i))
    }
}

/// A binary relation on `0..n`, stored row-major as a bit matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        let stride = n.div_ceil(64).max(1);
        Relation {
            n,
            stride,
            words: vec![0; stride * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn universal(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for i in 0..n {
            for j in 0..n {
                r.insert(i, j);
            }
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (StateId, StateId)>) -> Self {
        let mut r = Relation::empty(n);
        for (i, j) in pairs {
            assert!(i < n && j < n, "pair ({i},{j}) outside 0..{n}");
            r.insert(i, j);
        }
        r
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: StateId, j: StateId) {
        debug_assert!(i < self.n && j < self.n);
        self.words[i * self.stride + j / 64] |= 1 << (j % 64);
    }

    pub fn contains(&self, i: StateId, j: StateId) -> bool {
        i < self.n && j < self.n && self.words[i * self.stride + j / 64] & (1 << (j % 64)) != 0
    }

    fn row(&self, i: StateId) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    /// Successor set of `i`.
    pub fn successors(&self, i: StateId) -> StateSet {
        StateSet {
            n: self.n,
            words: self.row(i).to_vec(),
        }
    }

    pub fn row_intersects(&self, i: StateId, set: &StateSet) -> bool {
        self.row(i).iter().zip(&set.words).any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.n, other.n);
        Relation {
            n: self.n,
            stride: self.stride,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Relational composition: `(i,k)` iff some `j` with `(i,j)` here and
    /// `(j,k)` in `other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.n, other.n);
        let mut out = Relation::empty(self.n);
        for i in 0..self.n {
            let row = self.row(i);
            for (w, word) in row.iter().enumerate() {
                let mut bits = *word;
                while bits != 0 {
                    let j = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let src = other.row(j).to_vec();
                    let dst = &mut out.words[i * out.stride..(i + 1) * out.stride];
                    for (d, s) in dst.iter_mut().zip(&src) {
                        *d |= s;
                    }
                }
            }
        }
        out
    }

    /// Least reflexive-transitive relation containing `self`, computed by
    /// repeatedly squaring `I + R` until it stops growing.
    pub fn reflexive_transitive_closure(&self) -> Relation {
        let mut r = self.union(&Relation::identity(self.n));
        loop {
            let next = r.compose(&r);
            if next == r {
                return r;
            }
            r = next;
        }
    }

    pub fn is_reflexive(&self) -> Option<StateId> {
        (0..self.n).find(|&i| !self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> Option<(StateId, StateId)> {
        for (i, j) in self.pairs() {
            if !self.contains(j, i) {
                return Some((i, j));
            }
        }
        None
    }

    pub fn is_transitive(&self) -> Option<(StateId, StateId, StateId)> {
        for (i, j) in self.pairs() {
            for k in self.successors(j).iter() {
                if !self.contains(i, k) {
                    return Some((i, j, k));
                }
            }
        }
        None
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        (0..self.n).flat_map(move |i| self.successors(i).iter().map(move |j| (i, j)).collect::<Vec<_>>())
    }

    pub fn count_pairs(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// States with at least one successor in `set`.
    pub fn preimage(&self, set: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.n);
        for i in 0..self.n {
            if self.row_intersects(i, set) {
                out.insert(i);
            }
        }
        out
    }
}

/// `star_closure(r)` per the program-iteration semantics.
pub fn star_closure(r: &Relation) -> Relation {
    r.reflexive_transitive_closure()
}

/// States, atomic-formula valuation and the global equivalence relation,
/// shared by every program valuation laid on top of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub n_states: usize,
    pub vf: BTreeMap<String, StateSet>,
    pub rbox: Relation,
}

impl Frame {
    pub fn new(n_states: usize, vf: BTreeMap<String, StateSet>, rbox: Relation) -> Self {
        Frame { n_states, vf, rbox }
    }

    pub fn formula_atoms(&self) -> impl Iterator<Item = &str> {
        self.vf.keys().map(String::as_str)
    }
}

/// A full model: a frame plus one program valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub frame: Frame,
    pub vp: ProgramValuation,
}

/// A failed model invariant, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyStateSpace,
    NotReflexive { state: StateId },
    NotSymmetric { s: StateId, t: StateId },
    NotTransitive { s: StateId, t: StateId, u: StateId },
    ProgramOutsideRbox { program: String, s: StateId, t: StateId },
    WrongUniverse { what: String, got: usize, expected: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyStateSpace => write!(f, "state space is empty"),
            Violation::NotReflexive { state } => {
                write!(f, "rbox is not reflexive at state {state}")
            }
            Violation::NotSymmetric { s, t } => {
                write!(f, "rbox has ({s},{t}) but not ({t},{s})")
            }
            Violation::NotTransitive { s, t, u } => {
                write!(f, "rbox has ({s},{t}) and ({t},{u}) but not ({s},{u})")
            }
            Violation::ProgramOutsideRbox { program, s, t } => {
                write!(f, "v_p({program}) has ({s},{t}) outside rbox")
            }
            Violation::WrongUniverse { what, got, expected } => {
                write!(f, "{what} ranges over {got} states, model has {expected}")
            }
        }
    }
}

/// Check the frame invariants: nonempty states, `rbox` an equivalence.
pub fn validate_frame(frame: &Frame) -> Vec<Violation> {
    let mut out = Vec::new();
    if frame.n_states == 0 {
        out.push(Violation::EmptyStateSpace);
        return out;
    }
    if frame.rbox.universe() != frame.n_states {
        out.push(Violation::WrongUniverse {
            what: "rbox".to_string(),
            got: frame.rbox.universe(),
            expected: frame.n_states,
        });
        return out;
    }
    for (name, set) in &frame.vf {
        if set.universe() != frame.n_states {
            out.push(Violation::WrongUniverse {
                what: format!("v_f({name})"),
                got: set.universe(),
                expected: frame.n_states,
            });
        }
    }
    if let Some(state) = frame.rbox.is_reflexive() {
        out.push(Violation::NotReflexive { state });
    }
    if let Some((s, t)) = frame.rbox.is_symmetric() {
        out.push(Violation::NotSymmetric { s, t });
    }
    if let Some((s, t, u)) = frame.rbox.is_transitive() {
        out.push(Violation::NotTransitive { s, t, u });
    }
    out
}

/// Check all model invariants; the empty list means the model is valid.
pub fn validate_model(m: &KripkeModel) -> Vec<Violation> {
    let mut out = validate_frame(&m.frame);
    for (name, rel) in &m.vp {
        if rel.universe() != m.frame.n_states {
            out.push(Violation::WrongUniverse {
                what: format!("v_p({name})"),
                got: rel.universe(),
                expected: m.frame.n_states,
            });
            continue;
        }
        if m.frame.rbox.universe() == m.frame.n_states && !rel.is_subset_of(&m.frame.rbox) {
            let (s, t) = rel
                .pairs()
                .find(|&(s, t)| !m.frame.rbox.contains(s, t))
                .expect("subset check failed");
            out.push(Violation::ProgramOutsideRbox {
                program: name.clone(),
                s,
                t,
            });
        }
    }
    out
}

/// Transition relation of `pi` over `frame` + `vp`. Atomic programs not in
/// `vp` denote the empty relation.
pub fn denote(frame: &Frame, vp: &ProgramValuation, pi: &Program) -> Relation {
    match pi {
        Program::Atom(name) => vp
            .get(name)
            .cloned()
            .unwrap_or_else(|| Relation::empty(frame.n_states)),
        Program::Seq(a, b) => denote(frame, vp, a).compose(&denote(frame, vp, b)),
        Program::Choice(a, b) => denote(frame, vp, a).union(&denote(frame, vp, b)),
        Program::Star(a) => denote(frame, vp, a).reflexive_transitive_closure(),
        Program::Test(g) => {
            let holds = eval_set(frame, vp, g);
            let mut r = Relation::empty(frame.n_states);
            for i in holds.iter() {
                r.insert(i, i);
            }
            r
        }
    }
}

/// The set of states where `f` holds. Normalizes `f` first.
pub fn eval_set(frame: &Frame, vp: &ProgramValuation, f: &Formula) -> StateSet {
    eval_norm(frame, vp, &f.normalize())
}

/// `eval_set` for callers that already hold a normalized formula and are
/// about to evaluate it against many valuations. The formula must be in
/// the primitive basis (see [`Formula::normalize`]).
pub fn eval_set_prenormalized(frame: &Frame, vp: &ProgramValuation, f: &Formula) -> StateSet {
    eval_norm(frame, vp, f)
}

fn eval_norm(frame: &Frame, vp: &ProgramValuation, f: &Formula) -> StateSet {
    match f {
        Formula::Atom(name) => frame
            .vf
            .get(name)
            .cloned()
            .unwrap_or_else(|| StateSet::empty(frame.n_states)),
        Formula::Bottom => StateSet::empty(frame.n_states),
        Formula::Not(g) => eval_norm(frame, vp, g).complement(),
        Formula::Or(a, b) => {
            let mut s = eval_norm(frame, vp, a);
            s.union_with(&eval_norm(frame, vp, b));
            s
        }
        Formula::Diamond(pi, g) => {
            let rel = denote(frame, vp, pi);
            rel.preimage(&eval_norm(frame, vp, g))
        }
        Formula::GlobalDiamond(g) => frame.rbox.preimage(&eval_norm(frame, vp, g)),
        _ => unreachable!("eval_norm runs on normalized formulas"),
    }
}

/// `M, s |= f`.
pub fn satisfies(m: &KripkeModel, s: StateId, f: &Formula) -> bool {
    eval_set(&m.frame, &m.vp, f).contains(s)
}

/// True everywhere in `m`.
pub fn valid_on(m: &KripkeModel, f: &Formula) -> bool {
    eval_set(&m.frame, &m.vp, f).len() == m.frame.n_states
}

impl KripkeModel {
    pub fn new(frame: Frame, vp: ProgramValuation) -> Self {
        KripkeModel { frame, vp }
    }

    pub fn eval(&self, f: &Formula) -> StateSet {
        eval_set(&self.frame, &self.vp, f)
    }

    pub fn satisfies(&self, s: StateId, f: &Formula) -> bool {
        satisfies(self, s, f)
    }

    pub fn valid_on(&self, f: &Formula) -> bool {
        valid_on(self, f)
    }

    pub fn denote(&self, pi: &Program) -> Relation {
        denote(&self.frame, &self.vp, pi)
    }

    pub fn signature(&self) -> Signature {
        Signature::new(
            self.frame.vf.keys().cloned().collect::<Vec<_>>(),
            self.vp.keys().cloned().collect::<Vec<_>>(),
        )
    }
}

/// Deterministic model generator for test harnesses.
///
/// `rbox` is the equivalence induced by a random partition; program edges
/// are sampled inside `rbox` with probability `density`, so the result
/// always passes [`validate_model`].
pub fn random_model(seed: u64, n_states: usize, sig: &Signature, density: f64) -> KripkeModel {
    assert!(n_states >= 1, "need at least one state");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut block = vec![0usize; n_states];
    for (i, b) in block.iter_mut().enumerate() {
        *b = rng.gen_range(0..n_states.min(i + 1).max(1));
    }
    let mut rbox = Relation::empty(n_states);
    for i in 0..n_states {
        for j in 0..n_states {
            if block[i] == block[j] {
                rbox.insert(i, j);
            }
        }
    }

    let mut vf = BTreeMap::new();
    for name in &sig.formula_atoms {
        let mut set = StateSet::empty(n_states);
        for i in 0..n_states {
            if rng.gen_bool(0.5) {
                set.insert(i);
            }
        }
        vf.insert(name.clone(), set);
    }

    let mut vp = BTreeMap::new();
    for name in &sig.program_atoms {
        let mut rel = Relation::empty(n_states);
        for i in 0..n_states {
            for j in 0..n_states {
                if rbox.contains(i, j) && rng.gen_bool(density) {
                    rel.insert(i, j);
                }
            }
        }
        vp.insert(name.clone(), rel);
    }

    KripkeModel::new(Frame::new(n_states, vf, rbox), vp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state_frame() -> Frame {
        // s=0 carries A and C, t=1 carries B and D, rbox universal.
        let mut vf = BTreeMap::new();
        vf.insert("A".to_string(), StateSet::from_states(2, [0]));
        vf.insert("B".to_string(), StateSet::from_states(2, [1]));
        vf.insert("C".to_string(), StateSet::from_states(2, [0]));
        vf.insert("D".to_string(), StateSet::from_states(2, [1]));
        Frame::new(2, vf, Relation::universal(2))
    }

    fn valuation(p_pairs: &[(usize, usize)], q_pairs: &[(usize, usize)]) -> ProgramValuation {
        let mut vp = BTreeMap::new();
        vp.insert("p".to_string(), Relation::from_pairs(2, p_pairs.iter().copied()));
        vp.insert("q".to_string(), Relation::from_pairs(2, q_pairs.iter().copied()));
        vp
    }

    fn v1() -> ProgramValuation {
        valuation(&[(0, 1)], &[(0, 0)])
    }

    fn v2() -> ProgramValuation {
        valuation(&[(0, 1)], &[(0, 1)])
    }

    fn v3() -> ProgramValuation {
        valuation(&[(0, 0)], &[(0, 1)])
    }

    fn parse(text: &str) -> Formula {
        crate::syntax::parse_formula_raw(text).unwrap()
    }

    #[test]
    fn star_closure_examples() {
        let empty = Relation::empty(2);
        assert_eq!(star_closure(&empty), Relation::identity(2));

        let chain = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        let expected = Relation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]);
        assert_eq!(star_closure(&chain), expected);

        // already reflexive-transitive: a fixpoint
        assert_eq!(star_closure(&expected), expected);
    }

    #[test]
    fn validate_flags_broken_models() {
        let frame = two_state_frame();
        let m = KripkeModel::new(frame.clone(), v1());
        assert!(validate_model(&m).is_empty());

        // missing (1,1): not reflexive
        let bad_rbox = Relation::from_pairs(2, [(0, 0), (0, 1), (1, 0)]);
        let bad = KripkeModel::new(Frame::new(2, frame.vf.clone(), bad_rbox), v1());
        assert!(validate_model(&bad)
            .iter()
            .any(|v| matches!(v, Violation::NotReflexive { state: 1 })));

        // vp outside rbox
        let identity_frame = Frame::new(2, frame.vf.clone(), Relation::identity(2));
        let escaping = KripkeModel::new(identity_frame, v1());
        assert!(validate_model(&escaping)
            .iter()
            .any(|v| matches!(v, Violation::ProgramOutsideRbox { .. })));
    }

    #[test]
    fn denote_follows_the_clauses() {
        let frame = two_state_frame();
        // <?A;p> under v1: A holds only at s=0 and v1(p) = {(0,1)}
        let pi = crate::syntax::parse_program_raw("?A;p").unwrap();
        let rel = denote(&frame, &v1(), &pi);
        assert_eq!(rel, Relation::from_pairs(2, [(0, 1)]));

        let union = crate::syntax::parse_program_raw("p+q").unwrap();
        let got = denote(&frame, &v1(), &union);
        let p = denote(&frame, &v1(), &Program::atom("p"));
        let q = denote(&frame, &v1(), &Program::atom("q"));
        assert_eq!(got, p.union(&q));

        let star = crate::syntax::parse_program_raw("p*").unwrap();
        let got = denote(&frame, &v1(), &star);
        assert_eq!(got, Relation::from_pairs(2, [(0, 0), (1, 1), (0, 1)]));
    }

    #[test]
    fn satisfaction_on_the_three_valuations() {
        let frame = two_state_frame();
        let ab = parse("G(A -> [p]B)");
        let cd = parse("G(C -> [q]D)");
        let mix = parse("G [(?A;p)+(?C;q)](B|D)");

        let m1 = KripkeModel::new(frame.clone(), v1());
        let m2 = KripkeModel::new(frame.clone(), v2());
        let m3 = KripkeModel::new(frame.clone(), v3());

        assert!(m1.satisfies(0, &ab));
        assert!(m2.satisfies(0, &ab));
        assert!(!m3.satisfies(0, &ab));

        assert!(!m1.satisfies(0, &cd));
        assert!(m2.satisfies(0, &cd));
        assert!(m3.satisfies(0, &cd));

        assert!(m1.valid_on(&ab));
        assert!(!m1.valid_on(&cd));
        assert!(m2.valid_on(&mix));
        assert!(!m1.valid_on(&mix));
        assert!(!m3.valid_on(&mix));
        assert!(!m3.valid_on(&ab));

        // bottom is false everywhere
        assert!(!m1.satisfies(0, &Formula::Bottom));
        assert!(!m1.satisfies(1, &Formula::Bottom));
        // excluded middle holds on models
        let a = Formula::atom("A");
        assert!(m1.valid_on(&a.clone().or(a.not())));
    }

    #[test]
    fn random_model_is_valid_and_deterministic() {
        let sig = Signature::new(["a", "b"], ["p", "q"]);
        for seed in 0..50 {
            let m = random_model(seed, 1 + (seed as usize % 5), &sig, 0.4);
            assert!(validate_model(&m).is_empty(), "seed {seed}");
        }
        let a = random_model(7, 4, &sig, 0.5);
        let b = random_model(7, 4, &sig, 0.5);
        assert_eq!(a, b);

        let one = random_model(1, 1, &sig, 1.0);
        for rel in one.vp.values() {
            assert!(rel.is_subset_of(&Relation::universal(1)));
        }
    }
}
