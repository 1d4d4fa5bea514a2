//! Satisfiability and validity by Fischer-Ladner atoms and elimination,
//! canonical-model assembly, dmff classes and canonical sections.
//!
//! Candidate atoms are the locally coherent polarity assignments over the
//! closure: Boolean connectives and the unfoldings of compound diamonds
//! are forced, atomic-diamond and global-diamond bits are free (the latter
//! constrained by reflexivity). The elimination loop then drops atoms with
//! unfulfillable diamond, star or global demands; the survivors are
//! exactly the maximal consistent subsets of the signed closure, which the
//! test suite checks against exhaustive small-model search and the truth
//! lemma on the assembled canonical model.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::kripke::{Frame, KripkeModel, ProgramValuation, Relation, StateSet};
use crate::syntax::{fl_closure, Formula, Program};

#[derive(Debug, Clone)]
pub struct DecisionLimits {
    /// Maximum closure size |FL(G)|.
    pub closure_cap: usize,
    /// Maximum number of candidate atoms enumerated (2^free bits).
    pub candidate_cap: usize,
    /// Maximum number of canonical sections materialized.
    pub section_cap: u128,
}

impl Default for DecisionLimits {
    fn default() -> Self {
        DecisionLimits {
            closure_cap: 64,
            candidate_cap: 1 << 13,
            section_cap: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DecisionError {
    #[error("closure has {size} formulas, cap is {cap}")]
    ClosureCapExceeded { size: usize, cap: usize },
    #[error("{count} candidate atoms exceed the cap {cap}")]
    CandidateCapExceeded { count: u128, cap: usize },
    #[error("{count} canonical sections exceed the cap {cap}")]
    SectionCapExceeded { count: u128, cap: u128 },
    #[error("no locally coherent atoms exist over this closure")]
    NoConsistentAtoms,
}

/// Structural role of a closure formula in the coherence equations.
#[derive(Debug, Clone)]
enum Shape {
    Bottom,
    FormulaAtom,
    Not(usize),
    Or(usize, usize),
    GlobalDia(usize),
    DiaAtomic { program: String, child: usize },
    DiaTest { test: usize, child: usize },
    DiaSeq { unfolded: usize },
    DiaChoice { left: usize, right: usize },
    DiaStar { inner: Program, child: usize, unfolded: usize },
}

/// The surviving atoms over one closure, with the canonical relations.
#[derive(Debug, Clone)]
pub struct AtomSpace {
    closure: Vec<Formula>,
    index: BTreeMap<Formula, usize>,
    dmff_mask: u64,
    atoms: Vec<u64>,
    rbox: Relation,
    vp: BTreeMap<String, Relation>,
}

impl AtomSpace {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// The closure FL(G), normalized, in a fixed order.
    pub fn closure(&self) -> &[Formula] {
        &self.closure
    }

    /// Raw polarity mask of an atom: bit `i` is the polarity of
    /// `closure()[i]`.
    pub fn atom_bits(&self, atom: usize) -> u64 {
        self.atoms[atom]
    }

    /// Canonical global relation over atoms (an equivalence).
    pub fn rbox(&self) -> &Relation {
        &self.rbox
    }

    /// Canonical atomic-program relations over atoms.
    pub fn vp(&self) -> &BTreeMap<String, Relation> {
        &self.vp
    }

    /// Membership of `f` (or its negation) in the atom, for `f` in FL±.
    /// Returns `None` when `f` is not in the signed closure.
    pub fn atom_contains(&self, atom: usize, f: &Formula) -> Option<bool> {
        let f = f.normalize();
        if let Some(&i) = self.index.get(&f) {
            return Some(self.atoms[atom] >> i & 1 == 1);
        }
        if let Formula::Not(inner) = &f {
            if let Some(&i) = self.index.get(inner) {
                return Some(self.atoms[atom] >> i & 1 == 0);
            }
        }
        None
    }

    /// The signed members of an atom: `g` or `~g` for each closure `g`.
    pub fn atom_members(&self, atom: usize) -> BTreeSet<Formula> {
        self.closure
            .iter()
            .enumerate()
            .map(|(i, f)| {
                if self.atoms[atom] >> i & 1 == 1 {
                    f.clone()
                } else {
                    f.clone().not()
                }
            })
            .collect()
    }

    /// Signed dmff members only.
    pub fn atom_dmffs(&self, atom: usize) -> BTreeSet<Formula> {
        self.closure
            .iter()
            .enumerate()
            .filter(|(i, _)| self.dmff_mask >> i & 1 == 1)
            .map(|(i, f)| {
                if self.atoms[atom] >> i & 1 == 1 {
                    f.clone()
                } else {
                    f.clone().not()
                }
            })
            .collect()
    }

    fn dmff_key(&self, atom: usize) -> u64 {
        self.atoms[atom] & self.dmff_mask
    }

    /// The Kripke model whose states are the surviving atoms.
    pub fn canonical_kripke(&self) -> KripkeModel {
        let n = self.atoms.len();
        let mut vf = BTreeMap::new();
        for (i, f) in self.closure.iter().enumerate() {
            if let Formula::Atom(name) = f {
                let set =
                    StateSet::from_states(n, (0..n).filter(|&a| self.atoms[a] >> i & 1 == 1));
                vf.insert(name.clone(), set);
            }
        }
        KripkeModel::new(Frame::new(n, vf, self.rbox.clone()), self.vp.clone())
    }
}

fn classify(closure: &[Formula], index: &BTreeMap<Formula, usize>) -> Vec<Shape> {
    closure
        .iter()
        .map(|f| match f {
            Formula::Bottom => Shape::Bottom,
            Formula::Atom(_) => Shape::FormulaAtom,
            Formula::Not(g) => Shape::Not(index[&**g]),
            Formula::Or(a, b) => Shape::Or(index[&**a], index[&**b]),
            Formula::GlobalDiamond(g) => Shape::GlobalDia(index[&**g]),
            Formula::Diamond(pi, g) => {
                let child = index[&**g];
                match &**pi {
                    Program::Atom(name) => Shape::DiaAtomic {
                        program: name.clone(),
                        child,
                    },
                    Program::Test(d) => Shape::DiaTest {
                        test: index[&**d],
                        child,
                    },
                    Program::Seq(p1, p2) => {
                        let unfolded = Formula::diamond(
                            (**p1).clone(),
                            Formula::diamond((**p2).clone(), (**g).clone()),
                        );
                        Shape::DiaSeq {
                            unfolded: index[&unfolded],
                        }
                    }
                    Program::Choice(p1, p2) => Shape::DiaChoice {
                        left: index[&Formula::diamond((**p1).clone(), (**g).clone())],
                        right: index[&Formula::diamond((**p2).clone(), (**g).clone())],
                    },
                    Program::Star(p) => Shape::DiaStar {
                        inner: (**p).clone(),
                        child,
                        unfolded: index[&Formula::diamond((**p).clone(), f.clone())],
                    },
                }
            }
            _ => unreachable!("closure formulas are normalized"),
        })
        .collect()
}

/// Indices whose coherence equation sits on a dependency cycle (nested
/// stars can do this); their bits are enumerated and checked instead of
/// computed.
fn cyclic_indices(shapes: &[Shape]) -> Vec<bool> {
    let n = shapes.len();
    let deps = |i: usize| -> Vec<usize> {
        match &shapes[i] {
            Shape::Not(a) => vec![*a],
            Shape::Or(a, b) => vec![*a, *b],
            Shape::DiaTest { test, child } => vec![*test, *child],
            Shape::DiaSeq { unfolded } => vec![*unfolded],
            Shape::DiaChoice { left, right } => vec![*left, *right],
            Shape::DiaStar { child, unfolded, .. } => vec![*child, *unfolded],
            _ => vec![],
        }
    };
    // iterative 3-color DFS; a back edge marks its target as cyclic
    let mut color = vec![0u8; n];
    let mut cyclic = vec![false; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        color[root] = 1;
        while let Some((node, next)) = stack.pop() {
            let ds = deps(node);
            if next < ds.len() {
                stack.push((node, next + 1));
                let child = ds[next];
                match color[child] {
                    0 => {
                        color[child] = 1;
                        stack.push((child, 0));
                    }
                    1 => cyclic[child] = true,
                    _ => {}
                }
            } else {
                color[node] = 2;
            }
        }
    }
    cyclic
}

struct AtomBuilder {
    closure: Vec<Formula>,
    index: BTreeMap<Formula, usize>,
    shapes: Vec<Shape>,
    free: Vec<usize>,
    cyclic: Vec<bool>,
    dmff_mask: u64,
}

impl AtomBuilder {
    fn new(seeds: &BTreeSet<Formula>, limits: &DecisionLimits) -> Result<Self, DecisionError> {
        let closure_set = fl_closure(seeds);
        let cap = limits.closure_cap.min(64);
        if closure_set.len() > cap {
            return Err(DecisionError::ClosureCapExceeded {
                size: closure_set.len(),
                cap,
            });
        }
        let closure: Vec<Formula> = closure_set.into_iter().collect();
        let index: BTreeMap<Formula, usize> = closure
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let shapes = classify(&closure, &index);
        let cyclic = cyclic_indices(&shapes);
        let mut free = Vec::new();
        for (i, shape) in shapes.iter().enumerate() {
            let is_free = matches!(
                shape,
                Shape::FormulaAtom | Shape::DiaAtomic { .. } | Shape::GlobalDia(_)
            ) || cyclic[i];
            if is_free {
                free.push(i);
            }
        }
        let mut dmff_mask = 0u64;
        for (i, f) in closure.iter().enumerate() {
            if f.is_dmff() {
                dmff_mask |= 1 << i;
            }
        }
        Ok(AtomBuilder {
            closure,
            index,
            shapes,
            free,
            cyclic,
            dmff_mask,
        })
    }

    /// Fill in determined bits from the free ones; `None` if a coherence
    /// constraint fails.
    fn resolve(&self, free_assignment: u64) -> Option<u64> {
        let n = self.closure.len();
        let mut known = 0u64;
        let mut bits = 0u64;
        for (k, &i) in self.free.iter().enumerate() {
            known |= 1 << i;
            if free_assignment >> k & 1 == 1 {
                bits |= 1 << i;
            }
        }
        for i in 0..n {
            self.get_bit(i, &mut known, &mut bits);
        }
        // Constraint checks: cyclic equations, reflexivity of the global
        // modality, and falsity of bottom.
        for i in 0..n {
            let b = bits >> i & 1 == 1;
            match &self.shapes[i] {
                Shape::Bottom => {
                    if b {
                        return None;
                    }
                }
                Shape::GlobalDia(child) => {
                    if bits >> *child & 1 == 1 && !b {
                        return None;
                    }
                }
                shape if self.cyclic[i] => {
                    let expected = match shape {
                        Shape::Not(a) => bits >> *a & 1 == 0,
                        Shape::Or(x, y) => (bits >> *x | bits >> *y) & 1 == 1,
                        Shape::DiaTest { test, child } => (bits >> *test & bits >> *child) & 1 == 1,
                        Shape::DiaSeq { unfolded } => bits >> *unfolded & 1 == 1,
                        Shape::DiaChoice { left, right } => {
                            (bits >> *left | bits >> *right) & 1 == 1
                        }
                        Shape::DiaStar { child, unfolded, .. } => {
                            (bits >> *child | bits >> *unfolded) & 1 == 1
                        }
                        _ => b,
                    };
                    if b != expected {
                        return None;
                    }
                }
                _ => {}
            }
        }
        Some(bits)
    }

    fn get_bit(&self, i: usize, known: &mut u64, bits: &mut u64) -> bool {
        if *known >> i & 1 == 1 {
            return *bits >> i & 1 == 1;
        }
        let value = match &self.shapes[i] {
            Shape::Bottom => false,
            Shape::Not(a) => !self.get_bit(*a, known, bits),
            Shape::Or(x, y) => {
                // no short-circuit: both sides must be resolved
                let l = self.get_bit(*x, known, bits);
                let r = self.get_bit(*y, known, bits);
                l | r
            }
            Shape::DiaTest { test, child } => {
                let t = self.get_bit(*test, known, bits);
                let c = self.get_bit(*child, known, bits);
                t & c
            }
            Shape::DiaSeq { unfolded } => self.get_bit(*unfolded, known, bits),
            Shape::DiaChoice { left, right } => {
                let l = self.get_bit(*left, known, bits);
                let r = self.get_bit(*right, known, bits);
                l | r
            }
            Shape::DiaStar { child, unfolded, .. } => {
                let c = self.get_bit(*child, known, bits);
                let u = self.get_bit(*unfolded, known, bits);
                c | u
            }
            Shape::FormulaAtom | Shape::DiaAtomic { .. } | Shape::GlobalDia(_) => {
                unreachable!("free bits are preassigned")
            }
        };
        *known |= 1 << i;
        if value {
            *bits |= 1 << i;
        }
        value
    }

    fn enumerate(&self, limits: &DecisionLimits) -> Result<Vec<u64>, DecisionError> {
        let count: u128 = 1u128 << self.free.len();
        if count > limits.candidate_cap as u128 {
            return Err(DecisionError::CandidateCapExceeded {
                count,
                cap: limits.candidate_cap,
            });
        }
        let mut out = Vec::new();
        for assignment in 0..count {
            if let Some(bits) = self.resolve(assignment as u64) {
                out.push(bits);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn atomic_programs(&self) -> BTreeSet<String> {
        self.shapes
            .iter()
            .filter_map(|s| match s {
                Shape::DiaAtomic { program, .. } => Some(program.clone()),
                _ => None,
            })
            .collect()
    }

    fn gdia_mask(&self) -> u64 {
        self.shapes
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Shape::GlobalDia(_)))
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

/// Transition relations between atoms, rebuilt after each elimination round.
struct AtomGraph {
    rbox: Relation,
    vp: BTreeMap<String, Relation>,
}

fn build_graph(builder: &AtomBuilder, atoms: &[u64], alive: &[bool]) -> AtomGraph {
    let n = atoms.len();
    let gdia_mask = builder.gdia_mask();

    // Same global-diamond profile within a class; the relation is an
    // equivalence by construction.
    let mut rbox = Relation::empty(n);
    for i in 0..n {
        if !alive[i] {
            continue;
        }
        for j in 0..n {
            if alive[j] && atoms[i] & gdia_mask == atoms[j] & gdia_mask {
                rbox.insert(i, j);
            }
        }
    }

    // Per program: (W,V) allowed iff every <p>d in the closure transports
    // back (d in V implies <p>d in W), and W,V share a global profile.
    let mut vp = BTreeMap::new();
    for program in builder.atomic_programs() {
        let dia_indices: Vec<(usize, usize)> = builder
            .shapes
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Shape::DiaAtomic { program: p, child } if *p == program => Some((i, *child)),
                _ => None,
            })
            .collect();
        // Per atom, packed over dia_indices positions: which <p>d bits it
        // has and which d bits it offers as a target.
        let mut has = vec![0u64; n];
        let mut offers = vec![0u64; n];
        for a in 0..n {
            for (k, (dia, child)) in dia_indices.iter().enumerate() {
                if atoms[a] >> dia & 1 == 1 {
                    has[a] |= 1 << k;
                }
                if atoms[a] >> child & 1 == 1 {
                    offers[a] |= 1 << k;
                }
            }
        }
        let mut rel = Relation::empty(n);
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            for j in 0..n {
                if alive[j]
                    && offers[j] & !has[i] == 0
                    && atoms[i] & gdia_mask == atoms[j] & gdia_mask
                {
                    rel.insert(i, j);
                }
            }
        }
        vp.insert(program, rel);
    }
    AtomGraph { rbox, vp }
}

/// Transition relation of `pi` over the atom graph, with tests read off
/// atom membership.
fn membership_denote(
    builder: &AtomBuilder,
    atoms: &[u64],
    graph: &AtomGraph,
    pi: &Program,
) -> Relation {
    let n = atoms.len();
    match pi {
        Program::Atom(name) => graph
            .vp
            .get(name)
            .cloned()
            .unwrap_or_else(|| Relation::empty(n)),
        Program::Seq(a, b) => membership_denote(builder, atoms, graph, a)
            .compose(&membership_denote(builder, atoms, graph, b)),
        Program::Choice(a, b) => membership_denote(builder, atoms, graph, a)
            .union(&membership_denote(builder, atoms, graph, b)),
        Program::Star(a) => {
            membership_denote(builder, atoms, graph, a).reflexive_transitive_closure()
        }
        Program::Test(d) => {
            let idx = *builder
                .index
                .get(d)
                .expect("test formulas of closure programs are in the closure");
            let mut rel = Relation::empty(n);
            for (a, bits) in atoms.iter().enumerate() {
                if bits >> idx & 1 == 1 {
                    rel.insert(a, a);
                }
            }
            rel
        }
    }
}

fn eliminate(builder: &AtomBuilder, atoms: &[u64]) -> (Vec<u64>, AtomGraph) {
    let n = atoms.len();
    let mut alive = vec![true; n];
    loop {
        let graph = build_graph(builder, atoms, &alive);
        let mut star_rels: BTreeMap<usize, Relation> = BTreeMap::new();
        for (i, shape) in builder.shapes.iter().enumerate() {
            if let Shape::DiaStar { inner, .. } = shape {
                star_rels.insert(
                    i,
                    membership_denote(builder, atoms, &graph, inner)
                        .reflexive_transitive_closure(),
                );
            }
        }
        // Note: membership_denote only sees alive-restricted atomic edges,
        // but the diagonal of a test still includes dead atoms; demands
        // below target alive atoms only, so dead diagonals are harmless.
        let mut killed = false;
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let mut ok = true;
            for (i, shape) in builder.shapes.iter().enumerate() {
                if atoms[a] >> i & 1 == 0 {
                    continue;
                }
                let fulfilled = match shape {
                    Shape::DiaAtomic { program, child } => {
                        let targets = StateSet::from_states(
                            n,
                            (0..n).filter(|&b| alive[b] && atoms[b] >> *child & 1 == 1),
                        );
                        graph.vp[program].row_intersects(a, &targets)
                    }
                    Shape::DiaStar { child, .. } => {
                        let targets = StateSet::from_states(
                            n,
                            (0..n).filter(|&b| alive[b] && atoms[b] >> *child & 1 == 1),
                        );
                        star_rels[&i].row_intersects(a, &targets)
                    }
                    Shape::GlobalDia(child) => {
                        let targets = StateSet::from_states(
                            n,
                            (0..n).filter(|&b| alive[b] && atoms[b] >> *child & 1 == 1),
                        );
                        graph.rbox.row_intersects(a, &targets)
                    }
                    _ => true,
                };
                if !fulfilled {
                    ok = false;
                    break;
                }
            }
            if !ok {
                alive[a] = false;
                killed = true;
            }
        }
        if killed {
            continue;
        }
        // stable: compact onto surviving indices
        let survivors: Vec<u64> = atoms
            .iter()
            .enumerate()
            .filter(|(a, _)| alive[*a])
            .map(|(_, bits)| *bits)
            .collect();
        let old_of_new: Vec<usize> = (0..n).filter(|&a| alive[a]).collect();
        let m = survivors.len();
        let mut rbox = Relation::empty(m);
        let mut vp: BTreeMap<String, Relation> = builder
            .atomic_programs()
            .into_iter()
            .map(|p| (p, Relation::empty(m)))
            .collect();
        for (ni, &i) in old_of_new.iter().enumerate() {
            for (nj, &j) in old_of_new.iter().enumerate() {
                if graph.rbox.contains(i, j) {
                    rbox.insert(ni, nj);
                }
                for (name, rel) in &graph.vp {
                    if rel.contains(i, j) {
                        vp.get_mut(name).expect("present").insert(ni, nj);
                    }
                }
            }
        }
        return (survivors, AtomGraph { rbox, vp });
    }
}

/// All maximal consistent subsets of the signed closure of `seeds`: the
/// locally coherent atoms that survive elimination.
pub fn atoms(
    seeds: &BTreeSet<Formula>,
    limits: &DecisionLimits,
) -> Result<AtomSpace, DecisionError> {
    let builder = AtomBuilder::new(seeds, limits)?;
    let candidates = builder.enumerate(limits)?;
    let (survivors, graph) = eliminate(&builder, &candidates);
    Ok(AtomSpace {
        closure: builder.closure,
        index: builder.index,
        dmff_mask: builder.dmff_mask,
        atoms: survivors,
        rbox: graph.rbox,
        vp: graph.vp,
    })
}

/// Decide satisfiability; on success the witness is the canonical model
/// restricted to the global class of an atom containing the formula.
pub fn decide_satisfiable(
    f: &Formula,
    limits: &DecisionLimits,
) -> Result<(bool, Option<KripkeModel>), DecisionError> {
    let seeds: BTreeSet<Formula> = [f.clone()].into_iter().collect();
    let space = atoms(&seeds, limits)?;
    let nf = f.normalize();
    let idx = space.index[&nf];
    let hit = (0..space.atoms.len()).find(|&a| space.atoms[a] >> idx & 1 == 1);
    let Some(hit) = hit else {
        return Ok((false, None));
    };

    // restrict to the global class of the hit atom; rbox is universal there
    let class: Vec<usize> = (0..space.atoms.len())
        .filter(|&b| space.rbox.contains(hit, b))
        .collect();
    let n = class.len();
    let pos: BTreeMap<usize, usize> = class.iter().enumerate().map(|(k, &a)| (a, k)).collect();
    let mut vf = BTreeMap::new();
    for (i, g) in space.closure.iter().enumerate() {
        if let Formula::Atom(name) = g {
            vf.insert(
                name.clone(),
                StateSet::from_states(
                    n,
                    class
                        .iter()
                        .enumerate()
                        .filter(|(_, &a)| space.atoms[a] >> i & 1 == 1)
                        .map(|(k, _)| k),
                ),
            );
        }
    }
    let mut vp = BTreeMap::new();
    for (name, rel) in &space.vp {
        let mut out = Relation::empty(n);
        for &a in &class {
            for &b in &class {
                if rel.contains(a, b) {
                    out.insert(pos[&a], pos[&b]);
                }
            }
        }
        vp.insert(name.clone(), out);
    }
    let witness = KripkeModel::new(Frame::new(n, vf, Relation::universal(n)), vp);
    Ok((true, Some(witness)))
}

/// Valid iff the negation is unsatisfiable.
pub fn decide_valid(f: &Formula, limits: &DecisionLimits) -> Result<bool, DecisionError> {
    let (sat, _) = decide_satisfiable(&f.clone().not(), limits)?;
    Ok(!sat)
}

/// The canonical model over the full surviving atom set.
#[derive(Debug, Clone)]
pub struct CanonicalModel {
    pub space: AtomSpace,
    pub model: KripkeModel,
}

pub fn canonical_model(
    seeds: &BTreeSet<Formula>,
    limits: &DecisionLimits,
) -> Result<CanonicalModel, DecisionError> {
    let space = atoms(seeds, limits)?;
    if space.atom_count() == 0 {
        return Err(DecisionError::NoConsistentAtoms);
    }
    let model = space.canonical_kripke();
    Ok(CanonicalModel { space, model })
}

/// Atoms with exactly the same dmff members as `atom`.
pub fn dmff_class(space: &AtomSpace, atom: usize) -> Vec<usize> {
    let key = space.dmff_key(atom);
    (0..space.atom_count())
        .filter(|&b| space.dmff_key(b) == key)
        .collect()
}

/// The dmff classes, a partition of the atom set.
pub fn dmff_classes(space: &AtomSpace) -> Vec<Vec<usize>> {
    let mut by_key: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for a in 0..space.atom_count() {
        by_key.entry(space.dmff_key(a)).or_default().push(a);
    }
    by_key.into_values().collect()
}

/// A dmff-class-preserving self-map of the atom set. Canonical sections
/// restrict to a bijection on every class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    map: Vec<usize>,
}

impl Section {
    pub fn apply(&self, atom: usize) -> usize {
        self.map[atom]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Section {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Section { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (k, &first) in items.iter().enumerate() {
        let rest: Vec<usize> = items
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, &x)| x)
            .collect();
        for mut tail in permutations(&rest) {
            let mut perm = vec![first];
            perm.append(&mut tail);
            out.push(perm);
        }
    }
    out
}

/// Every canonical section: all products of per-class permutations.
pub fn canonical_sections(
    space: &AtomSpace,
    limits: &DecisionLimits,
) -> Result<Vec<Section>, DecisionError> {
    let classes = dmff_classes(space);
    let mut count: u128 = 1;
    for class in &classes {
        let mut fact: u128 = 1;
        for k in 2..=class.len() as u128 {
            fact = fact.saturating_mul(k);
        }
        count = count.saturating_mul(fact);
        if count > limits.section_cap {
            return Err(DecisionError::SectionCapExceeded {
                count,
                cap: limits.section_cap,
            });
        }
    }

    let mut sections = vec![vec![0usize; space.atom_count()]];
    for class in &classes {
        let perms = permutations(class);
        let mut next = Vec::with_capacity(sections.len() * perms.len());
        for base in &sections {
            for perm in &perms {
                let mut map = base.clone();
                for (slot, &target) in class.iter().zip(perm) {
                    map[*slot] = target;
                }
                next.push(map);
            }
        }
        sections = next;
    }
    Ok(sections.into_iter().map(|map| Section { map }).collect())
}

/// The program valuation induced by a section: `(W1,W2)` is a `p`-edge
/// iff `(sigma(W1), sigma(W2))` is one canonically.
pub fn section_valuation(space: &AtomSpace, sigma: &Section) -> ProgramValuation {
    let n = space.atom_count();
    let mut vp = BTreeMap::new();
    for (name, rel) in &space.vp {
        let mut out = Relation::empty(n);
        for i in 0..n {
            for j in 0..n {
                if rel.contains(sigma.apply(i), sigma.apply(j)) {
                    out.insert(i, j);
                }
            }
        }
        vp.insert(name.clone(), out);
    }
    vp
}
