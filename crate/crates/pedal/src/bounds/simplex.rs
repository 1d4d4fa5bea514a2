//! Exact-rational two-phase simplex with Bland's rule.
//!
//! Dense tableau over arbitrary-precision rationals: no rounding, and
//! Bland's pivoting rule excludes cycling. All variables are implicitly
//! nonnegative, which is all the credence LPs need. Problem sizes here
//! are tiny (deduplicated truth profiles), so no sparsity games.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// `sum(coeffs * x) cmp rhs`, over nonnegative variables.
#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct Lp {
    pub num_vars: usize,
    pub constraints: Vec<LinearConstraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize,
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    /// reduced costs
    c: Vec<Rational>,
    /// negated objective value of the current basic solution (the usual
    /// tableau convention: the cost row carries -z)
    value: Rational,
    basis: Vec<usize>,
    /// columns barred from entering (artificials in phase 2)
    barred: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let factor = self.a[row][col].clone();
        for x in self.a[row].iter_mut() {
            *x /= &factor;
        }
        self.b[row] /= &factor;
        for i in 0..self.rows {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let m = self.a[i][col].clone();
            for j in 0..self.cols {
                let delta = &m * &self.a[row][j];
                self.a[i][j] -= delta;
            }
            let delta = &m * &self.b[row];
            self.b[i] -= delta;
        }
        if !self.c[col].is_zero() {
            let m = self.c[col].clone();
            for j in 0..self.cols {
                let delta = &m * &self.a[row][j];
                self.c[j] -= delta;
            }
            let delta = &m * &self.b[row];
            self.value -= delta;
        }
        self.basis[row] = col;
    }

    /// Bland: entering = smallest-index negative reduced cost; leaving =
    /// min ratio, ties by smallest basic variable index.
    fn run(&mut self) -> bool {
        loop {
            let entering = (0..self.cols)
                .find(|&j| !self.barred[j] && self.c[j].is_negative());
            let Some(col) = entering else {
                return true; // optimal
            };
            let mut pick: Option<(usize, Rational)> = None;
            for i in 0..self.rows {
                if self.a[i][col].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][col];
                    let better = match &pick {
                        None => true,
                        Some((best_row, best)) => {
                            ratio < *best
                                || (ratio == *best && self.basis[i] < self.basis[*best_row])
                        }
                    };
                    if better {
                        pick = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = pick else {
                return false; // unbounded
            };
            self.pivot(row, col);
        }
    }

    /// Re-derive reduced costs for a fresh objective over the current basis.
    fn load_objective(&mut self, objective: &[Rational]) {
        self.c = objective.to_vec();
        self.c.resize(self.cols, Rational::zero());
        self.value = Rational::zero();
        for i in 0..self.rows {
            let jb = self.basis[i];
            if self.c[jb].is_zero() {
                continue;
            }
            let m = self.c[jb].clone();
            for j in 0..self.cols {
                let delta = &m * &self.a[i][j];
                self.c[j] -= delta;
            }
            let delta = &m * &self.b[i];
            self.value -= delta;
        }
    }

    fn solution(&self, num_vars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); num_vars];
        for (i, &jb) in self.basis.iter().enumerate() {
            if jb < num_vars {
                x[jb] = self.b[i].clone();
            }
        }
        x
    }
}

/// Minimize `objective . x` subject to `lp`, `x >= 0`.
pub fn minimize(lp: &Lp, objective: &[Rational]) -> LpOutcome {
    assert_eq!(objective.len(), lp.num_vars);
    let m = lp.constraints.len();

    // normalized rows with rhs >= 0
    let mut rows: Vec<(Vec<Rational>, Cmp, Rational)> = Vec::with_capacity(m);
    for c in &lp.constraints {
        assert_eq!(c.coeffs.len(), lp.num_vars);
        if c.rhs.is_negative() {
            let coeffs: Vec<Rational> = c.coeffs.iter().map(|x| -x.clone()).collect();
            let cmp = match c.cmp {
                Cmp::Le => Cmp::Ge,
                Cmp::Ge => Cmp::Le,
                Cmp::Eq => Cmp::Eq,
            };
            rows.push((coeffs, cmp, -c.rhs.clone()));
        } else {
            rows.push((c.coeffs.clone(), c.cmp, c.rhs.clone()));
        }
    }

    let n_slack = rows.iter().filter(|(_, cmp, _)| *cmp != Cmp::Eq).count();
    let n_art = rows.iter().filter(|(_, cmp, _)| *cmp != Cmp::Le).count();
    let cols = lp.num_vars + n_slack + n_art;

    let mut a = vec![vec![Rational::zero(); cols]; m];
    let mut b = vec![Rational::zero(); m];
    let mut basis = vec![0usize; m];
    let mut art_cols = Vec::new();
    let mut next_slack = lp.num_vars;
    let mut next_art = lp.num_vars + n_slack;

    for (i, (coeffs, cmp, rhs)) in rows.iter().enumerate() {
        for (j, x) in coeffs.iter().enumerate() {
            a[i][j] = x.clone();
        }
        b[i] = rhs.clone();
        match cmp {
            Cmp::Le => {
                a[i][next_slack] = Rational::one();
                basis[i] = next_slack;
                next_slack += 1;
            }
            Cmp::Ge => {
                a[i][next_slack] = -Rational::one();
                next_slack += 1;
                a[i][next_art] = Rational::one();
                basis[i] = next_art;
                art_cols.push(next_art);
                next_art += 1;
            }
            Cmp::Eq => {
                a[i][next_art] = Rational::one();
                basis[i] = next_art;
                art_cols.push(next_art);
                next_art += 1;
            }
        }
    }

    let mut t = Tableau {
        rows: m,
        cols,
        a,
        b,
        c: vec![Rational::zero(); cols],
        value: Rational::zero(),
        basis,
        barred: vec![false; cols],
    };

    // Phase 1: minimize the artificial mass.
    if !art_cols.is_empty() {
        let mut phase1 = vec![Rational::zero(); cols];
        for &j in &art_cols {
            phase1[j] = Rational::one();
        }
        t.load_objective(&phase1);
        let finished = t.run();
        debug_assert!(finished, "phase 1 is bounded below by zero");
        if t.value.is_negative() {
            return LpOutcome::Infeasible;
        }
        // Pivot leftover artificials out of the basis, or drop their rows.
        for &j in &art_cols {
            t.barred[j] = true;
        }
        for i in 0..t.rows {
            if art_cols.contains(&t.basis[i]) {
                if let Some(col) = (0..lp.num_vars + n_slack).find(|&j| !t.a[i][j].is_zero()) {
                    t.pivot(i, col);
                }
                // otherwise the row is 0 = 0 and harmless: the artificial
                // stays basic at zero and is barred from growing
            }
        }
    }

    // Phase 2.
    t.load_objective(objective);
    if !t.run() {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal {
        value: -t.value.clone(),
        point: t.solution(lp.num_vars),
    }
}

/// Maximize by minimizing the negation.
pub fn maximize(lp: &Lp, objective: &[Rational]) -> LpOutcome {
    let negated: Vec<Rational> = objective.iter().map(|x| -x.clone()).collect();
    match minimize(lp, &negated) {
        LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
            value: -value,
            point,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    fn constraint(coeffs: &[(i64, i64)], cmp: Cmp, rhs: (i64, i64)) -> LinearConstraint {
        LinearConstraint {
            coeffs: coeffs.iter().map(|&(n, d)| r(n, d)).collect(),
            cmp,
            rhs: r(rhs.0, rhs.1),
        }
    }

    #[test]
    fn simple_projection() {
        // w0 + w1 = 1, w0 >= 3/5: minimize w0 -> 3/5, maximize w0 -> 1
        let lp = Lp {
            num_vars: 2,
            constraints: vec![
                constraint(&[(1, 1), (1, 1)], Cmp::Eq, (1, 1)),
                constraint(&[(1, 1), (0, 1)], Cmp::Ge, (3, 5)),
            ],
        };
        let obj = [r(1, 1), r(0, 1)];
        match minimize(&lp, &obj) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, r(3, 5));
                assert_eq!(point[0], r(3, 5));
                assert_eq!(point[1], r(2, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
        match maximize(&lp, &obj) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(1, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        let lp = Lp {
            num_vars: 1,
            constraints: vec![
                constraint(&[(1, 1)], Cmp::Ge, (2, 1)),
                constraint(&[(1, 1)], Cmp::Le, (1, 1)),
            ],
        };
        assert_eq!(minimize(&lp, &[r(1, 1)]), LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        let lp = Lp {
            num_vars: 1,
            constraints: vec![constraint(&[(1, 1)], Cmp::Ge, (0, 1))],
        };
        assert_eq!(maximize(&lp, &[r(1, 1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_equalities() {
        // x = 1/3, y = 2/3 forced exactly
        let lp = Lp {
            num_vars: 2,
            constraints: vec![
                constraint(&[(1, 1), (0, 1)], Cmp::Eq, (1, 3)),
                constraint(&[(1, 1), (1, 1)], Cmp::Eq, (1, 1)),
            ],
        };
        match minimize(&lp, &[r(0, 1), r(1, 1)]) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, r(2, 3));
                assert_eq!(point, vec![r(1, 3), r(2, 3)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exactness_with_awkward_fractions() {
        // minimize x + y with 3x + 7y >= 1, x,y >= 0 -> y = 1/7
        let lp = Lp {
            num_vars: 2,
            constraints: vec![constraint(&[(3, 1), (7, 1)], Cmp::Ge, (1, 1))],
        };
        match minimize(&lp, &[r(1, 1), r(1, 1)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(1, 7)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        // -x <= -1/2 is x >= 1/2
        let lp = Lp {
            num_vars: 1,
            constraints: vec![constraint(&[(-1, 1)], Cmp::Le, (-1, 2))],
        };
        match minimize(&lp, &[r(1, 1)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
